#include <cstdio>
#include <cmath>
#include <limits>

#include "mlcf/error.hpp"
#include "mlcf/model.hpp"

namespace mlcf {

namespace {

std::uint64_t table_key(Element a, Element b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

Evaluator::Evaluator(const Model& m) : model_(m), n_(m.size()) {
  m.validate();
  support_.assign(n_, ElementSet(n_));
  for (const auto& [key, targets] : m.app_table()) {
    if (targets.empty()) continue;
    table_.emplace(table_key(key.first, key.second), m.make_set(targets));
    support_[key.first].insert(key.second);
  }
  for (const auto& [name, elems] : m.symbols()) symbol_sets_.emplace(name, m.make_set(elems));
}

void Evaluator::bind(const Valuation& rho) {
  evars_.clear();
  svars_.clear();
  for (const auto& [x, e] : rho.evals) {
    if (e >= n_) throw Error(ErrorCode::InvalidArgument, "valuation of '" + x + "' outside carrier");
    evars_.emplace_back(x, e);
  }
  for (const auto& [x, s] : rho.svals) {
    if (s.universe() != n_)
      throw Error(ErrorCode::InvalidArgument, "valuation of '" + x + "' has the wrong universe");
    svars_.emplace_back(x, s);
  }
}

ElementSet Evaluator::evaluate(const Pattern& p, const Valuation& rho) {
  bind(rho);
  pinned_.push_back(p);
  return eval(p);
}

std::pair<ElementSet, EvalTrace> Evaluator::fixpoint(const Valuation& rho, const std::string& var,
                                                     const Pattern& body, FixpointMode mode) {
  bind(rho);
  pinned_.push_back(body);
  const Polarity pol = check_positivity(body, var);
  if (pol == Polarity::Negative || pol == Polarity::Both)
    throw Error(ErrorCode::NonPositiveBinder, "'" + var + "' is not positive in the body");
  EvalTrace trace;
  ElementSet result = iterate(var, body, mode, &trace);
  return {std::move(result), std::move(trace)};
}

ElementSet Evaluator::apply(const ElementSet& fns, const ElementSet& args) const {
  ElementSet out(n_);
  if (args.empty()) return out;
  bool full = false;
  fns.for_each([&](Element a) {
    if (full || !support_[a].intersects(args)) return;
    ElementSet relevant = support_[a];
    relevant &= args;
    relevant.for_each([&](Element b) {
      if (full) return;
      out |= table_.at(table_key(a, b));
      full = out.is_full();
    });
  });
  return out;
}

void Evaluator::require_positive(const Pattern& binder_node, const Pattern& body) {
  if (positive_checked_.count(binder_node.id())) return;
  const Polarity pol = check_positivity(body, binder_node.name());
  if (pol == Polarity::Negative || pol == Polarity::Both)
    throw Error(ErrorCode::NonPositiveBinder,
                "'" + binder_node.name() + "' is not positive in " + print_pattern(binder_node));
  positive_checked_.insert(binder_node.id());
}

bool Evaluator::closed(const Pattern& p) {
  auto it = closed_flag_.find(p.id());
  if (it != closed_flag_.end()) return it->second;
  const bool c = free_vars(p).empty();
  closed_flag_.emplace(p.id(), c);
  return c;
}

ElementSet Evaluator::iterate(const std::string& var, const Pattern& body, FixpointMode mode,
                              EvalTrace* trace) {
  ElementSet current = mode == FixpointMode::Least ? ElementSet(n_) : ElementSet::full(n_);
  if (trace) trace->iterates.push_back(current);
  // A positive body is monotone, so the chain is strictly monotone until it
  // repeats and cannot be longer than |carrier| + 1.
  for (std::size_t step = 0; step <= n_ + 1; ++step) {
    svars_.emplace_back(var, current);
    ElementSet next = eval(body);
    svars_.pop_back();
    if (next == current) {
      if (trace) trace->stabilized_at = trace->iterates.size() - 1;
      return current;
    }
    current = std::move(next);
    if (trace) trace->iterates.push_back(current);
  }
  throw Error(ErrorCode::NonPositiveBinder, "fixpoint iteration for '" + var + "' did not stabilize");
}

ElementSet Evaluator::eval(const Pattern& p) {
  ++node_evals_;
  switch (p.kind()) {
    case PatternKind::ElementVar:
      for (auto it = evars_.rbegin(); it != evars_.rend(); ++it)
        if (it->first == p.name()) return ElementSet::singleton(n_, it->second);
      throw Error(ErrorCode::UnboundVariable, "unbound element variable '" + p.name() + "'");
    case PatternKind::SetVar:
      for (auto it = svars_.rbegin(); it != svars_.rend(); ++it)
        if (it->first == p.name()) return it->second;
      throw Error(ErrorCode::UnboundVariable, "unbound set variable '" + p.name() + "'");
    case PatternKind::Symbol: {
      auto it = symbol_sets_.find(p.name());
      if (it == symbol_sets_.end())
        throw Error(ErrorCode::UnknownSymbol, "model does not interpret '" + p.name() + "'");
      return it->second;
    }
    case PatternKind::Bot:
      return ElementSet(n_);
    case PatternKind::Top:
      return ElementSet::full(n_);
    case PatternKind::Notation:
      throw Error(ErrorCode::UnknownNotation,
                  "notation '" + p.name() + "' must be expanded before evaluation");
    default:
      break;
  }

  const bool cacheable = p.size() >= 4 && closed(p);
  if (cacheable) {
    auto it = closed_cache_.find(p.id());
    if (it != closed_cache_.end()) return it->second;
  }

  ElementSet result;
  switch (p.kind()) {
    case PatternKind::App: {
      ElementSet fns = eval(p.left());
      result = fns.empty() ? ElementSet(n_) : apply(fns, eval(p.right()));
      break;
    }
    case PatternKind::Implies: {
      ElementSet lhs = eval(p.left());
      if (lhs.empty()) {
        result = ElementSet::full(n_);
      } else {
        lhs -= eval(p.right());
        result = lhs.complement();
      }
      break;
    }
    case PatternKind::Not:
      result = eval(p.body()).complement();
      break;
    case PatternKind::Or:
      result = eval(p.left());
      if (!result.is_full()) result |= eval(p.right());
      break;
    case PatternKind::And:
      result = eval(p.left());
      if (!result.empty()) result &= eval(p.right());
      break;
    case PatternKind::Exists:
    case PatternKind::Forall: {
      const bool exists = p.kind() == PatternKind::Exists;
      result = exists ? ElementSet(n_) : ElementSet::full(n_);
      for (Element a = 0; a < n_; ++a) {
        evars_.emplace_back(p.name(), a);
        ElementSet part = eval(p.body());
        evars_.pop_back();
        if (exists) {
          result |= part;
          if (result.is_full()) break;
        } else {
          result &= part;
          if (result.empty()) break;
        }
      }
      break;
    }
    case PatternKind::Mu:
      require_positive(p, p.body());
      result = iterate(p.name(), p.body(), FixpointMode::Least, nullptr);
      break;
    case PatternKind::Nu:
      require_positive(p, p.body());
      result = iterate(p.name(), p.body(), FixpointMode::Greatest, nullptr);
      break;
    default:
      break;
  }
  if (cacheable) closed_cache_.emplace(p.id(), result);
  return result;
}

ElementSet evaluate(const Model& m, const Valuation& rho, const Pattern& p) {
  Evaluator ev(m);
  return ev.evaluate(p, rho);
}

std::pair<ElementSet, EvalTrace> fixpoint_iterate(const Model& m, const Valuation& rho,
                                                  const std::string& var, const Pattern& body,
                                                  FixpointMode mode) {
  Evaluator ev(m);
  return ev.fixpoint(rho, var, body, mode);
}

double valuation_count(const Model& m, const Pattern& p) {
  const auto fv = free_vars(p);
  const double n = static_cast<double>(m.size());
  const double log2_count = static_cast<double>(fv.element_vars.size()) * std::log2(n) +
                            n * static_cast<double>(fv.set_vars.size());
  if (log2_count >= 63) return std::numeric_limits<double>::max();
  return std::round(std::exp2(log2_count));
}

bool holds(const Model& m, const Pattern& p, std::uint64_t budget) {
  Evaluator ev(m);
  return holds(ev, p, budget);
}

bool holds(Evaluator& ev, const Pattern& p, std::uint64_t budget) {
  const Model& m = ev.model();
  const double count = valuation_count(m, p);
  if (count > static_cast<double>(budget))
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", count);
    throw Error(ErrorCode::BudgetExceeded,
                std::string("validity check needs ") + buf + " valuations, budget is " + std::to_string(budget));
  }
  const auto fv = free_vars(p);
  const std::vector<std::string> evars(fv.element_vars.begin(), fv.element_vars.end());
  const std::vector<std::string> svars(fv.set_vars.begin(), fv.set_vars.end());
  const std::size_t n = m.size();

  // Odometer over element choices and subset bitmasks.
  std::vector<Element> echoice(evars.size(), 0);
  std::vector<std::uint64_t> schoice(svars.size(), 0);
  const std::uint64_t subsets = svars.empty() ? 1 : (std::uint64_t{1} << n);
  while (true) {
    Valuation rho;
    for (std::size_t i = 0; i < evars.size(); ++i) rho.evals[evars[i]] = echoice[i];
    for (std::size_t i = 0; i < svars.size(); ++i) {
      ElementSet s(n);
      for (std::size_t b = 0; b < n; ++b)
        if ((schoice[i] >> b) & 1U) s.insert(static_cast<Element>(b));
      rho.svals[svars[i]] = s;
    }
    if (!ev.evaluate(p, rho).is_full()) return false;

    std::size_t k = 0;
    for (; k < evars.size(); ++k) {
      if (++echoice[k] < n) break;
      echoice[k] = 0;
    }
    if (k < evars.size()) continue;
    std::size_t j = 0;
    for (; j < svars.size(); ++j) {
      if (++schoice[j] < subsets) break;
      schoice[j] = 0;
    }
    if (j == svars.size()) return true;
  }
}

}  // namespace mlcf
