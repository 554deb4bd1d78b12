#include "mlcf/pattern.hpp"

#include <cctype>
#include <functional>

#include "mlcf/error.hpp"

namespace mlcf {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::NonPositiveBinder: return "NonPositiveBinder";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorCode::UnknownNotation: return "UnknownNotation";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::UnknownTheory: return "UnknownTheory";
    case ErrorCode::SymbolClash: return "SymbolClash";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

bool is_core_kind(PatternKind kind) {
  switch (kind) {
    case PatternKind::ElementVar:
    case PatternKind::SetVar:
    case PatternKind::Symbol:
    case PatternKind::App:
    case PatternKind::Bot:
    case PatternKind::Implies:
    case PatternKind::Exists:
    case PatternKind::Mu:
      return true;
    default:
      return false;
  }
}

bool is_binder_kind(PatternKind kind) {
  return kind == PatternKind::Exists || kind == PatternKind::Forall ||
         kind == PatternKind::Mu || kind == PatternKind::Nu;
}

namespace {

bool binds_element_var(PatternKind kind) {
  return kind == PatternKind::Exists || kind == PatternKind::Forall;
}

}  // namespace

Pattern::Pattern() : Pattern(bot()) {}

Pattern Pattern::make(PatternKind kind, std::string name, std::vector<Pattern> kids) {
  std::size_t size = 1;
  for (const auto& k : kids) size += k.size();
  return Pattern(std::make_shared<const Node>(Node{kind, std::move(name), std::move(kids), size}));
}

Pattern Pattern::evar(std::string name) { return make(PatternKind::ElementVar, std::move(name), {}); }
Pattern Pattern::svar(std::string name) { return make(PatternKind::SetVar, std::move(name), {}); }
Pattern Pattern::sym(std::string name) { return make(PatternKind::Symbol, std::move(name), {}); }
Pattern Pattern::app(Pattern l, Pattern r) {
  return make(PatternKind::App, "", {std::move(l), std::move(r)});
}
Pattern Pattern::bot() {
  static const Pattern b(std::make_shared<const Node>(Node{PatternKind::Bot, "", {}, 1}));
  return b;
}
Pattern Pattern::implies(Pattern l, Pattern r) {
  return make(PatternKind::Implies, "", {std::move(l), std::move(r)});
}
Pattern Pattern::exists(std::string var, Pattern body) {
  return make(PatternKind::Exists, std::move(var), {std::move(body)});
}
Pattern Pattern::mu(std::string var, Pattern body) {
  return make(PatternKind::Mu, std::move(var), {std::move(body)});
}
Pattern Pattern::negation(Pattern p) { return make(PatternKind::Not, "", {std::move(p)}); }
Pattern Pattern::disj(Pattern l, Pattern r) {
  return make(PatternKind::Or, "", {std::move(l), std::move(r)});
}
Pattern Pattern::conj(Pattern l, Pattern r) {
  return make(PatternKind::And, "", {std::move(l), std::move(r)});
}
Pattern Pattern::top() { return make(PatternKind::Top, "", {}); }
Pattern Pattern::forall(std::string var, Pattern body) {
  return make(PatternKind::Forall, std::move(var), {std::move(body)});
}
Pattern Pattern::nu(std::string var, Pattern body) {
  return make(PatternKind::Nu, std::move(var), {std::move(body)});
}
Pattern Pattern::notation(std::string head, std::vector<Pattern> args) {
  return make(PatternKind::Notation, std::move(head), std::move(args));
}

bool operator==(const Pattern& a, const Pattern& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.name() != b.name() || a.size() != b.size() ||
      a.children().size() != b.children().size())
    return false;
  for (std::size_t i = 0; i < a.children().size(); ++i)
    if (!(a.child(i) == b.child(i))) return false;
  return true;
}

void Signature::insert(const std::string& s) {
  if (s.empty()) throw Error(ErrorCode::InvalidArgument, "empty symbol name");
  symbols.insert(s);
}

void Signature::merge(const Signature& other) {
  symbols.insert(other.symbols.begin(), other.symbols.end());
}

Polarity join(Polarity a, Polarity b) {
  if (a == Polarity::Absent) return b;
  if (b == Polarity::Absent) return a;
  if (a == b) return a;
  return Polarity::Both;
}

Polarity flip(Polarity p) {
  switch (p) {
    case Polarity::Positive: return Polarity::Negative;
    case Polarity::Negative: return Polarity::Positive;
    default: return p;
  }
}

const char* polarity_name(Polarity p) {
  switch (p) {
    case Polarity::Absent: return "Absent";
    case Polarity::Positive: return "Positive";
    case Polarity::Negative: return "Negative";
    case Polarity::Both: return "Both";
  }
  return "?";
}

bool is_element_var_name(std::string_view name) {
  return !name.empty() && std::islower(static_cast<unsigned char>(name[0])) && is_identifier(name);
}

bool is_set_var_name(std::string_view name) {
  return !name.empty() && std::isupper(static_cast<unsigned char>(name[0])) && is_identifier(name);
}

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && c != '_' && c != '\'') return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// desugaring

namespace {

Pattern desugar_impl(const Pattern& p, bool allow_notation) {
  auto d = [&](const Pattern& q) { return desugar_impl(q, allow_notation); };
  auto neg = [](Pattern q) { return Pattern::implies(std::move(q), Pattern::bot()); };
  switch (p.kind()) {
    case PatternKind::ElementVar:
    case PatternKind::SetVar:
    case PatternKind::Symbol:
    case PatternKind::Bot:
      return p;
    case PatternKind::App: {
      auto l = d(p.left());
      auto r = d(p.right());
      if (l.id() == p.left().id() && r.id() == p.right().id()) return p;
      return Pattern::app(std::move(l), std::move(r));
    }
    case PatternKind::Implies: {
      auto l = d(p.left());
      auto r = d(p.right());
      if (l.id() == p.left().id() && r.id() == p.right().id()) return p;
      return Pattern::implies(std::move(l), std::move(r));
    }
    case PatternKind::Exists: {
      auto b = d(p.body());
      if (b.id() == p.body().id()) return p;
      return Pattern::exists(p.name(), std::move(b));
    }
    case PatternKind::Mu: {
      auto b = d(p.body());
      if (b.id() == p.body().id()) return p;
      return Pattern::mu(p.name(), std::move(b));
    }
    case PatternKind::Not:
      return neg(d(p.body()));
    case PatternKind::Or:
      return Pattern::implies(neg(d(p.left())), d(p.right()));
    case PatternKind::And: {
      // not (not a \/ not b)
      auto a = neg(d(p.left()));
      auto b = neg(d(p.right()));
      return neg(Pattern::implies(neg(std::move(a)), std::move(b)));
    }
    case PatternKind::Top:
      return neg(Pattern::bot());
    case PatternKind::Forall:
      return neg(Pattern::exists(p.name(), neg(d(p.body()))));
    case PatternKind::Nu: {
      const auto& x = p.name();
      auto body = substitute(d(p.body()), x, neg(Pattern::svar(x)));
      return neg(Pattern::mu(x, neg(std::move(body))));
    }
    case PatternKind::Notation: {
      if (!allow_notation)
        throw Error(ErrorCode::UnknownNotation,
                    "unexpanded notation '" + p.name() + "' cannot be desugared");
      std::vector<Pattern> args;
      for (const auto& a : p.children()) args.push_back(d(a));
      return Pattern::notation(p.name(), std::move(args));
    }
  }
  return p;
}

}  // namespace

Pattern desugar(const Pattern& p) { return desugar_impl(p, false); }

bool is_core(const Pattern& p) {
  if (!is_core_kind(p.kind())) return false;
  for (const auto& c : p.children())
    if (!is_core(c)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// free variables and substitution

namespace {

void collect_free(const Pattern& p, std::set<std::string>& bound_e, std::set<std::string>& bound_s,
                  FreeVars& out) {
  switch (p.kind()) {
    case PatternKind::ElementVar:
      if (!bound_e.count(p.name())) out.element_vars.insert(p.name());
      return;
    case PatternKind::SetVar:
      if (!bound_s.count(p.name())) out.set_vars.insert(p.name());
      return;
    default:
      break;
  }
  if (is_binder_kind(p.kind())) {
    auto& bound = binds_element_var(p.kind()) ? bound_e : bound_s;
    const bool fresh = bound.insert(p.name()).second;
    collect_free(p.body(), bound_e, bound_s, out);
    if (fresh) bound.erase(p.name());
    return;
  }
  for (const auto& c : p.children()) collect_free(c, bound_e, bound_s, out);
}

void collect_all_names(const Pattern& p, std::set<std::string>& out) {
  if (p.kind() == PatternKind::ElementVar || p.kind() == PatternKind::SetVar ||
      is_binder_kind(p.kind()))
    out.insert(p.name());
  for (const auto& c : p.children()) collect_all_names(c, out);
}

bool occurs_free(const Pattern& p, const std::string& var) {
  const auto fv = free_vars(p);
  return fv.element_vars.count(var) || fv.set_vars.count(var);
}

Pattern subst_impl(const Pattern& p, const std::string& var, const Pattern& q,
                   const std::set<std::string>& fv_q) {
  switch (p.kind()) {
    case PatternKind::ElementVar:
    case PatternKind::SetVar:
      return p.name() == var ? q : p;
    case PatternKind::Symbol:
    case PatternKind::Bot:
    case PatternKind::Top:
      return p;
    default:
      break;
  }
  if (is_binder_kind(p.kind())) {
    if (p.name() == var) return p;
    if (!occurs_free(p.body(), var)) return p;
    if (fv_q.count(p.name())) {
      std::set<std::string> avoid = fv_q;
      collect_all_names(p.body(), avoid);
      avoid.insert(var);
      const std::string renamed = fresh_name(p.name(), avoid);
      const Pattern fresh_var = binds_element_var(p.kind()) ? Pattern::evar(renamed)
                                                            : Pattern::svar(renamed);
      auto body = subst_impl(p.body(), p.name(), fresh_var, {renamed});
      return Pattern::make(p.kind(), renamed, {subst_impl(body, var, q, fv_q)});
    }
    return Pattern::make(p.kind(), p.name(), {subst_impl(p.body(), var, q, fv_q)});
  }
  std::vector<Pattern> kids;
  kids.reserve(p.children().size());
  for (const auto& c : p.children()) kids.push_back(subst_impl(c, var, q, fv_q));
  return Pattern::make(p.kind(), p.name(), std::move(kids));
}

}  // namespace

FreeVars free_vars(const Pattern& p) {
  FreeVars out;
  std::set<std::string> be, bs;
  collect_free(p, be, bs, out);
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  for (int i = 1;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

Pattern substitute(const Pattern& p, const std::string& var, const Pattern& q) {
  const auto fv = free_vars(q);
  std::set<std::string> names = fv.element_vars;
  names.insert(fv.set_vars.begin(), fv.set_vars.end());
  return subst_impl(p, var, q, names);
}

// ---------------------------------------------------------------------------
// polarity and well-formedness

Polarity check_positivity(const Pattern& p, const std::string& var) {
  switch (p.kind()) {
    case PatternKind::SetVar:
      return p.name() == var ? Polarity::Positive : Polarity::Absent;
    case PatternKind::ElementVar:
    case PatternKind::Symbol:
    case PatternKind::Bot:
    case PatternKind::Top:
      return Polarity::Absent;
    case PatternKind::Implies:
      return join(flip(check_positivity(p.left(), var)), check_positivity(p.right(), var));
    case PatternKind::Not:
      return flip(check_positivity(p.body(), var));
    case PatternKind::Mu:
    case PatternKind::Nu:
      if (p.name() == var) return Polarity::Absent;
      return check_positivity(p.body(), var);
    default: {
      Polarity acc = Polarity::Absent;
      for (const auto& c : p.children()) acc = join(acc, check_positivity(c, var));
      return acc;
    }
  }
}

std::string WellFormednessError::message() const {
  if (kind == Kind::UnknownSymbol) return "UnknownSymbol: '" + name + "'";
  return "NonPositiveBinder: '" + name + "' occurs negatively at path [" + path + "]";
}

namespace {

// Path to the first free occurrence of `var` reached through an odd number of
// implication left-hand sides.
bool find_negative(const Pattern& p, const std::string& var, bool negated, std::string& path) {
  if (p.kind() == PatternKind::SetVar) return p.name() == var && negated;
  if (p.kind() == PatternKind::Mu && p.name() == var) return false;
  for (std::size_t i = 0; i < p.children().size(); ++i) {
    const bool flips = p.kind() == PatternKind::Implies && i == 0;
    std::string sub;
    if (find_negative(p.child(i), var, negated != flips, sub)) {
      path = std::to_string(i) + (sub.empty() ? "" : "." + sub);
      return true;
    }
  }
  return false;
}

std::optional<WellFormednessError> check_binders(const Pattern& p, const std::string& path) {
  if (p.kind() == PatternKind::Mu) {
    const Polarity pol = check_positivity(p.body(), p.name());
    if (pol == Polarity::Negative || pol == Polarity::Both) {
      std::string sub;
      find_negative(p.body(), p.name(), false, sub);
      std::string full = path.empty() ? "0" : path + ".0";
      if (!sub.empty()) full += "." + sub;
      return WellFormednessError{WellFormednessError::Kind::NonPositiveBinder, p.name(), full};
    }
  }
  for (std::size_t i = 0; i < p.children().size(); ++i) {
    auto r = check_binders(p.child(i), path.empty() ? std::to_string(i)
                                                     : path + "." + std::to_string(i));
    if (r) return r;
  }
  return std::nullopt;
}

void collect_symbols(const Pattern& p, std::set<std::string>& out) {
  if (p.kind() == PatternKind::Symbol) out.insert(p.name());
  for (const auto& c : p.children()) collect_symbols(c, out);
}

}  // namespace

std::set<std::string> symbols_of(const Pattern& p) {
  std::set<std::string> out;
  collect_symbols(p, out);
  return out;
}

std::optional<WellFormednessError> well_formed(const Pattern& p, const Signature& sig) {
  for (const auto& s : symbols_of(p))
    if (!sig.contains(s))
      return WellFormednessError{WellFormednessError::Kind::UnknownSymbol, s, ""};
  return check_binders(desugar_impl(p, true), "");
}

}  // namespace mlcf
