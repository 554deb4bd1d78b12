#include <map>
#include <set>

#include "labeling.hpp"
#include "mlcf/error.hpp"
#include "mlcf/fixpoint.hpp"

namespace mlcf {

namespace {

using detail::for_each_labeling;

// Carrier-building helper shared by the initial and final models: the
// encoding apparatus (cons, pair, fst, snd, inh, sorts) and interned
// shapes, positions, labelings and pair elements.
class Builder {
 public:
  Builder(Model& m, const GeneratedTheory& th) : m_(m), th_(th) {
    for (const char* op : {"cons", "pair", "fst", "snd", "inh"}) constant(op);
    const auto& syms = th.theory.symbols;
    if (syms.contains("iniMor")) ini_ = constant("iniMor");
    if (syms.contains("out")) constant("out");
    if (syms.contains("nxt")) constant("nxt");
    sort("Sort");
    sort(th.sort);
    sort(th.label_sort);
    for (const auto& g : th.groups) {
      if (!g.shape_sort.empty()) sort(g.shape_sort);
      if (!g.position_sort.empty()) sort(g.position_sort);
    }
  }

  Element op(const std::string& name) const { return ops_.at(name); }
  Element ini() const { return *ini_; }

  Element value(const Value& v) {
    static const std::set<std::string> kTaken = {"cons", "pair", "fst", "snd", "inh",
                                                 "iniMor", "out", "nxt", "def"};
    const std::string& s = v.str();
    return m_.intern(kTaken.count(s) ? "v:" + s : s);
  }

  void inhabit(const std::string& sort_name, Element e) { m_.add_app(op("inh"), sorts_.at(sort_name), e); }

  // Shape and (for function labels) position elements of a group.
  Element shape(const ShapeGroup& g, const Value& a) {
    const Element e = value(a);
    if (g.shape_sort.empty()) {
      m_.add_to_symbol("star", e);
    } else {
      inhabit(g.shape_sort, e);
    }
    if (g.label == ShapeGroup::Label::Function)
      for (const auto& p : g.fiber) inhabit(g.position_sort, value(p));
    return e;
  }

  Element label(const ShapeGroup& g, const std::vector<Element>& labels) {
    switch (g.label) {
      case ShapeGroup::Label::Empty: return ini();
      case ShapeGroup::Label::Direct: return labels.at(0);
      case ShapeGroup::Label::Function: break;
    }
    std::string name = "f:{";
    for (std::size_t i = 0; i < labels.size(); ++i)
      name += (i ? "," : "") + g.fiber[i].str() + ":" + m_.name_of(labels[i]);
    name += "}";
    const Element f = m_.intern(name);
    for (std::size_t i = 0; i < labels.size(); ++i) m_.add_app(f, value(g.fiber[i]), labels[i]);
    return f;
  }

  // The pair element <a,f>, reached as pair a f.
  Element pair(Element a, Element f) {
    const Element partial = m_.intern("pair:" + m_.name_of(a));
    m_.add_app(op("pair"), a, partial);
    const Element p = m_.intern("p:<" + m_.name_of(a) + "," + m_.name_of(f) + ">");
    m_.add_app(partial, f, p);
    m_.add_app(op("fst"), p, a);
    m_.add_app(op("snd"), p, f);
    return p;
  }

  // Imported symbols nobody interprets denote the empty set.
  void finish() {
    for (const auto& s : builtin_library().signature_of(th_.theory).symbols)
      if (s != "def" && !m_.has_symbol(s)) m_.declare_symbol(s);
  }

 private:
  Element constant(const std::string& name) {
    const Element e = m_.intern(name);
    ops_[name] = e;
    m_.add_to_symbol(name, e);
    return e;
  }

  void sort(const std::string& name) {
    if (sorts_.count(name)) return;
    const Element e = m_.intern("sort:" + name);
    sorts_[name] = e;
    m_.add_to_symbol(name, e);
    if (name != "Sort") m_.add_app(op("inh"), sorts_.at("Sort"), e);
    else m_.add_app(op("inh"), e, e);
  }

  Model& m_;
  const GeneratedTheory& th_;
  std::map<std::string, Element> ops_;
  std::map<std::string, Element> sorts_;
  std::optional<Element> ini_;
};

BigCount labelings_over(const Container& c, std::size_t pool) {
  BigCount total = 0;
  for (const auto& a : enumerate_shapes(c)) {
    BigCount t = 1;
    for (std::size_t i = 0; i < fiber_of(c, a).size(); ++i) t *= pool;
    total += t;
  }
  return total;
}

}  // namespace

TermModel build_initial_term_model(const Container& c, std::size_t depth, const std::string& name,
                                   std::uint64_t cap) {
  if (depth == 0) throw Error(ErrorCode::InvalidArgument, "term model depth must be at least 1");
  TermModel tm;
  tm.theory = generate_theory(c, FixpointKind::Initial, {name, true});
  const InitialChain chain = initial_approximants(c, depth, cap);

  Model m;
  Builder b(m, tm.theory);
  std::map<std::string, Element> tree_el;
  for (const auto& t : chain.levels[depth]) {
    const Element e = m.intern("t:" + t->str());
    tree_el[t->str()] = e;
    b.inhabit(tm.theory.sort, e);
  }
  // Labels come from one level down, so every cons lands inside the carrier.
  const auto& pool = chain.levels[depth - 1];
  for (const auto& t : pool) b.inhabit(tm.theory.label_sort, tree_el.at(t->str()));

  for (const auto& g : tm.theory.groups) {
    for (const auto& a : g.shapes) {
      const Element ae = b.shape(g, a);
      for_each_labeling(g.fiber.size(), pool, [&](const std::vector<ConsTreePtr>& labels) {
        std::vector<std::pair<Value, ConsTreePtr>> kids;
        std::vector<Element> label_els;
        for (std::size_t i = 0; i < labels.size(); ++i) {
          kids.emplace_back(g.fiber[i], labels[i]);
          label_els.push_back(tree_el.at(labels[i]->str()));
        }
        const Element tree = tree_el.at(make_tree(a, std::move(kids))->str());
        const Element p = b.pair(ae, b.label(g, label_els));
        m.add_app(b.op("cons"), p, tree);
      });
    }
  }
  b.finish();
  tm.model = canonical_equality_extension(m);

  for (const auto& level : chain.levels) {
    ElementSet s = tm.model.empty_set();
    for (const auto& t : level) s.insert(tree_el.at(t->str()));
    tm.chain.push_back(std::move(s));
  }
  return tm;
}

QuotientModel build_final_quotient_model(const Container& c, const FiniteCoalgebra& g,
                                         const std::string& name, bool phantoms, std::uint64_t cap) {
  QuotientModel qm;
  qm.theory = generate_theory(c, FixpointKind::Final, {name, true});
  qm.partition = minimize_bisimilarity(g);
  const auto& part = qm.partition;

  const BigCount total = labelings_over(c, part.count);
  if (total > cap)
    throw Error(ErrorCode::SizeCapExceeded, "quotient model would need " + total.str() +
                                                " pair elements, cap is " + std::to_string(cap));

  Model m;
  Builder b(m, qm.theory);

  std::vector<std::string> names(part.count);
  std::vector<std::size_t> rep(part.count, g.states.size());
  for (std::size_t s = 0; s < g.states.size(); ++s) {
    auto& n = names[part.block[s]];
    n += (n.empty() ? "q:" : ",") + g.states[s];
    if (rep[part.block[s]] == g.states.size()) rep[part.block[s]] = s;
  }
  for (const auto& n : names) {
    const Element e = m.intern(n);
    qm.classes.push_back(e);
    b.inhabit(qm.theory.sort, e);
    b.inhabit(qm.theory.label_sort, e);
  }

  std::map<std::string, const ShapeGroup*> group_of;
  for (const auto& grp : qm.theory.groups)
    for (const auto& a : grp.shapes) group_of[a.str()] = &grp;

  // Realized (shape, labeling) pairs, keyed by their pair element.
  std::map<Element, Element> realized;
  for (std::size_t k = 0; k < part.count; ++k) {
    const auto& step = g.structure[rep[k]];
    const ShapeGroup& grp = *group_of.at(step.shape.str());
    std::vector<Element> labels;
    for (const auto& [pos, t] : step.next) labels.push_back(qm.classes[part.block[t]]);
    const Element ae = b.shape(grp, step.shape);
    const Element fe = b.label(grp, labels);
    realized[b.pair(ae, fe)] = qm.classes[k];
    m.add_app(b.op("out"), qm.classes[k], ae);
    m.add_app(b.op("nxt"), qm.classes[k], fe);
  }

  for (const auto& grp : qm.theory.groups) {
    for (const auto& a : grp.shapes) {
      const Element ae = b.shape(grp, a);
      for_each_labeling(grp.fiber.size(), qm.classes, [&](const std::vector<Element>& labels) {
        const Element fe = b.label(grp, labels);
        const Element p = b.pair(ae, fe);
        auto it = realized.find(p);
        if (it != realized.end()) {
          m.add_app(b.op("cons"), p, it->second);
          return;
        }
        if (!phantoms) return;
        const Element u = m.intern("u:<" + m.name_of(ae) + "," + m.name_of(fe) + ">");
        qm.phantoms.push_back(u);
        b.inhabit(qm.theory.sort, u);
        m.add_app(b.op("cons"), p, u);
        m.add_app(b.op("out"), u, ae);
        m.add_app(b.op("nxt"), u, fe);
      });
    }
  }
  b.finish();
  qm.model = canonical_equality_extension(m);
  return qm;
}

// ---------------------------------------------------------------------------
// rule checks

const char* verdict_name(Verdict v) { return v == Verdict::Sound ? "sound" : "counterexample"; }

namespace {

bool valid(Evaluator& ev, const Pattern& p, std::uint64_t budget, const Valuation& rho) {
  if (rho.evals.empty() && rho.svals.empty()) return holds(ev, p, budget);
  return ev.evaluate(p, rho) == ev.model().full_set();
}

RuleCheck check_rule(Evaluator& ev, const GeneratedTheory& th, const Pattern& psi, std::uint64_t budget,
                     const Valuation& rho, bool induction) {
  const bool initial = th.kind == FixpointKind::Initial;
  if (initial != induction)
    throw Error(ErrorCode::InvalidArgument, std::string(induction ? "induction" : "coinduction") +
                                                " needs a theory of the " + (induction ? "initial" : "final") +
                                                " kind");
  const Pattern step = substitute(th.step, th.var, psi);
  const Pattern carrier = Pattern::notation("inh", {Pattern::sym(th.sort)});
  const Pattern premise = induction ? Pattern::implies(step, psi) : Pattern::implies(psi, step);
  const Pattern conclusion = induction ? Pattern::implies(carrier, psi) : Pattern::implies(psi, carrier);

  RuleCheck r;
  r.premise = valid(ev, expand_notation(th.theory, premise), budget, rho);
  r.conclusion = valid(ev, expand_notation(th.theory, conclusion), budget, rho);
  r.verdict = r.premise && !r.conclusion ? Verdict::CounterexampleFound : Verdict::Sound;
  return r;
}

}  // namespace

RuleCheck check_induction_rule(Evaluator& ev, const GeneratedTheory& th, const Pattern& psi,
                               std::uint64_t budget, const Valuation& rho) {
  return check_rule(ev, th, psi, budget, rho, true);
}

RuleCheck check_coinduction_rule(Evaluator& ev, const GeneratedTheory& th, const Pattern& psi,
                                 std::uint64_t budget, const Valuation& rho) {
  return check_rule(ev, th, psi, budget, rho, false);
}

}  // namespace mlcf
