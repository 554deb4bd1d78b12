#include <random>

#include <json.hpp>

#include "mlcf/demo.hpp"
#include "mlcf/error.hpp"
#include "mlcf/fixpoint.hpp"

namespace mlcf {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kListsSpec = "set E = {e1, e2};\nconst(One) + const(E) * Id";
constexpr const char* kMooreSpec = "set I = {i1, i2};\nset O = {o1, o2};\nconst(O) * Id ^ I";

constexpr const char* kListsCoalgebra = R"({"states": ["nil", "c1", "c2", "s"],
 "structure": {"nil": {"shape": "star"},
               "c1": {"shape": "e1", "next": {"star": "c2"}},
               "c2": {"shape": "e2", "next": {"star": "nil"}},
               "s": {"shape": "e1", "next": {"star": "s"}}}})";

// Two copies of a parity machine plus a sink; five states, three behaviors.
constexpr const char* kMooreCoalgebra = R"({"states": ["s0", "s1", "s2", "s3", "s4"],
 "structure": {"s0": {"shape": "o1", "next": {"i1": "s1", "i2": "s0"}},
               "s1": {"shape": "o2", "next": {"i1": "s0", "i2": "s1"}},
               "s2": {"shape": "o1", "next": {"i1": "s3", "i2": "s2"}},
               "s3": {"shape": "o2", "next": {"i1": "s2", "i2": "s3"}},
               "s4": {"shape": "o2", "next": {"i1": "s4", "i2": "s4"}}}})";

struct Check {
  bool passed = true;
  void require(bool ok) { passed = passed && ok; }
};

json axiom_report(Evaluator& ev, const Theory& th, std::uint64_t budget, Check& check,
                  const std::set<std::string>& informational = {}) {
  json out = json::array();
  for (const auto& r : check_axioms(ev, th, budget)) {
    if (!informational.count(r.label)) check.require(r.status == AxiomStatus::Pass);
    json e = {{"label", r.label}, {"status", axiom_status_name(r.status)}};
    if (!r.message.empty()) e["message"] = r.message;
    out.push_back(e);
  }
  return out;
}

json counts_of(const std::vector<std::size_t>& v) { return json(v); }

// Random ψ as a set variable bound to a subset. A third of the draws are
// pushed to a pre/post-fixed point of the step so the premise actually holds.
json rule_run(Evaluator& ev, const GeneratedTheory& th, std::mt19937_64& rng, int trials,
              std::uint64_t budget, Check& check) {
  const bool induction = th.kind == FixpointKind::Initial;
  const Model& m = ev.model();
  std::set<std::string> taken = m.signature().symbols;
  const std::string var = taken.count("Psi") ? fresh_name("Psi", taken) : "Psi";
  const Pattern psi = Pattern::svar(var);
  const Pattern step = expand_notation(th.theory, substitute(th.step, th.var, psi));
  const ElementSet sort_set =
      ev.evaluate(expand_notation(th.theory, Pattern::notation("inh", {Pattern::sym(th.sort)})), {});

  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> mode(0, 2);
  int premise = 0, counter = 0;
  for (int t = 0; t < trials; ++t) {
    ElementSet s = m.empty_set();
    for (Element e = 0; e < m.size(); ++e)
      if (coin(rng)) s.insert(e);
    const int k = mode(rng);
    if (k == 1) {
      for (std::size_t guard = 0; guard <= m.size() + 1; ++guard) {
        Valuation rho;
        rho.svals[var] = s;
        ElementSet next = s;
        if (induction) next |= ev.evaluate(step, rho);
        else next &= ev.evaluate(step, rho);
        if (next == s) break;
        s = next;
      }
    } else if (k == 2) {
      if (induction) s |= sort_set;
      else s &= sort_set;
    }
    Valuation rho;
    rho.svals[var] = s;
    const RuleCheck r = induction ? check_induction_rule(ev, th, psi, budget, rho)
                                  : check_coinduction_rule(ev, th, psi, budget, rho);
    premise += r.premise;
    counter += r.verdict == Verdict::CounterexampleFound;
  }
  check.require(counter == 0);
  return {{"rule", induction ? "induction" : "coinduction"},
          {"trials", trials},
          {"premise_held", premise},
          {"counterexamples", counter}};
}

json describe(const FunctorSpec& spec, const Container& raw, const Simplified& simple, Check& check) {
  const bool iso = verify_iso(raw, simple.container, simple.iso);
  check.require(iso);
  json shapes = json::array();
  for (const auto& a : enumerate_shapes(simple.container)) {
    json ps = json::array();
    for (const auto& p : fiber_of(simple.container, a)) ps.push_back(p.str());
    shapes.push_back({{"shape", a.str()}, {"positions", ps}});
  }
  return {{"functor", print_functor(spec.functor)},
          {"container", print_container(raw)},
          {"simplified", print_container(simple.container)},
          {"iso_verified", iso},
          {"shapes", shapes}};
}

json quotient_section(const Container& c, const char* coalgebra, const std::string& name, std::uint64_t budget,
                      std::mt19937_64& rng, Check& check) {
  const FiniteCoalgebra g = coalgebra_from_json(coalgebra, c);
  const QuotientModel q = build_final_quotient_model(c, g, name);
  json classes = json::array();
  for (std::size_t b = 0; b < q.partition.count; ++b) {
    json members = json::array();
    for (std::size_t s = 0; s < g.states.size(); ++s)
      if (q.partition.block[s] == b) members.push_back(g.states[s]);
    classes.push_back(members);
  }
  // Refinement stage k must group states exactly by depth-k behavior.
  bool stages_ok = true;
  for (std::size_t k = 1; k <= q.partition.stages.size() + 1; ++k) {
    const auto& stage = q.partition.stage(k);
    for (std::size_t s = 0; s < g.states.size(); ++s)
      for (std::size_t t = 0; t < g.states.size(); ++t)
        stages_ok = stages_ok && ((stage[s] == stage[t]) ==
                                  (behavior_of(g, s, k)->str() == behavior_of(g, t, k)->str()));
  }
  check.require(stages_ok);

  Evaluator ev(q.model);
  json out;
  out["coalgebra"] = json::parse(coalgebra_to_json(g));
  out["classes"] = classes;
  out["refinement_stages"] = q.partition.stages.size();
  out["stages_match_behaviors"] = stages_ok;
  out["phantoms"] = q.phantoms.size();
  out["carrier"] = q.model.size();
  out["axioms"] = axiom_report(ev, q.theory.theory, budget, check);

  // Without the phantom elements cons is partial; reported, not required.
  const QuotientModel bare = build_final_quotient_model(c, g, name, false);
  Evaluator bare_ev(bare.model);
  Check ignore;
  out["axioms_without_phantoms"] = axiom_report(bare_ev, bare.theory.theory, budget, ignore);

  out["rule_soundness"] = rule_run(ev, q.theory, rng, 50, budget, check);
  return out;
}

json lists_demo(std::uint64_t seed, std::uint64_t budget) {
  Check check;
  std::mt19937_64 rng(seed);
  const FunctorSpec spec = parse_functor(kListsSpec);
  const Container raw = to_container(spec.functor);
  const Simplified simple = simplify(raw);
  const Container& c = simple.container;

  json r;
  r["case"] = "lists";
  r["reduction"] = describe(spec, raw, simple, check);
  r["initial_theory"] = print_theory(generate_theory(c, FixpointKind::Initial, {"L", false}).theory);
  r["final_theory"] = print_theory(generate_theory(c, FixpointKind::Final, {"L", false}).theory);

  // |φᵏ(⊥)| is the number of lists of length < k.
  const InitialChain chain = initial_approximants(c, 4);
  std::vector<std::size_t> counts, expected;
  std::size_t power = 1, sum = 0;
  for (std::size_t k = 0; k <= 4; ++k) {
    counts.push_back(chain.levels[k].size());
    expected.push_back(sum);
    sum += power;
    power *= 2;
  }
  check.require(counts == expected);
  json levels = json::array();
  for (std::size_t k = 0; k <= 3; ++k) {
    json ts = json::array();
    for (const auto& t : chain.levels[k]) ts.push_back(t->str());
    levels.push_back(ts);
  }
  r["initial_approximants"] = {{"counts", counts_of(counts)}, {"expected", counts_of(expected)}, {"levels", levels}};

  std::vector<std::size_t> behaviors;
  for (const auto& level : final_approximants(c, 3)) behaviors.push_back(level.size());
  r["final_approximants"] = {{"counts", counts_of(behaviors)}};

  const TermModel tm = build_initial_term_model(c, 3, "L");
  Evaluator ev(tm.model);
  json term;
  term["depth"] = 3;
  term["carrier"] = tm.model.size();
  term["label_sort"] = tm.theory.label_sort;
  const Pattern step = expand_notation(tm.theory.theory, tm.theory.step);
  const auto trace = ev.fixpoint({}, tm.theory.var, step, FixpointMode::Least).second;
  const bool chain_ok = trace.iterates == tm.chain;
  check.require(chain_ok);
  term["mu_iterates_match_chain"] = chain_ok;
  term["axioms"] = axiom_report(ev, tm.theory.theory, budget, check);
  term["rule_soundness"] = rule_run(ev, tm.theory, rng, 50, budget, check);
  r["term_model"] = term;

  r["quotient_model"] = quotient_section(c, kListsCoalgebra, "L", budget, rng, check);
  r["passed"] = check.passed;
  return r;
}

json moore_demo(std::uint64_t seed, std::uint64_t budget) {
  Check check;
  std::mt19937_64 rng(seed);
  const FunctorSpec spec = parse_functor(kMooreSpec);
  const Container raw = to_container(spec.functor);
  const Simplified simple = simplify(raw);
  const Container& c = simple.container;

  json r;
  r["case"] = "moore";
  r["reduction"] = describe(spec, raw, simple, check);
  r["final_theory"] = print_theory(generate_theory(c, FixpointKind::Final, {"M", false}).theory);

  // No shape has an empty fiber, so nothing is ever built from below.
  const InitialChain chain = initial_approximants(c, 4);
  std::vector<std::size_t> counts;
  for (const auto& level : chain.levels) counts.push_back(level.size());
  bool empty = true;
  for (auto n : counts) empty = empty && n == 0;
  check.require(empty);
  r["initial_approximants"] = {{"counts", counts_of(counts)}, {"all_empty", empty}};

  // |O|^(1 + |I| + ... + |I|^(k-1)) behaviors of depth k.
  std::vector<std::size_t> behaviors, expected;
  std::size_t exponent = 0, width = 1;
  for (const auto& level : final_approximants(c, 3)) {
    behaviors.push_back(level.size());
    exponent += width;
    width *= 2;
    expected.push_back(std::size_t{1} << exponent);
  }
  check.require(behaviors == expected);
  r["final_approximants"] = {{"counts", counts_of(behaviors)}, {"expected", counts_of(expected)}};

  r["quotient_model"] = quotient_section(c, kMooreCoalgebra, "M", budget, rng, check);
  r["passed"] = check.passed;
  return r;
}

}  // namespace

std::string demo_report(const std::string& which, std::uint64_t seed, std::uint64_t budget) {
  if (budget == 0) throw Error(ErrorCode::InvalidArgument, "budget must be at least 1");
  if (which == "lists") return lists_demo(seed, budget).dump(2);
  if (which == "moore") return moore_demo(seed, budget).dump(2);
  throw Error(ErrorCode::InvalidArgument, "unknown demo '" + which + "' (expected lists or moore)");
}

}  // namespace mlcf
