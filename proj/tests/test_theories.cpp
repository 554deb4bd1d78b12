#include <doctest.h>

#include "mlcf/error.hpp"
#include "mlcf/theory.hpp"
#include "support.hpp"

using namespace mlcf;

namespace {

const Theory& scope() {
  static const Theory th = parse_theory(
      "spec T\n  imports: SORT\n  symbols: s0, s1, s2\nendspec\n", builtin_library());
  return th;
}

Pattern parse(const std::string& text) {
  return parse_pattern(text, builtin_library().signature_of(scope()));
}

Pattern expand(const std::string& text) { return expand_notation(scope(), parse(text)); }

Pattern N(const char* head, std::vector<Pattern> args) { return Pattern::notation(head, std::move(args)); }

template <class F>
void expect_code(ErrorCode code, F&& f) {
  try {
    f();
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

}  // namespace

TEST_CASE("builtin theory contents") {
  const Theory eq = builtin_theory("EQUALITY");
  REQUIRE(eq.axioms.size() == 1);
  CHECK(eq.axioms[0].label == "Definedness");
  CHECK(print_pattern(eq.axioms[0].pattern) == "forall x . ceil{x}");
  CHECK(eq.symbols.contains("def"));
  for (const char* n : {"ceil", "floor", "eq", "subseteq", "in"}) CHECK(eq.find_notation(n));

  const Theory sort = builtin_theory("SORT");
  REQUIRE(sort.find_axiom("Sort Sort"));
  CHECK(print_pattern(sort.find_axiom("Sort Sort")->pattern) == "in{Sort, inh{Sort}}");
  CHECK(sort.imports == std::vector<std::string>{"EQUALITY"});
  for (const char* n : {"inh", "le", "sneg", "forall_s", "exists_s", "mu_s", "nu_s", "typed", "func1", "partial1"})
    CHECK(sort.find_notation(n));

  const Theory sum = builtin_theory("SUM");
  for (const char* l : {"Sum Sort", "Inject Left", "Inject Right", "Eject Left", "Eject Right", "CoProduct"})
    CHECK(sum.find_axiom(l));
  const Theory pair = builtin_theory("PAIR");
  for (const char* l : {"Pair Sort", "Pair", "Pair Fst", "Pair Snd", "Pair Inj", "Pair Domain"})
    CHECK(pair.find_axiom(l));
  const Theory fun = builtin_theory("FUN");
  for (const char* l : {"Func Sort", "Func Domain", "Func Ext"}) CHECK(fun.find_axiom(l));
  CHECK(print_pattern(fun.find_axiom("Func Ext")->pattern) ==
        "forall_s{f, fun{s1, s2}, forall_s{g, fun{s1, s2}, forall_s{x, s1, eq{f x, g x}} -> eq{f, g}}}");

  expect_code(ErrorCode::UnknownTheory, [] { builtin_theory("NOPE"); });
  CHECK(builtin_library().names() == std::vector<std::string>{"EQUALITY", "FUN", "PAIR", "SORT", "SUM"});
}

TEST_CASE("strict mode quantifies the sort parameters") {
  const Theory sum = builtin_theory("SUM", true);
  CHECK_FALSE(sum.symbols.contains("s1"));
  for (const auto& a : sum.axioms) {
    CAPTURE(a.label);
    const auto fv = free_vars(expand_notation(sum, a.pattern));
    CHECK(fv.empty());
  }
  CHECK(builtin_theory("EQUALITY", true) == builtin_theory("EQUALITY"));
}

TEST_CASE("builtin theories round trip through text") {
  TheoryLibrary lib;
  for (const std::string name : {"EQUALITY", "SORT", "SUM", "PAIR", "FUN"}) {
    CAPTURE(name);
    const Theory th = builtin_theory(name);
    const Theory back = parse_theory(print_theory(th), lib);
    CHECK(back == th);
    CHECK(parse_theory(builtin_theory_text(name), lib) == th);
    lib.add(back);
  }
}

TEST_CASE("theory text errors") {
  const auto& lib = builtin_library();
  expect_code(ErrorCode::Parse, [&] { parse_theory("spec A\n", lib); });
  expect_code(ErrorCode::UnknownTheory, [&] { parse_theory("spec A\n  imports: NOPE\nendspec\n", lib); });
  expect_code(ErrorCode::Parse, [&] { parse_theory("spec A\n  axioms:\n    (L) x ->\nendspec\n", lib); });
  expect_code(ErrorCode::Parse,
              [&] { parse_theory("spec A\n  axioms:\n    (L) Top\n    (L) Bot\nendspec\n", lib); });
  // later blocks may import earlier ones
  const auto two = parse_theories(
      "spec A\n  symbols: a\nendspec\nspec B\n  imports: A\n  axioms:\n    (x) a\nendspec\n", lib);
  REQUIRE(two.size() == 2);
  CHECK(two[1].axioms[0].pattern == Pattern::sym("a"));
}

TEST_CASE("expand_notation examples") {
  const auto def = Pattern::sym("def");
  const auto x = Pattern::evar("x");
  const auto s0 = Pattern::sym("s0");
  CHECK(expand("ceil{x}") == Pattern::app(def, x));
  const auto floor_of = [&](Pattern p) { return Pattern::negation(Pattern::app(def, Pattern::negation(p))); };
  CHECK(expand("in{x, s0}") == floor_of(Pattern::implies(x, s0)));
  CHECK(expand("in{x, s0}") == expand("subseteq{x, s0}"));
  const auto inh_s0 = Pattern::app(Pattern::sym("inh"), s0);
  CHECK(expand("forall_s{x, s0, s1}") ==
        Pattern::forall("x", Pattern::implies(floor_of(Pattern::implies(x, inh_s0)), Pattern::sym("s1"))));
  CHECK(expand("eq{s0, s1}") ==
        floor_of(Pattern::conj(Pattern::implies(s0, Pattern::sym("s1")), Pattern::implies(Pattern::sym("s1"), s0))));

  expect_code(ErrorCode::UnknownNotation, [] { expand("wat{x}"); });
  expect_code(ErrorCode::ArityMismatch, [] { expand("ceil{x, x}"); });
}

TEST_CASE("expansion commutes with constructors and avoids capture") {
  std::mt19937_64 rng(17);
  gen::PatternGen g(rng);
  for (int i = 0; i < 100; ++i) {
    const Pattern a = N("ceil", {g(3)}), b = N("eq", {g(3), g(2)});
    const Pattern ea = expand_notation(scope(), a), eb = expand_notation(scope(), b);
    CHECK(expand_notation(scope(), Pattern::conj(a, b)) == Pattern::conj(ea, eb));
    CHECK(expand_notation(scope(), Pattern::app(a, b)) == Pattern::app(ea, eb));
    CHECK(expand_notation(scope(), Pattern::mu("Q", Pattern::disj(a, b))) == Pattern::mu("Q", Pattern::disj(ea, eb)));
  }
  // typed binds z internally; a free z in the argument must stay free
  CHECK(free_vars(expand("typed{z, s0}")).element_vars == std::set<std::string>{"z"});
  CHECK(free_vars(expand("forall_s{y, s0, x}")).element_vars == std::set<std::string>{"x"});
}

TEST_CASE("canonical equality extension") {
  Model m;
  m.add_element("a");
  m.add_element("b");
  const Model ext = canonical_equality_extension(m);
  REQUIRE(ext.size() == 3);
  for (Element e = 0; e < 3; ++e) {
    Valuation rho;
    rho.evals["x"] = e;
    CHECK(evaluate(ext, rho, expand("ceil{x}")).is_full());
  }
  const auto eq = builtin_theory("EQUALITY");
  for (const auto& r : check_axioms(ext, eq, 100)) CHECK(r.status == AxiomStatus::Pass);
  CHECK(holds(ext, expand("eq{x, x}"), 100));
  Valuation distinct;
  distinct.evals["x"] = 0;
  distinct.evals["y"] = 1;
  CHECK(evaluate(ext, distinct, expand("eq{x, y}")).empty());

  expect_code(ErrorCode::SymbolClash, [&] { canonical_equality_extension(ext); });

  Model broken = m;
  broken.declare_symbol("def");
  const auto results = check_axioms(broken, eq, 100);
  REQUIRE(results.size() == 1);
  CHECK(results[0].status == AxiomStatus::Fail);
}

TEST_CASE("check_axioms reports budget and errors per axiom") {
  Model m;
  m.add_element("a");
  const Theory th = parse_theory(
      "spec A\n  symbols: p\n  axioms:\n    (ok) Top\n    (bad) p\n    (big) X \\/ Y \\/ Z\n    (unbound) q{x}\n"
      "endspec\n",
      TheoryLibrary{});
  m.declare_symbol("p");
  const auto r = check_axioms(m, th, 4);
  REQUIRE(r.size() == 4);
  CHECK(r[0].status == AxiomStatus::Pass);
  CHECK(r[1].status == AxiomStatus::Fail);
  CHECK(r[2].status == AxiomStatus::BudgetExceeded);
  CHECK(r[3].status == AxiomStatus::Error);
  CHECK_FALSE(r[3].message.empty());
}

TEST_CASE("equality notations obey their set contracts") {
  std::mt19937_64 rng(29);
  int pairs = 0;
  for (int i = 0; i < 150; ++i) {
    const Model ext = canonical_equality_extension(gen::model(rng, 3));
    gen::PatternGen g(rng);
    const Pattern p = g(3), q = g(3);
    Valuation rho;
    rho.evals["x"] = std::uniform_int_distribution<Element>(0, static_cast<Element>(ext.size() - 1))(rng);
    rho.svals["Y"] = oracle::from_set(gen::subset(rng, ext), ext);
    const ElementSet vp = evaluate(ext, rho, p), vq = evaluate(ext, rho, q);
    const ElementSet eq = evaluate(ext, rho, expand_notation(scope(), N("eq", {p, q})));
    CHECK((eq.empty() || eq.is_full()));
    CHECK(eq.is_full() == (vp == vq));
    const ElementSet sub = evaluate(ext, rho, expand_notation(scope(), N("subseteq", {p, q})));
    CHECK((sub.empty() || sub.is_full()));
    CHECK(sub.is_full() == vp.subset_of(vq));
    const ElementSet in = evaluate(ext, rho, expand_notation(scope(), N("in", {Pattern::evar("x"), p})));
    CHECK(in.is_full() == vp.contains(rho.evals["x"]));
    ++pairs;
  }
  CHECK(pairs >= 100);
}
