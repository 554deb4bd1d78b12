#include <doctest.h>

#include "mlcf/error.hpp"
#include "support.hpp"

using namespace mlcf;

namespace {

Signature sig(std::initializer_list<const char*> names) {
  Signature s;
  for (auto n : names) s.insert(n);
  return s;
}

const Signature kSyms = sig({"s0", "s1", "s2"});

Pattern parse(const std::string& text, const Signature& s = kSyms) { return parse_pattern(text, s); }

}  // namespace

TEST_CASE("parse: binders, application, precedence") {
  const auto lists = sig({"nil", "cons"});
  CHECK(parse("mu X . nil \\/ cons X", lists) ==
        Pattern::mu("X", Pattern::disj(Pattern::sym("nil"), Pattern::app(Pattern::sym("cons"), Pattern::svar("X")))));
  CHECK(parse("exists x . x") == Pattern::exists("x", Pattern::evar("x")));
  CHECK(parse("a b c") == Pattern::app(Pattern::app(Pattern::evar("a"), Pattern::evar("b")), Pattern::evar("c")));
  // -> is right associative and loosest
  CHECK(parse("x -> y -> z") ==
        Pattern::implies(Pattern::evar("x"), Pattern::implies(Pattern::evar("y"), Pattern::evar("z"))));
  CHECK(parse("not x /\\ y \\/ z") ==
        Pattern::disj(Pattern::conj(Pattern::negation(Pattern::evar("x")), Pattern::evar("y")), Pattern::evar("z")));
  CHECK(parse("Bot") == Pattern::bot());
  CHECK(parse("Top") == Pattern::top());
  CHECK(parse("s0").kind() == PatternKind::Symbol);
  CHECK(parse("X").kind() == PatternKind::SetVar);
  CHECK(parse("f{x, Y}") == Pattern::notation("f", {Pattern::evar("x"), Pattern::svar("Y")}));
}

TEST_CASE("parse errors carry the Parse code") {
  for (const char* bad : {"", "(x", "x /\\", "mu x . x", "exists X . X", "x )", "->", "mu . X"}) {
    CAPTURE(bad);
    try {
      parse(bad);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Parse);
    }
  }
}

TEST_CASE("print") {
  CHECK(print_pattern(Pattern::bot()) == "Bot");
  CHECK(print_pattern(Pattern::disj(Pattern::evar("x"), Pattern::evar("y"))) == "x \\/ y");
  CHECK(print_pattern(Pattern::mu("X", Pattern::svar("X"))) == "mu X . X");
  CHECK(print_pattern(parse("(exists x . x) y")) == "(exists x . x) y");
  CHECK(print_pattern(parse("x -> (y -> z)")) == "x -> y -> z");
  CHECK(print_pattern(parse("(x -> y) -> z")) == "(x -> y) -> z");
}

TEST_CASE("print/parse round trip on random patterns") {
  std::mt19937_64 rng(7);
  gen::PatternGen g{rng};
  for (int i = 0; i < 500; ++i) {
    const Pattern p = g(5);
    CAPTURE(print_pattern(p));
    CHECK(parse(print_pattern(p)) == p);
  }
}

TEST_CASE("desugar") {
  CHECK(desugar(Pattern::top()) == Pattern::implies(Pattern::bot(), Pattern::bot()));
  const auto x = Pattern::svar("X");
  const auto neg = [](Pattern p) { return Pattern::implies(p, Pattern::bot()); };
  // νX.X ↦ ¬μX.¬¬X
  CHECK(desugar(Pattern::nu("X", x)) == neg(Pattern::mu("X", neg(neg(x)))));
  CHECK(desugar(Pattern::negation(x)) == neg(x));
  CHECK(desugar(Pattern::disj(x, Pattern::svar("Y"))) == Pattern::implies(neg(x), Pattern::svar("Y")));
  CHECK(desugar(Pattern::forall("x", Pattern::evar("x"))) ==
        neg(Pattern::exists("x", neg(Pattern::evar("x")))));

  std::mt19937_64 rng(11);
  gen::PatternGen g{rng};
  for (int i = 0; i < 300; ++i) {
    const Pattern p = g(5);
    const Pattern d = desugar(p);
    CHECK(is_core(d));
    CHECK(desugar(d) == d);
    CHECK(free_vars(d) == free_vars(p));
  }
}

TEST_CASE("free variables") {
  const auto s = sig({"cons"});
  CHECK(free_vars(parse("exists x . x")).empty());
  const auto fv = free_vars(parse("mu X . cons a X", s));
  CHECK(fv.element_vars == std::set<std::string>{"a"});
  CHECK(fv.set_vars.empty());
  const auto outer = free_vars(parse("X \\/ mu X . X"));
  CHECK(outer.set_vars == std::set<std::string>{"X"});
  CHECK(outer.element_vars.empty());
}

TEST_CASE("substitution avoids capture") {
  const auto x = Pattern::svar("X");
  CHECK(substitute(x, "X", Pattern::negation(x)) == Pattern::negation(x));
  CHECK(substitute(parse("exists x . x /\\ y"), "y", Pattern::evar("x")) == parse("exists x1 . x1 /\\ x"));
  CHECK(substitute(parse("mu X . X \\/ Y"), "Y", x) == parse("mu X1 . X1 \\/ X"));
  // bound occurrences are untouched
  CHECK(substitute(parse("mu X . X"), "X", Pattern::bot()) == parse("mu X . X"));
  CHECK(fresh_name("x", {"x", "x1"}) == "x2");
  CHECK(fresh_name("x", {}) == "x1");
}

TEST_CASE("substitution agrees with valuation update") {
  // ⟦φ[ψ/X]⟧ρ = ⟦φ⟧ρ[⟦ψ⟧ρ/X], checked with the oracle evaluator
  std::mt19937_64 rng(23);
  for (int i = 0; i < 150; ++i) {
    const Model m = gen::model(rng, 3);
    gen::PatternGen g{rng};
    g.free_sets = {"Y", "W"};
    const Pattern phi = desugar(g(4)), psi = desugar(g(3));
    oracle::Env env;
    env.evars["x"] = 0;
    env.svars["Y"] = gen::subset(rng, m);
    env.svars["W"] = gen::subset(rng, m);
    const oracle::Set lhs = oracle::eval(m, substitute(phi, "Y", psi), env);
    oracle::Env upd = env;
    upd.svars["Y"] = oracle::eval(m, psi, env);
    const oracle::Set rhs = oracle::eval(m, phi, upd);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("positivity") {
  const auto x = Pattern::svar("X");
  CHECK(check_positivity(x, "X") == Polarity::Positive);
  CHECK(check_positivity(Pattern::implies(x, Pattern::bot()), "X") == Polarity::Negative);
  CHECK(check_positivity(Pattern::implies(Pattern::implies(x, Pattern::bot()), Pattern::bot()), "X") ==
        Polarity::Positive);
  CHECK(check_positivity(Pattern::conj(x, Pattern::negation(x)), "X") == Polarity::Both);
  CHECK(check_positivity(Pattern::svar("Y"), "X") == Polarity::Absent);
  CHECK(check_positivity(parse("mu X . not X"), "X") == Polarity::Absent);

  CHECK(join(Polarity::Positive, Polarity::Negative) == Polarity::Both);
  CHECK(join(Polarity::Absent, Polarity::Negative) == Polarity::Negative);
  CHECK(flip(Polarity::Positive) == Polarity::Negative);
  CHECK(flip(Polarity::Both) == Polarity::Both);
}

TEST_CASE("positivity matches occurrence parity on random patterns") {
  std::mt19937_64 rng(5);
  gen::PatternGen g{rng};
  g.free_sets = {"Y"};
  for (int i = 0; i < 500; ++i) {
    const Pattern p = g(6);
    CAPTURE(print_pattern(p));
    CHECK(check_positivity(p, "Y") == oracle::occurrence_parity(desugar(p), "Y"));
  }
}

TEST_CASE("well-formedness") {
  auto err = well_formed(parse("mu X . not X"), kSyms);
  REQUIRE(err);
  CHECK(err->kind == WellFormednessError::Kind::NonPositiveBinder);
  CHECK(err->name == "X");
  CHECK_FALSE(well_formed(parse("nu X . not not X"), kSyms));
  // νX.¬X is ¬μX.¬¬¬X after desugaring, so X is negative under the μ
  err = well_formed(parse("nu X . not X"), kSyms);
  REQUIRE(err);
  CHECK(err->kind == WellFormednessError::Kind::NonPositiveBinder);
  CHECK_FALSE(well_formed(parse("nu X . not X -> X"), kSyms));

  const Pattern undeclared = Pattern::sym("undeclared");
  err = well_formed(undeclared, Signature{});
  REQUIRE(err);
  CHECK(err->kind == WellFormednessError::Kind::UnknownSymbol);

  std::mt19937_64 rng(3);
  gen::PatternGen g{rng};
  for (int i = 0; i < 300; ++i) CHECK_FALSE(well_formed(g(6), kSyms));
}
