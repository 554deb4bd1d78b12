#include <doctest.h>

#include <json.hpp>

#include "mlcf/error.hpp"
#include "support.hpp"

using namespace mlcf;

namespace {

const char* kLists = "set E = {e1, e2}; const(One) + const(E) * Id";
const char* kMoore = "set I = {i1, i2}; set O = {o1, o2}; const(O) * Id ^ I";

Container reduced(const char* spec) { return simplify(to_container(parse_functor(spec).functor)).container; }

std::vector<std::string> xs(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

std::vector<FiniteSet> small_sets() {
  return {zero_set(), one_set(), FiniteSet{"A", {"a1", "a2"}}, FiniteSet{"B", {"b1", "b2", "b3"}}};
}

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

TEST_CASE("parse_functor") {
  const auto lists = parse_functor(kLists);
  CHECK(print_functor(lists.functor) == "const(One) + const(E) * Id");
  CHECK(lists.sets.at("E").elements == std::vector<std::string>{"e1", "e2"});
  const auto moore = parse_functor(kMoore);
  CHECK(moore.functor.kind == PolyFunctor::Kind::Prod);
  CHECK(moore.functor.right->kind == PolyFunctor::Kind::Exp);
  CHECK(parse_functor("Id").functor.kind == PolyFunctor::Kind::Id);
  // ^ binds tighter than *, which binds tighter than +
  const auto f = parse_functor("set C = {c}; Id + Id * Id ^ C").functor;
  CHECK(f.kind == PolyFunctor::Kind::Sum);
  CHECK(f.right->kind == PolyFunctor::Kind::Prod);
  CHECK(f.right->right->kind == PolyFunctor::Kind::Exp);
  CHECK(parse_functor("Id ^ Zero").functor.kind == PolyFunctor::Kind::Exp);

  expect_code(ErrorCode::Parse, [] { parse_functor("Id +"); });
  expect_code(ErrorCode::Parse, [] { parse_functor("const(Q)"); });
  expect_code(ErrorCode::Parse, [] { parse_functor("set E = {a, a}; const(E)"); });
}

TEST_CASE("to_container examples") {
  const FiniteSet e3{"E", {"e1", "e2", "e3"}};
  const Container k = to_container(PolyFunctor::constant(e3));
  CHECK(enumerate_shapes(k).size() == 3);
  for (const auto& a : enumerate_shapes(k)) CHECK(fiber_of(k, a).empty());

  const Container lists = to_container(parse_functor(kLists).functor);
  CHECK(print_container(lists) == "Σ_{a:1+E×1} X^{[0,⟨|0,1|⟩][a]}");

  const Container moore = to_container(parse_functor(kMoore).functor);
  CHECK(print_container(moore) == "Σ_{a:O×(I→1)} X^{⟨|0,Σ_{c:I}1|⟩[a]}");
  CHECK(enumerate_shapes(moore).size() == 2);
  for (const auto& a : enumerate_shapes(moore)) CHECK(fiber_of(moore, a).size() == 2);

  const Container id = to_container(PolyFunctor::id());
  REQUIRE(enumerate_shapes(id).size() == 1);
  CHECK(fiber_of(id, enumerate_shapes(id)[0]).size() == 1);
}

TEST_CASE("simplify examples") {
  const Container lists = reduced(kLists);
  CHECK(print_container(lists) == "Σ_{a:1+E} X^{[0,1][a]}");
  std::vector<std::string> names;
  for (const auto& a : enumerate_shapes(lists)) names.push_back(a.str());
  CHECK(names == std::vector<std::string>{"star", "e1", "e2"});
  CHECK(fiber_of(lists, Value::atom("e1")).size() == 1);
  CHECK(fiber_of(lists, Value()).empty());

  const Container moore = reduced(kMoore);
  CHECK(print_container(moore) == "Σ_{a:O} X^{I}");
  for (const auto& a : enumerate_shapes(moore)) {
    std::vector<std::string> ps;
    for (const auto& p : fiber_of(moore, a)) ps.push_back(p.str());
    CHECK(ps == std::vector<std::string>{"i1", "i2"});
  }
  CHECK(simplify(lists).container == lists);
  CHECK(simplify(moore).container == moore);
}

TEST_CASE("apply_container examples") {
  CHECK(apply_container(reduced(kLists), xs(3)).size() == 7);
  CHECK(apply_container(reduced(kMoore), xs(3)).size() == 18);
  // with no labels only constant shapes survive, each with the empty labeling
  const auto none = apply_container(reduced(kLists), {});
  REQUIRE(none.size() == 1);
  CHECK(none[0].shape.str() == "star");
  CHECK(none[0].labeling.empty());
  CHECK(apply_container(reduced(kMoore), {}).empty());
  // every labeling covers its fiber exactly
  const Container m = reduced(kMoore);
  for (const auto& el : apply_container(m, xs(2))) {
    const auto fiber = fiber_of(m, el.shape);
    REQUIRE(el.labeling.size() == fiber.size());
    for (std::size_t i = 0; i < fiber.size(); ++i) CHECK(el.labeling[i].first == fiber[i]);
  }
}

TEST_CASE("fiber profile and symbolic cardinality") {
  const auto profile = fiber_profile(reduced(kLists));
  CHECK(profile.size() == 2);
  CHECK(profile.at(0) == 1);
  CHECK(profile.at(1) == 2);
  CHECK(container_cardinality(reduced(kMoore), 3) == 18);
  // |O × X^I| with |I| = 40 is far beyond enumeration
  const FiniteSet big{"C", xs(40)};
  const auto f = PolyFunctor::prod(PolyFunctor::constant({"O", {"o1", "o2"}}), PolyFunctor::exp(PolyFunctor::id(), big));
  BigCount expected = 2;
  for (int i = 0; i < 40; ++i) expected *= 3;
  CHECK(container_cardinality(to_container(f), 3) == expected);
}

TEST_CASE("shape cap") {
  const auto f = PolyFunctor::exp(PolyFunctor::constant({"B", {"b1", "b2", "b3"}}), FiniteSet{"C", xs(3)});
  const Container c = to_container(f);
  CHECK(enumerate_shapes(c).size() == 27);
  expect_code(ErrorCode::SizeCapExceeded, [&] { enumerate_shapes(c, 10); });
  CHECK(shape_count(c.shapes) == 27);

  // one function out of the empty set, however large the codomain
  const auto huge = PolyFunctor::exp(PolyFunctor::exp(PolyFunctor::exp(f, FiniteSet{"C", xs(3)}), FiniteSet{"C", xs(3)}),
                                     zero_set());
  CHECK(enumerate_shapes(to_container(huge)).size() == 1);
  CHECK(apply_container(to_container(huge), xs(2)).size() == 1);
  const auto empty_prod = PolyFunctor::prod(PolyFunctor::exp(f, FiniteSet{"C", xs(3)}), PolyFunctor::constant(zero_set()));
  CHECK(enumerate_shapes(to_container(empty_prod)).empty());
}

TEST_CASE("containers agree with direct polynomial evaluation") {
  const auto all = oracle::all_functors(4, small_sets());
  CHECK(all.size() > 1000);
  for (const auto& f : all) {
    CAPTURE(print_functor(f));
    const Container c = to_container(f);
    const Simplified s = simplify(c);
    if (shape_count(c.shapes) <= 500) CHECK(verify_iso(c, s.container, s.iso));
    CHECK(simplify(s.container).container == s.container);
    for (std::size_t n = 0; n <= 3; ++n) {
      const BigCount expected = oracle::poly_size(f, n);
      CHECK(container_cardinality(c, n) == expected);
      CHECK(container_cardinality(s.container, n) == expected);
      if (expected <= 2000) CHECK(BigCount(apply_container(c, xs(n)).size()) == expected);
    }
  }
}

TEST_CASE("sum elements are the tagged union of the summands") {
  const auto sets = small_sets();
  const auto atoms = oracle::all_functors(2, sets);
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
  for (int i = 0; i < 100; ++i) {
    const auto& f = atoms[pick(rng)];
    const auto& g = atoms[pick(rng)];
    const auto x = xs(2);
    const auto lhs = apply_container(to_container(PolyFunctor::sum(f, g)), x);
    std::set<std::string> left, right;
    for (const auto& el : lhs) {
      CHECK((el.shape.kind() == Value::Kind::Inl || el.shape.kind() == Value::Kind::Inr));
      (el.shape.kind() == Value::Kind::Inl ? left : right).insert(el.str());
    }
    CHECK(left.size() == apply_container(to_container(f), x).size());
    CHECK(right.size() == apply_container(to_container(g), x).size());
    // products pair up the components
    CHECK(apply_container(to_container(PolyFunctor::prod(f, g)), x).size() ==
          apply_container(to_container(f), x).size() * apply_container(to_container(g), x).size());
  }
}

TEST_CASE("container JSON") {
  const auto j = nlohmann::json::parse(container_to_json(reduced(kMoore)));
  CHECK(j["shapes"] == nlohmann::json({"o1", "o2"}));
  CHECK(j["fibers"]["o1"] == nlohmann::json({"i1", "i2"}));
  const auto l = nlohmann::json::parse(container_to_json(reduced(kLists)));
  CHECK(l["fibers"]["star"].empty());
}
