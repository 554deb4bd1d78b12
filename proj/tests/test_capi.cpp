// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <string>

#include "mlcf/mlcf.h"

using nlohmann::json;

namespace {

const char* kModel = R"({"carrier":["n0","n1"],"app":{"n1 n0":["n0","n1"]},"symbols":{"sigma":["n1"]}})";
const char* kLists = "set E = {e1, e2}; const(One) + const(E) * Id";
const char* kMoore = "set I = {i1, i2}; set O = {o1, o2}; const(O) * Id ^ I";

json take(char* s) {
  REQUIRE(s != nullptr);
  json j = json::parse(s);
  mlcf_string_free(s);
  return j;
}

struct ModelHandle {
  mlcf_model* h = nullptr;
  ~ModelHandle() { mlcf_model_free(h); }
};

struct FunctorHandle {
  mlcf_functor* h = nullptr;
  ~FunctorHandle() { mlcf_functor_free(h); }
};

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(mlcf_status_name(MLCF_OK)) == "ok");
  CHECK(std::string(mlcf_status_name(MLCF_ERR_BUDGET)) != "");
  CHECK(std::string(mlcf_version()) != "");
}

TEST_CASE("model lifecycle and evaluation") {
  ModelHandle m;
  REQUIRE(mlcf_model_from_json(kModel, &m.h) == MLCF_OK);
  size_t n = 0;
  CHECK(mlcf_model_size(m.h, &n) == MLCF_OK);
  CHECK(n == 2);

  char* out = nullptr;
  REQUIRE(mlcf_eval(m.h, "sigma x", "x=n0", &out) == MLCF_OK);
  CHECK(take(out)["elements"] == json({"n0", "n1"}));
  REQUIRE(mlcf_eval(m.h, "Bot", nullptr, &out) == MLCF_OK);
  CHECK(take(out)["elements"].empty());
  // notations resolve against the builtins
  REQUIRE(mlcf_eval(m.h, "ceil{sigma}", nullptr, &out) == MLCF_ERR_UNKNOWN_SYMBOL);

  int valid = -1;
  CHECK(mlcf_holds(m.h, "x -> x", 10, &valid) == MLCF_OK);
  CHECK(valid == 1);
  CHECK(mlcf_holds(m.h, "x", 10, &valid) == MLCF_OK);
  CHECK(valid == 0);
  CHECK(mlcf_holds(m.h, "X /\\ Y /\\ Z", 10, &valid) == MLCF_ERR_BUDGET);
  CHECK(std::string(mlcf_last_error()).find("budget") != std::string::npos);

  REQUIRE(mlcf_fixpoint(m.h, "X", "sigma \\/ X", nullptr, 0, &out) == MLCF_OK);
  const json fp = take(out);
  CHECK(fp["result"] == json({"n1"}));
  CHECK(fp["iterates"].size() == 2);
  CHECK(mlcf_fixpoint(m.h, "X", "not X", nullptr, 0, &out) == MLCF_ERR_NON_POSITIVE);

  REQUIRE(mlcf_model_to_json(m.h, &out) == MLCF_OK);
  CHECK(take(out)["carrier"] == json({"n0", "n1"}));
}

TEST_CASE("error codes") {
  ModelHandle m;
  CHECK(mlcf_model_from_json("{", &m.h) == MLCF_ERR_PARSE);
  CHECK(m.h == nullptr);
  CHECK(mlcf_model_from_json(R"({"carrier":[]})", &m.h) == MLCF_ERR_INVALID_MODEL);
  CHECK(mlcf_model_from_json(nullptr, &m.h) == MLCF_ERR_INVALID_ARGUMENT);
  REQUIRE(mlcf_model_from_json(kModel, &m.h) == MLCF_OK);
  char* out = nullptr;
  CHECK(mlcf_eval(m.h, "x /\\", nullptr, &out) == MLCF_ERR_PARSE);
  CHECK(mlcf_eval(m.h, "x", nullptr, &out) == MLCF_ERR_UNBOUND_VARIABLE);
  CHECK(mlcf_eval(m.h, "x", "x=nope", &out) == MLCF_ERR_INVALID_ARGUMENT);
  CHECK(mlcf_eval(nullptr, "Bot", nullptr, &out) == MLCF_ERR_INVALID_ARGUMENT);
  CHECK(mlcf_builtin_theory("NOPE", 0, &out) == MLCF_ERR_UNKNOWN_THEORY);
  CHECK(std::string(mlcf_last_error()).find("NOPE") != std::string::npos);
  CHECK(mlcf_demo("nope", 1, 100, &out) == MLCF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("theories through the C interface") {
  char* out = nullptr;
  REQUIRE(mlcf_builtin_theory("EQUALITY", 0, &out) == MLCF_OK);
  const std::string text = out;
  mlcf_string_free(out);
  CHECK(text.find("(Definedness) forall x . ceil{x}") != std::string::npos);

  // a model without def fails Definedness
  ModelHandle m;
  REQUIRE(mlcf_model_from_json(R"({"carrier":["a"],"symbols":{"def":[]}})", &m.h) == MLCF_OK);
  REQUIRE(mlcf_theory_check(m.h, text.c_str(), 100, &out) == MLCF_OK);
  const json r = take(out);
  CHECK(r["theories"][0]["name"] == "EQUALITY");
  CHECK(r["theories"][0]["results"][0]["status"] == "fail");
}

TEST_CASE("functors through the C interface") {
  FunctorHandle f;
  REQUIRE(mlcf_functor_parse(kLists, &f.h) == MLCF_OK);
  char* out = nullptr;
  REQUIRE(mlcf_functor_describe(f.h, &out) == MLCF_OK);
  const json d = take(out);
  CHECK(d["simplified"] == "Σ_{a:1+E} X^{[0,1][a]}");
  CHECK(d["iso_verified"] == true);

  REQUIRE(mlcf_functor_mu(f.h, 4, 1000000, &out) == MLCF_OK);
  CHECK(take(out)["counts"] == json({0, 1, 3, 7, 15}));

  REQUIRE(mlcf_functor_theory(f.h, "initial", "L", 0, &out) == MLCF_OK);
  const std::string theory = out;
  mlcf_string_free(out);
  CHECK(theory.rfind("spec MU_L", 0) == 0);
  CHECK(mlcf_functor_theory(f.h, "sideways", "L", 0, &out) == MLCF_ERR_INVALID_ARGUMENT);

  // term model plus generated theory: every axiom passes
  ModelHandle tm;
  REQUIRE(mlcf_functor_term_model(f.h, 3, "L", &tm.h) == MLCF_OK);
  REQUIRE(mlcf_functor_theory(f.h, "initial", "L", 1, &out) == MLCF_OK);
  const std::string bounded = out;
  mlcf_string_free(out);
  REQUIRE(mlcf_theory_check(tm.h, bounded.c_str(), 1000000, &out) == MLCF_OK);
  for (const auto& res : take(out)["theories"][0]["results"]) CHECK(res["status"] == "pass");

  FunctorHandle moore;
  REQUIRE(mlcf_functor_parse(kMoore, &moore.h) == MLCF_OK);
  REQUIRE(mlcf_functor_nu(moore.h, 3, 1000000, &out) == MLCF_OK);
  CHECK(take(out)["counts"] == json({2, 8, 128}));
  CHECK(mlcf_functor_nu(moore.h, 3, 100, &out) == MLCF_ERR_SIZE_CAP);

  ModelHandle q;
  char* part = nullptr;
  const char* g = R"({"states":["a","b"],"structure":{"a":{"shape":"o1","next":{"i1":"b","i2":"a"}},
                      "b":{"shape":"o1","next":{"i1":"a","i2":"b"}}}})";
  REQUIRE(mlcf_functor_quotient_model(moore.h, g, "M", 1, &q.h, &part) == MLCF_OK);
  CHECK(take(part)["classes"] == json::parse(R"([["a","b"]])"));

  FunctorHandle bad;
  CHECK(mlcf_functor_parse("Id +", &bad.h) == MLCF_ERR_PARSE);
}

TEST_CASE("demos pass end to end") {
  for (const char* which : {"lists", "moore"}) {
    CAPTURE(which);
    char* out = nullptr;
    REQUIRE(mlcf_demo(which, 7, 1000000, &out) == MLCF_OK);
    CHECK(take(out)["passed"] == true);
  }
}
