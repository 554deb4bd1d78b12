#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include <json.hpp>

#include "mlcf/demo.hpp"
#include "mlcf/error.hpp"
#include "mlcf/fixpoint.hpp"
#include "mlcf/mlcf.h"

using json = nlohmann::ordered_json;

struct mlcf_model {
  mlcf::Model model;
  std::unique_ptr<mlcf::Evaluator> ev;

  mlcf::Evaluator& evaluator() {
    if (!ev) ev = std::make_unique<mlcf::Evaluator>(model);
    return *ev;
  }
};

struct mlcf_functor {
  mlcf::FunctorSpec spec;
  mlcf::Container raw;
  mlcf::Simplified simplified;
};

namespace {

thread_local std::string g_last_error;

mlcf_status status_of(mlcf::ErrorCode c) {
  return static_cast<mlcf_status>(static_cast<int>(c) + 1);
}

template <class F>
mlcf_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return MLCF_OK;
  } catch (const mlcf::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MLCF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MLCF_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw mlcf::Error(mlcf::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Patterns typed at the API may use any builtin notation.
const mlcf::Theory& builtin_scope() {
  static const mlcf::Theory kScope = [] {
    mlcf::Theory th;
    th.name = "SCOPE";
    th.imports = {"EQUALITY", "SORT", "SUM", "PAIR", "FUN"};
    return th;
  }();
  return kScope;
}

mlcf::Pattern read_pattern(const mlcf::Model& m, const char* text,
                           const std::set<std::string>& params = {}) {
  return mlcf::expand_notation(builtin_scope(), mlcf::parse_pattern(text, m.signature(), params));
}

mlcf::Valuation read_rho(const mlcf::Model& m, const char* rho) {
  return rho && *rho ? mlcf::parse_valuation(m, rho) : mlcf::Valuation{};
}

json names(const mlcf::Model& m, const mlcf::ElementSet& s) { return mlcf::sorted_names(m, s); }

}  // namespace

extern "C" {

const char* mlcf_version(void) { return "0.3.0"; }

const char* mlcf_status_name(mlcf_status s) {
  switch (s) {
    case MLCF_OK: return "ok";
    case MLCF_ERR_INTERNAL: return "internal";
    default: break;
  }
  if (s > MLCF_OK && s < MLCF_ERR_INTERNAL)
    return mlcf::error_code_name(static_cast<mlcf::ErrorCode>(static_cast<int>(s) - 1));
  return "unknown";
}

const char* mlcf_last_error(void) { return g_last_error.c_str(); }

void mlcf_string_free(char* s) { std::free(s); }

mlcf_status mlcf_model_from_json(const char* text, mlcf_model** out) {
  return guard([&] {
    require(text, "json");
    require(out, "out");
    auto m = std::make_unique<mlcf_model>();
    m->model = mlcf::model_from_json(text);
    *out = m.release();
  });
}

void mlcf_model_free(mlcf_model* m) { delete m; }

mlcf_status mlcf_model_to_json(const mlcf_model* m, char** out) {
  return guard([&] {
    require(m, "model");
    require(out, "out");
    *out = dup(mlcf::model_to_json(m->model));
  });
}

mlcf_status mlcf_model_size(const mlcf_model* m, size_t* out) {
  return guard([&] {
    require(m, "model");
    require(out, "out");
    *out = m->model.size();
  });
}

mlcf_status mlcf_eval(mlcf_model* m, const char* pattern, const char* rho, char** out) {
  return guard([&] {
    require(m, "model");
    require(pattern, "pattern");
    require(out, "out");
    const auto p = read_pattern(m->model, pattern);
    const auto s = m->evaluator().evaluate(p, read_rho(m->model, rho));
    json j;
    j["pattern"] = mlcf::print_pattern(p);
    j["elements"] = names(m->model, s);
    *out = dup(j.dump(2));
  });
}

mlcf_status mlcf_holds(mlcf_model* m, const char* pattern, uint64_t budget, int* out) {
  return guard([&] {
    require(m, "model");
    require(pattern, "pattern");
    require(out, "out");
    if (budget == 0) throw mlcf::Error(mlcf::ErrorCode::InvalidArgument, "budget must be at least 1");
    *out = mlcf::holds(m->evaluator(), read_pattern(m->model, pattern), budget) ? 1 : 0;
  });
}

mlcf_status mlcf_fixpoint(mlcf_model* m, const char* var, const char* body, const char* rho, int greatest,
                          char** out) {
  return guard([&] {
    require(m, "model");
    require(var, "var");
    require(body, "body");
    require(out, "out");
    if (!mlcf::is_set_var_name(var))
      throw mlcf::Error(mlcf::ErrorCode::InvalidArgument, std::string("'") + var + "' is not a set variable");
    const auto p = read_pattern(m->model, body, {var});
    const auto mode = greatest ? mlcf::FixpointMode::Greatest : mlcf::FixpointMode::Least;
    auto [result, trace] = m->evaluator().fixpoint(read_rho(m->model, rho), var, p, mode);
    json j;
    j["mode"] = greatest ? "greatest" : "least";
    j["var"] = var;
    j["body"] = mlcf::print_pattern(p);
    json its = json::array();
    for (const auto& s : trace.iterates) its.push_back(names(m->model, s));
    j["iterates"] = its;
    j["stabilized_at"] = trace.stabilized_at;
    j["result"] = names(m->model, result);
    *out = dup(j.dump(2));
  });
}

mlcf_status mlcf_builtin_theory(const char* name, int strict, char** out) {
  return guard([&] {
    require(name, "name");
    require(out, "out");
    *out = dup(mlcf::print_theory(mlcf::builtin_theory(name, strict != 0)));
  });
}

mlcf_status mlcf_theory_check(mlcf_model* m, const char* theory_text, uint64_t budget, char** out) {
  return guard([&] {
    require(m, "model");
    require(theory_text, "theory");
    require(out, "out");
    if (budget == 0) throw mlcf::Error(mlcf::ErrorCode::InvalidArgument, "budget must be at least 1");
    mlcf::TheoryLibrary lib = mlcf::builtin_library();
    const auto theories = mlcf::parse_theories(theory_text, lib);
    for (const auto& th : theories) lib.add(th);
    json ths = json::array();
    for (const auto& th : theories) {
      json rs = json::array();
      for (const auto& r : mlcf::check_axioms(m->evaluator(), th, budget, lib))
        rs.push_back({{"label", r.label}, {"status", mlcf::axiom_status_name(r.status)}, {"message", r.message}});
      ths.push_back({{"name", th.name}, {"results", rs}});
    }
    *out = dup(json{{"theories", ths}}.dump(2));
  });
}

mlcf_status mlcf_functor_parse(const char* spec, mlcf_functor** out) {
  return guard([&] {
    require(spec, "spec");
    require(out, "out");
    auto f = std::make_unique<mlcf_functor>();
    f->spec = mlcf::parse_functor(spec);
    f->raw = mlcf::to_container(f->spec.functor);
    f->simplified = mlcf::simplify(f->raw);
    *out = f.release();
  });
}

void mlcf_functor_free(mlcf_functor* f) { delete f; }

mlcf_status mlcf_functor_describe(const mlcf_functor* f, char** out) {
  return guard([&] {
    require(f, "functor");
    require(out, "out");
    const auto& simple = f->simplified.container;
    json j;
    j["functor"] = mlcf::print_functor(f->spec.functor);
    j["container"] = mlcf::print_container(f->raw);
    j["simplified"] = mlcf::print_container(simple);
    j["shapes"] = json::parse(mlcf::container_to_json(simple));
    j["iso_verified"] = mlcf::verify_iso(f->raw, simple, f->simplified.iso);
    json profile = json::object();
    for (const auto& [k, n] : mlcf::fiber_profile(simple)) profile[std::to_string(k)] = n.str();
    j["fiber_profile"] = profile;
    *out = dup(j.dump(2));
  });
}

mlcf_status mlcf_functor_mu(const mlcf_functor* f, size_t depth, uint64_t cap, char** out) {
  return guard([&] {
    require(f, "functor");
    require(out, "out");
    const auto chain = mlcf::initial_approximants(f->simplified.container, depth, cap);
    json j;
    j["kind"] = "initial";
    json counts = json::array(), levels = json::array();
    for (const auto& level : chain.levels) {
      counts.push_back(level.size());
      json ts = json::array();
      for (const auto& t : level) ts.push_back(t->str());
      levels.push_back(ts);
    }
    j["counts"] = counts;
    j["levels"] = levels;
    j["stabilized_at"] = chain.stabilized_at ? json(*chain.stabilized_at) : json(nullptr);
    *out = dup(j.dump(2));
  });
}

mlcf_status mlcf_functor_nu(const mlcf_functor* f, size_t depth, uint64_t cap, char** out) {
  return guard([&] {
    require(f, "functor");
    require(out, "out");
    if (depth == 0) throw mlcf::Error(mlcf::ErrorCode::InvalidArgument, "behavior depth must be at least 1");
    const auto levels = mlcf::final_approximants(f->simplified.container, depth, cap);
    json j;
    j["kind"] = "final";
    json counts = json::array(), ls = json::array();
    for (const auto& level : levels) {
      counts.push_back(level.size());
      json ts = json::array();
      for (const auto& t : level) ts.push_back(t->str());
      ls.push_back(ts);
    }
    j["counts"] = counts;
    j["levels"] = ls;
    *out = dup(j.dump(2));
  });
}

mlcf_status mlcf_functor_theory(const mlcf_functor* f, const char* kind, const char* name, int bounded_labels,
                                char** out) {
  return guard([&] {
    require(f, "functor");
    require(kind, "kind");
    require(out, "out");
    const std::string k = kind;
    if (k != "initial" && k != "final")
      throw mlcf::Error(mlcf::ErrorCode::InvalidArgument, "kind must be 'initial' or 'final'");
    mlcf::GenerateOptions opts;
    if (name) opts.name = name;
    opts.bounded_labels = bounded_labels != 0;
    const auto th = mlcf::generate_theory(
        f->simplified.container, k == "initial" ? mlcf::FixpointKind::Initial : mlcf::FixpointKind::Final, opts);
    *out = dup(mlcf::print_theory(th.theory));
  });
}

mlcf_status mlcf_functor_term_model(const mlcf_functor* f, size_t depth, const char* name, mlcf_model** out) {
  return guard([&] {
    require(f, "functor");
    require(out, "out");
    auto m = std::make_unique<mlcf_model>();
    m->model = mlcf::build_initial_term_model(f->simplified.container, depth, name ? name : "F").model;
    *out = m.release();
  });
}

mlcf_status mlcf_functor_quotient_model(const mlcf_functor* f, const char* coalgebra_json, const char* name,
                                        int phantoms, mlcf_model** out, char** partition_json) {
  return guard([&] {
    require(f, "functor");
    require(coalgebra_json, "coalgebra");
    require(out, "out");
    const auto& c = f->simplified.container;
    const auto g = mlcf::coalgebra_from_json(coalgebra_json, c);
    auto q = mlcf::build_final_quotient_model(c, g, name ? name : "F", phantoms != 0);
    std::string part;
    if (partition_json) {
      json classes = json::array();
      for (std::size_t b = 0; b < q.partition.count; ++b) {
        json members = json::array();
        for (std::size_t s = 0; s < g.states.size(); ++s)
          if (q.partition.block[s] == b) members.push_back(g.states[s]);
        classes.push_back(members);
      }
      part = json{{"classes", classes}, {"stages", q.partition.stages.size()}}.dump(2);
    }
    auto m = std::make_unique<mlcf_model>();
    m->model = std::move(q.model);
    if (partition_json) *partition_json = dup(part);
    *out = m.release();
  });
}

mlcf_status mlcf_demo(const char* which, uint64_t seed, uint64_t budget, char** out) {
  return guard([&] {
    require(which, "which");
    require(out, "out");
    *out = dup(mlcf::demo_report(which, seed, budget));
  });
}

}  // extern "C"
