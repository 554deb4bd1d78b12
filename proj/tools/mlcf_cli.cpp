// mlcf command-line front end. Talks to the library only through mlcf.h.
//
// exit codes: 0 ok/pass, 1 semantic failure, 2 usage or parse error,
// 3 budget or size cap exceeded

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlcf/mlcf.h"

using json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0, kFail = 1, kUsage = 2, kBudget = 3;
constexpr uint64_t kDefaultBudget = 1000000;

struct Failure {
  int code;
  std::string message;
};

int exit_code_of(mlcf_status s) {
  if (s == MLCF_ERR_BUDGET || s == MLCF_ERR_SIZE_CAP) return kBudget;
  if (s == MLCF_ERR_INTERNAL) return kFail;
  return kUsage;
}

void check(mlcf_status s) {
  if (s != MLCF_OK) throw Failure{exit_code_of(s), std::string(mlcf_status_name(s)) + ": " + mlcf_last_error()};
}

// Owns a char* returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  mlcf_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kUsage, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// SPEC arguments are either a file or the functor text itself.
std::string spec_text(const std::string& arg) {
  std::ifstream in(arg);
  return in ? read_file(arg) : arg;
}

struct Model {
  mlcf_model* h = nullptr;
  explicit Model(const std::string& path) { check(mlcf_model_from_json(read_file(path).c_str(), &h)); }
  Model() = default;
  ~Model() { mlcf_model_free(h); }
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;
};

struct Functor {
  mlcf_functor* h = nullptr;
  explicit Functor(const std::string& arg) { check(mlcf_functor_parse(spec_text(arg).c_str(), &h)); }
  ~Functor() { mlcf_functor_free(h); }
  Functor(const Functor&) = delete;
  Functor& operator=(const Functor&) = delete;
};

std::string set_text(const json& names) {
  std::string out = "{";
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i].get<std::string>();
  return out + "}";
}

std::string list_text(const json& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i].dump();
  return out;
}

uint64_t default_budget() {
  const char* env = std::getenv("MLCF_BUDGET");
  if (!env || !*env) return kDefaultBudget;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || v == 0) throw Failure{kUsage, std::string("bad MLCF_BUDGET '") + env + "'"};
  return v;
}

// Axiom results to text; returns the exit code they imply.
int report_axioms(const json& results, std::ostream& os, const std::string& indent = "") {
  std::size_t width = 0;
  for (const auto& r : results) width = std::max(width, r["label"].get<std::string>().size());
  bool fail = false, budget = false;
  for (const auto& r : results) {
    const auto label = r["label"].get<std::string>();
    const auto status = r["status"].get<std::string>();
    os << indent << label << std::string(width - label.size() + 2, ' ') << status;
    if (r.contains("message") && !r["message"].get<std::string>().empty()) os << "  " << r["message"].get<std::string>();
    os << "\n";
    fail |= status == "fail" || status == "error";
    budget |= status == "budget";
  }
  return fail ? kFail : budget ? kBudget : kOk;
}

void print_rules(const json& r, std::ostream& os) {
  os << r["rule"].get<std::string>() << ": " << r["trials"] << " random psi, premise held " << r["premise_held"]
     << ", counterexamples " << r["counterexamples"] << "\n";
}

void render_demo(const json& d, std::ostream& os) {
  const auto& red = d["reduction"];
  os << "== " << d["case"].get<std::string>() << " ==\n";
  os << "functor    " << red["functor"].get<std::string>() << "\n";
  os << "container  " << red["container"].get<std::string>() << "\n";
  os << "reduced    " << red["simplified"].get<std::string>()
     << (red["iso_verified"].get<bool>() ? "   (iso verified)" : "   (iso FAILED)") << "\n";
  for (const auto& s : red["shapes"]) {
    os << "  shape " << s["shape"].get<std::string>() << "  positions ";
    os << (s["positions"].empty() ? std::string("-") : set_text(s["positions"])) << "\n";
  }
  if (d.contains("initial_theory")) os << "\n-- initial theory --\n" << d["initial_theory"].get<std::string>();
  if (d.contains("final_theory")) os << "\n-- final theory --\n" << d["final_theory"].get<std::string>();

  const auto& ia = d["initial_approximants"];
  os << "\n-- initial approximants --\n";
  os << "|phi^k(bot)|, k = 0.." << ia["counts"].size() - 1 << ": " << list_text(ia["counts"]);
  if (ia.contains("expected")) os << "   expected " << list_text(ia["expected"]);
  if (ia.contains("all_empty")) os << (ia["all_empty"].get<bool>() ? "   (all empty)" : "   (NOT empty)");
  os << "\n";
  if (ia.contains("levels"))
    for (std::size_t k = 0; k < ia["levels"].size(); ++k)
      os << "  phi^" << k << "(bot) = " << set_text(ia["levels"][k]) << "\n";

  const auto& fa = d["final_approximants"];
  os << "\n-- final approximants --\n";
  os << "depth-k behaviors, k = 1.." << fa["counts"].size() << ": " << list_text(fa["counts"]);
  if (fa.contains("expected")) os << "   expected " << list_text(fa["expected"]);
  os << "\n";

  if (d.contains("term_model")) {
    const auto& t = d["term_model"];
    os << "\n-- term model: depth " << t["depth"] << ", carrier " << t["carrier"] << ", labels in "
       << t["label_sort"].get<std::string>() << " --\n";
    os << "mu iterates match the chain: " << (t["mu_iterates_match_chain"].get<bool>() ? "yes" : "NO") << "\n";
    report_axioms(t["axioms"], os, "  ");
    print_rules(t["rule_soundness"], os);
  }

  const auto& q = d["quotient_model"];
  os << "\n-- quotient model --\n";
  os << "classes:";
  for (const auto& c : q["classes"]) os << " " << set_text(c);
  os << "\nrefinement stages " << q["refinement_stages"] << ", stage k = depth-k behavior: "
     << (q["stages_match_behaviors"].get<bool>() ? "yes" : "NO") << "\n";
  os << "phantoms " << q["phantoms"] << ", carrier " << q["carrier"] << "\n";
  report_axioms(q["axioms"], os, "  ");
  os << "without phantoms:\n";
  report_axioms(q["axioms_without_phantoms"], os, "  ");
  print_rules(q["rule_soundness"], os);

  os << "\nresult: " << (d["passed"].get<bool>() ? "PASS" : "FAIL") << "\n";
}

void render_approximants(const json& j, bool list, std::ostream& os) {
  const bool initial = j["kind"] == "initial";
  const auto& levels = j["levels"];
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::size_t k = initial ? i : i + 1;
    os << (initial ? "phi^" + std::to_string(k) + "(bot)" : "depth " + std::to_string(k)) << ": "
       << levels[i].size() << "\n";
    if (list)
      for (const auto& t : levels[i]) os << "  " << t.get<std::string>() << "\n";
  }
  os << "counts: " << list_text(j["counts"]) << "\n";
  if (initial) {
    if (j["stabilized_at"].is_null()) os << "not stabilized\n";
    else os << "stabilized at " << j["stabilized_at"] << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matching-logic fixpoint workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));

  std::string model_path, pattern, rho, var, body, spec, kind, name = "F", theory_path, coalgebra_path;
  std::size_t depth = 3;
  uint64_t budget = 0, cap = 1000000, seed = 1;
  bool strict = false, bounded = false, counts_only = false, no_phantoms = false;

  auto* eval = app.add_subcommand("eval", "evaluate a pattern in a model");
  eval->add_option("--model", model_path, "model JSON file")->required();
  eval->add_option("--pattern", pattern, "pattern")->required();
  eval->add_option("--rho", rho, "valuation, e.g. x=a,X={a,b}");

  auto* holds = app.add_subcommand("holds", "check validity of a pattern in a model");
  holds->add_option("--model", model_path, "model JSON file")->required();
  holds->add_option("--pattern", pattern, "pattern")->required();
  holds->add_option("--budget", budget, "max valuations (default $MLCF_BUDGET or 1000000)")->check(CLI::PositiveNumber);

  CLI::App* fix[2];
  const char* fix_names[2] = {"lfp", "gfp"};
  for (int i = 0; i < 2; ++i) {
    fix[i] = app.add_subcommand(fix_names[i], i ? "greatest fixpoint with its iterates" : "least fixpoint with its iterates");
    fix[i]->add_option("--model", model_path, "model JSON file")->required();
    fix[i]->add_option("--var", var, "set variable")->required();
    fix[i]->add_option("--body", body, "body pattern")->required();
    fix[i]->add_option("--rho", rho, "valuation for the other free variables");
  }

  auto* functor = app.add_subcommand("functor", "polynomial functors and their containers");
  functor->require_subcommand(1);
  auto* compile = functor->add_subcommand("compile", "container and simplified container");
  compile->add_option("SPEC", spec, "functor text or file")->required();
  auto* mu = functor->add_subcommand("mu", "initial approximants phi^k(bot)");
  auto* nu = functor->add_subcommand("nu", "final approximants: depth-k behaviors");
  for (auto* sub : {mu, nu}) {
    sub->add_option("SPEC", spec, "functor text or file")->required();
    sub->add_option("--depth", depth, "number of steps")->capture_default_str();
    sub->add_option("--cap", cap, "size cap per level")->capture_default_str();
    sub->add_flag("--counts-only", counts_only, "omit the listings");
  }
  auto* term = functor->add_subcommand("term-model", "depth-bounded initial term model as JSON");
  term->add_option("SPEC", spec, "functor text or file")->required();
  term->add_option("--depth", depth, "tree depth")->capture_default_str();
  term->add_option("--name", name, "functor name used in sort names")->capture_default_str();
  auto* quotient = functor->add_subcommand("quotient", "bisimilarity quotient model of a coalgebra as JSON");
  quotient->add_option("SPEC", spec, "functor text or file")->required();
  quotient->add_option("--coalgebra", coalgebra_path, "coalgebra JSON file")->required();
  quotient->add_option("--name", name, "functor name used in sort names")->capture_default_str();
  quotient->add_flag("--no-phantoms", no_phantoms, "leave cons partial on unrealized pairs");

  auto* theory = app.add_subcommand("theory", "generate, print and check theories");
  theory->require_subcommand(1);
  auto* gen = theory->add_subcommand("gen", "theory of mu F or nu F");
  gen->add_option("SPEC", spec, "functor text or file")->required();
  gen->add_option("--kind", kind, "initial or final")->required()->check(CLI::IsMember({"initial", "final"}));
  gen->add_option("--name", name, "functor name used in sort names")->capture_default_str();
  gen->add_flag("--bounded", bounded, "labels range over a separate sort (for finite models)");
  auto* tcheck = theory->add_subcommand("check", "check a theory's axioms in a model");
  tcheck->add_option("--model", model_path, "model JSON file")->required();
  tcheck->add_option("--theory", theory_path, "theory file")->required();
  tcheck->add_option("--budget", budget, "max valuations per axiom")->check(CLI::PositiveNumber);
  auto* builtin = theory->add_subcommand("builtin", "print a builtin theory");
  builtin->add_option("NAME", spec, "EQUALITY, SORT, SUM, PAIR or FUN")->required();
  builtin->add_flag("--strict", strict, "quantify the sort parameters");

  auto* demo = app.add_subcommand("demo", "lists or moore case study end to end");
  demo->add_option("CASE", spec, "lists or moore")->required()->check(CLI::IsMember({"lists", "moore"}));
  demo->add_option("--seed", seed, "seed for the random rule checks")->capture_default_str();
  demo->add_option("--budget", budget, "max valuations per check")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const bool as_json = format == "json";
  std::ostream& os = std::cout;
  try {
    if (budget == 0) budget = default_budget();

    if (*eval) {
      Model m(model_path);
      const json j = json::parse(take([&] {
        char* out = nullptr;
        check(mlcf_eval(m.h, pattern.c_str(), rho.empty() ? nullptr : rho.c_str(), &out));
        return out;
      }()));
      if (as_json) os << j.dump(2) << "\n";
      else os << set_text(j["elements"]) << "\n";
      return kOk;
    }

    if (*holds) {
      Model m(model_path);
      int valid = 0;
      check(mlcf_holds(m.h, pattern.c_str(), budget, &valid));
      if (as_json) os << json{{"pattern", pattern}, {"holds", valid != 0}}.dump(2) << "\n";
      else os << (valid ? "valid" : "not valid") << "\n";
      return valid ? kOk : kFail;
    }

    for (int i = 0; i < 2; ++i) {
      if (!*fix[i]) continue;
      Model m(model_path);
      char* out = nullptr;
      check(mlcf_fixpoint(m.h, var.c_str(), body.c_str(), rho.empty() ? nullptr : rho.c_str(), i, &out));
      const json j = json::parse(take(out));
      if (as_json) {
        os << j.dump(2) << "\n";
      } else {
        const auto& its = j["iterates"];
        for (std::size_t k = 0; k < its.size(); ++k) os << var << "_" << k << " = " << set_text(its[k]) << "\n";
        os << "stabilized at " << j["stabilized_at"] << "\n";
        os << (i ? "nu " : "mu ") << var << " = " << set_text(j["result"]) << "\n";
      }
      return kOk;
    }

    if (*functor) {
      Functor f(spec);
      char* out = nullptr;
      if (*compile) {
        check(mlcf_functor_describe(f.h, &out));
        const json j = json::parse(take(out));
        if (as_json) {
          os << j.dump(2) << "\n";
        } else {
          os << "functor    " << j["functor"].get<std::string>() << "\n";
          os << "container  " << j["container"].get<std::string>() << "\n";
          os << "reduced    " << j["simplified"].get<std::string>() << "\n";
          os << "iso verified: " << (j["iso_verified"].get<bool>() ? "yes" : "no") << "\n";
          const auto& sh = j["shapes"];
          for (const auto& a : sh["shapes"]) {
            const auto& ps = sh["fibers"][a.get<std::string>()];
            os << "  " << a.get<std::string>() << "  " << (ps.empty() ? std::string("-") : set_text(ps)) << "\n";
          }
          os << "shapes by fiber size:";
          for (const auto& [k, n] : j["fiber_profile"].items()) os << " " << k << ":" << n.get<std::string>();
          os << "\n";
        }
        return kOk;
      }
      if (*mu || *nu) {
        check(*mu ? mlcf_functor_mu(f.h, depth, cap, &out) : mlcf_functor_nu(f.h, depth, cap, &out));
        json j = json::parse(take(out));
        if (as_json) {
          if (counts_only) j.erase("levels");
          os << j.dump(2) << "\n";
        } else {
          render_approximants(j, !counts_only, os);
        }
        return kOk;
      }
      mlcf_model* mh = nullptr;
      if (*term) {
        check(mlcf_functor_term_model(f.h, depth, name.c_str(), &mh));
      } else {
        const std::string coalgebra = read_file(coalgebra_path);
        char* part = nullptr;
        check(mlcf_functor_quotient_model(f.h, coalgebra.c_str(), name.c_str(), no_phantoms ? 0 : 1, &mh, &part));
        const json classes = json::parse(take(part))["classes"];
        std::cerr << "classes:";
        for (const auto& c : classes) std::cerr << " " << set_text(c);
        std::cerr << "\n";
      }
      Model m;
      m.h = mh;
      check(mlcf_model_to_json(m.h, &out));
      os << take(out) << "\n";
      return kOk;
    }

    if (*theory) {
      char* out = nullptr;
      if (*gen) {
        Functor f(spec);
        check(mlcf_functor_theory(f.h, kind.c_str(), name.c_str(), bounded ? 1 : 0, &out));
        const std::string text = take(out);
        if (as_json) os << json{{"kind", kind}, {"theory", text}}.dump(2) << "\n";
        else os << text;
        return kOk;
      }
      if (*builtin) {
        check(mlcf_builtin_theory(spec.c_str(), strict ? 1 : 0, &out));
        const std::string text = take(out);
        if (as_json) os << json{{"name", spec}, {"theory", text}}.dump(2) << "\n";
        else os << text;
        return kOk;
      }
      Model m(model_path);
      check(mlcf_theory_check(m.h, read_file(theory_path).c_str(), budget, &out));
      const json j = json::parse(take(out));
      int code = kOk;
      std::ostringstream text;
      for (const auto& th : j["theories"]) {
        text << th["name"].get<std::string>() << "\n";
        const int c = report_axioms(th["results"], text, "  ");
        if (c == kFail || (c == kBudget && code == kOk)) code = c;
      }
      os << (as_json ? j.dump(2) + "\n" : text.str());
      return code;
    }

    if (*demo) {
      char* out = nullptr;
      check(mlcf_demo(spec.c_str(), seed, budget, &out));
      const json j = json::parse(take(out));
      if (as_json) os << j.dump(2) << "\n";
      else render_demo(j, os);
      return j["passed"].get<bool>() ? kOk : kFail;
    }
  } catch (const Failure& f) {
    std::cerr << "mlcf: " << f.message << "\n";
    return f.code;
  } catch (const json::exception& e) {
    std::cerr << "mlcf: malformed library output: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
