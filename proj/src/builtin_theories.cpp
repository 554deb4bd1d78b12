#include <map>

#include "mlcf/error.hpp"
#include "mlcf/theory.hpp"

namespace mlcf {

namespace {

const char* const kEquality = R"(spec EQUALITY
  symbols: def
  notations:
    ceil{phi} == def phi
  axioms:
    (Definedness) forall x . ceil{x}
  notations:
    floor{phi} == not ceil{not phi}                     // totality
    iff{phi1, phi2} == (phi1 -> phi2) /\ (phi2 -> phi1)
    eq{phi1, phi2} == floor{iff{phi1, phi2}}            // equality
    neq{phi1, phi2} == not eq{phi1, phi2}
    subseteq{phi1, phi2} == floor{phi1 -> phi2}         // set inclusion
    in{x, phi} == subseteq{x, phi}                      // membership
endspec
)";

const char* const kSort = R"(spec SORT
  imports: EQUALITY
  symbols: inh, Sort
  notations:
    inh{s} == inh s
    le{s1, s2} == subseteq{inh{s1}, inh{s2}}
    sneg{s, phi} == not phi /\ inh{s}
    forall_s{x, s, phi} == forall x . in{x, inh{s}} -> phi
    exists_s{x, s, phi} == exists x . in{x, inh{s}} /\ phi
    mu_s{X, s, phi} == mu X . subseteq{X, inh{s}} /\ phi
    nu_s{X, s, phi} == nu X . subseteq{X, inh{s}} /\ phi
    typed{phi, s} == exists_s{z, s, eq{phi, z}}
    func1{f, s1, s} == forall_s{x1, s1, exists_s{y, s, eq{f x1, y}}}
    func2{f, s1, s2, s} == forall_s{x1, s1, forall_s{x2, s2, exists_s{y, s, eq{f x1 x2, y}}}}
    partial1{f, s1, s} == forall_s{x1, s1, exists_s{y, s, f x1 -> y}}
    partial2{f, s1, s2, s} == forall_s{x1, s1, forall_s{x2, s2, exists_s{y, s, f x1 x2 -> y}}}
  axioms:
    (Sort Functional) exists x . eq{Sort, x}
    (Sort Sort) in{Sort, inh{Sort}}
endspec
)";

const char* const kSum = R"(spec SUM
  imports: SORT
  symbols: oplus, iota1, iota2, eps1, eps2, s1, s2
  notations:
    sum{a, b} == oplus a b
  axioms:
    (Sum Sort) in{s1, inh{inh{Sort}}} /\ in{s2, inh{inh{Sort}}} -> in{sum{s1, s2}, inh{inh{Sort}}}
    (Inject Left) func1{iota1, s1, sum{s1, s2}}
    (Inject Right) func1{iota2, s2, sum{s1, s2}}
    (Eject Left) partial1{eps1, sum{s1, s2}, s1}
    (Eject Right) partial1{eps2, sum{s1, s2}, s2}
    (Inverse InjEj1.1) forall_s{x, s1, eq{eps1 (iota1 x), x}}
    (Inverse InjEj1.2) forall_s{x, s2, eq{eps2 (iota2 x), x}}
    (Inverse InjEj2.1) forall_s{x, s2, eq{eps1 (iota2 x), Bot}}
    (Inverse InjEj2.2) forall_s{x, s1, eq{eps2 (iota1 x), Bot}}
    (CoProduct) subseteq{inh{sum{s1, s2}}, iota1 inh{s1} \/ iota2 inh{s2}}
endspec
)";

const char* const kPair = R"(spec PAIR
  imports: SORT
  symbols: Pair, pair, fst, snd, s1, s2
  notations:
    prod{a, b} == Pair a b
    tuple{a, b} == pair a b
  axioms:
    (Pair Sort) typed{prod{s1, s2}, Sort}
    (Pair) forall_s{x1, s1, forall_s{x2, s2, typed{tuple{x1, x2}, prod{s1, s2}}}}
    (Pair Fst) forall_s{x1, s1, forall_s{x2, s2, eq{fst tuple{x1, x2}, x1}}}
    (Pair Snd) forall_s{x1, s1, forall_s{x2, s2, eq{snd tuple{x1, x2}, x2}}}
    (Pair Inj) forall_s{x1, s1, forall_s{y1, s1, forall_s{x2, s2, forall_s{y2, s2,
        eq{tuple{x1, x2}, tuple{y1, y2}} -> eq{x1, y1} /\ eq{x2, y2}}}}}
    (Pair Domain) eq{inh{prod{s1, s2}}, tuple{inh{s1}, inh{s2}}}
endspec
)";

const char* const kFun = R"(spec FUN
  imports: SORT
  symbols: Function, s1, s2
  notations:
    fun{a, b} == Function a b
  axioms:
    (Func Sort) typed{fun{s1, s2}, Sort}
    (Func Domain) eq{inh{fun{s1, s2}}, exists f . f /\ forall_s{x, s1, typed{f x, s2}}}
    (Func Ext) forall_s{f, fun{s1, s2}, forall_s{g, fun{s1, s2},
        forall_s{x, s1, eq{f x, g x}} -> eq{f, g}}}
endspec
)";

const std::map<std::string, const char*>& sources() {
  static const std::map<std::string, const char*> kSources = {
      {"EQUALITY", kEquality}, {"SORT", kSort}, {"SUM", kSum}, {"PAIR", kPair}, {"FUN", kFun}};
  return kSources;
}

// Strict mode: the sort parameters become variables ranging over Sort.
std::string strict_text(const std::string& text) {
  std::string out;
  std::size_t pos = 0;
  bool in_axioms = false;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.find("symbols:") != std::string::npos) {
      for (const char* p : {", s1", ", s2"}) {
        const auto at = line.find(p);
        if (at != std::string::npos) line.erase(at, 4);
      }
    }
    if (line.find("axioms:") != std::string::npos) in_axioms = true;
    if (in_axioms && line.find("endspec") == std::string::npos) {
      const auto close = line.find(") ");
      if (line.find('(') != std::string::npos && line.find_first_not_of(' ') == line.find('(') &&
          close != std::string::npos) {
        // New axiom line: open the wrapper; it is closed when the axiom ends.
        line = line.substr(0, close + 2) + "forall_s{s1, Sort, forall_s{s2, Sort, " +
               line.substr(close + 2);
      }
    }
    out += line + "\n";
  }
  // Close the wrappers: every axiom ends right before the next axiom or endspec.
  std::string fixed;
  std::size_t start = 0;
  bool open = false;
  while (start < out.size()) {
    auto nl = out.find('\n', start);
    std::string line = out.substr(start, nl - start);
    start = nl + 1;
    const bool new_axiom = line.find("forall_s{s1, Sort, forall_s{s2, Sort, ") != std::string::npos;
    const bool end = line.find("endspec") != std::string::npos;
    if ((new_axiom || end) && open) {
      fixed.back() = '}';
      fixed += "}\n";
      open = false;
    }
    if (new_axiom) open = true;
    fixed += line + "\n";
  }
  return fixed;
}

}  // namespace

std::string builtin_theory_text(const std::string& name, bool strict) {
  auto it = sources().find(name);
  if (it == sources().end()) throw Error(ErrorCode::UnknownTheory, "unknown theory '" + name + "'");
  const bool schematic = name == "SUM" || name == "PAIR" || name == "FUN";
  return strict && schematic ? strict_text(it->second) : std::string(it->second);
}

const TheoryLibrary& builtin_library() {
  static const TheoryLibrary kLib = [] {
    TheoryLibrary lib;
    for (const char* name : {"EQUALITY", "SORT", "SUM", "PAIR", "FUN"})
      lib.add(parse_theory(sources().at(name), lib));
    return lib;
  }();
  return kLib;
}

Theory builtin_theory(const std::string& name, bool strict) {
  if (!strict) return builtin_library().get(name);
  return parse_theory(builtin_theory_text(name, true), builtin_library());
}

}  // namespace mlcf
