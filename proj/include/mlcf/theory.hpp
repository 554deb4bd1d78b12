#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mlcf/model.hpp"
#include "mlcf/pattern.hpp"

namespace mlcf {

struct NotationDef {
  std::string head;
  std::vector<std::string> params;
  Pattern body;

  friend bool operator==(const NotationDef&, const NotationDef&) = default;
};

struct Axiom {
  std::string label;
  Pattern pattern;

  friend bool operator==(const Axiom&, const Axiom&) = default;
};

struct Theory {
  std::string name;
  std::vector<std::string> imports;
  Signature symbols;
  std::vector<NotationDef> notations;
  std::vector<Axiom> axioms;

  const NotationDef* find_notation(const std::string& head) const;
  const Axiom* find_axiom(const std::string& label) const;
};

bool operator==(const Theory& a, const Theory& b);

/// Named theories that imports are resolved against.
class TheoryLibrary {
 public:
  void add(Theory th);
  bool contains(const std::string& name) const { return theories_.count(name) != 0; }
  const Theory& get(const std::string& name) const;
  std::vector<std::string> names() const;

  /// Own symbols plus the symbols of every transitively imported theory.
  Signature signature_of(const Theory& th) const;
  /// Searches th, then its imports depth-first in declaration order.
  const NotationDef* find_notation(const Theory& th, const std::string& head) const;

 private:
  std::map<std::string, Theory> theories_;
};

/// EQUALITY, SORT, SUM, PAIR, FUN. SUM/PAIR/FUN are schematic over the sort
/// symbols s1, s2; `strict` turns those into variables quantified over Sort.
Theory builtin_theory(const std::string& name, bool strict = false);
std::string builtin_theory_text(const std::string& name, bool strict = false);
const TheoryLibrary& builtin_library();

/// Parses every spec ... endspec block in text. Imports must name theories of
/// `lib` or earlier blocks of the same text.
std::vector<Theory> parse_theories(const std::string& text, const TheoryLibrary& lib);
Theory parse_theory(const std::string& text, const TheoryLibrary& lib);
std::string print_theory(const Theory& th);

/// Replaces every notation application by its definition, innermost first.
Pattern expand_notation(const Theory& th, const Pattern& p,
                        const TheoryLibrary& lib = builtin_library());

enum class AxiomStatus { Pass, Fail, BudgetExceeded, Error };
const char* axiom_status_name(AxiomStatus s);

struct AxiomResult {
  std::string label;
  AxiomStatus status;
  std::string message;
};

/// Checks the theory's own axioms (not those of its imports) in m.
std::vector<AxiomResult> check_axioms(const Model& m, const Theory& th, std::uint64_t budget,
                                      const TheoryLibrary& lib = builtin_library());
std::vector<AxiomResult> check_axioms(Evaluator& ev, const Theory& th, std::uint64_t budget,
                                      const TheoryLibrary& lib = builtin_library());

/// Adds a fresh element d, interprets def as {d} and sets d applied to
/// anything to the whole (extended) carrier.
Model canonical_equality_extension(const Model& m);

}  // namespace mlcf
