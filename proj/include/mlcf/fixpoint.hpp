#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mlcf/container.hpp"
#include "mlcf/model.hpp"
#include "mlcf/theory.hpp"

namespace mlcf {

/// Finite constructor tree: a shape and one subtree per position.
struct ConsTree {
  Value shape;
  std::vector<std::pair<Value, std::shared_ptr<const ConsTree>>> children;
  std::string text;  // canonical: shape[pos:child,...], bare shape for leaves

  const std::string& str() const { return text; }
};
using ConsTreePtr = std::shared_ptr<const ConsTree>;

ConsTreePtr make_tree(Value shape, std::vector<std::pair<Value, ConsTreePtr>> children);

struct InitialChain {
  /// levels[k] = φ^k(⊥), sorted by canonical text; levels[0] is empty.
  std::vector<std::vector<ConsTreePtr>> levels;
  /// First k with levels[k+1] == levels[k], if reached.
  std::optional<std::size_t> stabilized_at;
};

InitialChain initial_approximants(const Container& c, std::size_t n,
                                  std::uint64_t cap = kDefaultShapeCap);

/// Depth-k truncated unfolding; depth-1 trees are bare shapes.
struct BehaviorTree {
  std::size_t depth = 1;
  Value shape;
  std::vector<std::pair<Value, std::shared_ptr<const BehaviorTree>>> children;
  std::string text;

  const std::string& str() const { return text; }
};
using BehaviorPtr = std::shared_ptr<const BehaviorTree>;

BehaviorPtr make_behavior(std::size_t depth, Value shape,
                          std::vector<std::pair<Value, BehaviorPtr>> children);
BehaviorPtr truncate(const BehaviorPtr& t, std::size_t depth);

/// result[k-1] holds every depth-k behavior, k = 1..n.
std::vector<std::vector<BehaviorPtr>> final_approximants(const Container& c, std::size_t n,
                                                         std::uint64_t cap = kDefaultShapeCap);

struct FiniteCoalgebra {
  struct Step {
    Value shape;
    std::vector<std::pair<Value, std::size_t>> next;  // fiber order
  };
  std::vector<std::string> states;
  std::vector<Step> structure;
};

/// `{"states":[...],"structure":{"s":{"shape":"o","next":{"pos":"s2"}}}}`;
/// shapes and positions are matched against c by canonical text.
FiniteCoalgebra coalgebra_from_json(const std::string& text, const Container& c);
std::string coalgebra_to_json(const FiniteCoalgebra& g);

BehaviorPtr behavior_of(const FiniteCoalgebra& g, std::size_t state, std::size_t depth);

struct Partition {
  /// block[s] for every state; blocks are numbered by first occurrence.
  std::vector<std::size_t> block;
  std::size_t count = 0;
  /// stages[k-1] is the depth-k partition (stage 1 groups by shape); the
  /// last stage is stable.
  std::vector<std::vector<std::size_t>> stages;

  /// Depth-k partition; stages past stabilization equal the final one.
  const std::vector<std::size_t>& stage(std::size_t k) const;
};

Partition minimize_bisimilarity(const FiniteCoalgebra& g);

enum class FixpointKind { Initial, Final };
const char* fixpoint_kind_name(FixpointKind k);

/// Shapes sharing one fiber; they are quantified together in the theory.
struct ShapeGroup {
  enum class Label { Empty, Direct, Function };
  std::vector<Value> shapes;
  std::vector<Value> fiber;
  /// Sort symbol for the shapes; empty when the group is the single shape star.
  std::string shape_sort;
  /// Sort symbol for the positions when label == Function.
  std::string position_sort;
  Label label = Label::Empty;
};

struct GenerateOptions {
  std::string name = "F";
  /// Quantify labels over a separate sort (name + "_lbl") instead of the
  /// carrier sort itself, so finite models can satisfy Functional.
  bool bounded_labels = false;
};

struct GeneratedTheory {
  Theory theory;
  FixpointKind kind = FixpointKind::Initial;
  std::string sort;        // MuF or NuF
  std::string label_sort;  // equals sort unless bounded
  std::string var;         // set variable of the step pattern
  Pattern step;            // φ_F(var), notations unexpanded
  std::vector<ShapeGroup> groups;
};

GeneratedTheory generate_theory(const Container& c, FixpointKind kind,
                                const GenerateOptions& opts = {});

struct TermModel {
  Model model;
  GeneratedTheory theory;
  /// chain[k] = carrier elements of the trees in φ^k(⊥), k = 0..depth.
  std::vector<ElementSet> chain;
};

/// Depth-bounded initial term model, already extended with def.
TermModel build_initial_term_model(const Container& c, std::size_t depth,
                                   const std::string& name = "F",
                                   std::uint64_t cap = kDefaultShapeCap);

struct QuotientModel {
  Model model;
  GeneratedTheory theory;
  Partition partition;
  std::vector<Element> classes;   // carrier element per block
  std::vector<Element> phantoms;  // unrealized (shape, labeling) pairs over the classes
};

/// Bisimilarity quotient of g as a model of the final theory. With
/// `phantoms`, cons is completed on every (shape, labeling over classes).
QuotientModel build_final_quotient_model(const Container& c, const FiniteCoalgebra& g,
                                         const std::string& name = "F", bool phantoms = true,
                                         std::uint64_t cap = kDefaultShapeCap);

enum class Verdict { Sound, CounterexampleFound };
const char* verdict_name(Verdict v);

struct RuleCheck {
  bool premise = false;
  bool conclusion = false;
  Verdict verdict = Verdict::Sound;
};

/// Premise φ_F(ψ) -> ψ, conclusion inh{MuF} -> ψ. With an empty rho both
/// are checked for validity (within budget); otherwise rho must bind every
/// free variable of ψ and they are evaluated under it.
RuleCheck check_induction_rule(Evaluator& ev, const GeneratedTheory& th, const Pattern& psi,
                               std::uint64_t budget, const Valuation& rho = {});
/// Premise ψ -> φ_F(ψ), conclusion ψ -> inh{NuF}.
RuleCheck check_coinduction_rule(Evaluator& ev, const GeneratedTheory& th, const Pattern& psi,
                                 std::uint64_t budget, const Valuation& rho = {});

}  // namespace mlcf
