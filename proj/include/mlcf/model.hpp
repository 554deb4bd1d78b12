#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mlcf/element_set.hpp"
#include "mlcf/pattern.hpp"

namespace mlcf {

/// A finite matching-logic model: a nonempty carrier of named elements, a
/// binary application table into subsets, and symbol interpretations.
/// Absent application entries denote the empty set.
class Model {
 public:
  Element add_element(const std::string& name);
  /// Returns the existing element or adds a new one.
  Element intern(const std::string& name);
  std::optional<Element> find(const std::string& name) const;
  Element element(const std::string& name) const;
  const std::string& name_of(Element e) const { return names_[e]; }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& element_names() const { return names_; }

  void add_app(Element fn, Element arg, Element result);
  /// Sorted, duplicate-free result list; empty when the entry is absent.
  const std::vector<Element>& app(Element fn, Element arg) const;
  const std::map<std::pair<Element, Element>, std::vector<Element>>& app_table() const {
    return app_;
  }

  void declare_symbol(const std::string& name);
  void add_to_symbol(const std::string& name, Element e);
  bool has_symbol(const std::string& name) const { return symbols_.count(name) != 0; }
  const std::vector<Element>& symbol(const std::string& name) const;
  const std::map<std::string, std::vector<Element>>& symbols() const { return symbols_; }
  Signature signature() const;

  ElementSet empty_set() const { return ElementSet(size()); }
  ElementSet full_set() const { return ElementSet::full(size()); }
  ElementSet make_set(const std::vector<Element>& elems) const;

  /// Throws InvalidModel when the carrier is empty.
  void validate() const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Element> index_;
  std::map<std::pair<Element, Element>, std::vector<Element>> app_;
  std::map<std::string, std::vector<Element>> symbols_;
};

Model model_from_json(const std::string& text);
std::string model_to_json(const Model& m);

struct Valuation {
  std::map<std::string, Element> evals;
  std::map<std::string, ElementSet> svals;
};

/// Parses "x=n1,X={n1,n2}" against the model's element names.
Valuation parse_valuation(const Model& m, const std::string& text);

enum class FixpointMode { Least, Greatest };

/// Kleene chain of distinct iterates, starting from the empty set (least) or
/// the carrier (greatest); the last entry is the fixed point.
struct EvalTrace {
  std::vector<ElementSet> iterates;
  std::size_t stabilized_at = 0;
};

/// Evaluation engine over one model. Holds compiled application tables and a
/// cache of closed subpatterns, so reuse one instance for many evaluations.
class Evaluator {
 public:
  explicit Evaluator(const Model& m);

  const Model& model() const { return model_; }

  ElementSet evaluate(const Pattern& p, const Valuation& rho);
  std::pair<ElementSet, EvalTrace> fixpoint(const Valuation& rho, const std::string& var,
                                            const Pattern& body, FixpointMode mode);

  std::size_t node_evaluations() const { return node_evals_; }

 private:
  struct Frame;
  ElementSet eval(const Pattern& p);
  ElementSet apply(const ElementSet& fns, const ElementSet& args) const;
  ElementSet iterate(const std::string& var, const Pattern& body, FixpointMode mode,
                     EvalTrace* trace);
  void require_positive(const Pattern& binder_node, const Pattern& body);
  bool closed(const Pattern& p);
  void bind(const Valuation& rho);

  const Model& model_;
  std::size_t n_;
  std::unordered_map<std::uint64_t, ElementSet> table_;
  std::vector<ElementSet> support_;
  std::unordered_map<std::string, ElementSet> symbol_sets_;

  std::vector<std::pair<std::string, Element>> evars_;
  std::vector<std::pair<std::string, ElementSet>> svars_;

  std::vector<Pattern> pinned_;
  std::unordered_map<const void*, ElementSet> closed_cache_;
  std::unordered_map<const void*, bool> closed_flag_;
  std::unordered_set<const void*> positive_checked_;
  std::size_t node_evals_ = 0;
};

ElementSet evaluate(const Model& m, const Valuation& rho, const Pattern& p);
std::pair<ElementSet, EvalTrace> fixpoint_iterate(const Model& m, const Valuation& rho,
                                                  const std::string& var, const Pattern& body,
                                                  FixpointMode mode);

/// Number of valuations `holds` would enumerate for p, saturating at the max.
double valuation_count(const Model& m, const Pattern& p);

/// Validity: p evaluates to the whole carrier under every valuation of its
/// free variables. Throws BudgetExceeded when the enumeration exceeds budget.
bool holds(const Model& m, const Pattern& p, std::uint64_t budget);
bool holds(Evaluator& ev, const Pattern& p, std::uint64_t budget);

/// Element names of s in lexicographic order.
std::vector<std::string> sorted_names(const Model& m, const ElementSet& s);
std::string format_set(const Model& m, const ElementSet& s);

}  // namespace mlcf
