#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mlcf {

/// The eight core constructors come first; the rest are sugar kept in the
/// tree so that printed theories keep their notation.
enum class PatternKind {
  ElementVar,
  SetVar,
  Symbol,
  App,
  Bot,
  Implies,
  Exists,
  Mu,
  // sugar
  Not,
  Or,
  And,
  Top,
  Forall,
  Nu,
  Notation,
};

bool is_core_kind(PatternKind kind);
bool is_binder_kind(PatternKind kind);

/// Immutable pattern tree with shared structure. Copies are cheap.
class Pattern {
 public:
  Pattern();  // Bot

  static Pattern evar(std::string name);
  static Pattern svar(std::string name);
  static Pattern sym(std::string name);
  static Pattern app(Pattern left, Pattern right);
  static Pattern bot();
  static Pattern implies(Pattern left, Pattern right);
  static Pattern exists(std::string var, Pattern body);
  static Pattern mu(std::string var, Pattern body);
  static Pattern negation(Pattern p);
  static Pattern disj(Pattern left, Pattern right);
  static Pattern conj(Pattern left, Pattern right);
  static Pattern top();
  static Pattern forall(std::string var, Pattern body);
  static Pattern nu(std::string var, Pattern body);
  static Pattern notation(std::string head, std::vector<Pattern> args);

  /// Generic rebuild used by tree walkers: same kind and name, new children.
  static Pattern make(PatternKind kind, std::string name, std::vector<Pattern> kids);

  PatternKind kind() const { return node_->kind; }
  /// Variable, symbol or notation-head name; the bound variable for binders.
  const std::string& name() const { return node_->name; }
  const std::vector<Pattern>& children() const { return node_->kids; }
  const Pattern& child(std::size_t i) const { return node_->kids[i]; }
  const Pattern& left() const { return node_->kids[0]; }
  const Pattern& right() const { return node_->kids[1]; }
  const Pattern& body() const { return node_->kids[0]; }

  /// Node identity, stable for the lifetime of any copy of this pattern.
  const void* id() const { return node_.get(); }
  std::size_t size() const { return node_->size; }

  friend bool operator==(const Pattern& a, const Pattern& b);

 private:
  struct Node {
    PatternKind kind;
    std::string name;
    std::vector<Pattern> kids;
    std::size_t size;
  };
  explicit Pattern(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct Signature {
  std::set<std::string> symbols;

  bool contains(const std::string& s) const { return symbols.count(s) != 0; }
  void insert(const std::string& s);
  void merge(const Signature& other);
};

enum class Polarity { Absent, Positive, Negative, Both };

Polarity join(Polarity a, Polarity b);
Polarity flip(Polarity p);
const char* polarity_name(Polarity p);

struct FreeVars {
  std::set<std::string> element_vars;
  std::set<std::string> set_vars;

  bool empty() const { return element_vars.empty() && set_vars.empty(); }
  friend bool operator==(const FreeVars&, const FreeVars&) = default;
};

/// Lexical namespaces: lower-case initial names are element variables,
/// upper-case initial names are set variables.
bool is_element_var_name(std::string_view name);
bool is_set_var_name(std::string_view name);
bool is_identifier(std::string_view name);

/// Parses the surface grammar. Names listed in `params` are always read as
/// variables even if the signature declares them (used for notation bodies).
Pattern parse_pattern(std::string_view text, const Signature& sig,
                      const std::set<std::string>& params = {});
std::string print_pattern(const Pattern& p);

/// Expands the sugared kinds into the eight core constructors. Notation
/// applications must have been expanded beforehand.
Pattern desugar(const Pattern& p);
bool is_core(const Pattern& p);

/// Notation arguments count as ordinary subterms here; expand notations
/// first when binder-accurate results are needed.
FreeVars free_vars(const Pattern& p);

/// Capture-avoiding substitution of q for the free occurrences of variable `var`.
Pattern substitute(const Pattern& p, const std::string& var, const Pattern& q);

/// `base` followed by the smallest positive integer suffix not in `avoid`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

/// Combined polarity of the free occurrences of set variable `var` in p.
Polarity check_positivity(const Pattern& p, const std::string& var);

struct WellFormednessError {
  enum class Kind { UnknownSymbol, NonPositiveBinder } kind;
  std::string name;
  /// Child-index path into the desugared pattern ("" for the root).
  std::string path;

  std::string message() const;
};

std::optional<WellFormednessError> well_formed(const Pattern& p, const Signature& sig);

/// Every symbol name occurring in p (notation heads excluded).
std::set<std::string> symbols_of(const Pattern& p);

}  // namespace mlcf
