#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace mlcf {

using BigCount = boost::multiprecision::cpp_int;

struct FiniteSet {
  std::string name;
  std::vector<std::string> elements;

  std::size_t size() const { return elements.size(); }
  friend bool operator==(const FiniteSet&, const FiniteSet&) = default;
};

/// The built-in sets 1 = {star} and 0 = {}.
FiniteSet one_set();
FiniteSet zero_set();

/// Canonical first-order values used for shapes and positions:
/// atoms, inl(v), inr(v), <a,b> and finite functions fn(c1:v1,...).
class Value {
 public:
  enum class Kind { Atom, Inl, Inr, Pair, Fn };

  Value();  // the atom "star"
  static Value atom(std::string name);
  static Value inl(Value v);
  static Value inr(Value v);
  static Value pair(Value a, Value b);
  static Value fn(std::vector<std::pair<std::string, Value>> graph);

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  const Value& first() const { return node_->kids[0]; }
  const Value& second() const { return node_->kids[1]; }
  /// Function graphs: argument names and their images.
  const std::vector<std::string>& domain() const { return node_->args; }
  const std::vector<Value>& images() const { return node_->kids; }
  const Value& at(const std::string& arg) const;

  const std::string& str() const { return node_->text; }

  friend bool operator==(const Value& a, const Value& b) { return a.str() == b.str(); }
  friend bool operator<(const Value& a, const Value& b) { return a.str() < b.str(); }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Value> kids;
    std::vector<std::string> args;
    std::string text;
  };
  explicit Value(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct PolyFunctor {
  enum class Kind { Const, Id, Sum, Prod, Exp };
  Kind kind = Kind::Id;
  FiniteSet set;  // Const: the constant; Exp: the exponent
  std::shared_ptr<const PolyFunctor> left, right;  // Exp uses left only

  static PolyFunctor constant(FiniteSet a);
  static PolyFunctor id();
  static PolyFunctor sum(PolyFunctor a, PolyFunctor b);
  static PolyFunctor prod(PolyFunctor a, PolyFunctor b);
  static PolyFunctor exp(PolyFunctor f, FiniteSet c);

  std::size_t size() const;
};

std::string print_functor(const PolyFunctor& f);

struct FunctorSpec {
  PolyFunctor functor;
  std::map<std::string, FiniteSet> sets;  // declared sets, built-ins excluded
};

/// `set E = {e1, e2};` declarations followed by one functor expression.
FunctorSpec parse_functor(const std::string& text);

/// Symbolic shape sets. Sum shapes are tagged inl/inr unless `tagged` is
/// false, which simplification uses when the two sides have distinct atoms.
struct ShapeType {
  enum class Kind { Zero, One, Named, Sum, Prod, Fun };
  Kind kind = Kind::One;
  FiniteSet set;  // Named: the set; Fun: the domain C
  std::shared_ptr<const ShapeType> left, right;  // Fun uses left as codomain
  bool tagged = true;

  friend bool operator==(const ShapeType& a, const ShapeType& b);
};

/// Symbolic position families over a ShapeType.
struct FiberType {
  enum class Kind { Zero, One, Const, Case, Pair, Sigma };
  Kind kind = Kind::Zero;
  FiniteSet set;  // Const: the constant fiber; Sigma: the domain C
  std::shared_ptr<const FiberType> left, right;  // Sigma uses left

  bool constant() const { return kind == Kind::Zero || kind == Kind::One || kind == Kind::Const; }
  friend bool operator==(const FiberType& a, const FiberType& b);
};

struct Container {
  ShapeType shapes;
  FiberType fibers;

  friend bool operator==(const Container&, const Container&) = default;
};

constexpr std::uint64_t kDefaultShapeCap = 1'000'000;

/// Enumerates shapes in a deterministic order; refuses function spaces whose
/// size exceeds `cap`.
std::vector<Value> enumerate_shapes(const Container& c, std::uint64_t cap = kDefaultShapeCap);
std::vector<Value> fiber_of(const Container& c, const Value& shape);
BigCount shape_count(const ShapeType& s);

/// Σ_{a:A} X^{B[a]}, fibers written in bracket notation.
std::string print_container(const Container& c);
std::string print_shape_type(const ShapeType& s);
std::string print_fiber_type(const FiberType& b);
std::string container_to_json(const Container& c, std::uint64_t cap = kDefaultShapeCap);

Container to_container(const PolyFunctor& f);

/// Witness of a container isomorphism: a shape bijection and, per source
/// shape, a bijection from its positions onto the positions of the image.
struct ContainerIso {
  std::function<Value(const Value&)> shape;
  std::function<Value(const Value& shape, const Value& pos)> position;
};

struct Simplified {
  Container container;
  ContainerIso iso;
};

Simplified simplify(const Container& c);

/// Checks that `iso` is a bijection on shapes and on every fiber.
bool verify_iso(const Container& from, const Container& to, const ContainerIso& iso,
                std::uint64_t cap = kDefaultShapeCap);

struct FXElement {
  Value shape;
  /// Position/label pairs in fiber order; empty for the initial morphism.
  std::vector<std::pair<Value, std::string>> labeling;

  std::string str() const;
};

std::vector<FXElement> apply_container(const Container& c, const std::vector<std::string>& x,
                                       std::uint64_t cap = kDefaultShapeCap);

/// Number of shapes with each fiber size, computed without enumeration.
std::map<std::size_t, BigCount> fiber_profile(const Container& c);
/// |F X| for |X| = n, from the fiber profile.
BigCount container_cardinality(const Container& c, std::size_t n);

}  // namespace mlcf
