#include "mlcf/container.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "mlcf/error.hpp"

namespace mlcf {

FiniteSet one_set() { return {"One", {"star"}}; }
FiniteSet zero_set() { return {"Zero", {}}; }

// ---------------------------------------------------------------------------
// values

Value::Value() : Value(atom("star")) {}

Value Value::atom(std::string name) {
  auto text = name;
  return Value(std::make_shared<const Node>(Node{Kind::Atom, std::move(name), {}, {}, std::move(text)}));
}

Value Value::inl(Value v) {
  std::string text = "inl(" + v.str() + ")";
  return Value(std::make_shared<const Node>(Node{Kind::Inl, "", {std::move(v)}, {}, std::move(text)}));
}

Value Value::inr(Value v) {
  std::string text = "inr(" + v.str() + ")";
  return Value(std::make_shared<const Node>(Node{Kind::Inr, "", {std::move(v)}, {}, std::move(text)}));
}

Value Value::pair(Value a, Value b) {
  std::string text = "<" + a.str() + "," + b.str() + ">";
  return Value(std::make_shared<const Node>(
      Node{Kind::Pair, "", {std::move(a), std::move(b)}, {}, std::move(text)}));
}

Value Value::fn(std::vector<std::pair<std::string, Value>> graph) {
  std::string text = "fn(";
  std::vector<Value> kids;
  std::vector<std::string> args;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    if (i) text += ",";
    text += graph[i].first + ":" + graph[i].second.str();
    args.push_back(graph[i].first);
    kids.push_back(graph[i].second);
  }
  text += ")";
  return Value(std::make_shared<const Node>(
      Node{Kind::Fn, "", std::move(kids), std::move(args), std::move(text)}));
}

const Value& Value::at(const std::string& arg) const {
  for (std::size_t i = 0; i < node_->args.size(); ++i)
    if (node_->args[i] == arg) return node_->kids[i];
  throw Error(ErrorCode::InvalidArgument, "function " + str() + " is undefined at " + arg);
}

// ---------------------------------------------------------------------------
// functors

PolyFunctor PolyFunctor::constant(FiniteSet a) {
  PolyFunctor f;
  f.kind = Kind::Const;
  f.set = std::move(a);
  return f;
}

PolyFunctor PolyFunctor::id() { return PolyFunctor{}; }

PolyFunctor PolyFunctor::sum(PolyFunctor a, PolyFunctor b) {
  PolyFunctor f;
  f.kind = Kind::Sum;
  f.left = std::make_shared<const PolyFunctor>(std::move(a));
  f.right = std::make_shared<const PolyFunctor>(std::move(b));
  return f;
}

PolyFunctor PolyFunctor::prod(PolyFunctor a, PolyFunctor b) {
  PolyFunctor f = sum(std::move(a), std::move(b));
  f.kind = Kind::Prod;
  return f;
}

PolyFunctor PolyFunctor::exp(PolyFunctor inner, FiniteSet c) {
  PolyFunctor f;
  f.kind = Kind::Exp;
  f.set = std::move(c);
  f.left = std::make_shared<const PolyFunctor>(std::move(inner));
  return f;
}

std::size_t PolyFunctor::size() const {
  switch (kind) {
    case Kind::Const:
    case Kind::Id: return 1;
    case Kind::Exp: return 1 + left->size();
    default: return 1 + left->size() + right->size();
  }
}

namespace {

void print_functor_into(const PolyFunctor& f, int ctx, std::string& out) {
  // 0: sum, 1: product, 2: exponent base
  using K = PolyFunctor::Kind;
  const int lvl = f.kind == K::Sum ? 0 : f.kind == K::Prod ? 1 : f.kind == K::Exp ? 2 : 3;
  const bool parens = lvl < ctx;
  if (parens) out += "(";
  switch (f.kind) {
    case K::Const: out += "const(" + f.set.name + ")"; break;
    case K::Id: out += "Id"; break;
    case K::Sum:
      print_functor_into(*f.left, 0, out);
      out += " + ";
      print_functor_into(*f.right, 1, out);
      break;
    case K::Prod:
      print_functor_into(*f.left, 1, out);
      out += " * ";
      print_functor_into(*f.right, 2, out);
      break;
    case K::Exp:
      print_functor_into(*f.left, 3, out);
      out += "^" + f.set.name;
      break;
  }
  if (parens) out += ")";
}

}  // namespace

std::string print_functor(const PolyFunctor& f) {
  std::string out;
  print_functor_into(f, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// symbolic shapes and fibers

namespace {

using ShapePtr = std::shared_ptr<const ShapeType>;
using FiberPtr = std::shared_ptr<const FiberType>;

ShapeType shape_leaf(ShapeType::Kind k, FiniteSet set = {}) {
  ShapeType s;
  s.kind = k;
  s.set = std::move(set);
  return s;
}

ShapeType shape_node(ShapeType::Kind k, ShapeType l, std::optional<ShapeType> r, FiniteSet set = {}) {
  ShapeType s;
  s.kind = k;
  s.set = std::move(set);
  s.left = std::make_shared<const ShapeType>(std::move(l));
  if (r) s.right = std::make_shared<const ShapeType>(std::move(*r));
  return s;
}

FiberType fiber_leaf(FiberType::Kind k, FiniteSet set = {}) {
  FiberType b;
  b.kind = k;
  b.set = std::move(set);
  return b;
}

FiberType fiber_node(FiberType::Kind k, FiberType l, std::optional<FiberType> r, FiniteSet set = {}) {
  FiberType b;
  b.kind = k;
  b.set = std::move(set);
  b.left = std::make_shared<const FiberType>(std::move(l));
  if (r) b.right = std::make_shared<const FiberType>(std::move(*r));
  return b;
}

template <class T>
bool ptr_eq(const std::shared_ptr<const T>& a, const std::shared_ptr<const T>& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

}  // namespace

bool operator==(const ShapeType& a, const ShapeType& b) {
  return a.kind == b.kind && a.set == b.set && a.tagged == b.tagged && ptr_eq(a.left, b.left) &&
         ptr_eq(a.right, b.right);
}

bool operator==(const FiberType& a, const FiberType& b) {
  return a.kind == b.kind && a.set == b.set && ptr_eq(a.left, b.left) && ptr_eq(a.right, b.right);
}

BigCount shape_count(const ShapeType& s) {
  switch (s.kind) {
    case ShapeType::Kind::Zero: return 0;
    case ShapeType::Kind::One: return 1;
    case ShapeType::Kind::Named: return s.set.size();
    case ShapeType::Kind::Sum: return shape_count(*s.left) + shape_count(*s.right);
    case ShapeType::Kind::Prod: return shape_count(*s.left) * shape_count(*s.right);
    case ShapeType::Kind::Fun: {
      BigCount r = 1;
      const BigCount base = shape_count(*s.left);
      for (std::size_t i = 0; i < s.set.size(); ++i) r *= base;
      return r;
    }
  }
  return 0;
}

namespace {

std::vector<Value> enumerate(const ShapeType& s) {
  std::vector<Value> out;
  switch (s.kind) {
    case ShapeType::Kind::Zero: break;
    case ShapeType::Kind::One: out.push_back(Value::atom("star")); break;
    case ShapeType::Kind::Named:
      for (const auto& e : s.set.elements) out.push_back(Value::atom(e));
      break;
    case ShapeType::Kind::Sum:
      for (auto& v : enumerate(*s.left)) out.push_back(s.tagged ? Value::inl(v) : v);
      for (auto& v : enumerate(*s.right)) out.push_back(s.tagged ? Value::inr(v) : v);
      break;
    case ShapeType::Kind::Prod: {
      // an empty factor must not force enumerating the other one
      if (shape_count(*s.left) == 0 || shape_count(*s.right) == 0) break;
      const auto ls = enumerate(*s.left);
      const auto rs = enumerate(*s.right);
      for (const auto& a : ls)
        for (const auto& b : rs) out.push_back(Value::pair(a, b));
      break;
    }
    case ShapeType::Kind::Fun: {
      const std::size_t k = s.set.size();
      if (k == 0) {
        out.push_back(Value::fn({}));
        break;
      }
      const auto cod = enumerate(*s.left);
      if (k > 0 && cod.empty()) break;
      std::vector<std::size_t> idx(k, 0);
      while (true) {
        std::vector<std::pair<std::string, Value>> graph;
        for (std::size_t i = 0; i < k; ++i) graph.emplace_back(s.set.elements[i], cod[idx[i]]);
        out.push_back(Value::fn(std::move(graph)));
        std::size_t i = 0;
        for (; i < k; ++i) {
          if (++idx[i] < cod.size()) break;
          idx[i] = 0;
        }
        if (i == k) break;
      }
      break;
    }
  }
  return out;
}

bool atomic(const ShapeType& s) {
  return s.kind == ShapeType::Kind::Zero || s.kind == ShapeType::Kind::One ||
         s.kind == ShapeType::Kind::Named ||
         (s.kind == ShapeType::Kind::Sum && !s.tagged && atomic(*s.left) && atomic(*s.right));
}

void atoms_of(const ShapeType& s, std::set<std::string>& out) {
  for (const auto& v : enumerate(s)) out.insert(v.str());
}

bool belongs(const ShapeType& s, const Value& v) {
  std::set<std::string> atoms;
  atoms_of(s, atoms);
  return atoms.count(v.str()) != 0;
}

std::vector<Value> fiber_at(const ShapeType& s, const FiberType& b, const Value& shape) {
  std::vector<Value> out;
  switch (b.kind) {
    case FiberType::Kind::Zero: break;
    case FiberType::Kind::One: out.push_back(Value::atom("star")); break;
    case FiberType::Kind::Const:
      for (const auto& e : b.set.elements) out.push_back(Value::atom(e));
      break;
    case FiberType::Kind::Case: {
      if (s.kind != ShapeType::Kind::Sum) throw Error(ErrorCode::InvalidArgument, "case fiber over non-sum");
      if (s.tagged) {
        if (shape.kind() == Value::Kind::Inl) return fiber_at(*s.left, *b.left, shape.first());
        if (shape.kind() == Value::Kind::Inr) return fiber_at(*s.right, *b.right, shape.first());
        throw Error(ErrorCode::InvalidArgument, "untagged shape " + shape.str() + " for a sum");
      }
      return belongs(*s.left, shape) ? fiber_at(*s.left, *b.left, shape)
                                     : fiber_at(*s.right, *b.right, shape);
    }
    case FiberType::Kind::Pair: {
      if (s.kind != ShapeType::Kind::Prod || shape.kind() != Value::Kind::Pair)
        throw Error(ErrorCode::InvalidArgument, "pair fiber needs a pair shape");
      for (auto& p : fiber_at(*s.left, *b.left, shape.first())) out.push_back(Value::inl(p));
      for (auto& p : fiber_at(*s.right, *b.right, shape.second())) out.push_back(Value::inr(p));
      break;
    }
    case FiberType::Kind::Sigma: {
      if (s.kind != ShapeType::Kind::Fun || shape.kind() != Value::Kind::Fn)
        throw Error(ErrorCode::InvalidArgument, "sigma fiber needs a function shape");
      for (const auto& c : b.set.elements)
        for (auto& p : fiber_at(*s.left, *b.left, shape.at(c)))
          out.push_back(Value::pair(Value::atom(c), p));
      break;
    }
  }
  return out;
}

}  // namespace

std::vector<Value> enumerate_shapes(const Container& c, std::uint64_t cap) {
  if (shape_count(c.shapes) > cap)
    throw Error(ErrorCode::SizeCapExceeded,
                "container has " + shape_count(c.shapes).str() + " shapes, cap is " + std::to_string(cap));
  return enumerate(c.shapes);
}

std::vector<Value> fiber_of(const Container& c, const Value& shape) {
  return fiber_at(c.shapes, c.fibers, shape);
}

// ---------------------------------------------------------------------------
// printing

namespace {

void print_shape_into(const ShapeType& s, int ctx, std::string& out) {
  // 0: sum, 1: product, 2: atom
  const int lvl = s.kind == ShapeType::Kind::Sum ? 0 : s.kind == ShapeType::Kind::Prod ? 1 : 2;
  const bool parens = lvl < ctx;
  if (parens) out += "(";
  switch (s.kind) {
    case ShapeType::Kind::Zero: out += "0"; break;
    case ShapeType::Kind::One: out += "1"; break;
    case ShapeType::Kind::Named: out += s.set.name; break;
    case ShapeType::Kind::Sum:
      print_shape_into(*s.left, 0, out);
      out += "+";
      print_shape_into(*s.right, 1, out);
      break;
    case ShapeType::Kind::Prod:
      print_shape_into(*s.left, 1, out);
      out += "×";
      print_shape_into(*s.right, 2, out);
      break;
    case ShapeType::Kind::Fun:
      out += "(" + s.set.name + "→";
      print_shape_into(*s.left, 0, out);
      out += ")";
      break;
  }
  if (parens) out += ")";
}

}  // namespace

std::string print_shape_type(const ShapeType& s) {
  std::string out;
  print_shape_into(s, 0, out);
  return out;
}

std::string print_fiber_type(const FiberType& b) {
  switch (b.kind) {
    case FiberType::Kind::Zero: return "0";
    case FiberType::Kind::One: return "1";
    case FiberType::Kind::Const: return b.set.name;
    case FiberType::Kind::Case: return "[" + print_fiber_type(*b.left) + "," + print_fiber_type(*b.right) + "]";
    case FiberType::Kind::Pair:
      return "⟨|" + print_fiber_type(*b.left) + "," + print_fiber_type(*b.right) + "|⟩";
    case FiberType::Kind::Sigma: return "Σ_{c:" + b.set.name + "}" + print_fiber_type(*b.left);
  }
  return "?";
}

std::string print_container(const Container& c) {
  const std::string fib = c.fibers.constant() ? print_fiber_type(c.fibers)
                                              : print_fiber_type(c.fibers) + "[a]";
  return "Σ_{a:" + print_shape_type(c.shapes) + "} X^{" + fib + "}";
}

std::string container_to_json(const Container& c, std::uint64_t cap) {
  nlohmann::ordered_json j;
  j["form"] = print_container(c);
  nlohmann::ordered_json shapes = nlohmann::ordered_json::array();
  nlohmann::ordered_json fibers = nlohmann::ordered_json::object();
  for (const auto& a : enumerate_shapes(c, cap)) {
    shapes.push_back(a.str());
    nlohmann::ordered_json ps = nlohmann::ordered_json::array();
    for (const auto& p : fiber_of(c, a)) ps.push_back(p.str());
    fibers[a.str()] = ps;
  }
  j["shapes"] = shapes;
  j["fibers"] = fibers;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// translation

Container to_container(const PolyFunctor& f) {
  using K = PolyFunctor::Kind;
  switch (f.kind) {
    case K::Const: {
      Container c;
      if (f.set == one_set()) c.shapes = shape_leaf(ShapeType::Kind::One);
      else if (f.set.elements.empty()) c.shapes = shape_leaf(ShapeType::Kind::Zero);
      else c.shapes = shape_leaf(ShapeType::Kind::Named, f.set);
      c.fibers = fiber_leaf(FiberType::Kind::Zero);
      return c;
    }
    case K::Id:
      return {shape_leaf(ShapeType::Kind::One), fiber_leaf(FiberType::Kind::One)};
    case K::Sum:
    case K::Prod: {
      Container l = to_container(*f.left), r = to_container(*f.right);
      const bool sum = f.kind == K::Sum;
      return {shape_node(sum ? ShapeType::Kind::Sum : ShapeType::Kind::Prod, l.shapes, r.shapes),
              fiber_node(sum ? FiberType::Kind::Case : FiberType::Kind::Pair, l.fibers, r.fibers)};
    }
    case K::Exp: {
      Container inner = to_container(*f.left);
      return {shape_node(ShapeType::Kind::Fun, inner.shapes, std::nullopt, f.set),
              fiber_node(FiberType::Kind::Sigma, inner.fibers, std::nullopt, f.set)};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "bad functor");
}

// ---------------------------------------------------------------------------
// simplification

namespace {

ContainerIso identity_iso() {
  return {[](const Value& a) { return a; }, [](const Value&, const Value& p) { return p; }};
}

ContainerIso compose(const ContainerIso& first, const ContainerIso& second) {
  return {[first, second](const Value& a) { return second.shape(first.shape(a)); },
          [first, second](const Value& a, const Value& p) {
            return second.position(first.shape(a), first.position(a, p));
          }};
}

bool is_one(const ShapeType& s) { return s.kind == ShapeType::Kind::One; }
bool is_zero(const FiberType& b) { return b.kind == FiberType::Kind::Zero; }

Simplified simplify_rec(const Container& c) {
  switch (c.shapes.kind) {
    case ShapeType::Kind::Sum: {
      if (c.fibers.kind != FiberType::Kind::Case) break;
      Simplified l = simplify_rec({*c.shapes.left, *c.fibers.left});
      Simplified r = simplify_rec({*c.shapes.right, *c.fibers.right});
      ShapeType s = shape_node(ShapeType::Kind::Sum, l.container.shapes, r.container.shapes);
      s.tagged = c.shapes.tagged;
      ContainerIso lifted;
      if (c.shapes.tagged) {
        lifted = {[l, r](const Value& a) {
                    return a.kind() == Value::Kind::Inl ? Value::inl(l.iso.shape(a.first()))
                                                        : Value::inr(r.iso.shape(a.first()));
                  },
                  [l, r](const Value& a, const Value& p) {
                    return a.kind() == Value::Kind::Inl ? l.iso.position(a.first(), p)
                                                        : r.iso.position(a.first(), p);
                  }};
      } else {
        // Untagged sums only hold atomic sides, which are already normal.
        lifted = identity_iso();
      }
      FiberType b = fiber_node(FiberType::Kind::Case, l.container.fibers, r.container.fibers);
      Container out{s, b};
      ContainerIso step = identity_iso();
      if (s.tagged && atomic(*s.left) && atomic(*s.right)) {
        std::set<std::string> la, ra;
        atoms_of(*s.left, la);
        atoms_of(*s.right, ra);
        std::vector<std::string> both;
        std::set_intersection(la.begin(), la.end(), ra.begin(), ra.end(), std::back_inserter(both));
        if (both.empty()) {
          out.shapes.tagged = false;
          step.shape = [](const Value& a) { return a.first(); };
        }
      }
      if (*b.left == *b.right && b.left->constant()) out.fibers = *b.left;
      return {out, compose(lifted, step)};
    }
    case ShapeType::Kind::Prod: {
      if (c.fibers.kind != FiberType::Kind::Pair) break;
      Simplified l = simplify_rec({*c.shapes.left, *c.fibers.left});
      Simplified r = simplify_rec({*c.shapes.right, *c.fibers.right});
      ContainerIso lifted{
          [l, r](const Value& a) {
            return Value::pair(l.iso.shape(a.first()), r.iso.shape(a.second()));
          },
          [l, r](const Value& a, const Value& p) {
            return p.kind() == Value::Kind::Inl ? Value::inl(l.iso.position(a.first(), p.first()))
                                                : Value::inr(r.iso.position(a.second(), p.first()));
          }};
      const ShapeType& ls = l.container.shapes;
      const ShapeType& rs = r.container.shapes;
      const FiberType& lb = l.container.fibers;
      const FiberType& rb = r.container.fibers;
      auto keep_first = [](const Value& a) { return a.first(); };
      auto keep_second = [](const Value& a) { return a.second(); };
      auto untag = [](const Value&, const Value& p) { return p.first(); };
      // A×1 ≅ A and 1×A ≅ A; the unit side must carry no positions, or the
      // other side none while this side's fiber is constant.
      if (is_one(rs) && is_zero(rb)) return {{ls, lb}, compose(lifted, {keep_first, untag})};
      if (is_one(rs) && is_zero(lb) && rb.constant())
        return {{ls, rb}, compose(lifted, {keep_first, untag})};
      if (is_one(ls) && is_zero(lb)) return {{rs, rb}, compose(lifted, {keep_second, untag})};
      if (is_one(ls) && is_zero(rb) && lb.constant())
        return {{rs, lb}, compose(lifted, {keep_second, untag})};
      return {{shape_node(ShapeType::Kind::Prod, ls, rs), fiber_node(FiberType::Kind::Pair, lb, rb)},
              lifted};
    }
    case ShapeType::Kind::Fun: {
      if (c.fibers.kind != FiberType::Kind::Sigma) break;
      Simplified in = simplify_rec({*c.shapes.left, *c.fibers.left});
      const FiniteSet dom = c.shapes.set;
      ContainerIso lifted{
          [in](const Value& g) {
            std::vector<std::pair<std::string, Value>> graph;
            for (std::size_t i = 0; i < g.domain().size(); ++i)
              graph.emplace_back(g.domain()[i], in.iso.shape(g.images()[i]));
            return Value::fn(std::move(graph));
          },
          [in](const Value& g, const Value& p) {
            const std::string& arg = p.first().name();
            return Value::pair(p.first(), in.iso.position(g.at(arg), p.second()));
          }};
      const ShapeType& is = in.container.shapes;
      const FiberType& ib = in.container.fibers;
      auto to_star = [](const Value&) { return Value::atom("star"); };
      if (dom.elements.empty() || (is_one(is) && is_zero(ib)))
        return {{shape_leaf(ShapeType::Kind::One), fiber_leaf(FiberType::Kind::Zero)},
                compose(lifted, {to_star, [](const Value&, const Value& p) { return p; }})};
      if (is_one(is) && ib.kind == FiberType::Kind::One)
        // Σ_{c:C} 1 ≅ C, and C → 1 has the single shape star.
        return {{shape_leaf(ShapeType::Kind::One), fiber_leaf(FiberType::Kind::Const, dom)},
                compose(lifted, {to_star, [](const Value&, const Value& p) { return p.first(); }})};
      if (dom.elements.size() == 1)
        return {{is, ib}, compose(lifted, {[](const Value& g) { return g.images()[0]; },
                                           [](const Value&, const Value& p) { return p.second(); }})};
      return {{shape_node(ShapeType::Kind::Fun, is, std::nullopt, dom),
               fiber_node(FiberType::Kind::Sigma, ib, std::nullopt, dom)},
              lifted};
    }
    default:
      break;
  }
  return {c, identity_iso()};
}

}  // namespace

Simplified simplify(const Container& c) {
  Simplified cur = simplify_rec(c);
  // Rules only fire bottom-up, so a second pass reaches the normal form when
  // a rewrite exposed a new redex above it.
  for (int i = 0; i < 8; ++i) {
    Simplified next = simplify_rec(cur.container);
    if (next.container == cur.container) break;
    cur = {next.container, compose(cur.iso, next.iso)};
  }
  return cur;
}

bool verify_iso(const Container& from, const Container& to, const ContainerIso& iso,
                std::uint64_t cap) {
  const auto src = enumerate_shapes(from, cap);
  const auto dst = enumerate_shapes(to, cap);
  if (src.size() != dst.size()) return false;
  std::set<std::string> dst_set, hit;
  for (const auto& a : dst) dst_set.insert(a.str());
  for (const auto& a : src) {
    const Value b = iso.shape(a);
    if (!dst_set.count(b.str()) || !hit.insert(b.str()).second) return false;
    const auto ps = fiber_of(from, a);
    const auto qs = fiber_of(to, b);
    if (ps.size() != qs.size()) return false;
    std::set<std::string> qset, qhit;
    for (const auto& q : qs) qset.insert(q.str());
    for (const auto& p : ps) {
      const Value q = iso.position(a, p);
      if (!qset.count(q.str()) || !qhit.insert(q.str()).second) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// F X

std::string FXElement::str() const {
  std::string out = "<" + shape.str() + ",";
  if (labeling.empty()) return out + "iniMor>";
  out += "{";
  for (std::size_t i = 0; i < labeling.size(); ++i) {
    if (i) out += ",";
    out += labeling[i].first.str() + ":" + labeling[i].second;
  }
  return out + "}>";
}

std::vector<FXElement> apply_container(const Container& c, const std::vector<std::string>& x,
                                       std::uint64_t cap) {
  const BigCount total = container_cardinality(c, x.size());
  if (total > cap)
    throw Error(ErrorCode::SizeCapExceeded,
                "F X has " + total.str() + " elements, cap is " + std::to_string(cap));
  std::vector<FXElement> out;
  for (const auto& a : enumerate_shapes(c, cap)) {
    const auto ps = fiber_of(c, a);
    if (!ps.empty() && x.empty()) continue;
    std::vector<std::size_t> idx(ps.size(), 0);
    while (true) {
      FXElement e{a, {}};
      for (std::size_t i = 0; i < ps.size(); ++i) e.labeling.emplace_back(ps[i], x[idx[i]]);
      out.push_back(std::move(e));
      std::size_t i = 0;
      for (; i < ps.size(); ++i) {
        if (++idx[i] < x.size()) break;
        idx[i] = 0;
      }
      if (i == ps.size()) break;
    }
  }
  return out;
}

namespace {

using Profile = std::map<std::size_t, BigCount>;

Profile convolve(const Profile& a, const Profile& b) {
  Profile out;
  for (const auto& [sa, ca] : a)
    for (const auto& [sb, cb] : b) out[sa + sb] += ca * cb;
  return out;
}

Profile profile_of(const ShapeType& s, const FiberType& b) {
  if (b.constant()) {
    const std::size_t size = b.kind == FiberType::Kind::Zero ? 0
                             : b.kind == FiberType::Kind::One ? 1
                                                              : b.set.size();
    const BigCount n = shape_count(s);
    if (n == 0) return {};
    return {{size, n}};
  }
  switch (b.kind) {
    case FiberType::Kind::Case: {
      Profile out = profile_of(*s.left, *b.left);
      for (const auto& [k, v] : profile_of(*s.right, *b.right)) out[k] += v;
      return out;
    }
    case FiberType::Kind::Pair:
      return convolve(profile_of(*s.left, *b.left), profile_of(*s.right, *b.right));
    case FiberType::Kind::Sigma: {
      const Profile one = profile_of(*s.left, *b.left);
      Profile out{{0, 1}};
      for (std::size_t i = 0; i < b.set.size(); ++i) out = convolve(out, one);
      return out;
    }
    default:
      return {};
  }
}

}  // namespace

std::map<std::size_t, BigCount> fiber_profile(const Container& c) {
  return profile_of(c.shapes, c.fibers);
}

BigCount container_cardinality(const Container& c, std::size_t n) {
  BigCount total = 0;
  for (const auto& [size, count] : fiber_profile(c)) {
    BigCount term = count;
    for (std::size_t i = 0; i < size; ++i) term *= n;
    total += term;
  }
  return total;
}

}  // namespace mlcf
