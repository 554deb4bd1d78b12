// Test-side oracles and random generators. Nothing here calls the library's
// evaluator, enumerators or partition code; results are computed from the
// definitions directly so they can be compared against the library.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlcf/container.hpp"
#include "mlcf/fixpoint.hpp"
#include "mlcf/model.hpp"
#include "mlcf/pattern.hpp"

namespace oracle {

using mlcf::Element;
using mlcf::Model;
using mlcf::Pattern;
using mlcf::PatternKind;
using Set = std::set<Element>;

inline Set all_of(const Model& m) {
  Set s;
  for (Element e = 0; e < m.size(); ++e) s.insert(e);
  return s;
}

inline Set to_set(const mlcf::ElementSet& s, const Model& m) {
  Set out;
  for (Element e = 0; e < m.size(); ++e)
    if (s.contains(e)) out.insert(e);
  return out;
}

inline mlcf::ElementSet from_set(const Set& s, const Model& m) {
  mlcf::ElementSet out = m.empty_set();
  for (auto e : s) out.insert(e);
  return out;
}

inline bool subset(const Set& a, const Set& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

inline Set minus(const Set& a, const Set& b) {
  Set out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

inline std::vector<Set> all_subsets(const Model& m) {
  std::vector<Set> out;
  const std::size_t n = m.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Set s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) s.insert(static_cast<Element>(i));
    out.push_back(s);
  }
  return out;
}

struct Env {
  std::map<std::string, Element> evars;
  std::map<std::string, Set> svars;
};

// Pattern valuation straight from the clause list, with μ as the ⊆-least
// fixed point found by trying every subset and ν as the union of all
// post-fixed points. Exponential; meant for carriers of at most 5.
inline Set eval(const Model& m, const Pattern& p, const Env& env);

inline Set least_fixed_point(const Model& m, const std::string& var, const Pattern& body, const Env& env) {
  std::vector<Set> fixed;
  for (const auto& a : all_subsets(m)) {
    Env e = env;
    e.svars[var] = a;
    if (eval(m, body, e) == a) fixed.push_back(a);
  }
  for (const auto& a : fixed) {
    bool least = true;
    for (const auto& b : fixed) least = least && subset(a, b);
    if (least) return a;
  }
  throw std::logic_error("no least fixed point: body is not monotone");
}

inline Set greatest_fixed_point(const Model& m, const std::string& var, const Pattern& body, const Env& env) {
  Set out;
  for (const auto& a : all_subsets(m)) {
    Env e = env;
    e.svars[var] = a;
    if (subset(a, eval(m, body, e))) out.insert(a.begin(), a.end());
  }
  return out;
}

inline Set eval(const Model& m, const Pattern& p, const Env& env) {
  const Set top = all_of(m);
  switch (p.kind()) {
    case PatternKind::ElementVar: return {env.evars.at(p.name())};
    case PatternKind::SetVar: return env.svars.at(p.name());
    case PatternKind::Symbol: {
      const auto& v = m.symbol(p.name());
      return Set(v.begin(), v.end());
    }
    case PatternKind::App: {
      Set out;
      const Set f = eval(m, p.left(), env), a = eval(m, p.right(), env);
      for (auto x : f)
        for (auto y : a)
          for (auto z : m.app(x, y)) out.insert(z);
      return out;
    }
    case PatternKind::Bot: return {};
    case PatternKind::Top: return top;
    case PatternKind::Implies: return minus(top, minus(eval(m, p.left(), env), eval(m, p.right(), env)));
    case PatternKind::Not: return minus(top, eval(m, p.body(), env));
    case PatternKind::Or: {
      Set a = eval(m, p.left(), env);
      const Set b = eval(m, p.right(), env);
      a.insert(b.begin(), b.end());
      return a;
    }
    case PatternKind::And: {
      const Set a = eval(m, p.left(), env), b = eval(m, p.right(), env);
      Set out;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
      return out;
    }
    case PatternKind::Exists:
    case PatternKind::Forall: {
      const bool ex = p.kind() == PatternKind::Exists;
      Set out = ex ? Set{} : top;
      for (Element a = 0; a < m.size(); ++a) {
        Env e = env;
        e.evars[p.name()] = a;
        const Set part = eval(m, p.body(), e);
        if (ex) {
          out.insert(part.begin(), part.end());
        } else {
          Set keep;
          std::set_intersection(out.begin(), out.end(), part.begin(), part.end(), std::inserter(keep, keep.end()));
          out = keep;
        }
      }
      return out;
    }
    case PatternKind::Mu: return least_fixed_point(m, p.name(), p.body(), env);
    case PatternKind::Nu: return greatest_fixed_point(m, p.name(), p.body(), env);
    case PatternKind::Notation: break;
  }
  throw std::logic_error("oracle cannot evaluate notation " + p.name());
}

// Polarity of the free occurrences of X, by walking the desugared tree and
// counting how many implication left-hand sides enclose each occurrence.
inline mlcf::Polarity occurrence_parity(const Pattern& core, const std::string& x) {
  bool pos = false, neg = false;
  std::function<void(const Pattern&, int)> walk = [&](const Pattern& p, int lefts) {
    switch (p.kind()) {
      case PatternKind::SetVar:
        if (p.name() == x) (lefts % 2 ? neg : pos) = true;
        return;
      case PatternKind::Mu:
        if (p.name() == x) return;
        walk(p.body(), lefts);
        return;
      case PatternKind::Implies:
        walk(p.left(), lefts + 1);
        walk(p.right(), lefts);
        return;
      default:
        for (const auto& k : p.children()) walk(k, lefts);
    }
  };
  walk(core, 0);
  if (pos && neg) return mlcf::Polarity::Both;
  if (pos) return mlcf::Polarity::Positive;
  if (neg) return mlcf::Polarity::Negative;
  return mlcf::Polarity::Absent;
}

// |F X| computed on the functor expression itself.
inline mlcf::BigCount poly_size(const mlcf::PolyFunctor& f, std::size_t x) {
  using K = mlcf::PolyFunctor::Kind;
  switch (f.kind) {
    case K::Const: return f.set.size();
    case K::Id: return x;
    case K::Sum: return poly_size(*f.left, x) + poly_size(*f.right, x);
    case K::Prod: return poly_size(*f.left, x) * poly_size(*f.right, x);
    case K::Exp: {
      mlcf::BigCount out = 1;
      const auto base = poly_size(*f.left, x);
      for (std::size_t i = 0; i < f.set.size(); ++i) out *= base;
      return out;
    }
  }
  return 0;
}

// Every functor of AST size <= max_size whose constants and exponents come
// from `sets`.
inline std::vector<mlcf::PolyFunctor> all_functors(std::size_t max_size, const std::vector<mlcf::FiniteSet>& sets) {
  using mlcf::PolyFunctor;
  std::vector<std::vector<PolyFunctor>> by_size(max_size + 1);
  for (std::size_t n = 1; n <= max_size; ++n) {
    auto& out = by_size[n];
    if (n == 1) {
      out.push_back(PolyFunctor::id());
      for (const auto& s : sets) out.push_back(PolyFunctor::constant(s));
      continue;
    }
    for (const auto& f : by_size[n - 1])
      for (const auto& s : sets) out.push_back(PolyFunctor::exp(f, s));
    for (std::size_t l = 1; l + 1 < n; ++l)
      for (const auto& a : by_size[l])
        for (const auto& b : by_size[n - 1 - l]) {
          out.push_back(PolyFunctor::sum(a, b));
          out.push_back(PolyFunctor::prod(a, b));
        }
  }
  std::vector<PolyFunctor> all;
  for (const auto& v : by_size) all.insert(all.end(), v.begin(), v.end());
  return all;
}

// Lists over E of length < k, written the way the tree printer writes them.
inline std::set<std::string> list_trees(const std::vector<std::string>& e, std::size_t k) {
  std::set<std::string> out;
  if (k == 0) return out;
  std::vector<std::string> frontier = {"star"};
  out.insert("star");
  for (std::size_t len = 1; len < k; ++len) {
    std::vector<std::string> next;
    for (const auto& tail : frontier)
      for (const auto& x : e) next.push_back(x + "[star:" + tail + "]");
    out.insert(next.begin(), next.end());
    frontier = next;
  }
  return out;
}

inline std::uint64_t moore_count(std::uint64_t i, std::uint64_t o, std::uint64_t depth) {
  std::uint64_t exponent = 0, width = 1;
  for (std::uint64_t k = 0; k < depth; ++k) {
    exponent += width;
    width *= i;
  }
  std::uint64_t out = 1;
  for (std::uint64_t k = 0; k < exponent; ++k) out *= o;
  return out;
}

// Depth-k observational equivalence by direct recursion.
inline bool equivalent_at(const mlcf::FiniteCoalgebra& g, std::size_t s, std::size_t t, std::size_t k) {
  if (!(g.structure[s].shape == g.structure[t].shape)) return false;
  if (k <= 1) return true;
  const auto& a = g.structure[s].next;
  const auto& b = g.structure[t].next;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equivalent_at(g, a[i].second, b[i].second, k - 1)) return false;
  return true;
}

// Bisimilarity as the greatest relation closed under shape and successors.
inline std::vector<std::vector<bool>> bisimilarity(const mlcf::FiniteCoalgebra& g) {
  const std::size_t n = g.states.size();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) r[s][t] = g.structure[s].shape == g.structure[t].shape;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = 0; t < n; ++t) {
        if (!r[s][t]) continue;
        for (std::size_t i = 0; i < g.structure[s].next.size(); ++i)
          if (!r[g.structure[s].next[i].second][g.structure[t].next[i].second]) {
            r[s][t] = false;
            changed = true;
            break;
          }
      }
  }
  return r;
}

}  // namespace oracle

namespace gen {

using mlcf::Pattern;

// Small model: carrier 1..max_n, random application table, symbols s0..s2.
inline mlcf::Model model(std::mt19937_64& rng, std::size_t max_n = 4, double density = 0.3) {
  std::uniform_int_distribution<std::size_t> size(1, max_n);
  std::bernoulli_distribution coin(density), half(0.5);
  mlcf::Model m;
  const std::size_t n = size(rng);
  for (std::size_t i = 0; i < n; ++i) m.add_element("n" + std::to_string(i));
  for (mlcf::Element a = 0; a < n; ++a)
    for (mlcf::Element b = 0; b < n; ++b)
      for (mlcf::Element c = 0; c < n; ++c)
        if (coin(rng)) m.add_app(a, b, c);
  for (const char* s : {"s0", "s1", "s2"}) {
    m.declare_symbol(s);
    for (mlcf::Element a = 0; a < n; ++a)
      if (half(rng)) m.add_to_symbol(s, a);
  }
  return m;
}

// Random patterns over symbols s0..s2. Bound set variables only occur with
// the polarity they had at their binder, so every μ/ν is well formed. The
// free variables are x (element) and the names in `free_sets`, each allowed
// anywhere unless listed in `positive_only`.
struct PatternGen {
  explicit PatternGen(std::mt19937_64& r) : rng(r) {}
  std::mt19937_64& rng;
  std::vector<std::string> free_sets = {"Y"};
  std::set<std::string> positive_only;
  bool allow_free_x = true;
  int counter = 0;

  struct Scope {
    std::vector<std::string> evars;
    std::vector<std::pair<std::string, bool>> svars;  // name, polarity at binder
  };

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Pattern leaf(const Scope& sc, bool positive) {
    std::vector<Pattern> options = {Pattern::bot(), Pattern::top(), Pattern::sym("s0"), Pattern::sym("s1"),
                                    Pattern::sym("s2")};
    for (const auto& x : sc.evars) options.push_back(Pattern::evar(x));
    if (allow_free_x) options.push_back(Pattern::evar("x"));
    for (const auto& [x, pol] : sc.svars)
      if (pol == positive) {
        options.push_back(Pattern::svar(x));
        options.push_back(Pattern::svar(x));
      }
    for (const auto& y : free_sets)
      if (positive || !positive_only.count(y)) {
        options.push_back(Pattern::svar(y));
        options.push_back(Pattern::svar(y));
      }
    return options[pick(static_cast<int>(options.size()))];
  }

  Pattern operator()(int depth, Scope sc = {}, bool positive = true) {
    if (depth <= 0 || pick(4) == 0) return leaf(sc, positive);
    switch (pick(10)) {
      case 0:
      case 1: return Pattern::app((*this)(depth - 1, sc, positive), (*this)(depth - 1, sc, positive));
      case 2: return Pattern::implies((*this)(depth - 1, sc, !positive), (*this)(depth - 1, sc, positive));
      case 3: return Pattern::negation((*this)(depth - 1, sc, !positive));
      case 4: return Pattern::disj((*this)(depth - 1, sc, positive), (*this)(depth - 1, sc, positive));
      case 5: return Pattern::conj((*this)(depth - 1, sc, positive), (*this)(depth - 1, sc, positive));
      case 6:
      case 7: {
        const std::string x = "v" + std::to_string(++counter);
        sc.evars.push_back(x);
        auto body = (*this)(depth - 1, sc, positive);
        return pick(2) ? Pattern::exists(x, body) : Pattern::forall(x, body);
      }
      default: {
        const std::string x = "Z" + std::to_string(++counter);
        sc.svars.emplace_back(x, positive);
        auto body = (*this)(depth - 1, sc, positive);
        return pick(2) ? Pattern::mu(x, body) : Pattern::nu(x, body);
      }
    }
  }
};

inline oracle::Set subset(std::mt19937_64& rng, const mlcf::Model& m) {
  std::bernoulli_distribution coin(0.5);
  oracle::Set s;
  for (mlcf::Element e = 0; e < m.size(); ++e)
    if (coin(rng)) s.insert(e);
  return s;
}

// Moore coalgebra over the container Σ_{o:O} X^I with |O| = outputs,
// |I| = inputs; shape and position names follow the functor parser.
inline mlcf::FiniteCoalgebra moore(std::mt19937_64& rng, const mlcf::Container& c, std::size_t max_states) {
  const auto shapes = mlcf::enumerate_shapes(c);
  std::uniform_int_distribution<std::size_t> size(1, max_states);
  const std::size_t n = size(rng);
  std::uniform_int_distribution<std::size_t> state(0, n - 1), shape(0, shapes.size() - 1);
  mlcf::FiniteCoalgebra g;
  for (std::size_t s = 0; s < n; ++s) g.states.push_back("s" + std::to_string(s));
  for (std::size_t s = 0; s < n; ++s) {
    mlcf::FiniteCoalgebra::Step step{shapes[shape(rng)], {}};
    for (const auto& p : mlcf::fiber_of(c, step.shape)) step.next.emplace_back(p, state(rng));
    g.structure.push_back(step);
  }
  return g;
}

}  // namespace gen
