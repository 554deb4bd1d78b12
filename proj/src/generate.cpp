// Theory generation for μF / νF of a container. The theory is assembled as
// text in the surface syntax and parsed back, so what users see printed is
// exactly what gets checked.

#include <map>
#include <set>

#include "mlcf/error.hpp"
#include "mlcf/fixpoint.hpp"

namespace mlcf {

namespace {

std::string pick(const std::string& base, const std::set<std::string>& avoid) {
  return avoid.count(base) ? fresh_name(base, avoid) : base;
}

void collect_named(const ShapeType& s, std::vector<FiniteSet>& out) {
  if (s.kind == ShapeType::Kind::Named) out.push_back(s.set);
  if (s.left) collect_named(*s.left, out);
  if (s.right) collect_named(*s.right, out);
}

void collect_fiber_sets(const FiberType& b, std::vector<FiniteSet>& out) {
  if (b.kind == FiberType::Kind::Const || b.kind == FiberType::Kind::Sigma) out.push_back(b.set);
  if (b.left) collect_fiber_sets(*b.left, out);
  if (b.right) collect_fiber_sets(*b.right, out);
}

std::set<std::string> as_set(const std::vector<Value>& vs) {
  std::set<std::string> out;
  for (const auto& v : vs) out.insert(v.str());
  return out;
}

std::string match_set(const std::vector<FiniteSet>& sets, const std::vector<Value>& members,
                      const std::set<std::string>& taken) {
  const auto want = as_set(members);
  for (const auto& s : sets) {
    if (s.name.empty() || taken.count(s.name)) continue;
    if (std::set<std::string>(s.elements.begin(), s.elements.end()) == want) return s.name;
  }
  return "";
}

class Generator {
 public:
  Generator(const Container& c, FixpointKind kind, const GenerateOptions& opts)
      : c_(c), kind_(kind), opts_(opts) {}

  GeneratedTheory run() {
    if (!is_identifier(opts_.name)) throw Error(ErrorCode::InvalidArgument, "bad functor name '" + opts_.name + "'");
    const bool initial = kind_ == FixpointKind::Initial;
    out_.kind = kind_;
    out_.sort = (initial ? "Mu" : "Nu") + opts_.name;
    out_.label_sort = opts_.bounded_labels ? out_.sort + "_lbl" : out_.sort;

    // Everything already declared by the imports is off limits.
    reserved_ = builtin_library().signature_of(builtin_library().get("PAIR")).symbols;
    for (const auto& s : builtin_library().get("FUN").symbols.symbols) reserved_.insert(s);
    for (const char* s : {"cons", "star", "iniMor", "out", "nxt"}) reserved_.insert(s);
    reserved_.insert(out_.sort);
    reserved_.insert(out_.label_sort);

    make_groups();

    std::set<std::string> avoid = reserved_;
    out_.var = pick("X", avoid);
    a_ = pick("a", avoid);
    a2_ = pick("a'", avoid);
    f_ = pick("f", avoid);
    f2_ = pick("f'", avoid);
    y_ = pick("y", avoid);
    x_ = pick("x", avoid);

    const std::string text = theory_text();
    out_.theory = parse_theory(text, builtin_library());
    const std::string junk = initial ? "No Junk" : "Cojunk";
    const Axiom* ax = out_.theory.find_axiom(junk);
    out_.step = ax->pattern.child(1).body();
    return out_;
  }

 private:
  void make_groups() {
    std::vector<FiniteSet> named, fiber_sets;
    collect_named(c_.shapes, named);
    collect_fiber_sets(c_.fibers, fiber_sets);

    std::map<std::string, std::size_t> by_fiber;
    for (const auto& a : enumerate_shapes(c_)) {
      const auto fiber = fiber_of(c_, a);
      std::string key;
      for (const auto& p : fiber) key += p.str() + "\n";
      auto [it, fresh] = by_fiber.emplace(key, out_.groups.size());
      if (fresh) {
        ShapeGroup g;
        g.fiber = fiber;
        if (fiber.empty())
          g.label = ShapeGroup::Label::Empty;
        else if (fiber.size() == 1 && fiber[0].str() == "star")
          g.label = ShapeGroup::Label::Direct;
        else
          g.label = ShapeGroup::Label::Function;
        out_.groups.push_back(std::move(g));
      }
      out_.groups[it->second].shapes.push_back(a);
    }

    std::set<std::string> taken = reserved_;
    int shape_n = 0, pos_n = 0;
    for (auto& g : out_.groups) {
      if (!(g.shapes.size() == 1 && g.shapes[0].str() == "star")) {
        std::string s = match_set(named, g.shapes, taken);
        while (s.empty() || taken.count(s)) s = "A" + std::to_string(++shape_n);
        g.shape_sort = s;
        taken.insert(s);
      }
      if (g.label == ShapeGroup::Label::Function) {
        std::string s = match_set(fiber_sets, g.fiber, taken);
        while (s.empty() || taken.count(s)) s = "B" + std::to_string(++pos_n);
        g.position_sort = s;
        taken.insert(s);
      }
    }
    for (const auto& g : out_.groups) {
      if (!g.shape_sort.empty()) reserved_.insert(g.shape_sort);
      if (!g.position_sort.empty()) reserved_.insert(g.position_sort);
    }
  }

  bool is_star(const ShapeGroup& g) const { return g.shape_sort.empty(); }

  std::string wrap_a(const ShapeGroup& g, const std::string& av, const std::string& body) const {
    return is_star(g) ? body : "forall_s{" + av + ", " + g.shape_sort + ", " + body + "}";
  }

  std::string wrap_f(const ShapeGroup& g, const std::string& fv, const std::string& body) const {
    switch (g.label) {
      case ShapeGroup::Label::Empty: return body;
      case ShapeGroup::Label::Direct: return "forall_s{" + fv + ", " + out_.label_sort + ", " + body + "}";
      case ShapeGroup::Label::Function:
        return "(forall " + fv + " . (in{" + fv + ", pow{inh{" + out_.label_sort + "}, " + g.position_sort +
               "}} -> " + body + "))";
    }
    return body;
  }

  std::string a_term(const ShapeGroup& g, const std::string& av) const { return is_star(g) ? "star" : av; }
  std::string f_term(const ShapeGroup& g, const std::string& fv) const {
    return g.label == ShapeGroup::Label::Empty ? "iniMor" : fv;
  }
  std::string cons(const ShapeGroup& g, const std::string& av, const std::string& fv) const {
    return "cons tuple{" + a_term(g, av) + ", " + f_term(g, fv) + "}";
  }
  std::string quantify(const ShapeGroup& g, const std::string& av, const std::string& fv,
                       const std::string& body) const {
    return wrap_a(g, av, wrap_f(g, fv, body));
  }

  std::string step_text() const {
    if (out_.groups.empty()) return "Bot";
    std::string s;
    for (const auto& g : out_.groups) {
      if (!s.empty()) s += " \\/ ";
      const std::string shape = is_star(g) ? "star" : "inh{" + g.shape_sort + "}";
      std::string label;
      switch (g.label) {
        case ShapeGroup::Label::Empty: label = "iniMor"; break;
        case ShapeGroup::Label::Direct: label = out_.var; break;
        case ShapeGroup::Label::Function: label = "pow{" + out_.var + ", " + g.position_sort + "}"; break;
      }
      s += "cons tuple{" + shape + ", " + label + "}";
    }
    return s;
  }

  static std::string numbered(const std::string& base, std::size_t i, std::size_t n) {
    return n > 1 ? base + "." + std::to_string(i + 1) : base;
  }

  std::string theory_text() const {
    const bool initial = kind_ == FixpointKind::Initial;
    bool any_fiber = false, any_empty = false, any_star = false, any_fn = false;
    for (const auto& g : out_.groups) {
      any_fiber |= g.label != ShapeGroup::Label::Empty;
      any_empty |= g.label == ShapeGroup::Label::Empty;
      any_star |= is_star(g);
      any_fn |= g.label == ShapeGroup::Label::Function;
    }

    std::string t = "spec " + std::string(initial ? "MU_" : "NU_") + opts_.name + "\n";
    t += "  imports: EQUALITY, SORT, PAIR" + std::string(any_fiber ? ", FUN" : "") + "\n";
    std::vector<std::string> syms = {"cons", out_.sort};
    if (out_.label_sort != out_.sort) syms.push_back(out_.label_sort);
    if (any_star) syms.push_back("star");
    if (any_empty) syms.push_back("iniMor");
    if (!initial) {
      syms.push_back("out");
      syms.push_back("nxt");
    }
    for (const auto& g : out_.groups) {
      if (!g.shape_sort.empty()) syms.push_back(g.shape_sort);
      if (!g.position_sort.empty()) syms.push_back(g.position_sort);
    }
    t += "  symbols: ";
    for (std::size_t i = 0; i < syms.size(); ++i) t += (i ? ", " : "") + syms[i];
    t += "\n";

    if (any_fn || !initial) {
      t += "  notations:\n";
      // f maps every position of P into X and nothing else.
      if (any_fn)
        t += "    pow{X, P} == exists f . f /\\ forall_s{b, P, exists x . eq{f b, x} /\\ in{x, X}}"
             " /\\ (forall b . (not in{b, inh{P}} -> eq{f b, Bot}))\n";
      if (!initial) {
        t += "    hd{x} == out x\n";
        t += "    tl{x} == nxt x\n";
      }
    }

    t += "  axioms:\n";
    const auto& gs = out_.groups;
    const std::size_t n = gs.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto body = "exists_s{" + y_ + ", " + out_.sort + ", eq{" + cons(gs[i], a_, f_) + ", " + y_ + "}}";
      t += "    (" + numbered("Functional", i, n) + ") " + quantify(gs[i], a_, f_, body) + "\n";
    }

    std::vector<std::string> confusion;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto body = "neq{" + cons(gs[i], a_, f_) + ", " + cons(gs[j], a2_, f2_) + "}";
        confusion.push_back(quantify(gs[i], a_, f_, quantify(gs[j], a2_, f2_, body)));
      }
    for (const auto& g : gs) {
      std::vector<std::string> eqs;
      if (!is_star(g)) eqs.push_back("eq{" + a_ + ", " + a2_ + "}");
      if (g.label != ShapeGroup::Label::Empty) eqs.push_back("eq{" + f_ + ", " + f2_ + "}");
      if (eqs.empty()) continue;
      std::string concl = eqs[0];
      if (eqs.size() == 2) concl += " /\\ " + eqs[1];
      const auto body = "(eq{" + cons(g, a_, f_) + ", " + cons(g, a2_, f2_) + "} -> " + concl + ")";
      confusion.push_back(quantify(g, a_, f_, quantify(g, a2_, f2_, body)));
    }
    for (std::size_t i = 0; i < confusion.size(); ++i)
      t += "    (" + numbered("No Confusion", i, confusion.size()) + ") " + confusion[i] + "\n";

    if (!initial) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto body = "eq{out (" + cons(gs[i], a_, f_) + "), " + a_term(gs[i], a_) + "}";
        t += "    (" + numbered("Coconfusion.1", i, n) + ") " + quantify(gs[i], a_, f_, body) + "\n";
      }
      for (std::size_t i = 0; i < n; ++i) {
        const auto body = "eq{nxt (" + cons(gs[i], a_, f_) + "), " + f_term(gs[i], f_) + "}";
        t += "    (" + numbered("Coconfusion.2", i, n) + ") " + quantify(gs[i], a_, f_, body) + "\n";
      }
      t += "    (Coconfusion.3) forall_s{" + x_ + ", " + out_.sort + ", eq{cons tuple{out " + x_ + ", nxt " +
           x_ + "}, " + x_ + "}}\n";
    }

    t += "    (" + std::string(initial ? "No Junk" : "Cojunk") + ") eq{inh{" + out_.sort + "}, " +
         (initial ? "mu " : "nu ") + out_.var + " . " + step_text() + "}\n";
    t += "endspec\n";
    return t;
  }

  const Container& c_;
  FixpointKind kind_;
  GenerateOptions opts_;
  GeneratedTheory out_;
  std::set<std::string> reserved_;
  std::string a_, a2_, f_, f2_, y_, x_;
};

}  // namespace

const char* fixpoint_kind_name(FixpointKind k) { return k == FixpointKind::Initial ? "initial" : "final"; }

GeneratedTheory generate_theory(const Container& c, FixpointKind kind, const GenerateOptions& opts) {
  return Generator(c, kind, opts).run();
}

}  // namespace mlcf
