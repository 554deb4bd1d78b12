#include "mlcf/theory.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "mlcf/error.hpp"

namespace mlcf {

const NotationDef* Theory::find_notation(const std::string& head) const {
  for (const auto& n : notations)
    if (n.head == head) return &n;
  return nullptr;
}

const Axiom* Theory::find_axiom(const std::string& label) const {
  for (const auto& a : axioms)
    if (a.label == label) return &a;
  return nullptr;
}

bool operator==(const Theory& a, const Theory& b) {
  return a.name == b.name && a.imports == b.imports && a.symbols.symbols == b.symbols.symbols &&
         a.notations == b.notations && a.axioms == b.axioms;
}

void TheoryLibrary::add(Theory th) {
  const std::string name = th.name;
  theories_[name] = std::move(th);
}

const Theory& TheoryLibrary::get(const std::string& name) const {
  auto it = theories_.find(name);
  if (it == theories_.end()) throw Error(ErrorCode::UnknownTheory, "unknown theory '" + name + "'");
  return it->second;
}

std::vector<std::string> TheoryLibrary::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : theories_) out.push_back(name);
  return out;
}

Signature TheoryLibrary::signature_of(const Theory& th) const {
  Signature sig = th.symbols;
  std::set<std::string> seen{th.name};
  std::function<void(const Theory&)> visit = [&](const Theory& t) {
    for (const auto& imp : t.imports) {
      if (!seen.insert(imp).second) continue;
      const Theory& dep = get(imp);
      sig.merge(dep.symbols);
      visit(dep);
    }
  };
  visit(th);
  return sig;
}

const NotationDef* TheoryLibrary::find_notation(const Theory& th, const std::string& head) const {
  std::set<std::string> seen;
  std::function<const NotationDef*(const Theory&)> visit = [&](const Theory& t) -> const NotationDef* {
    if (!seen.insert(t.name).second) return nullptr;
    if (auto* n = t.find_notation(head)) return n;
    for (const auto& imp : t.imports)
      if (auto* n = visit(get(imp))) return n;
    return nullptr;
  };
  return visit(th);
}

// ---------------------------------------------------------------------------
// text format

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find("//");
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

[[noreturn]] void theory_error(int line, const std::string& msg) {
  throw Error(ErrorCode::Parse, "theory line " + std::to_string(line) + ": " + msg);
}

enum class Section { None, Imports, Symbols, Notations, Axioms };

struct Pending {
  std::string text;
  int line = 0;
};

struct BlockBuilder {
  Theory th;
  std::vector<Pending> notation_lines;
  std::vector<Pending> axiom_lines;
};

NotationDef parse_notation_line(const Pending& pl, const Signature& sig) {
  const auto eq = pl.text.find("==");
  if (eq == std::string::npos) theory_error(pl.line, "notation needs 'lhs == rhs'");
  const std::string lhs = trim(pl.text.substr(0, eq));
  const auto lb = lhs.find('{');
  if (lb == std::string::npos || lhs.back() != '}')
    theory_error(pl.line, "notation head must look like name{p1, p2}");
  NotationDef def;
  def.head = trim(lhs.substr(0, lb));
  if (!is_identifier(def.head)) theory_error(pl.line, "bad notation name '" + def.head + "'");
  def.params = split_names(lhs.substr(lb + 1, lhs.size() - lb - 2));
  std::set<std::string> params;
  for (const auto& p : def.params) {
    if (!is_element_var_name(p) && !is_set_var_name(p))
      theory_error(pl.line, "bad notation parameter '" + p + "'");
    if (!params.insert(p).second) theory_error(pl.line, "duplicate parameter '" + p + "'");
  }
  try {
    def.body = parse_pattern(pl.text.substr(eq + 2), sig, params);
  } catch (const Error& e) {
    theory_error(pl.line, e.what());
  }
  return def;
}

Axiom parse_axiom_line(const Pending& pl, const Signature& sig) {
  if (pl.text.empty() || pl.text[0] != '(') theory_error(pl.line, "axiom needs a (Label)");
  const auto close = pl.text.find(')');
  if (close == std::string::npos) theory_error(pl.line, "unterminated axiom label");
  Axiom ax;
  ax.label = trim(pl.text.substr(1, close - 1));
  if (ax.label.empty()) theory_error(pl.line, "empty axiom label");
  try {
    ax.pattern = parse_pattern(pl.text.substr(close + 1), sig);
  } catch (const Error& e) {
    theory_error(pl.line, e.what());
  }
  return ax;
}

Theory finish_block(BlockBuilder& b, const TheoryLibrary& lib) {
  Theory& th = b.th;
  TheoryLibrary scratch = lib;
  for (const auto& imp : th.imports)
    if (!scratch.contains(imp)) throw Error(ErrorCode::UnknownTheory, "unknown import '" + imp + "'");
  const Signature sig = scratch.signature_of(th);
  for (const auto& pl : b.notation_lines) {
    NotationDef def = parse_notation_line(pl, sig);
    if (th.find_notation(def.head)) theory_error(pl.line, "notation '" + def.head + "' defined twice");
    th.notations.push_back(std::move(def));
  }
  for (const auto& pl : b.axiom_lines) {
    Axiom ax = parse_axiom_line(pl, sig);
    if (th.find_axiom(ax.label)) theory_error(pl.line, "duplicate axiom label '" + ax.label + "'");
    th.axioms.push_back(std::move(ax));
  }
  return th;
}

}  // namespace

std::vector<Theory> parse_theories(const std::string& text, const TheoryLibrary& lib) {
  TheoryLibrary scope = lib;
  std::vector<Theory> out;
  std::optional<BlockBuilder> block;
  Section section = Section::None;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;

  auto add_content = [&](const std::string& content) {
    if (content.empty()) return;
    switch (section) {
      case Section::Imports:
        for (const auto& n : split_names(content)) block->th.imports.push_back(n);
        break;
      case Section::Symbols:
        for (const auto& n : split_names(content)) {
          if (!is_identifier(n)) theory_error(lineno, "bad symbol name '" + n + "'");
          block->th.symbols.insert(n);
        }
        break;
      case Section::Notations:
        // A line without '==' continues the previous definition.
        if (content.find("==") == std::string::npos && !block->notation_lines.empty())
          block->notation_lines.back().text += " " + content;
        else
          block->notation_lines.push_back({content, lineno});
        break;
      case Section::Axioms:
        if (content[0] != '(' && !block->axiom_lines.empty())
          block->axiom_lines.back().text += " " + content;
        else
          block->axiom_lines.push_back({content, lineno});
        break;
      case Section::None:
        theory_error(lineno, "content outside a section");
    }
  };

  while (std::getline(is, raw)) {
    ++lineno;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (!block) {
      if (line.rfind("spec ", 0) != 0) theory_error(lineno, "expected 'spec NAME'");
      block.emplace();
      block->th.name = trim(line.substr(5));
      if (!is_identifier(block->th.name)) theory_error(lineno, "bad theory name");
      section = Section::None;
      continue;
    }
    if (line == "endspec") {
      Theory th = finish_block(*block, scope);
      scope.add(th);
      out.push_back(std::move(th));
      block.reset();
      continue;
    }
    static const std::pair<const char*, Section> kHeaders[] = {{"imports:", Section::Imports},
                                                               {"symbols:", Section::Symbols},
                                                               {"notations:", Section::Notations},
                                                               {"axioms:", Section::Axioms}};
    bool header = false;
    for (auto [word, sec] : kHeaders) {
      const std::string w = word;
      if (line.rfind(w, 0) == 0) {
        section = sec;
        add_content(trim(line.substr(w.size())));
        header = true;
        break;
      }
    }
    if (!header) add_content(line);
  }
  if (block) theory_error(lineno, "missing endspec");
  return out;
}

Theory parse_theory(const std::string& text, const TheoryLibrary& lib) {
  auto all = parse_theories(text, lib);
  if (all.size() != 1) throw Error(ErrorCode::Parse, "expected exactly one spec block");
  return all.front();
}

std::string print_theory(const Theory& th) {
  std::string out = "spec " + th.name + "\n";
  auto join = [](const auto& names) {
    std::string s;
    for (const auto& n : names) {
      if (!s.empty()) s += ", ";
      s += n;
    }
    return s;
  };
  if (!th.imports.empty()) out += "  imports: " + join(th.imports) + "\n";
  if (!th.symbols.symbols.empty()) out += "  symbols: " + join(th.symbols.symbols) + "\n";
  if (!th.notations.empty()) {
    out += "  notations:\n";
    for (const auto& n : th.notations)
      out += "    " + n.head + "{" + join(n.params) + "} == " + print_pattern(n.body) + "\n";
  }
  if (!th.axioms.empty()) {
    out += "  axioms:\n";
    for (const auto& a : th.axioms) out += "    (" + a.label + ") " + print_pattern(a.pattern) + "\n";
  }
  return out + "endspec\n";
}

// ---------------------------------------------------------------------------
// notation expansion

namespace {

void collect_names(const Pattern& p, std::set<std::string>& out) {
  if (!p.name().empty()) out.insert(p.name());
  for (const auto& k : p.children()) collect_names(k, out);
}

bool is_variable(const Pattern& p) {
  return p.kind() == PatternKind::ElementVar || p.kind() == PatternKind::SetVar;
}

class Expander {
 public:
  Expander(const Theory& th, const TheoryLibrary& lib) : th_(th), lib_(lib) {}

  Pattern expand(const Pattern& p) {
    if (p.kind() != PatternKind::Notation) {
      if (p.children().empty()) return p;
      std::vector<Pattern> kids;
      bool changed = false;
      for (const auto& k : p.children()) {
        kids.push_back(expand(k));
        changed = changed || !(kids.back().id() == k.id());
      }
      return changed ? Pattern::make(p.kind(), p.name(), std::move(kids)) : p;
    }
    std::vector<Pattern> args;
    for (const auto& k : p.children()) args.push_back(expand(k));
    const NotationDef* def = lib_.find_notation(th_, p.name());
    if (!def) throw Error(ErrorCode::UnknownNotation, "unknown notation '" + p.name() + "'");
    if (def->params.size() != args.size())
      throw Error(ErrorCode::ArityMismatch, "notation '" + p.name() + "' takes " +
                                                std::to_string(def->params.size()) + " arguments, got " +
                                                std::to_string(args.size()));
    return instantiate(*def, expanded_body(*def), args);
  }

 private:
  const Pattern& expanded_body(const NotationDef& def) {
    auto it = bodies_.find(&def);
    if (it != bodies_.end()) return it->second;
    if (!in_progress_.insert(&def).second)
      throw Error(ErrorCode::InvalidArgument, "notation '" + def.head + "' is cyclic");
    Pattern body = expand(def.body);
    in_progress_.erase(&def);
    return bodies_.emplace(&def, std::move(body)).first->second;
  }

  Pattern instantiate(const NotationDef& def, const Pattern& body, const std::vector<Pattern>& args) {
    std::map<std::string, Pattern> env;
    arg_vars_.clear();
    for (std::size_t i = 0; i < args.size(); ++i) {
      env.emplace(def.params[i], args[i]);
      const FreeVars fv = free_vars(args[i]);
      arg_vars_.insert(fv.element_vars.begin(), fv.element_vars.end());
      arg_vars_.insert(fv.set_vars.begin(), fv.set_vars.end());
    }
    std::set<std::string> avoid = arg_vars_;
    collect_names(body, avoid);
    return walk(def, body, env, avoid);
  }

  Pattern walk(const NotationDef& def, const Pattern& p, std::map<std::string, Pattern>& env,
               std::set<std::string>& avoid) {
    if (is_variable(p)) {
      auto it = env.find(p.name());
      return it == env.end() ? p : it->second;
    }
    if (is_binder_kind(p.kind())) {
      const std::string& v = p.name();
      const bool param = std::find(def.params.begin(), def.params.end(), v) != def.params.end();
      std::string bound = v;
      Pattern var_node;
      if (param) {
        // The argument names the binder; capture of its free occurrences in
        // the other arguments is the point of such notations.
        const Pattern& arg = env.at(v);
        const bool want_element = p.kind() == PatternKind::Exists || p.kind() == PatternKind::Forall;
        if (!is_variable(arg) || (arg.kind() == PatternKind::ElementVar) != want_element)
          throw Error(ErrorCode::InvalidArgument, "argument '" + print_pattern(arg) + "' of '" +
                                                      def.head + "' must be a " +
                                                      (want_element ? "element" : "set") + " variable");
        bound = arg.name();
        var_node = arg;
      } else {
        if (arg_vars_.count(v)) bound = fresh_name(v, avoid);
        avoid.insert(bound);
        var_node = is_element_var_name(bound) ? Pattern::evar(bound) : Pattern::svar(bound);
      }
      auto saved = env.find(v) == env.end() ? std::optional<Pattern>() : std::optional<Pattern>(env.at(v));
      env.insert_or_assign(v, var_node);
      Pattern body = walk(def, p.body(), env, avoid);
      if (saved) env.insert_or_assign(v, *saved);
      else env.erase(v);
      return Pattern::make(p.kind(), bound, {std::move(body)});
    }
    if (p.children().empty()) return p;
    std::vector<Pattern> kids;
    for (const auto& k : p.children()) kids.push_back(walk(def, k, env, avoid));
    return Pattern::make(p.kind(), p.name(), std::move(kids));
  }

  const Theory& th_;
  const TheoryLibrary& lib_;
  std::map<const NotationDef*, Pattern> bodies_;
  std::set<const NotationDef*> in_progress_;
  std::set<std::string> arg_vars_;
};

}  // namespace

Pattern expand_notation(const Theory& th, const Pattern& p, const TheoryLibrary& lib) {
  return Expander(th, lib).expand(p);
}

// ---------------------------------------------------------------------------
// checking

const char* axiom_status_name(AxiomStatus s) {
  switch (s) {
    case AxiomStatus::Pass: return "pass";
    case AxiomStatus::Fail: return "fail";
    case AxiomStatus::BudgetExceeded: return "budget";
    case AxiomStatus::Error: return "error";
  }
  return "?";
}

std::vector<AxiomResult> check_axioms(const Model& m, const Theory& th, std::uint64_t budget,
                                      const TheoryLibrary& lib) {
  Evaluator ev(m);
  return check_axioms(ev, th, budget, lib);
}

std::vector<AxiomResult> check_axioms(Evaluator& ev, const Theory& th, std::uint64_t budget,
                                      const TheoryLibrary& lib) {
  std::vector<AxiomResult> out;
  for (const auto& ax : th.axioms) {
    AxiomResult r{ax.label, AxiomStatus::Pass, ""};
    try {
      const Pattern p = expand_notation(th, ax.pattern, lib);
      if (!holds(ev, p, budget)) r.status = AxiomStatus::Fail;
    } catch (const Error& e) {
      r.status = e.code() == ErrorCode::BudgetExceeded ? AxiomStatus::BudgetExceeded : AxiomStatus::Error;
      r.message = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

Model canonical_equality_extension(const Model& m) {
  if (m.has_symbol("def"))
    throw Error(ErrorCode::SymbolClash, "model already interprets 'def'");
  Model out = m;
  std::set<std::string> names(m.element_names().begin(), m.element_names().end());
  const std::string dname = names.count("def") ? fresh_name("def", names) : "def";
  const Element d = out.add_element(dname);
  for (Element a = 0; a < out.size(); ++a)
    for (Element b = 0; b < out.size(); ++b) out.add_app(d, a, b);
  out.add_to_symbol("def", d);
  return out;
}

}  // namespace mlcf
