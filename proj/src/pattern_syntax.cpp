// Surface syntax for patterns: a hand-written lexer plus a precedence-climbing
// parser, and the matching printer.
//
//   p ::= Bot | Top | ident | ident '{' p (',' p)* '}' | p p | not p
//       | p /\ p | p \/ p | p -> p | (exists|forall) x . p | (mu|nu) X . p | ( p )
//
// Tightest to loosest: application (left), not, /\ (left), \/ (left),
// -> (right). Binders extend as far right as possible.

#include <cctype>
#include <sstream>
#include <vector>

#include "mlcf/error.hpp"
#include "mlcf/pattern.hpp"

namespace mlcf {

namespace {

enum class Tok { Ident, LParen, RParen, LBrace, RBrace, Comma, Dot, And, Or, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

[[noreturn]] void syntax_error(int line, int col, const std::string& msg) {
  std::ostringstream os;
  os << "syntax error at " << line << ":" << col << ": " << msg;
  throw Error(ErrorCode::Parse, os.str());
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const int l = line, cl = col;
    auto two = [&](const char* s) { return src.substr(i, 2) == s; };
    if (two("/\\")) {
      out.push_back({Tok::And, "/\\", l, cl});
      advance(2);
    } else if (two("\\/")) {
      out.push_back({Tok::Or, "\\/", l, cl});
      advance(2);
    } else if (two("->")) {
      out.push_back({Tok::Arrow, "->", l, cl});
      advance(2);
    } else if (c == '(' || c == ')' || c == '{' || c == '}' || c == ',' || c == '.') {
      static constexpr std::pair<char, Tok> kSingles[] = {
          {'(', Tok::LParen}, {')', Tok::RParen}, {'{', Tok::LBrace},
          {'}', Tok::RBrace}, {',', Tok::Comma},  {'.', Tok::Dot}};
      for (auto [ch, t] : kSingles)
        if (ch == c) out.push_back({t, std::string(1, c), l, cl});
      advance(1);
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                src[j] == '_' || src[j] == '\''))
        ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
    } else {
      syntax_error(l, cl, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool is_keyword(const std::string& s) {
  return s == "Bot" || s == "Top" || s == "not" || s == "exists" || s == "forall" ||
         s == "mu" || s == "nu";
}

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig, const std::set<std::string>& params)
      : toks_(lex(text)), sig_(sig) {
    for (const auto& p : params) bound_.push_back(p);
  }

  Pattern parse() {
    Pattern p = implies();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return p;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const {
    syntax_error(peek().line, peek().col, msg);
  }
  void expect(Tok t, const char* what) {
    if (peek().kind != t) fail(std::string("expected ") + what);
    ++pos_;
  }
  bool at_keyword(const char* kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }

  Pattern implies() {
    Pattern lhs = disjunction();
    if (peek().kind == Tok::Arrow) {
      ++pos_;
      return Pattern::implies(std::move(lhs), implies());
    }
    return lhs;
  }

  Pattern disjunction() {
    Pattern lhs = conjunction();
    while (peek().kind == Tok::Or) {
      ++pos_;
      lhs = Pattern::disj(std::move(lhs), conjunction());
    }
    return lhs;
  }

  Pattern conjunction() {
    Pattern lhs = negation();
    while (peek().kind == Tok::And) {
      ++pos_;
      lhs = Pattern::conj(std::move(lhs), negation());
    }
    return lhs;
  }

  Pattern negation() {
    if (at_keyword("not")) {
      ++pos_;
      return Pattern::negation(negation());
    }
    return application();
  }

  bool starts_primary() const {
    const auto& t = peek();
    if (t.kind == Tok::LParen) return true;
    return t.kind == Tok::Ident && t.text != "not";
  }

  Pattern application() {
    Pattern lhs = primary();
    while (starts_primary()) lhs = Pattern::app(std::move(lhs), primary());
    return lhs;
  }

  Pattern primary() {
    const Token t = peek();
    if (t.kind == Tok::LParen) {
      ++pos_;
      Pattern p = implies();
      expect(Tok::RParen, "')'");
      return p;
    }
    if (t.kind != Tok::Ident) fail(t.kind == Tok::End ? "unexpected end of input"
                                                      : "unexpected '" + t.text + "'");
    ++pos_;
    if (t.text == "Bot") return Pattern::bot();
    if (t.text == "Top") return Pattern::top();
    if (t.text == "exists" || t.text == "forall" || t.text == "mu" || t.text == "nu")
      return binder(t);
    if (peek().kind == Tok::LBrace) return notation(t);
    return identifier(t);
  }

  Pattern binder(const Token& kw) {
    const Token v = peek();
    if (v.kind != Tok::Ident || is_keyword(v.text)) fail("expected a variable after '" + kw.text + "'");
    ++pos_;
    const bool element = kw.text == "exists" || kw.text == "forall";
    if (element && !is_element_var_name(v.text))
      syntax_error(v.line, v.col, "'" + v.text + "' is not an element variable name");
    if (!element && !is_set_var_name(v.text))
      syntax_error(v.line, v.col, "'" + v.text + "' is not a set variable name");
    expect(Tok::Dot, "'.'");
    bound_.push_back(v.text);
    Pattern body = implies();
    bound_.pop_back();
    if (kw.text == "exists") return Pattern::exists(v.text, std::move(body));
    if (kw.text == "forall") return Pattern::forall(v.text, std::move(body));
    if (kw.text == "mu") return Pattern::mu(v.text, std::move(body));
    return Pattern::nu(v.text, std::move(body));
  }

  Pattern notation(const Token& head) {
    expect(Tok::LBrace, "'{'");
    std::vector<Pattern> args;
    if (peek().kind != Tok::RBrace) {
      args.push_back(implies());
      while (peek().kind == Tok::Comma) {
        ++pos_;
        args.push_back(implies());
      }
    }
    expect(Tok::RBrace, "'}'");
    return Pattern::notation(head.text, std::move(args));
  }

  Pattern identifier(const Token& t) {
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
      if (*it == t.text) return variable(t);
    if (sig_.contains(t.text)) return Pattern::sym(t.text);
    return variable(t);
  }

  Pattern variable(const Token& t) {
    if (is_element_var_name(t.text)) return Pattern::evar(t.text);
    if (is_set_var_name(t.text)) return Pattern::svar(t.text);
    syntax_error(t.line, t.col, "unknown identifier '" + t.text + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Signature& sig_;
  std::vector<std::string> bound_;
};

// Printer precedence levels, loosest first.
enum Level { kBinder = 0, kImplies = 1, kOr = 2, kAnd = 3, kNot = 4, kApp = 5, kAtom = 6 };

int level_of(const Pattern& p) {
  switch (p.kind()) {
    case PatternKind::Implies: return kImplies;
    case PatternKind::Or: return kOr;
    case PatternKind::And: return kAnd;
    case PatternKind::Not: return kNot;
    case PatternKind::App: return kApp;
    case PatternKind::Exists:
    case PatternKind::Forall:
    case PatternKind::Mu:
    case PatternKind::Nu: return kBinder;
    default: return kAtom;
  }
}

void print_into(const Pattern& p, int ctx, std::string& out) {
  const int lvl = level_of(p);
  const bool parens = lvl < ctx || (lvl == kBinder && ctx > kBinder);
  if (parens) out += '(';
  switch (p.kind()) {
    case PatternKind::ElementVar:
    case PatternKind::SetVar:
    case PatternKind::Symbol:
      out += p.name();
      break;
    case PatternKind::Bot: out += "Bot"; break;
    case PatternKind::Top: out += "Top"; break;
    case PatternKind::App:
      print_into(p.left(), kApp, out);
      out += ' ';
      print_into(p.right(), kAtom, out);
      break;
    case PatternKind::Implies:
      print_into(p.left(), kOr, out);
      out += " -> ";
      print_into(p.right(), kImplies, out);
      break;
    case PatternKind::Or:
      print_into(p.left(), kOr, out);
      out += " \\/ ";
      print_into(p.right(), kAnd, out);
      break;
    case PatternKind::And:
      print_into(p.left(), kAnd, out);
      out += " /\\ ";
      print_into(p.right(), kNot, out);
      break;
    case PatternKind::Not:
      out += "not ";
      print_into(p.body(), kNot, out);
      break;
    case PatternKind::Exists:
    case PatternKind::Forall:
    case PatternKind::Mu:
    case PatternKind::Nu: {
      static constexpr const char* kWords[] = {"exists", "forall", "mu", "nu"};
      const int idx = p.kind() == PatternKind::Exists   ? 0
                      : p.kind() == PatternKind::Forall ? 1
                      : p.kind() == PatternKind::Mu     ? 2
                                                        : 3;
      out += kWords[idx];
      out += ' ';
      out += p.name();
      out += " . ";
      print_into(p.body(), kBinder, out);
      break;
    }
    case PatternKind::Notation:
      out += p.name();
      out += '{';
      for (std::size_t i = 0; i < p.children().size(); ++i) {
        if (i) out += ", ";
        print_into(p.child(i), kBinder, out);
      }
      out += '}';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

Pattern parse_pattern(std::string_view text, const Signature& sig,
                      const std::set<std::string>& params) {
  return Parser(text, sig, params).parse();
}

std::string print_pattern(const Pattern& p) {
  std::string out;
  print_into(p, kBinder, out);
  return out;
}

}  // namespace mlcf
