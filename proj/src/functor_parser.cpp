// Functor DSL:
//   spec ::= decl* expr
//   decl ::= 'set' NAME '=' '{' [elem (',' elem)*] '}' ';'
//   expr ::= const(NAME) | Id | expr '+' expr | expr '*' expr | expr '^' NAME | '(' expr ')'
// with ^ binding tighter than *, and * tighter than +. One and Zero are built in.

#include <cctype>
#include <set>

#include "mlcf/container.hpp"
#include "mlcf/error.hpp"

namespace mlcf {

namespace {

class FunctorParser {
 public:
  explicit FunctorParser(const std::string& text) : src_(text) {}

  FunctorSpec parse() {
    FunctorSpec spec;
    skip();
    while (peek_word() == "set") {
      word();
      FiniteSet s;
      s.name = ident("set name");
      if (s.name == "One" || s.name == "Zero") fail("'" + s.name + "' is built in");
      if (spec.sets.count(s.name)) fail("set '" + s.name + "' declared twice");
      expect('=');
      expect('{');
      std::set<std::string> seen;
      if (!accept('}')) {
        do {
          const std::string e = ident("element name");
          if (!seen.insert(e).second) fail("duplicate element '" + e + "'");
          s.elements.push_back(e);
        } while (accept(','));
        expect('}');
      }
      expect(';');
      spec.sets.emplace(s.name, s);
      sets_ = &spec.sets;
    }
    sets_ = &spec.sets;
    spec.functor = sum();
    skip();
    if (pos_ != src_.size()) fail(std::string("unexpected '") + src_[pos_] + "'");
    return spec;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::Parse,
                "functor syntax error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string peek_word() {
    skip();
    std::size_t j = pos_;
    while (j < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) ++j;
    return src_.substr(pos_, j - pos_);
  }

  std::string word() {
    std::string w = peek_word();
    pos_ += w.size();
    return w;
  }

  std::string ident(const char* what) {
    std::string w = word();
    if (w.empty()) fail(std::string("expected ") + what);
    return w;
  }

  FiniteSet lookup(const std::string& name) {
    if (name == "One") return one_set();
    if (name == "Zero") return zero_set();
    auto it = sets_->find(name);
    if (it == sets_->end()) fail("undeclared set '" + name + "'");
    return it->second;
  }

  PolyFunctor sum() {
    PolyFunctor lhs = product();
    while (accept('+')) lhs = PolyFunctor::sum(std::move(lhs), product());
    return lhs;
  }

  PolyFunctor product() {
    PolyFunctor lhs = power();
    while (accept('*')) lhs = PolyFunctor::prod(std::move(lhs), power());
    return lhs;
  }

  PolyFunctor power() {
    PolyFunctor base = atom();
    while (accept('^')) base = PolyFunctor::exp(std::move(base), lookup(ident("set name")));
    return base;
  }

  PolyFunctor atom() {
    if (accept('(')) {
      PolyFunctor f = sum();
      expect(')');
      return f;
    }
    const std::string w = word();
    if (w == "Id") return PolyFunctor::id();
    if (w == "const") {
      expect('(');
      FiniteSet s = lookup(ident("set name"));
      expect(')');
      return PolyFunctor::constant(std::move(s));
    }
    if (w.empty()) fail(pos_ < src_.size() ? std::string("unexpected '") + src_[pos_] + "'"
                                           : "unexpected end of input");
    fail("unknown functor '" + w + "'");
  }

  std::string src_;
  std::size_t pos_ = 0;
  const std::map<std::string, FiniteSet>* sets_ = nullptr;
};

}  // namespace

FunctorSpec parse_functor(const std::string& text) { return FunctorParser(text).parse(); }

}  // namespace mlcf
