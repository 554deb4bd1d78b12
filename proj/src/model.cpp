#include "mlcf/model.hpp"

#include <algorithm>
#include <json.hpp>
#include <sstream>

#include "mlcf/error.hpp"

namespace mlcf {

using json = nlohmann::json;

Element Model::add_element(const std::string& name) {
  if (name.empty()) throw Error(ErrorCode::InvalidModel, "empty element name");
  if (index_.count(name)) throw Error(ErrorCode::InvalidModel, "duplicate element '" + name + "'");
  const auto e = static_cast<Element>(names_.size());
  names_.push_back(name);
  index_.emplace(name, e);
  return e;
}

Element Model::intern(const std::string& name) {
  if (auto e = find(name)) return *e;
  return add_element(name);
}

std::optional<Element> Model::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Element Model::element(const std::string& name) const {
  if (auto e = find(name)) return *e;
  throw Error(ErrorCode::InvalidModel, "unknown element '" + name + "'");
}

void Model::add_app(Element fn, Element arg, Element result) {
  auto& v = app_[{fn, arg}];
  auto it = std::lower_bound(v.begin(), v.end(), result);
  if (it == v.end() || *it != result) v.insert(it, result);
}

const std::vector<Element>& Model::app(Element fn, Element arg) const {
  static const std::vector<Element> kEmpty;
  auto it = app_.find({fn, arg});
  return it == app_.end() ? kEmpty : it->second;
}

void Model::declare_symbol(const std::string& name) {
  if (!is_identifier(name)) throw Error(ErrorCode::InvalidModel, "bad symbol name '" + name + "'");
  symbols_[name];
}

void Model::add_to_symbol(const std::string& name, Element e) {
  declare_symbol(name);
  auto& v = symbols_[name];
  auto it = std::lower_bound(v.begin(), v.end(), e);
  if (it == v.end() || *it != e) v.insert(it, e);
}

const std::vector<Element>& Model::symbol(const std::string& name) const {
  auto it = symbols_.find(name);
  if (it == symbols_.end()) throw Error(ErrorCode::UnknownSymbol, "model does not interpret '" + name + "'");
  return it->second;
}

Signature Model::signature() const {
  Signature sig;
  for (const auto& [name, _] : symbols_) sig.insert(name);
  return sig;
}

ElementSet Model::make_set(const std::vector<Element>& elems) const {
  ElementSet s(size());
  for (auto e : elems) s.insert(e);
  return s;
}

void Model::validate() const {
  if (names_.empty()) throw Error(ErrorCode::InvalidModel, "carrier must be nonempty");
}

Model model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("model JSON: ") + e.what());
  }
  Model m;
  try {
    for (const auto& n : j.at("carrier")) m.add_element(n.get<std::string>());
    if (j.contains("app")) {
      for (const auto& [key, targets] : j.at("app").items()) {
        std::istringstream is(key);
        std::string a, b, extra;
        if (!(is >> a >> b) || (is >> extra))
          throw Error(ErrorCode::InvalidModel, "app key must be \"fn arg\": '" + key + "'");
        const Element fa = m.element(a), fb = m.element(b);
        for (const auto& t : targets) m.add_app(fa, fb, m.element(t.get<std::string>()));
      }
    }
    if (j.contains("symbols")) {
      for (const auto& [name, elems] : j.at("symbols").items()) {
        m.declare_symbol(name);
        for (const auto& e : elems) m.add_to_symbol(name, m.element(e.get<std::string>()));
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidModel, std::string("model JSON: ") + e.what());
  }
  m.validate();
  return m;
}

std::string model_to_json(const Model& m) {
  json j;
  j["carrier"] = m.element_names();
  json app = json::object();
  for (const auto& [key, targets] : m.app_table()) {
    json t = json::array();
    for (auto e : targets) t.push_back(m.name_of(e));
    app[m.name_of(key.first) + " " + m.name_of(key.second)] = t;
  }
  j["app"] = app;
  json syms = json::object();
  for (const auto& [name, elems] : m.symbols()) {
    json t = json::array();
    for (auto e : elems) t.push_back(m.name_of(e));
    syms[name] = t;
  }
  j["symbols"] = syms;
  return j.dump(2);
}

Valuation parse_valuation(const Model& m, const std::string& text) {
  Valuation rho;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == ',')) ++i;
  };
  auto read_token = [&] {
    std::size_t j = i;
    while (j < text.size() && text[j] != ',' && text[j] != '=' && text[j] != '}' && text[j] != ' ')
      ++j;
    std::string tok = text.substr(i, j - i);
    i = j;
    return tok;
  };
  // Element names may themselves contain commas (quotient classes do), so
  // take the longest comma-separated run that names an element.
  auto read_element = [&] {
    const std::size_t start = i;
    std::string best = read_token();
    std::size_t best_end = i;
    bool found = m.find(best).has_value();
    for (std::size_t j = i; j < text.size() && text[j] == ',';) {
      i = j + 1;
      read_token();
      j = i;
      const std::string longer = text.substr(start, j - start);
      if (m.find(longer)) {
        best = longer;
        best_end = j;
        found = true;
      }
    }
    i = best_end;
    if (!found) throw Error(ErrorCode::InvalidArgument, "valuation: unknown element '" + best + "'");
    return *m.find(best);
  };
  skip_ws();
  while (i < text.size()) {
    const std::string var = read_token();
    if (i >= text.size() || text[i] != '=')
      throw Error(ErrorCode::Parse, "valuation: expected '=' after '" + var + "'");
    ++i;
    if (is_element_var_name(var)) {
      rho.evals[var] = read_element();
    } else if (is_set_var_name(var)) {
      if (i >= text.size() || text[i] != '{')
        throw Error(ErrorCode::Parse, "valuation: set variable '" + var + "' needs {...}");
      ++i;
      ElementSet s = m.empty_set();
      while (true) {
        skip_ws();
        if (i >= text.size()) throw Error(ErrorCode::Parse, "valuation: unterminated set");
        if (text[i] == '}') {
          ++i;
          break;
        }
        s.insert(read_element());
      }
      rho.svals[var] = s;
    } else {
      throw Error(ErrorCode::Parse, "valuation: '" + var + "' is not a variable name");
    }
    skip_ws();
  }
  return rho;
}

std::vector<std::string> sorted_names(const Model& m, const ElementSet& s) {
  std::vector<std::string> out;
  s.for_each([&](Element e) { out.push_back(m.name_of(e)); });
  std::sort(out.begin(), out.end());
  return out;
}

std::string format_set(const Model& m, const ElementSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& n : sorted_names(m, s)) {
    if (!first) out += ", ";
    out += n;
    first = false;
  }
  return out + "}";
}

}  // namespace mlcf
