#include <algorithm>
#include <map>

#include <json.hpp>

#include "mlcf/error.hpp"
#include "mlcf/fixpoint.hpp"
#include "labeling.hpp"

namespace mlcf {

namespace {

using detail::for_each_labeling;

template <class Child>
std::string tree_text(const Value& shape, const std::vector<std::pair<Value, Child>>& children) {
  if (children.empty()) return shape.str();
  std::string out = shape.str() + "[";
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i) out += ",";
    out += children[i].first.str() + ":" + children[i].second->str();
  }
  return out + "]";
}

BigCount level_size(const Container& c, const std::vector<Value>& shapes, std::size_t pool) {
  BigCount total = 0;
  for (const auto& a : shapes) {
    BigCount t = 1;
    for (std::size_t i = 0; i < fiber_of(c, a).size(); ++i) t *= pool;
    total += t;
  }
  return total;
}

void check_cap(const BigCount& n, std::uint64_t cap, const char* what) {
  if (n > cap)
    throw Error(ErrorCode::SizeCapExceeded,
                std::string(what) + " would have " + n.str() + " elements, cap is " + std::to_string(cap));
}

}  // namespace

ConsTreePtr make_tree(Value shape, std::vector<std::pair<Value, ConsTreePtr>> children) {
  auto t = std::make_shared<ConsTree>();
  t->text = tree_text(shape, children);
  t->shape = std::move(shape);
  t->children = std::move(children);
  return t;
}

InitialChain initial_approximants(const Container& c, std::size_t n, std::uint64_t cap) {
  const auto shapes = enumerate_shapes(c, cap);
  std::vector<std::vector<Value>> fibers;
  for (const auto& a : shapes) fibers.push_back(fiber_of(c, a));

  InitialChain chain;
  chain.levels.emplace_back();
  for (std::size_t k = 1; k <= n; ++k) {
    const auto& prev = chain.levels.back();
    check_cap(level_size(c, shapes, prev.size()), cap, "approximant");
    std::vector<ConsTreePtr> level;
    for (std::size_t s = 0; s < shapes.size(); ++s) {
      for_each_labeling(fibers[s].size(), prev, [&](const std::vector<ConsTreePtr>& labels) {
        std::vector<std::pair<Value, ConsTreePtr>> kids;
        for (std::size_t i = 0; i < labels.size(); ++i) kids.emplace_back(fibers[s][i], labels[i]);
        level.push_back(make_tree(shapes[s], std::move(kids)));
      });
    }
    std::sort(level.begin(), level.end(),
              [](const ConsTreePtr& a, const ConsTreePtr& b) { return a->str() < b->str(); });
    // The chain is increasing, so equal sizes mean equal sets.
    if (!chain.stabilized_at && level.size() == prev.size()) chain.stabilized_at = k - 1;
    chain.levels.push_back(std::move(level));
  }
  return chain;
}

BehaviorPtr make_behavior(std::size_t depth, Value shape,
                          std::vector<std::pair<Value, BehaviorPtr>> children) {
  auto t = std::make_shared<BehaviorTree>();
  t->depth = depth;
  t->text = tree_text(shape, children);
  t->shape = std::move(shape);
  t->children = std::move(children);
  return t;
}

BehaviorPtr truncate(const BehaviorPtr& t, std::size_t depth) {
  if (depth == 0) throw Error(ErrorCode::InvalidArgument, "behavior depth must be at least 1");
  if (depth == 1) return make_behavior(1, t->shape, {});
  std::vector<std::pair<Value, BehaviorPtr>> kids;
  for (const auto& [pos, child] : t->children) kids.emplace_back(pos, truncate(child, depth - 1));
  return make_behavior(depth, t->shape, std::move(kids));
}

std::vector<std::vector<BehaviorPtr>> final_approximants(const Container& c, std::size_t n,
                                                         std::uint64_t cap) {
  const auto shapes = enumerate_shapes(c, cap);
  std::vector<std::vector<Value>> fibers;
  for (const auto& a : shapes) fibers.push_back(fiber_of(c, a));

  std::vector<std::vector<BehaviorPtr>> out;
  if (n == 0) return out;
  std::vector<BehaviorPtr> level;
  for (const auto& a : shapes) level.push_back(make_behavior(1, a, {}));
  out.push_back(level);
  for (std::size_t k = 2; k <= n; ++k) {
    const auto& prev = out.back();
    check_cap(level_size(c, shapes, prev.size()), cap, "behavior level");
    std::vector<BehaviorPtr> next;
    for (std::size_t s = 0; s < shapes.size(); ++s) {
      for_each_labeling(fibers[s].size(), prev, [&](const std::vector<BehaviorPtr>& labels) {
        std::vector<std::pair<Value, BehaviorPtr>> kids;
        for (std::size_t i = 0; i < labels.size(); ++i) kids.emplace_back(fibers[s][i], labels[i]);
        next.push_back(make_behavior(k, shapes[s], std::move(kids)));
      });
    }
    out.push_back(std::move(next));
  }
  return out;
}

// ---------------------------------------------------------------------------
// coalgebras

FiniteCoalgebra coalgebra_from_json(const std::string& text, const Container& c) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("coalgebra JSON: ") + e.what());
  }
  FiniteCoalgebra g;
  std::map<std::string, std::size_t> index;
  std::map<std::string, Value> shapes;
  for (const auto& a : enumerate_shapes(c)) shapes.emplace(a.str(), a);
  try {
    for (const auto& s : j.at("states")) {
      const std::string name = s.get<std::string>();
      if (!index.emplace(name, g.states.size()).second)
        throw Error(ErrorCode::InvalidArgument, "duplicate state '" + name + "'");
      g.states.push_back(name);
    }
    const auto& st = j.at("structure");
    for (const auto& name : g.states) {
      if (!st.contains(name)) throw Error(ErrorCode::InvalidArgument, "state '" + name + "' has no structure");
      const auto& entry = st.at(name);
      const std::string shape = entry.at("shape").get<std::string>();
      auto it = shapes.find(shape);
      if (it == shapes.end())
        throw Error(ErrorCode::InvalidArgument, "state '" + name + "': unknown shape '" + shape + "'");
      FiniteCoalgebra::Step step{it->second, {}};
      const auto fiber = fiber_of(c, it->second);
      const nlohmann::json next = entry.contains("next") ? entry.at("next") : nlohmann::json::object();
      if (next.size() != fiber.size())
        throw Error(ErrorCode::InvalidArgument, "state '" + name + "' must name " +
                                                    std::to_string(fiber.size()) + " successors");
      for (const auto& p : fiber) {
        if (!next.contains(p.str()))
          throw Error(ErrorCode::InvalidArgument,
                      "state '" + name + "' has no successor at position '" + p.str() + "'");
        const std::string target = next.at(p.str()).get<std::string>();
        auto t = index.find(target);
        if (t == index.end())
          throw Error(ErrorCode::InvalidArgument, "state '" + name + "': unknown successor '" + target + "'");
        step.next.emplace_back(p, t->second);
      }
      g.structure.push_back(std::move(step));
    }
    if (st.size() != g.states.size())
      throw Error(ErrorCode::InvalidArgument, "structure names states that are not declared");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("coalgebra JSON: ") + e.what());
  }
  return g;
}

std::string coalgebra_to_json(const FiniteCoalgebra& g) {
  nlohmann::ordered_json j;
  j["states"] = g.states;
  nlohmann::ordered_json st = nlohmann::ordered_json::object();
  for (std::size_t s = 0; s < g.states.size(); ++s) {
    nlohmann::ordered_json next = nlohmann::ordered_json::object();
    for (const auto& [p, t] : g.structure[s].next) next[p.str()] = g.states[t];
    st[g.states[s]] = {{"shape", g.structure[s].shape.str()}, {"next", next}};
  }
  j["structure"] = st;
  return j.dump(2);
}

BehaviorPtr behavior_of(const FiniteCoalgebra& g, std::size_t state, std::size_t depth) {
  if (depth == 0) throw Error(ErrorCode::InvalidArgument, "behavior depth must be at least 1");
  const auto& step = g.structure.at(state);
  if (depth == 1) return make_behavior(1, step.shape, {});
  std::vector<std::pair<Value, BehaviorPtr>> kids;
  for (const auto& [p, t] : step.next) kids.emplace_back(p, behavior_of(g, t, depth - 1));
  return make_behavior(depth, step.shape, std::move(kids));
}

const std::vector<std::size_t>& Partition::stage(std::size_t k) const {
  if (stages.empty() || k == 0) return block;
  return stages[std::min(k, stages.size()) - 1];
}

Partition minimize_bisimilarity(const FiniteCoalgebra& g) {
  Partition part;
  const std::size_t n = g.states.size();
  auto renumber = [&](const std::vector<std::string>& keys) {
    std::map<std::string, std::size_t> ids;
    std::vector<std::size_t> blocks(n);
    for (std::size_t s = 0; s < n; ++s) blocks[s] = ids.emplace(keys[s], ids.size()).first->second;
    return std::make_pair(blocks, ids.size());
  };
  std::vector<std::string> keys(n);
  for (std::size_t s = 0; s < n; ++s) keys[s] = g.structure[s].shape.str();
  auto [blocks, count] = renumber(keys);
  part.stages.push_back(blocks);
  while (n > 0) {
    for (std::size_t s = 0; s < n; ++s) {
      keys[s] = g.structure[s].shape.str() + "|";
      for (const auto& [p, t] : g.structure[s].next) keys[s] += std::to_string(blocks[t]) + ",";
    }
    auto [next, next_count] = renumber(keys);
    // Refinement only splits blocks, so an unchanged count means a fixed point.
    if (next_count == count) break;
    blocks = next;
    count = next_count;
    part.stages.push_back(blocks);
  }
  part.block = blocks;
  part.count = count;
  return part;
}

}  // namespace mlcf
