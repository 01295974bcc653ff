#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace oracle {

std::vector<VertexId> leaves_cut_by(const Network& net, VertexId x) {
  std::vector<char> seen(net.id_bound(), 0);
  std::vector<VertexId> todo;
  if (net.root() != x) {
    todo.push_back(net.root());
    seen[net.root().index()] = 1;
  }
  while (!todo.empty()) {
    VertexId v = todo.back();
    todo.pop_back();
    for (VertexId c : net.children(v)) {
      if (c == x || seen[c.index()]) continue;
      seen[c.index()] = 1;
      todo.push_back(c);
    }
  }
  std::vector<VertexId> cut;
  for (VertexId l : net.leaves()) {
    if (!seen[l.index()]) cut.push_back(l);
  }
  return cut;
}

bool stable(const Network& net, VertexId x) { return !leaves_cut_by(net, x).empty(); }

bool tree_child(const Network& net) {
  for (VertexId v : net.vertices()) {
    if (!stable(net, v)) return false;
  }
  return true;
}

bool reticulation_visible(const Network& net) {
  for (VertexId v : net.vertices()) {
    if (net.indegree(v) >= 2 && !stable(net, v)) return false;
  }
  return true;
}

bool nearly_stable(const Network& net) {
  for (VertexId v : net.vertices()) {
    if (stable(net, v)) continue;
    for (VertexId p : net.parents(v)) {
      if (!stable(net, p)) return false;
    }
  }
  return true;
}

namespace {

std::set<Cluster> clusters_of(const Network& net, const std::vector<std::vector<VertexId>>& kids) {
  std::map<std::uint32_t, Cluster> memo;
  std::function<const Cluster&(VertexId)> below = [&](VertexId v) -> const Cluster& {
    auto it = memo.find(v.value);
    if (it != memo.end()) return it->second;
    Cluster c;
    if (kids[v.index()].empty() && !net.label(v).empty()) c.push_back(net.label(v));
    for (VertexId k : kids[v.index()]) {
      const Cluster& sub = below(k);
      c.insert(c.end(), sub.begin(), sub.end());
    }
    std::sort(c.begin(), c.end());
    return memo.emplace(v.value, std::move(c)).first->second;
  };
  std::set<Cluster> out;
  below(net.root());
  for (auto& [id, c] : memo) {
    if (!c.empty()) out.insert(c);
  }
  return out;
}

}  // namespace

std::set<Cluster> clusters(const Network& tree) {
  std::vector<std::vector<VertexId>> kids(tree.id_bound());
  for (VertexId v : tree.vertices()) {
    kids[v.index()].assign(tree.children(v).begin(), tree.children(v).end());
  }
  return clusters_of(tree, kids);
}

bool displays_by_clusters(const Network& net, const Network& tree) {
  const auto target = clusters(tree);
  std::vector<VertexId> rets;
  for (VertexId v : net.vertices()) {
    if (net.indegree(v) >= 2) rets.push_back(v);
  }
  std::vector<std::size_t> pick(rets.size(), 0);
  while (true) {
    std::vector<std::vector<VertexId>> kids(net.id_bound());
    for (VertexId v : net.vertices()) {
      for (VertexId c : net.children(v)) {
        const auto r = std::find(rets.begin(), rets.end(), c);
        if (r != rets.end() && net.parents(c)[pick[r - rets.begin()]] != v) continue;
        kids[v.index()].push_back(c);
      }
    }
    if (clusters_of(net, kids) == target) return true;
    std::size_t i = 0;
    for (; i < rets.size(); ++i) {
      if (++pick[i] < net.indegree(rets[i])) break;
      pick[i] = 0;
    }
    if (i == rets.size()) return false;
  }
}

namespace {

// Trees over labels[0..k) in nested-vector form, grown by inserting label k
// on every edge and above the root.
struct Node {
  std::string label;
  std::vector<int> kids;
};

std::string emit(const std::vector<Node>& t, int v) {
  if (t[v].kids.empty()) return t[v].label;
  return "(" + emit(t, t[v].kids[0]) + "," + emit(t, t[v].kids[1]) + ")";
}

void grow(std::vector<Node>& t, int root, const std::vector<std::string>& labels, std::size_t k,
          std::vector<std::string>& out) {
  if (k == labels.size()) {
    out.push_back(emit(t, root) + ";");
    return;
  }
  const int n = static_cast<int>(t.size());
  // Above the root.
  {
    auto u = t;
    u.push_back({labels[k], {}});
    u.push_back({"", {root, n}});
    grow(u, n + 1, labels, k + 1, out);
  }
  for (int v = 0; v < n; ++v) {
    for (std::size_t s = 0; s < t[v].kids.size(); ++s) {
      auto u = t;
      const int child = u[v].kids[s];
      u.push_back({labels[k], {}});
      u.push_back({"", {child, n}});
      u[v].kids[s] = n + 1;
      grow(u, root, labels, k + 1, out);
    }
  }
}

}  // namespace

std::vector<std::string> all_binary_trees(const std::vector<std::string>& labels) {
  std::vector<std::string> out;
  if (labels.empty()) return out;
  std::vector<Node> t{{labels[0], {}}};
  grow(t, 0, labels, 1, out);
  return out;
}

}  // namespace oracle
