#include "netdisplay/stability.hpp"

#include <sstream>

namespace netdisplay {

namespace {

void require_valid(const Network& net) {
  auto outcome = validate(net, false);
  if (!outcome.ok()) throw InputError("invalid network: " + outcome.violations.front().message);
}

}  // namespace

// Cooper, Harvey & Kennedy iterative scheme. On a DAG a single pass in
// topological order already reaches the fixpoint, because every parent is
// final before its child is processed.
std::vector<VertexId> immediate_dominators(const Network& net) {
  const auto order = net.topological_order();
  std::vector<std::size_t> rank(net.id_bound(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i].index()] = i;

  std::vector<VertexId> idom(net.id_bound());
  const VertexId root = net.root();
  idom[root.index()] = root;

  auto intersect = [&](VertexId a, VertexId b) {
    while (a != b) {
      while (rank[a.index()] > rank[b.index()]) a = idom[a.index()];
      while (rank[b.index()] > rank[a.index()]) b = idom[b.index()];
    }
    return a;
  };

  for (VertexId v : order) {
    if (v == root) continue;
    VertexId acc;
    for (VertexId p : net.parents(v)) {
      if (!idom[p.index()].valid()) continue;
      acc = acc.valid() ? intersect(acc, p) : p;
    }
    idom[v.index()] = acc;
  }
  return idom;
}

StabilityReport stability(const Network& net) {
  require_valid(net);
  const auto order = net.topological_order();
  const auto idom = immediate_dominators(net);

  // Every leaf witnesses itself; in reverse topological order each vertex
  // hands its witness to its immediate dominator, which is an ancestor and
  // therefore processed later.
  std::vector<std::optional<VertexId>> witness(net.id_bound());
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    VertexId v = *it;
    if (net.is_leaf(v)) witness[v.index()] = v;
    if (v == net.root() || !witness[v.index()]) continue;
    auto& up = witness[idom[v.index()].index()];
    if (!up) up = witness[v.index()];
  }
  return StabilityReport(std::move(witness));
}

StabilityReport stability_by_deletion(const Network& net) {
  require_valid(net);
  const auto leaves = net.leaves();
  std::vector<std::optional<VertexId>> witness(net.id_bound());
  std::vector<char> seen(net.id_bound());
  std::vector<VertexId> stack;

  for (VertexId v : net.vertices()) {
    if (net.is_leaf(v)) {
      witness[v.index()] = v;
      continue;
    }
    if (v == net.root()) {
      witness[v.index()] = leaves.front();
      continue;
    }
    std::fill(seen.begin(), seen.end(), 0);
    seen[v.index()] = 1;
    seen[net.root().index()] = 1;
    stack.assign(1, net.root());
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      for (VertexId c : net.children(x)) {
        if (!seen[c.index()]) {
          seen[c.index()] = 1;
          stack.push_back(c);
        }
      }
    }
    for (VertexId leaf : leaves) {
      if (!seen[leaf.index()]) {
        witness[v.index()] = leaf;
        break;
      }
    }
  }
  return StabilityReport(std::move(witness));
}

std::vector<std::string> stability_fact_violations(const Network& net,
                                                   const StabilityReport& report) {
  std::vector<std::string> out;
  auto say = [&](VertexId v, const char* what) {
    std::ostringstream os;
    os << v << ": " << what;
    out.push_back(os.str());
  };
  auto is_tree_vertex = [&](VertexId v) {
    return net.indegree(v) == 1 && net.outdegree(v) >= 2;
  };

  for (VertexId v : net.vertices()) {
    for (VertexId c : net.children(v)) {
      if (is_tree_vertex(c) && report.stable(c) && !report.stable(v)) {
        say(v, "has a stable tree-vertex child but is unstable");
      }
    }
    if (net.is_reticulation(v) && net.outdegree(v) == 1) {
      VertexId c = net.children(v).front();
      const bool expected = net.is_leaf(c) || (is_tree_vertex(c) && report.stable(c));
      if (expected != report.stable(v)) {
        say(v, "reticulation stability disagrees with its child");
      }
    }
    if (is_tree_vertex(v) && report.stable(v) && net.outdegree(v) == 2) {
      auto ch = net.children(v);
      if (net.is_reticulation(ch[0]) && net.is_reticulation(ch[1])) {
        say(v, "stable tree vertex with two reticulation children");
      }
    }
  }
  return out;
}

bool is_tree_child(const Network& net, const StabilityReport& report) {
  for (VertexId v : net.vertices()) {
    if (!report.stable(v)) return false;
  }
  return true;
}

bool is_reticulation_visible(const Network& net, const StabilityReport& report) {
  for (VertexId v : net.vertices()) {
    if (net.is_reticulation(v) && !report.stable(v)) return false;
  }
  return true;
}

bool is_nearly_stable(const Network& net, const StabilityReport& report) {
  for (VertexId v : net.vertices()) {
    if (report.stable(v)) continue;
    for (VertexId p : net.parents(v)) {
      if (!report.stable(p)) return false;
    }
  }
  return true;
}

bool is_subphylogeny_free(const Network& net) {
  const auto order = net.topological_order();
  std::vector<char> tree_like(net.id_bound(), 0);
  std::vector<std::size_t> leaves_below(net.id_bound(), 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    VertexId v = *it;
    if (net.is_leaf(v)) {
      tree_like[v.index()] = 1;
      leaves_below[v.index()] = 1;
      continue;
    }
    bool ok = !net.is_reticulation(v);
    std::size_t count = 0;
    for (VertexId c : net.children(v)) {
      ok = ok && tree_like[c.index()];
      count += leaves_below[c.index()];
    }
    tree_like[v.index()] = ok;
    leaves_below[v.index()] = count;
    if (ok && count >= 2) return false;
  }
  return true;
}

ClassFlags classify(const Network& net) { return classify(net, stability(net)); }

ClassFlags classify(const Network& net, const StabilityReport& report) {
  require_valid(net);
  ClassFlags f;
  f.binary = validate(net, true).ok();
  f.tree_child = is_tree_child(net, report);
  f.reticulation_visible = is_reticulation_visible(net, report);
  f.nearly_stable = is_nearly_stable(net, report);
  f.subphylogeny_free = is_subphylogeny_free(net);
  return f;
}

}  // namespace netdisplay
