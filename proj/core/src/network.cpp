#include "netdisplay/network.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace netdisplay {

const Network::Node& Network::node(VertexId v) const {
  if (!contains(v)) {
    std::ostringstream os;
    os << "unknown vertex " << v;
    throw InputError(os.str());
  }
  return nodes_[v.index()];
}

std::size_t Network::leaf_count() const {
  std::size_t n = 0;
  for (const auto& nd : nodes_) {
    if (nd.alive && nd.children.empty()) ++n;
  }
  return n;
}

std::size_t Network::reticulation_count() const {
  std::size_t n = 0;
  for (const auto& nd : nodes_) {
    if (nd.alive && nd.parents.size() >= 2) ++n;
  }
  return n;
}

std::vector<VertexId> Network::vertices() const {
  std::vector<VertexId> out;
  out.reserve(alive_);
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].alive) out.emplace_back(i);
  }
  return out;
}

std::vector<VertexId> Network::leaves() const {
  std::vector<VertexId> out;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].alive && nodes_[i].children.empty()) out.emplace_back(i);
  }
  return out;
}

std::vector<VertexId> Network::reticulations() const {
  std::vector<VertexId> out;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].alive && nodes_[i].parents.size() >= 2) out.emplace_back(i);
  }
  return out;
}

std::vector<Branch> Network::branches() const {
  std::vector<Branch> out;
  out.reserve(branches_);
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].alive) continue;
    for (VertexId c : nodes_[i].children) out.push_back({VertexId(i), c});
  }
  return out;
}

bool Network::has_branch(VertexId tail, VertexId head) const {
  const auto& ch = node(tail).children;
  return std::find(ch.begin(), ch.end(), head) != ch.end();
}

std::optional<VertexId> Network::find_label(std::string_view label) const {
  auto it = by_label_.find(std::string(label));
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Network::labels() const {
  std::vector<std::string> out;
  out.reserve(by_label_.size());
  for (const auto& [label, v] : by_label_) out.push_back(label);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexId> Network::topological_order() const {
  std::vector<std::size_t> pending(nodes_.size(), 0);
  std::vector<VertexId> order;
  order.reserve(alive_);
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].alive) continue;
    pending[i] = nodes_[i].parents.size();
    if (pending[i] == 0) order.emplace_back(i);
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (VertexId c : nodes_[order[head].index()].children) {
      if (--pending[c.index()] == 0) order.push_back(c);
    }
  }
  if (order.size() != alive_) throw InputError("network contains a directed cycle");
  return order;
}

Network::Node& NetworkEditor::node(VertexId v) {
  if (!net_.contains(v)) {
    std::ostringstream os;
    os << "unknown vertex " << v;
    throw InputError(os.str());
  }
  return net_.nodes_[v.index()];
}

VertexId NetworkEditor::add_vertex(std::string label) {
  VertexId v(static_cast<std::uint32_t>(net_.nodes_.size()));
  net_.nodes_.emplace_back();
  ++net_.alive_;
  if (!label.empty()) set_label(v, std::move(label));
  return v;
}

void NetworkEditor::add_branch(VertexId tail, VertexId head) {
  node(tail).children.push_back(head);
  node(head).parents.push_back(tail);
  ++net_.branches_;
}

void NetworkEditor::remove_branch(VertexId tail, VertexId head) {
  auto& ch = node(tail).children;
  auto it = std::find(ch.begin(), ch.end(), head);
  if (it == ch.end()) {
    std::ostringstream os;
    os << "no branch " << Branch{tail, head};
    throw InputError(os.str());
  }
  ch.erase(it);
  auto& pa = node(head).parents;
  pa.erase(std::find(pa.begin(), pa.end(), tail));
  --net_.branches_;
}

void NetworkEditor::remove_vertex(VertexId v) {
  auto& nd = node(v);
  while (!nd.children.empty()) remove_branch(v, nd.children.back());
  while (!nd.parents.empty()) remove_branch(nd.parents.back(), v);
  if (!nd.label.empty()) net_.by_label_.erase(nd.label);
  nd.label.clear();
  nd.alive = false;
  --net_.alive_;
  if (net_.root_ == v) net_.root_ = VertexId{};
}

void NetworkEditor::set_label(VertexId v, std::string label) {
  auto& nd = node(v);
  if (!label.empty()) {
    auto it = net_.by_label_.find(label);
    if (it != net_.by_label_.end() && it->second != v) {
      throw InputError("duplicate leaf label '" + label + "'");
    }
  }
  if (!nd.label.empty()) net_.by_label_.erase(nd.label);
  nd.label = std::move(label);
  if (!nd.label.empty()) net_.by_label_[nd.label] = v;
}

std::string_view to_string(VertexKind k) {
  switch (k) {
    case VertexKind::root: return "root";
    case VertexKind::leaf: return "leaf";
    case VertexKind::tree_vertex: return "tree_vertex";
    case VertexKind::reticulation: return "reticulation";
  }
  return "?";
}

VertexKind vertex_kind(const Network& net, VertexId v) {
  if (net.indegree(v) == 0) return VertexKind::root;
  if (net.outdegree(v) == 0) return VertexKind::leaf;
  if (net.indegree(v) >= 2) return VertexKind::reticulation;
  return VertexKind::tree_vertex;
}

bool ValidationOutcome::has(ViolationKind k) const {
  return std::any_of(violations.begin(), violations.end(),
                     [k](const Violation& x) { return x.kind == k; });
}

namespace {

std::string describe(VertexId v, std::string_view what) {
  std::ostringstream os;
  os << what << " at " << v;
  return os.str();
}

}  // namespace

ValidationOutcome validate(const Network& net, bool require_binary) {
  ValidationOutcome out;
  auto report = [&](ViolationKind k, std::string msg, std::optional<VertexId> v = std::nullopt,
                    std::optional<Branch> b = std::nullopt) {
    out.violations.push_back({k, std::move(msg), v, b});
  };

  if (net.vertex_count() == 0) {
    report(ViolationKind::empty, "network has no vertices");
    return out;
  }

  std::vector<VertexId> sources;
  for (VertexId v : net.vertices()) {
    if (net.indegree(v) == 0) sources.push_back(v);
  }
  if (sources.empty()) {
    report(ViolationKind::no_root, "no vertex of indegree 0");
  } else if (sources.size() > 1) {
    for (std::size_t i = 1; i < sources.size(); ++i) {
      report(ViolationKind::multiple_roots, describe(sources[i], "extra indegree-0 vertex"),
             sources[i]);
    }
  }
  if (sources.size() == 1 && net.root() != sources.front()) {
    report(ViolationKind::no_root, "designated root is not the indegree-0 vertex");
  }

  try {
    (void)net.topological_order();
  } catch (const InputError&) {
    report(ViolationKind::cycle, "network contains a directed cycle");
  }

  if (net.contains(net.root())) {
    std::vector<char> seen(net.id_bound(), 0);
    std::vector<VertexId> stack{net.root()};
    seen[net.root().index()] = 1;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (VertexId c : net.children(v)) {
        if (!seen[c.index()]) {
          seen[c.index()] = 1;
          stack.push_back(c);
        }
      }
    }
    for (VertexId v : net.vertices()) {
      if (!seen[v.index()]) {
        report(ViolationKind::unreachable, describe(v, "vertex unreachable from root"), v);
      }
    }
  }

  for (VertexId v : net.vertices()) {
    const std::size_t in = net.indegree(v);
    const std::size_t outd = net.outdegree(v);
    if (in == 1 && outd == 1) {
      report(ViolationKind::suppressible_vertex, describe(v, "suppressible vertex"), v);
    }
    if (outd == 0 && net.label(v).empty()) {
      report(ViolationKind::unlabeled_leaf, describe(v, "unlabeled leaf"), v);
    }
    if (outd > 0 && !net.label(v).empty()) {
      report(ViolationKind::labeled_internal,
             describe(v, "internal vertex carries label '" + net.label(v) + "'"), v);
    }
    std::set<VertexId> distinct;
    for (VertexId c : net.children(v)) {
      if (!distinct.insert(c).second) {
        report(ViolationKind::parallel_branches, describe(v, "parallel branches"), v,
               Branch{v, c});
      }
    }
    if (require_binary) {
      bool ok;
      if (v == net.root()) {
        // A lone leaf is the degenerate one-leaf network.
        ok = (in == 0 && (outd == 2 || (outd == 0 && net.vertex_count() == 1)));
      } else if (outd == 0) {
        ok = in == 1;
      } else {
        ok = (in == 1 && outd == 2) || (in == 2 && outd == 1);
      }
      if (!ok) report(ViolationKind::not_binary, describe(v, "non-binary vertex"), v);
    }
  }
  return out;
}

PhyloTree PhyloTree::from_network(Network net) {
  auto outcome = validate(net, true);
  if (!outcome.ok()) {
    throw InputError("not a binary phylogenetic tree: " + outcome.violations.front().message);
  }
  if (net.reticulation_count() != 0) {
    throw InputError("not a binary phylogenetic tree: contains reticulations");
  }
  return PhyloTree(std::move(net));
}

std::optional<VertexId> PhyloTree::parent(VertexId v) const {
  auto ps = net_.parents(v);
  if (ps.empty()) return std::nullopt;
  return ps.front();
}

bool PhyloTree::siblings(std::string_view a, std::string_view b) const {
  auto va = leaf(a);
  auto vb = leaf(b);
  if (!va || !vb || *va == *vb) return false;
  auto pa = parent(*va);
  auto pb = parent(*vb);
  return pa && pb && *pa == *pb;
}

bool same_leaf_set(const Network& a, const Network& b) {
  return a.labels() == b.labels();
}

}  // namespace netdisplay
