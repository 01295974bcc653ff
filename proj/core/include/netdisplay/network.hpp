#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "netdisplay/types.hpp"

namespace netdisplay {

class NetworkEditor;

// Rooted DAG with labeled leaves.
//
// Storage is a dense vector indexed by VertexId; removed vertices leave a
// dead slot behind so ids stay stable. Adjacency lists keep insertion order
// (parse order for parsed networks). The class is read-only; all mutation
// goes through a NetworkEditor which owns the value while editing.
//
// A Network value is not guaranteed to satisfy the phylogenetic network
// invariants. Use validate() for that; parsers and generators only hand out
// validated values.
class Network {
 public:
  Network() = default;

  [[nodiscard]] VertexId root() const { return root_; }
  [[nodiscard]] bool contains(VertexId v) const {
    return v.valid() && v.index() < nodes_.size() && nodes_[v.index()].alive;
  }

  // One past the largest id ever handed out. Suitable for sizing id-indexed
  // scratch arrays.
  [[nodiscard]] std::size_t id_bound() const { return nodes_.size(); }
  [[nodiscard]] std::size_t vertex_count() const { return alive_; }
  [[nodiscard]] std::size_t branch_count() const { return branches_; }
  [[nodiscard]] std::size_t leaf_count() const;
  [[nodiscard]] std::size_t reticulation_count() const;

  // Live vertices in increasing id order.
  [[nodiscard]] std::vector<VertexId> vertices() const;
  [[nodiscard]] std::vector<VertexId> leaves() const;
  [[nodiscard]] std::vector<VertexId> reticulations() const;
  [[nodiscard]] std::vector<Branch> branches() const;

  [[nodiscard]] std::span<const VertexId> children(VertexId v) const {
    return node(v).children;
  }
  [[nodiscard]] std::span<const VertexId> parents(VertexId v) const {
    return node(v).parents;
  }
  [[nodiscard]] std::size_t indegree(VertexId v) const { return node(v).parents.size(); }
  [[nodiscard]] std::size_t outdegree(VertexId v) const { return node(v).children.size(); }
  [[nodiscard]] bool is_leaf(VertexId v) const { return node(v).children.empty(); }
  [[nodiscard]] bool is_reticulation(VertexId v) const { return node(v).parents.size() >= 2; }
  [[nodiscard]] bool has_branch(VertexId tail, VertexId head) const;

  // Empty for unlabeled vertices.
  [[nodiscard]] const std::string& label(VertexId v) const { return node(v).label; }
  [[nodiscard]] std::optional<VertexId> find_label(std::string_view label) const;
  // Sorted labels of all labeled vertices.
  [[nodiscard]] std::vector<std::string> labels() const;

  // Vertices ordered so that every parent precedes its children. Throws
  // InputError if the graph has a directed cycle.
  [[nodiscard]] std::vector<VertexId> topological_order() const;

 private:
  friend class NetworkEditor;

  struct Node {
    std::vector<VertexId> children;
    std::vector<VertexId> parents;
    std::string label;
    bool alive = true;
  };

  [[nodiscard]] const Node& node(VertexId v) const;

  std::vector<Node> nodes_;
  std::unordered_map<std::string, VertexId> by_label_;
  VertexId root_;
  std::size_t alive_ = 0;
  std::size_t branches_ = 0;
};

// Exclusive editing session over a Network value.
class NetworkEditor {
 public:
  NetworkEditor() = default;
  explicit NetworkEditor(Network net) : net_(std::move(net)) {}

  [[nodiscard]] const Network& network() const { return net_; }
  [[nodiscard]] Network release() && { return std::move(net_); }

  VertexId add_vertex(std::string label = {});
  void add_branch(VertexId tail, VertexId head);
  // Removes one copy of the branch. Throws if it does not exist.
  void remove_branch(VertexId tail, VertexId head);
  // Removes the vertex together with all incident branches.
  void remove_vertex(VertexId v);
  // Empty label clears. Throws InputError on a label already in use.
  void set_label(VertexId v, std::string label);
  void set_root(VertexId v) { net_.root_ = v; }

 private:
  Network::Node& node(VertexId v);

  Network net_;
};

enum class VertexKind { root, leaf, tree_vertex, reticulation };

[[nodiscard]] std::string_view to_string(VertexKind k);

// Classification by degrees: indegree 0 is the root, outdegree 0 a leaf,
// indegree >= 2 a reticulation, anything else a tree vertex. A one-vertex
// network's root reports as root. Throws InputError for an unknown id.
[[nodiscard]] VertexKind vertex_kind(const Network& net, VertexId v);

enum class ViolationKind {
  empty,
  no_root,
  multiple_roots,
  cycle,
  unreachable,
  suppressible_vertex,
  unlabeled_leaf,
  labeled_internal,
  parallel_branches,
  not_binary,
};

struct Violation {
  ViolationKind kind;
  std::string message;
  std::optional<VertexId> vertex;
  std::optional<Branch> branch;
};

struct ValidationOutcome {
  std::vector<Violation> violations;

  [[nodiscard]] bool ok() const { return violations.empty(); }
  [[nodiscard]] bool has(ViolationKind k) const;
};

[[nodiscard]] ValidationOutcome validate(const Network& net, bool require_binary);

// Binary rooted tree with distinct leaf labels. Wraps a Network that has
// been checked to have no reticulations and outdegree two everywhere
// internal.
class PhyloTree {
 public:
  // Throws InputError when the network is not a binary phylogenetic tree.
  static PhyloTree from_network(Network net);

  [[nodiscard]] const Network& network() const { return net_; }
  [[nodiscard]] std::optional<VertexId> parent(VertexId v) const;
  [[nodiscard]] std::optional<VertexId> leaf(std::string_view label) const {
    return net_.find_label(label);
  }
  // True when both labels name leaves sharing a parent.
  [[nodiscard]] bool siblings(std::string_view a, std::string_view b) const;

 private:
  explicit PhyloTree(Network net) : net_(std::move(net)) {}

  Network net_;
};

// True when the labeled leaves coincide.
[[nodiscard]] bool same_leaf_set(const Network& a, const Network& b);

}  // namespace netdisplay
