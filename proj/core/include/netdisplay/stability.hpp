#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netdisplay/network.hpp"

namespace netdisplay {

// A vertex x is a stable ancestor of v when every root-to-v path passes
// through x; x is stable when it is a stable ancestor of some leaf. The
// witness is one such leaf.
class StabilityReport {
 public:
  StabilityReport() = default;
  explicit StabilityReport(std::vector<std::optional<VertexId>> witness)
      : witness_(std::move(witness)) {}

  [[nodiscard]] bool stable(VertexId v) const {
    return v.index() < witness_.size() && witness_[v.index()].has_value();
  }
  [[nodiscard]] std::optional<VertexId> witness(VertexId v) const {
    return v.index() < witness_.size() ? witness_[v.index()] : std::nullopt;
  }

 private:
  std::vector<std::optional<VertexId>> witness_;
};

// Immediate dominators relative to the root, indexed by VertexId. The root
// maps to itself, dead slots to an invalid id.
[[nodiscard]] std::vector<VertexId> immediate_dominators(const Network& net);

// Dominator-tree computation, linear after the iterative fixpoint converges.
// Requires an acyclic network with every vertex reachable from the root.
[[nodiscard]] StabilityReport stability(const Network& net);

// Reference implementation: delete each vertex in turn and test which leaves
// lose reachability from the root. O(V * (V + E)).
[[nodiscard]] StabilityReport stability_by_deletion(const Network& net);

// Violations of the three local stability facts on binary networks:
//  (1) a vertex with a stable tree-vertex child is stable;
//  (2) a reticulation is stable iff its child is a stable tree vertex or a leaf;
//  (3) a stable tree vertex does not have two reticulation children.
// Empty when the report is consistent.
[[nodiscard]] std::vector<std::string> stability_fact_violations(const Network& net,
                                                                 const StabilityReport& report);

struct ClassFlags {
  bool binary = false;
  bool tree_child = false;
  bool reticulation_visible = false;
  bool nearly_stable = false;
  bool subphylogeny_free = false;

  friend bool operator==(const ClassFlags&, const ClassFlags&) = default;
};

// Throws InputError when the network fails non-binary validation.
[[nodiscard]] ClassFlags classify(const Network& net);
[[nodiscard]] ClassFlags classify(const Network& net, const StabilityReport& report);

// Individual predicates over a precomputed report.
[[nodiscard]] bool is_tree_child(const Network& net, const StabilityReport& report);
[[nodiscard]] bool is_reticulation_visible(const Network& net, const StabilityReport& report);
[[nodiscard]] bool is_nearly_stable(const Network& net, const StabilityReport& report);
[[nodiscard]] bool is_subphylogeny_free(const Network& net);

}  // namespace netdisplay
