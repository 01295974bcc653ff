#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netdisplay/network.hpp"
#include "netdisplay/reductions.hpp"

namespace netdisplay {

// One retained in-branch per reticulation.
struct Resolution {
  std::map<VertexId, Branch> kept;
};

// Every reticulation keeps the in-branch of the given index (taken modulo
// its indegree) in parent-list order. Enumeration helper.
[[nodiscard]] Resolution resolution_from_choices(const Network& net,
                                                 const std::vector<std::size_t>& choices);

// The spanning subtree: every non-kept reticulation in-branch deleted, no
// suppression. May contain unlabeled outdegree-0 vertices.
[[nodiscard]] Network spanning_subtree(const Network& net, const Resolution& res);

// spanning_subtree followed by suppression. Throws InputError when the
// resolution does not cover the network's reticulations exactly.
[[nodiscard]] PhyloTree apply_resolution(const Network& net, const Resolution& res);

// Rooted isomorphism respecting leaf labels.
[[nodiscard]] bool trees_equal(const PhyloTree& a, const PhyloTree& b);

struct ContainmentVerdict {
  bool displayed = false;
  ReductionTrace trace;
  // Set by the oracle when displayed; applying it yields the query tree.
  std::optional<Resolution> certificate;
  std::size_t iterations = 0;
  std::size_t reticulations_initial = 0;
  // How the verdict was reached: "tree", "cherry", "oracle".
  std::string decided_by;
};

// Exhaustive realization over all resolutions. Throws LeafSetMismatch, and
// PreconditionError when the reticulation count exceeds `cap`.
[[nodiscard]] ContainmentVerdict oracle_displays(const Network& net, const PhyloTree& tree,
                                                 std::size_t cap = 20);

// Maximum-vertex-count root-to-leaf path. Among equally long continuations
// the child with the smallest id is taken.
[[nodiscard]] std::vector<VertexId> find_longest_root_leaf_path(const Network& net);

enum class CaseId { A, B, C, D, E, F, G, H, I, J, K };

[[nodiscard]] char to_char(CaseId c);
[[nodiscard]] ReductionKind reduction_kind(CaseId c);

// Vertex roles at the end of a longest path (w, u, v, l).
enum class Role { w, u, v, leaf, leaf1, leaf2, e, g, h };

// The structure found below w:
//   A  u reticulation; w's other child is the leaf l'.
//   B  u reticulation; w's other child g carries an uncle-nephew structure.
//   C  u tree vertex whose other child e is a leaf (uncle-nephew at u).
//   D  u tree vertex, e = u's reticulation child above l'; g is the leaf l''.
//   E  as D but g is a tree vertex parenting both e and v.
//   F  g parents e but not v; g's other child h is a reticulation above l''.
//   G  g parents e but not v; h is a leaf (uncle-nephew at g).
//   H  g parents v but not e; h is a reticulation above l''.
//   I  g parents v but not e; h is a leaf (uncle-nephew at g).
//   J  g parents neither; g has a leaf and a reticulation-above-leaf child.
//   K  g is e or v itself: that reticulation has parents u and w. Keeping
//      either in-branch yields the same tree, so (u, g) is dropped.
struct CaseMatch {
  CaseId id = CaseId::A;
  std::map<Role, VertexId> bindings;

  [[nodiscard]] VertexId at(Role r) const;
  [[nodiscard]] bool has(Role r) const { return bindings.count(r) != 0; }
  // Vertex carrying the uncle-nephew structure for B, C, G, I, J.
  [[nodiscard]] std::optional<VertexId> uncle_nephew_site() const;
};

// Identifies the case at the tail of `path`. Throws InternalConsistencyError
// (with the local structure in the message) when nothing matches.
[[nodiscard]] CaseMatch match_case(const Network& net, const std::vector<VertexId>& path);

// Applies the branch removals for the matched case and suppresses.
[[nodiscard]] std::pair<Network, ReductionStep> simplify_at_case(const Network& net,
                                                                 const PhyloTree& tree,
                                                                 const CaseMatch& m);

// In-place variant used by the driver; `tree` is raw tree storage.
ReductionStep simplify_at_case_in_place(NetworkEditor& net, const Network& tree,
                                        const CaseMatch& m);

struct DisplayOptions {
  // Hand over to the oracle once fewer than this many reticulations remain.
  std::size_t oracle_threshold = 3;
  std::size_t oracle_cap = 20;
  bool record_trace = true;
  // Called after every reduction step with the states before and after.
  std::function<void(const Network& net_before, const Network& tree_before,
                     const ReductionStep& step, const Network& net_after,
                     const Network& tree_after)>
      observer;
};

// Decides whether a binary nearly stable network displays the tree.
// Throws LeafSetMismatch, PreconditionError for networks outside the class
// and InternalConsistencyError if a structural guarantee fails.
[[nodiscard]] ContainmentVerdict displays(const Network& net, const PhyloTree& tree,
                                          const DisplayOptions& opts = {});

}  // namespace netdisplay
