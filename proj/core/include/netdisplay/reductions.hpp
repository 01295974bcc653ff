#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netdisplay/network.hpp"

namespace netdisplay {

enum class ReductionKind {
  suppress,
  cherry,
  uncle_nephew,
  case_A,
  case_B,
  case_C,
  case_D,
  case_E,
  case_F,
  case_G,
  case_H,
  case_I,
  case_J,
  case_K,
};

[[nodiscard]] std::string_view to_string(ReductionKind k);
[[nodiscard]] std::optional<ReductionKind> reduction_kind_from_string(std::string_view s);

struct ReductionStep {
  ReductionKind kind = ReductionKind::suppress;
  // Branches deleted by the rule itself, before suppression.
  std::vector<Branch> removed_branches;
  // Vertices contracted away with (indegree, outdegree) of (1,1) or (0,1).
  std::vector<VertexId> contracted;
  // Unlabeled dead ends deleted during suppression.
  std::vector<VertexId> pruned;
  // Cherry reduction only: the vertex that became a leaf and its new label,
  // plus the two labels it replaces.
  std::optional<std::pair<VertexId, std::string>> introduced_leaf;
  std::vector<std::string> merged_labels;

  [[nodiscard]] bool empty() const {
    return removed_branches.empty() && contracted.empty() && pruned.empty() &&
           !introduced_leaf;
  }
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;

  // One step per line:
  //   <kind> removed=1>4,2>4 contracted=3 pruned= leaf=5:__r1 merged=a,b
  [[nodiscard]] std::string to_text() const;
  // Inverse of to_text. Throws InputError on malformed lines.
  static ReductionTrace from_text(std::string_view text);
};

// Restores the network invariants after branch deletions: deletes unlabeled
// outdegree-0 vertices, collapses parallel branches, contracts vertices of
// indegree 1 and outdegree 1 and shortens an outdegree-1 root. Runs to a
// fixpoint; leaf labels are untouched.
[[nodiscard]] std::pair<Network, ReductionStep> suppress_degenerate(Network net);

// In-place form. Only the seed vertices and whatever their edits touch are
// examined, so the cost is proportional to the change.
void suppress_around(NetworkEditor& ed, std::span<const VertexId> seeds, ReductionStep& step);
void suppress_all(NetworkEditor& ed, ReductionStep& step);

struct CherryReduction {
  Network net;
  PhyloTree tree;
  ReductionTrace trace;
};

// Repeatedly replaces a pair of leaves that are siblings under a tree vertex
// of the network and siblings in the tree by one fresh leaf labelled
// __r<k>, on both sides. Throws LeafSetMismatch when the taxa differ.
[[nodiscard]] CherryReduction cherry_reduce(const Network& net, const PhyloTree& tree);

// In-place form over raw tree storage, used by the containment driver.
// `next` is the last __r index handed out and is advanced for each new
// label. Stops after `limit` replacements. Returns the number performed.
std::size_t cherry_reduce_in_place(NetworkEditor& net, NetworkEditor& tree, std::size_t& next,
                                   ReductionTrace* trace,
                                   std::size_t limit = static_cast<std::size_t>(-1));

// Largest k among __r<k> labels in either structure, 0 if none.
[[nodiscard]] std::size_t last_reserved_index(const Network& net, const Network& tree);

// Vertices with two leaf children.
[[nodiscard]] std::vector<VertexId> cherries(const Network& net);

// x has a leaf child and a reticulation child y whose only child is a leaf.
struct UncleNephew {
  VertexId site;      // x
  VertexId uncle;     // the leaf child of x
  VertexId hybrid;    // y
  VertexId nephew;    // the leaf below y
  VertexId dangling;  // the parent of y other than x
};

[[nodiscard]] std::optional<UncleNephew> match_uncle_nephew(const Network& net, VertexId site);

// Removes the dangling branch into y when uncle and nephew are siblings in
// the tree, otherwise (x, y); then suppresses. Throws InputError when the
// site does not carry the pattern.
[[nodiscard]] std::pair<Network, ReductionStep> uncle_nephew_reduce(const Network& net,
                                                                    const PhyloTree& tree,
                                                                    VertexId site);

// Label-level sibling test usable on raw tree storage.
[[nodiscard]] bool tree_siblings(const Network& tree, std::string_view a, std::string_view b);

// Re-applies a trace to the pair it was recorded from.
[[nodiscard]] std::pair<Network, PhyloTree> replay(const Network& net, const PhyloTree& tree,
                                                   const ReductionTrace& trace);

}  // namespace netdisplay
