#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "netdisplay/containment.hpp"
#include "netdisplay/network.hpp"
#include "netdisplay/stability.hpp"

namespace netdisplay {

struct ClassStats {
  std::size_t n_leaves = 0;
  std::size_t m_reticulations = 0;
  std::size_t s_ret = 0;
  std::size_t u_ret = 0;
  // Vertices of outdegree two, the root included. On a binary network this
  // is n - 1 + m.
  std::size_t tree_vertices = 0;
  std::size_t branches = 0;

  friend bool operator==(const ClassStats&, const ClassStats&) = default;
};

[[nodiscard]] ClassStats class_stats(const Network& net);
[[nodiscard]] ClassStats class_stats(const Network& net, const StabilityReport& report);

// For every reticulation, the in-branch to delete such that no two deleted
// branches share a tail; the resolution keeps the other in-branch. Found by
// augmenting-path matching, parents tried in increasing id order.
// Throws PreconditionError unless the network is binary and reticulation
// visible.
[[nodiscard]] Resolution select_dummy_free_removal(const Network& net);

// Branches deleted by a resolution, one per reticulation.
[[nodiscard]] std::vector<Branch> removed_branches(const Network& net, const Resolution& res);

struct TransformResult {
  Network net;
  ClassStats before;
  ClassStats after;
  std::size_t rewirings = 0;
};

// Removes unstable reticulations one at a time: for the first unstable
// reticulation a in topological order, deletes the branch from its stable
// parent with the smaller id and suppresses. Throws PreconditionError unless
// the network is binary and nearly stable.
[[nodiscard]] TransformResult ns_to_rv_transform(const Network& net);

struct BoundCheck {
  std::string name;
  std::size_t limit = 0;
  std::size_t observed = 0;
  bool pass = false;
};

using BoundReport = std::vector<BoundCheck>;

// m <= 4(n-1).
[[nodiscard]] BoundReport verify_rv_bound(const ClassStats& s);
// m <= 12(n-1), tree vertices <= 13(n-1), branches <= 38(n-1), u_ret <= 2 s_ret.
[[nodiscard]] BoundReport verify_ns_bounds(const ClassStats& s);

// Evaluates the bounds that apply to the network's class. Throws InputError
// when the network is not a valid binary network.
[[nodiscard]] BoundReport verify_bounds(const Network& net);

}  // namespace netdisplay
