#include "netdisplay/generator.hpp"

#include <array>
#include <vector>

#include "netdisplay/stability.hpp"

namespace netdisplay {

std::string_view to_string(ClassConstraint c) {
  switch (c) {
    case ClassConstraint::any: return "any";
    case ClassConstraint::tree_child: return "tree_child";
    case ClassConstraint::reticulation_visible: return "reticulation_visible";
    case ClassConstraint::nearly_stable: return "nearly_stable";
  }
  return "?";
}

std::optional<ClassConstraint> class_constraint_from_string(std::string_view s) {
  for (auto c : {ClassConstraint::any, ClassConstraint::tree_child,
                 ClassConstraint::reticulation_visible, ClassConstraint::nearly_stable}) {
    if (to_string(c) == s) return c;
  }
  if (s == "tc") return ClassConstraint::tree_child;
  if (s == "rv") return ClassConstraint::reticulation_visible;
  if (s == "ns") return ClassConstraint::nearly_stable;
  return std::nullopt;
}

std::size_t Rng::below(std::size_t bound) {
  const std::uint64_t b = bound;
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % b;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % b);
}

Network random_tree(std::size_t n_leaves, Rng& rng) {
  if (n_leaves == 0) throw InputError("a tree needs at least one leaf");
  NetworkEditor ed;
  VertexId root = ed.add_vertex("t1");
  ed.set_root(root);
  std::vector<Branch> branches;
  for (std::size_t i = 2; i <= n_leaves; ++i) {
    VertexId leaf = ed.add_vertex("t" + std::to_string(i));
    VertexId mid = ed.add_vertex();
    // Position branches.size() means above the root.
    const std::size_t pick = rng.below(branches.size() + 1);
    if (pick == branches.size()) {
      ed.add_branch(mid, root);
      branches.push_back({mid, root});
      root = mid;
      ed.set_root(root);
    } else {
      const Branch b = branches[pick];
      ed.remove_branch(b.tail, b.head);
      ed.add_branch(b.tail, mid);
      ed.add_branch(mid, b.head);
      branches[pick] = {b.tail, mid};
      branches.push_back({mid, b.head});
    }
    ed.add_branch(mid, leaf);
    branches.push_back({mid, leaf});
  }
  return std::move(ed).release();
}

bool satisfies(const Network& net, ClassConstraint c) {
  if (c == ClassConstraint::any) return true;
  const StabilityReport report = stability(net);
  switch (c) {
    case ClassConstraint::tree_child: return is_tree_child(net, report);
    case ClassConstraint::reticulation_visible: return is_reticulation_visible(net, report);
    case ClassConstraint::nearly_stable: return is_nearly_stable(net, report);
    default: return true;
  }
}

namespace {

// True when `to` is reachable from `from`.
bool reaches(const Network& net, VertexId from, VertexId to, std::vector<std::uint32_t>& mark,
             std::uint32_t stamp) {
  std::vector<VertexId> stack{from};
  mark[from.index()] = stamp;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    for (VertexId c : net.children(v)) {
      if (mark[c.index()] != stamp) {
        mark[c.index()] = stamp;
        stack.push_back(c);
      }
    }
  }
  return false;
}

std::optional<std::size_t> class_limit(ClassConstraint c, std::size_t n) {
  switch (c) {
    case ClassConstraint::tree_child:
    case ClassConstraint::reticulation_visible: return 4 * (n - 1);
    case ClassConstraint::nearly_stable: return 12 * (n - 1);
    default: return std::nullopt;
  }
}

}  // namespace

GenOutcome generate(const GenSpec& spec) {
  if (spec.n_leaves == 0) throw InputError("n_leaves must be at least 1");
  GenOutcome out;
  if (auto lim = class_limit(spec.class_constraint, spec.n_leaves);
      lim && spec.target_reticulations > *lim) {
    out.notice = "target reticulation count exceeds the class bound " + std::to_string(*lim);
    return out;
  }

  Rng rng(spec.seed);
  NetworkEditor ed(random_tree(spec.n_leaves, rng));
  std::vector<Branch> branches = ed.network().branches();
  std::vector<std::uint32_t> mark;
  std::uint32_t stamp = 0;
  std::size_t made = 0;

  while (made < spec.target_reticulations) {
    if (out.rejections >= spec.max_rejections || branches.size() < 2) {
      out.notice = "exhausted after " + std::to_string(out.rejections) +
                   " rejected tanglings with " + std::to_string(made) + " of " +
                   std::to_string(spec.target_reticulations) + " reticulations placed";
      return out;
    }
    const std::size_t i = rng.below(branches.size());
    std::size_t j = rng.below(branches.size() - 1);
    if (j >= i) ++j;
    const Branch from = branches[i];
    const Branch to = branches[j];
    const Network& cur = ed.network();
    mark.resize(cur.id_bound() + 2, 0);
    if (++stamp == 0) {
      std::fill(mark.begin(), mark.end(), 0);
      stamp = 1;
    }
    // s2 on (c,d) must not be an ancestor of s1 on (a,b).
    if (to.head == from.tail || reaches(cur, to.head, from.tail, mark, stamp)) {
      ++out.rejections;
      continue;
    }

    NetworkEditor trial(cur);
    const VertexId s1 = trial.add_vertex();
    const VertexId s2 = trial.add_vertex();
    trial.remove_branch(from.tail, from.head);
    trial.add_branch(from.tail, s1);
    trial.add_branch(s1, from.head);
    trial.remove_branch(to.tail, to.head);
    trial.add_branch(to.tail, s2);
    trial.add_branch(s2, to.head);
    trial.add_branch(s1, s2);
    if (!satisfies(trial.network(), spec.class_constraint)) {
      ++out.rejections;
      continue;
    }
    ed = std::move(trial);
    branches[i] = {from.tail, s1};
    branches[j] = {to.tail, s2};
    branches.push_back({s1, from.head});
    branches.push_back({s2, to.head});
    branches.push_back({s1, s2});
    ++made;
  }
  out.network = std::move(ed).release();
  return out;
}

std::string metadata_comment(const GenSpec& spec) {
  return "[netdisplay-gen v1 rng=" + std::string(Rng::algorithm) +
         " seed=" + std::to_string(spec.seed) + " n=" + std::to_string(spec.n_leaves) +
         " k=" + std::to_string(spec.target_reticulations) +
         " class=" + std::string(to_string(spec.class_constraint)) + "]";
}

}  // namespace netdisplay
