#pragma once

#include <string>
#include <vector>

#include "netdisplay/containment.hpp"
#include "netdisplay/generator.hpp"
#include "netdisplay/newick.hpp"

namespace testing_support {

using namespace netdisplay;

inline Network net(const std::string& s) { return parse_network(s).take(); }
inline PhyloTree tree(const std::string& s) { return parse_tree(s).take(); }

// Networks from seeds first_seed, first_seed+1, ... with leaf and
// reticulation counts drawn per seed; draws that exhaust are skipped.
inline std::vector<Network> corpus(std::size_t count, ClassConstraint cls, std::size_t min_n,
                                   std::size_t max_n, std::size_t max_k,
                                   std::uint64_t first_seed = 1) {
  std::vector<Network> out;
  for (std::uint64_t seed = first_seed; out.size() < count; ++seed) {
    Rng r(seed * 0x9e3779b97f4a7c15ULL + 17);
    GenSpec spec{min_n + r.below(max_n - min_n + 1), r.below(max_k + 1), cls, seed, 400};
    auto o = generate(spec);
    if (o.network) out.push_back(std::move(*o.network));
  }
  return out;
}

// A tree on the network's leaves: displayed when `displayed` is set,
// otherwise uniformly shaped at random.
inline PhyloTree tree_for(const Network& n, Rng& rng, bool displayed) {
  if (displayed) {
    std::vector<std::size_t> choices(n.reticulation_count());
    for (auto& c : choices) c = rng.below(2);
    return apply_resolution(n, resolution_from_choices(n, choices));
  }
  // random_tree labels t1..tn, matching the generator's labels.
  return PhyloTree::from_network(random_tree(n.leaf_count(), rng));
}

}  // namespace testing_support
