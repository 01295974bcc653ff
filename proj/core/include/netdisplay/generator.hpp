#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "netdisplay/network.hpp"

namespace netdisplay {

enum class ClassConstraint { any, tree_child, reticulation_visible, nearly_stable };

[[nodiscard]] std::string_view to_string(ClassConstraint c);
[[nodiscard]] std::optional<ClassConstraint> class_constraint_from_string(std::string_view s);

// Deterministic across standard libraries: the engine is fully specified
// and draws are mapped to ranges here rather than by <random>
// distributions, whose algorithms are left to the implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform in [0, bound). bound must be positive.
  std::size_t below(std::size_t bound);
  std::uint64_t next() { return engine_(); }
  static constexpr std::string_view algorithm = "mt19937_64";

 private:
  std::mt19937_64 engine_;
};

struct GenSpec {
  std::size_t n_leaves = 1;
  std::size_t target_reticulations = 0;
  ClassConstraint class_constraint = ClassConstraint::any;
  std::uint64_t seed = 0;
  std::size_t max_rejections = 10000;
};

struct GenOutcome {
  // Empty on exhaustion.
  std::optional<Network> network;
  std::size_t rejections = 0;
  std::string notice;
};

// Random binary tree by leaf attachment followed by tanglings: two distinct
// branches are subdivided and joined from the first new vertex to the
// second, provided that introduces no cycle and the result stays inside the
// requested class. Leaves are labelled t1..tn. Throws InputError when
// n_leaves is zero.
[[nodiscard]] GenOutcome generate(const GenSpec& spec);

// A random binary tree on t1..tn.
[[nodiscard]] Network random_tree(std::size_t n_leaves, Rng& rng);

// "[netdisplay-gen v1 rng=mt19937_64 seed=7 n=3 k=1 class=tree_child]"
[[nodiscard]] std::string metadata_comment(const GenSpec& spec);

[[nodiscard]] bool satisfies(const Network& net, ClassConstraint c);

}  // namespace netdisplay
