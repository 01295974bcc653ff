#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netdisplay/network.hpp"
#include "netdisplay/stability.hpp"

namespace netdisplay {

enum class Severity { error, warning };

struct ParseDiagnostic {
  std::size_t byte_offset = 0;
  std::string message;
  Severity severity = Severity::error;
};

template <class T>
struct ParseResult {
  std::optional<T> value;
  std::vector<ParseDiagnostic> diagnostics;

  [[nodiscard]] bool ok() const { return value.has_value(); }
  // Throws InputError carrying the first diagnostic when parsing failed.
  T take() && {
    if (!value) {
      const auto& d = diagnostics.front();
      throw InputError("offset " + std::to_string(d.byte_offset) + ": " + d.message);
    }
    return std::move(*value);
  }
};

struct ParseOptions {
  // Labels of the form __r<k> are reserved for leaves introduced by cherry
  // reduction and are rejected in user input unless this is set.
  bool allow_reserved_labels = false;
};

// Extended Newick: `((a,(b)#H1),(#H1,c));`. Occurrences of the same `#tag`
// denote one reticulation; at most one occurrence carries the child
// subtree. Inner vertex names are ignored; `[...]` comments are skipped.
// The text must contain exactly one statement.
[[nodiscard]] ParseResult<Network> parse_network(std::string_view text,
                                                 const ParseOptions& opts = {});
// Binary trees only: rejects hybrid tags and polytomies.
[[nodiscard]] ParseResult<PhyloTree> parse_tree(std::string_view text,
                                                const ParseOptions& opts = {});

// Multi-statement variants. Fail as a whole on the first bad statement.
[[nodiscard]] ParseResult<std::vector<Network>> parse_networks(std::string_view text,
                                                               const ParseOptions& opts = {});
[[nodiscard]] ParseResult<std::vector<PhyloTree>> parse_trees(std::string_view text,
                                                              const ParseOptions& opts = {});

// Canonical extended Newick. Children are emitted by smallest leaf label
// below them (ties broken by a structural hash, then by exhaustive choice of
// the lexicographically smallest output), hybrid tags are numbered in order
// of first appearance and the subtree of a reticulation is written at its
// first occurrence. Isomorphic networks serialize identically.
[[nodiscard]] std::string serialize(const Network& net);
[[nodiscard]] std::string serialize(const PhyloTree& tree);

// Isomorphism respecting leaf labels, via canonical serialization.
[[nodiscard]] bool networks_isomorphic(const Network& a, const Network& b);

// Graphviz rendering. Reticulations are filled; with a report, stable
// vertices are drawn with a double outline and unstable ones dashed.
[[nodiscard]] std::string to_dot(const Network& net,
                                 const StabilityReport* report = nullptr);

}  // namespace netdisplay
