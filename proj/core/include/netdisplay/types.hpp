#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace netdisplay {

// Dense vertex handle. Ids are never reused inside one Network, so an id
// taken before an edit either still names the same vertex or names nothing.
struct VertexId {
  std::uint32_t value = std::numeric_limits<std::uint32_t>::max();

  constexpr VertexId() = default;
  constexpr explicit VertexId(std::uint32_t v) : value(v) {}

  [[nodiscard]] constexpr bool valid() const {
    return value != std::numeric_limits<std::uint32_t>::max();
  }
  [[nodiscard]] constexpr std::size_t index() const { return value; }

  friend constexpr auto operator<=>(VertexId, VertexId) = default;
};

inline std::ostream& operator<<(std::ostream& os, VertexId v) {
  return os << 'v' << v.value;
}

// A directed edge (tail, head).
struct Branch {
  VertexId tail;
  VertexId head;

  friend constexpr auto operator<=>(const Branch&, const Branch&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Branch& b) {
  return os << '(' << b.tail << ',' << b.head << ')';
}

// Error hierarchy. Each maps onto one CLI exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text or a structurally invalid network.
class InputError : public Error {
 public:
  using Error::Error;
};

// Net and tree are over different taxa.
class LeafSetMismatch : public InputError {
 public:
  LeafSetMismatch() : InputError("leaf sets differ") {}
};

// The network is outside the class an operation requires.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// An invariant that the theory guarantees did not hold. Always a bug.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace netdisplay

template <>
struct std::hash<netdisplay::VertexId> {
  std::size_t operator()(netdisplay::VertexId v) const noexcept {
    return std::hash<std::uint32_t>{}(v.value);
  }
};
