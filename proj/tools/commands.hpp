#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "netdisplay/generator.hpp"

namespace netdisplay::cli {

enum ExitCode : int {
  kTrue = 0,
  kFalse = 1,
  kUsage = 2,
  kInput = 3,
  kPrecondition = 4,
  kInternal = 5,
};

struct BenchRow {
  std::size_t n = 0;
  std::size_t m = 0;
  double seconds = 0;  // best of the repeats
  std::size_t iterations = 0;
};

struct BenchConfig {
  std::vector<std::size_t> sizes{50, 100, 200, 400};
  ClassConstraint cls = ClassConstraint::nearly_stable;
  std::uint64_t seed = 1;
  double ret_ratio = 0.25;
  std::size_t instances = 5;
  std::size_t repeats = 3;
};

// One row per instance, sizes in order. Each instance pairs a generated network with a tree it
// displays; throws Error when generation exhausts.
[[nodiscard]] std::vector<BenchRow> run_bench(const BenchConfig& cfg);

// Oracle reticulation cap, NETDISPLAY_ORACLE_CAP when set.
[[nodiscard]] std::size_t oracle_cap();

// Entry point with injectable streams. Returns the process exit code.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace netdisplay::cli
