#pragma once

#include <string>
#include <vector>

#include "avgsym/irreps.hpp"
#include "avgsym/representation.hpp"

namespace avgsym::cli {

/// Parses argv, runs one subcommand and returns the process exit status:
/// 0 success, 1 usage, 2 numerical consistency, 3 search failure.
int run(int argc, char** argv);

/// "regular", "permutation", "sign", "trivial" or "irrep:<index>", optionally
/// followed by a symmetric power (sym_power > 1).
Representation build_rep(GroupPtr g, const std::string& spec, int sym_power = 1);

struct SelftestCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
};

/// Invariant suite over the small built-in groups.
std::vector<SelftestCheck> selftest(std::uint64_t seed);

}  // namespace avgsym::cli
