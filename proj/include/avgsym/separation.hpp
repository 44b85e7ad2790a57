#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "avgsym/averaging.hpp"

namespace avgsym {

struct Claim1Report {
  /// present[i]: irrep i occurs in Sym^k(rho) for some 0 <= k <= K.
  std::vector<bool> present;
  /// Smallest such k, or -1.
  std::vector<int> first_degree;
  /// Largest degree evaluated (stops early once every irrep is present).
  int degrees_checked = 0;

  bool all() const;
};

/// Irrep coverage of Sym^0 .. Sym^K through the character recursion.
Claim1Report claim1_check(const Representation& rho, long long K, const IrrepTable& table);

/// max_g ||(rho(g) - I) M_w||_op
double exact_violation(const AveragingScheme& w, const Representation& rho);

struct FeasibilityResult {
  bool feasible = false;
  int rank_a = 0;
  int rank_ab = 0;
  /// Least-squares weights aligned with the sorted support (meaningful when feasible).
  std::vector<int> support;
  std::vector<double> witness;
  double residual = 0.0;
};

inline constexpr double kRankTolerance = 1e-9;

/// Does some w on S satisfy sum_{g in S} w(g) pi(g)^H = 0 for every nontrivial
/// irrep of the table together with sum w = 1?
FeasibilityResult exact_feasible_on_support(const std::vector<int>& support, const IrrepTable& table);

struct LowerBoundReport {
  bool generates = false;
  double eps_weak_on_regular = 0.0;
};

/// Certifier for the regular representation of Z_2^d (fourier path when a table fits).
Certifier sign_flip_regular_certifier(int d);
LowerBoundReport sign_flip_lower_bound_check(int d, const std::vector<int>& support, const std::vector<double>& weights);
LowerBoundReport sign_flip_lower_bound_check(const Certifier& regular, const std::vector<int>& support,
                                             const std::vector<double>& weights);

struct SeparationRow {
  std::string family;
  std::string group;
  int order = 0;
  long long K = 0;
  long long exact_cost = 0;
  long long approx_cost = 0;
  double eps = 0.0;
  double certified_eps = 0.0;
  std::uint64_t seed = 0;
  /// "ok", "fallback" (uniform scheme used) or "incomplete".
  std::string status;
};

/// "signflip:2..9", "cyclic:4..16" or "dihedral:3,5,8".
struct FamilySpec {
  std::string family;
  std::vector<int> params;
};
FamilySpec parse_family(const std::string& spec);

std::vector<SeparationRow> separation_table(const std::string& family_spec, double eps, int trials, std::uint64_t seed,
                                            int swap_budget = 200);

void write_separation_csv(std::ostream& os, const std::vector<SeparationRow>& rows);

}  // namespace avgsym
