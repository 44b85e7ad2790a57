#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "avgsym/fourier.hpp"
#include "avgsym/irreps.hpp"
#include "avgsym/representation.hpp"

namespace avgsym {

inline constexpr double kSchemeSumTolerance = 1e-12;
/// The projector path forms dim x dim matrices; above this dimension an irrep table is required.
inline constexpr int kProjectorMaxDim = 1024;

/// Real weights on group elements summing to one.
/// Support is sorted ascending, duplicates merged and |w| <= 1e-15 dropped.
struct AveragingScheme {
  GroupPtr group;
  std::vector<int> support;
  std::vector<double> weights;

  /// Normalizes the (support, weights) pairs; usage error unless the weights sum to 1.
  static AveragingScheme make(GroupPtr group, std::vector<int> support, std::vector<double> weights);

  int size() const { return static_cast<int>(support.size()); }
  GroupSignal signal() const { return GroupSignal::from_sparse(group, support, weights); }
};

AveragingScheme uniform_scheme(GroupPtr g);
AveragingScheme delta_scheme(GroupPtr g, int element);
/// Above this many draws random_scheme samples the count vector directly.
inline constexpr long long kDirectDrawLimit = 1LL << 22;
/// Empirical measure of n i.i.d. uniform draws.
AveragingScheme random_scheme(GroupPtr g, long long n, std::uint64_t seed);
/// Uniform weights on the distinct elements of s.
AveragingScheme uniform_on(GroupPtr g, std::vector<int> s);

/// ceil(2.67 (ln|G| + ln(1/delta) + 0.7) / eps)
long long theorem2_size(long long order, double eps, double delta);
inline constexpr const char* kTheorem2Formula = "n = ceil(2.67 * (ln|G| + ln(1/delta) + 0.7) / eps)";

/// M = sum_g w(g) rho(g)
CMatrix apply_scheme(const AveragingScheme& w, const Representation& rho);

enum class CertMethod { projector_path, fourier_path };
const char* to_string(CertMethod m);

struct CertificationReport {
  double eps_weak = 0.0;
  double eps_strong = 0.0;
  CertMethod method = CertMethod::projector_path;
  bool degenerate = false;
  /// Squared operator norm of hat(w)(pi) per irrep present in rho (fourier path only).
  std::optional<std::vector<std::pair<std::string, double>>> per_irrep_norms;
};

/// Certifies schemes against one representation.
///
/// With an irrep table for the rep's group the certificates come from the
/// Fourier blocks of the irreps present in rho; otherwise from the projector
/// onto the complement of the invariant subspace.
class Certifier {
 public:
  explicit Certifier(Representation rho, std::shared_ptr<const IrrepTable> table = nullptr);

  const Representation& rep() const { return rho_; }
  const GroupPtr& group() const { return rho_.group_ptr(); }
  CertMethod method() const { return table_ ? CertMethod::fourier_path : CertMethod::projector_path; }
  /// True when the invariant subspace is everything (every scheme is vacuously 0-symmetric).
  bool degenerate() const { return degenerate_; }
  int invariant_dim() const { return invariant_dim_; }
  const std::vector<int>& multiplicities() const { return mult_; }

  /// ||(I - P) M (I - P)||_op^2; degenerate-rep error when degenerate().
  double weak(const AveragingScheme& w) const;
  /// (1/2) max_g ||(rho(g) - I) M (I - P)||_op^2; degenerate-rep error when degenerate().
  double strong(const AveragingScheme& w) const;
  /// Both certificates; a degenerate rep reports zeros with the flag set.
  CertificationReport report(const AveragingScheme& w) const;

 private:
  void check_group(const AveragingScheme& w) const;
  std::vector<CMatrix> present_blocks(const AveragingScheme& w) const;

  Representation rho_;
  std::shared_ptr<const IrrepTable> table_;
  std::vector<int> mult_;
  std::vector<int> present_;  // nontrivial irreps with m >= 1
  CMatrix complement_;        // orthonormal basis of the non-invariant subspace (projector path)
  int invariant_dim_ = 0;
  bool degenerate_ = false;
};

/// One-shot certificates on the projector path.
double certify_weak(const AveragingScheme& w, const Representation& rho);
double certify_strong(const AveragingScheme& w, const Representation& rho);
CertificationReport certify(const AveragingScheme& w, const Representation& rho,
                            std::shared_ptr<const IrrepTable> table = nullptr);

struct MinimizeOptions {
  int trials = 16;
  int swap_budget = 200;
  std::uint64_t seed = 0;
  bool allow_uniform_fallback = true;
  /// Upper end of the draw-count search; 0 uses the sampler-size bound.
  long long max_draws = 0;
};

struct SearchStep {
  long long draws = 0;
  int best_size = 0;
  double best_eps = 0.0;
  int feasible_trials = 0;
};

struct MinimizeResult {
  AveragingScheme scheme;
  double eps = 0.0;
  bool feasible = false;
  bool used_fallback = false;
  int swaps_accepted = 0;
  std::vector<SearchStep> trace;
};

/// Heuristic search for a small scheme with weak certificate <= eps_target:
/// binary search over the number of draws with `trials` random schemes each,
/// then single-element support swaps. When nothing certifies and the fallback
/// is disabled the result has feasible == false and carries the best candidate.
MinimizeResult minimize_scheme(const Certifier& cert, double eps_target, const MinimizeOptions& opts = {});

nlohmann::json scheme_to_json(const AveragingScheme& w);
AveragingScheme scheme_from_json(const nlohmann::json& j);
nlohmann::json report_to_json(const CertificationReport& r);

}  // namespace avgsym
