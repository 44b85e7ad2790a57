#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "avgsym/irreps.hpp"

namespace avgsym {

inline constexpr double kWeightEpsilon = 1e-15;

/// A complex-valued function on the elements of a group.
class GroupSignal {
 public:
  GroupSignal(GroupPtr group, std::vector<Complex> values);
  static GroupSignal zero(GroupPtr group);
  static GroupSignal real(GroupPtr group, std::span<const double> values);
  /// Dense signal from (support, weights) pairs; repeated indices accumulate.
  static GroupSignal from_sparse(GroupPtr group, std::span<const int> support, std::span<const double> weights);

  const Group& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  const std::vector<Complex>& values() const { return values_; }
  Complex operator[](int g) const { return values_[g]; }
  int order() const { return static_cast<int>(values_.size()); }

  /// Indices with |value| > kWeightEpsilon, ascending.
  std::vector<int> support() const;
  double l2_norm_sq() const;

 private:
  GroupPtr group_;
  std::vector<Complex> values_;
};

struct FourierCoefficients {
  const IrrepTable* table = nullptr;
  std::vector<CMatrix> blocks;

  const CMatrix& operator[](int i) const { return blocks[i]; }
  int count() const { return static_cast<int>(blocks.size()); }
};

/// hat(w)(pi) = sum_g w(g) pi(g)^H for every irrep of the table.
FourierCoefficients fourier(const GroupSignal& w, const IrrepTable& table);
/// w(g) = (1/|G|) sum_pi d_pi Tr(hat(w)(pi) pi(g)).
GroupSignal inverse_fourier(const FourierCoefficients& coeffs, const IrrepTable& table);

/// |sum_g |w(g)|^2 - (1/|G|) sum_pi d_pi ||hat(w)(pi)||_F^2|
double plancherel_residual(const GroupSignal& w, const IrrepTable& table);

/// Largest squared spectral norm over nontrivial irreps; with restrict_to,
/// only irreps i with restrict_to[i] >= 1 count.
double max_nontrivial_norm(const FourierCoefficients& coeffs, const IrrepTable& table,
                           const std::vector<int>* restrict_to = nullptr);
/// Squared spectral norm per irrep.
std::vector<double> block_norms_sq(const FourierCoefficients& coeffs);

/// (a * b)(g) = sum_h a(h) b(h^{-1} g)
GroupSignal convolve(const GroupSignal& a, const GroupSignal& b);

/// {label: [[[re, im], ...], ...]}
nlohmann::json coefficients_to_json(const FourierCoefficients& coeffs, const IrrepTable& table);

}  // namespace avgsym
