#include "avgsym/fourier.hpp"

#include <cmath>


#include "avgsym/error.hpp"
#include "avgsym/kernels.hpp"

namespace avgsym {

GroupSignal::GroupSignal(GroupPtr group, std::vector<Complex> values)
    : group_(std::move(group)), values_(std::move(values)) {
  if (!group_) fail(ErrorKind::usage, "signal without a group");
  if (static_cast<int>(values_.size()) != group_->order())
    fail(ErrorKind::group_mismatch, "signal length differs from the group order");
}

GroupSignal GroupSignal::zero(GroupPtr group) {
  const int n = group->order();
  return GroupSignal(std::move(group), std::vector<Complex>(n));
}

GroupSignal GroupSignal::real(GroupPtr group, std::span<const double> values) {
  return GroupSignal(std::move(group), std::vector<Complex>(values.begin(), values.end()));
}

GroupSignal GroupSignal::from_sparse(GroupPtr group, std::span<const int> support, std::span<const double> weights) {
  if (support.size() != weights.size()) fail(ErrorKind::usage, "support and weights differ in length");
  std::vector<Complex> v(group->order());
  for (std::size_t s = 0; s < support.size(); ++s) {
    if (support[s] < 0 || support[s] >= group->order()) fail(ErrorKind::usage, "support element out of range");
    v[support[s]] += weights[s];
  }
  return GroupSignal(std::move(group), std::move(v));
}

std::vector<int> GroupSignal::support() const {
  std::vector<int> out;
  for (int g = 0; g < order(); ++g)
    if (std::abs(values_[g]) > kWeightEpsilon) out.push_back(g);
  return out;
}

double GroupSignal::l2_norm_sq() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return s;
}

FourierCoefficients fourier(const GroupSignal& w, const IrrepTable& table) {
  if (!w.group().same_as(*table.group)) fail(ErrorKind::group_mismatch, "signal and irrep table use different groups");
  return FourierCoefficients{&table, kernels::parallel::fourier_coefficients(table, w.values())};
}

GroupSignal inverse_fourier(const FourierCoefficients& coeffs, const IrrepTable& table) {
  if (coeffs.count() != table.count()) fail(ErrorKind::usage, "coefficient count differs from the irrep count");
  for (int i = 0; i < table.count(); ++i)
    if (coeffs[i].rows() != table.dims[i] || coeffs[i].cols() != table.dims[i])
      fail(ErrorKind::usage, "coefficient block has the wrong dimension");
  const int n = table.group->order();
  std::vector<Complex> v(n);
  for (int g = 0; g < n; ++g) {
    Complex s = 0.0;
    for (int i = 0; i < table.count(); ++i) {
      // Tr(A B) without forming the product.
      const CMatrix& pi = table.irreps[i].dense(g);
      s += static_cast<double>(table.dims[i]) * (coeffs[i].transpose().cwiseProduct(pi)).sum();
    }
    v[g] = s / static_cast<double>(n);
  }
  return GroupSignal(table.group, std::move(v));
}

double plancherel_residual(const GroupSignal& w, const IrrepTable& table) {
  const auto coeffs = fourier(w, table);
  double rhs = 0.0;
  for (int i = 0; i < coeffs.count(); ++i) rhs += table.dims[i] * coeffs[i].squaredNorm();
  rhs /= static_cast<double>(w.order());
  return std::abs(w.l2_norm_sq() - rhs);
}

std::vector<double> block_norms_sq(const FourierCoefficients& coeffs) {
  std::vector<double> out(coeffs.count());
  for (int i = 0; i < coeffs.count(); ++i) {
    out[i] = operator_norm_sq(coeffs[i]);
  }
  return out;
}

double max_nontrivial_norm(const FourierCoefficients& coeffs, const IrrepTable& table,
                           const std::vector<int>* restrict_to) {
  if (restrict_to && static_cast<int>(restrict_to->size()) != table.count())
    fail(ErrorKind::usage, "multiplicity vector length differs from the irrep count");
  double worst = 0.0;
  for (int i = 0; i < coeffs.count(); ++i) {
    if (table.is_trivial(i)) continue;
    if (restrict_to && (*restrict_to)[i] < 1) continue;
    worst = std::max(worst, operator_norm_sq(coeffs[i]));
  }
  return worst;
}

GroupSignal convolve(const GroupSignal& a, const GroupSignal& b) {
  if (!a.group().same_as(b.group())) fail(ErrorKind::group_mismatch, "convolution of signals on different groups");
  const Group& g = a.group();
  std::vector<Complex> v(g.order());
  for (int h : a.support()) {
    for (int x : b.support()) v[g.mul(h, x)] += a[h] * b[x];
  }
  return GroupSignal(a.group_ptr(), std::move(v));
}

nlohmann::json coefficients_to_json(const FourierCoefficients& coeffs, const IrrepTable& table) {
  nlohmann::json out = nlohmann::json::object();
  for (int i = 0; i < coeffs.count(); ++i) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < coeffs[i].rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < coeffs[i].cols(); ++c) row.push_back({coeffs[i](r, c).real(), coeffs[i](r, c).imag()});
      rows.push_back(std::move(row));
    }
    out[table.labels[i]] = std::move(rows);
  }
  return out;
}

}  // namespace avgsym
