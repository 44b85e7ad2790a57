#include "avgsym/kernels.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

#include "avgsym/error.hpp"

namespace avgsym::kernels {

namespace {

void check_scheme_args(const Representation& rho, std::span<const int> support, std::span<const double> weights) {
  if (support.size() != weights.size()) fail(ErrorKind::usage, "support and weights differ in length");
  for (int g : support)
    if (g < 0 || g >= rho.group().order()) fail(ErrorKind::usage, "support element out of range");
}

/// Column j of sum_s w_s rho(g_s), written into out.
void scheme_column(const Representation& rho, std::span<const int> support, std::span<const double> weights,
                   int j, CMatrix& out) {
  if (rho.storage() == Representation::Storage::permutation) {
    for (std::size_t s = 0; s < support.size(); ++s) out(rho.image(support[s], j), j) += weights[s];
  } else {
    for (std::size_t s = 0; s < support.size(); ++s) out.col(j) += weights[s] * rho.dense(support[s]).col(j);
  }
}

CMatrix fourier_block(const IrrepTable& table, int i, std::span<const Complex> signal) {
  const auto& pi = table.irreps[i];
  CMatrix acc = CMatrix::Zero(pi.dim(), pi.dim());
  for (std::size_t g = 0; g < signal.size(); ++g)
    if (signal[g] != Complex(0.0, 0.0)) acc.noalias() += signal[g] * pi.dense(static_cast<int>(g)).adjoint();
  return acc;
}

double translate_residual(const Representation& rho, const CMatrix& b, int g) {
  CMatrix diff = -b;
  if (rho.storage() == Representation::Storage::permutation) {
    for (int j = 0; j < rho.dim(); ++j) diff.row(rho.image(g, j)) += b.row(j);
  } else {
    diff.noalias() += rho.dense(g) * b;
  }
  return operator_norm_sq(diff);
}

double rotated_sample(const ScalarField& f, double x, double y, double angle) {
  // R(angle)^{-1} applied to (x, y).
  const double c = std::cos(angle), s = std::sin(angle);
  return f(c * x + s * y, -s * x + c * y);
}

void check_signal(const IrrepTable& table, std::span<const Complex> signal) {
  if (static_cast<int>(signal.size()) != table.group->order())
    fail(ErrorKind::group_mismatch, "signal length does not match the table's group");
}

int g_thread_limit = 0;

}  // namespace

namespace serial {

CMatrix scheme_operator(const Representation& rho, std::span<const int> support, std::span<const double> weights) {
  check_scheme_args(rho, support, weights);
  CMatrix out = CMatrix::Zero(rho.dim(), rho.dim());
  for (int j = 0; j < rho.dim(); ++j) scheme_column(rho, support, weights, j, out);
  return out;
}

std::vector<CMatrix> fourier_coefficients(const IrrepTable& table, std::span<const Complex> signal) {
  check_signal(table, signal);
  std::vector<CMatrix> out(table.count());
  for (int i = 0; i < table.count(); ++i) out[i] = fourier_block(table, i, signal);
  return out;
}

double max_translate_residual(const Representation& rho, const CMatrix& b) {
  double worst = 0.0;
  for (int g = 0; g < rho.group().order(); ++g) worst = std::max(worst, translate_residual(rho, b, g));
  return worst;
}

std::vector<double> rotation_average(std::span<const double> xs, std::span<const double> ys,
                                     std::span<const double> angles, const ScalarField& f) {
  std::vector<double> out(xs.size());
  for (std::size_t p = 0; p < xs.size(); ++p) {
    double s = 0.0;
    for (double a : angles) s += rotated_sample(f, xs[p], ys[p], a);
    out[p] = s / static_cast<double>(angles.size());
  }
  return out;
}

}  // namespace serial

namespace parallel {

CMatrix scheme_operator(const Representation& rho, std::span<const int> support, std::span<const double> weights) {
  check_scheme_args(rho, support, weights);
  CMatrix out = CMatrix::Zero(rho.dim(), rho.dim());
  const int dim = rho.dim();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < dim; ++j) scheme_column(rho, support, weights, j, out);
  return out;
}

std::vector<CMatrix> fourier_coefficients(const IrrepTable& table, std::span<const Complex> signal) {
  check_signal(table, signal);
  std::vector<CMatrix> out(table.count());
  const int count = table.count();
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < count; ++i) out[i] = fourier_block(table, i, signal);
  return out;
}

double max_translate_residual(const Representation& rho, const CMatrix& b) {
  const int n = rho.group().order();
  std::vector<double> per(n);
#pragma omp parallel for schedule(dynamic)
  for (int g = 0; g < n; ++g) per[g] = translate_residual(rho, b, g);
  return n ? *std::max_element(per.begin(), per.end()) : 0.0;
}

std::vector<double> rotation_average(std::span<const double> xs, std::span<const double> ys,
                                     std::span<const double> angles, const ScalarField& f) {
  std::vector<double> out(xs.size());
  const auto points = static_cast<std::ptrdiff_t>(xs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < points; ++p) {
    double s = 0.0;
    for (double a : angles) s += rotated_sample(f, xs[p], ys[p], a);
    out[p] = s / static_cast<double>(angles.size());
  }
  return out;
}

}  // namespace parallel

void set_thread_limit(int threads) {
  g_thread_limit = std::max(0, threads);
  if (g_thread_limit > 0) omp_set_num_threads(g_thread_limit);
}

int thread_limit() { return g_thread_limit; }

}  // namespace avgsym::kernels
