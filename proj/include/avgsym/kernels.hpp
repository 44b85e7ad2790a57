#pragma once

#include <functional>
#include <span>
#include <vector>

#include "avgsym/irreps.hpp"
#include "avgsym/linalg.hpp"
#include "avgsym/representation.hpp"

/// Data-parallel inner loops. Each kernel has a serial reference and an
/// OpenMP version with identical results (the parallel versions partition
/// independent outputs and never reorder a floating-point reduction).
namespace avgsym::kernels {

using ScalarField = std::function<double(double, double)>;

namespace serial {

/// sum_s w_s rho(g_s)
CMatrix scheme_operator(const Representation& rho, std::span<const int> support, std::span<const double> weights);

/// Per irrep: sum_g signal(g) pi(g)^H.
std::vector<CMatrix> fourier_coefficients(const IrrepTable& table, std::span<const Complex> signal);

/// max_g ||(rho(g) - I) b||_op^2
double max_translate_residual(const Representation& rho, const CMatrix& b);

/// out[p] = (1/|angles|) sum_a f(R(-angle_a) (xs[p], ys[p])).
std::vector<double> rotation_average(std::span<const double> xs, std::span<const double> ys,
                                     std::span<const double> angles, const ScalarField& f);

}  // namespace serial

namespace parallel {

CMatrix scheme_operator(const Representation& rho, std::span<const int> support, std::span<const double> weights);
std::vector<CMatrix> fourier_coefficients(const IrrepTable& table, std::span<const Complex> signal);
double max_translate_residual(const Representation& rho, const CMatrix& b);
std::vector<double> rotation_average(std::span<const double> xs, std::span<const double> ys,
                                     std::span<const double> angles, const ScalarField& f);

}  // namespace parallel

/// Caps the OpenMP worker count (0 keeps the runtime default).
void set_thread_limit(int threads);
int thread_limit();

}  // namespace avgsym::kernels
