#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "avgsym/averaging.hpp"

namespace avgsym {

// ---- rotation averaging on a grid -------------------------------------------

struct Figure1Config {
  int N = 100;
  int grid = 200;
  std::vector<int> subset_sizes{1, 5, 100};
  std::uint64_t seed = 0;
};

/// exp(-((x - 0.6)^2 + (y - 0.1)^2) / 0.08) + 0.4 x
double figure1_field(double x, double y);
inline constexpr const char* kFigure1FieldFormula = "exp(-((x-0.6)^2+(y-0.1)^2)/0.08)+0.4*x";

struct Figure1Result {
  std::vector<double> xs, ys;
  std::vector<double> full_average;
  /// One averaged field per subset size.
  std::vector<std::vector<double>> averages;
  /// Rotation indices j (angle 2 pi j / N) used per subset size, ascending.
  std::vector<std::vector<int>> subsets;
  /// ||avg_m - avg_full||_2 / ||avg_full||_2 over the grid.
  std::vector<double> rel_distance;
};

Figure1Result figure1_demo(const Figure1Config& cfg);
void write_grid_csv(std::ostream& os, const std::vector<double>& xs, const std::vector<double>& ys,
                    const std::vector<double>& values);
nlohmann::json figure1_summary(const Figure1Config& cfg, const Figure1Result& r);

// ---- symmetrized least squares ----------------------------------------------

struct RegressionConfig {
  std::string group = "signflip:2";
  std::string rep = "regular";
  double sigma = 1.0;
  long long n = 400;
  int trials = 2000;
  /// Target for the weak scheme; 0 selects the uniform scheme.
  double eps = 0.05;
  std::uint64_t seed = 0;
  int search_trials = 16;
};

struct RiskEstimate {
  double risk = 0.0;
  double std_error = 0.0;
};

struct RegressionResult {
  RiskEstimate erm, exact, weak;
  int m = 0;
  int m_triv = 0;
  long long n = 0;
  double sigma = 0.0;
  double eps = 0.0;
  AveragingScheme scheme;
  double scheme_eps = 0.0;
  /// Rank-deficient designs that were redrawn.
  long long redraws = 0;
  /// Per-trial risks, in trial order.
  std::vector<double> erm_trials, exact_trials, weak_trials;
};

/// Monte Carlo risk of OLS, its exact symmetrization and a weak-scheme symmetrization
/// on X = G with the indicator basis sqrt(|G|) 1[x = j].
RegressionResult regression_risk(const RegressionConfig& cfg);
void write_regression_csv(std::ostream& os, const RegressionResult& r);

// ---- evaluation-time averaging of an MLP ------------------------------------

struct MlpConfig {
  int d = 20;
  int n_train = 50000;
  int n_test = 50000;
  int h1 = 128;
  int h2 = 64;
  double lr = 1e-3;
  int batch = 256;
  int epochs = 500;
  int k_max = 10;
  std::uint64_t seed = 0;
  /// Epoch curve: record every curve_stride epochs (and the last).
  int curve_stride = 1;
  int curve_subset = 32;
};

struct MlpResult {
  std::vector<long long> subset_sizes;
  std::vector<double> test_loss;
  std::vector<int> curve_epochs;
  std::vector<double> curve_plain;
  std::vector<double> curve_averaged;
};

/// Sign patterns as bit masks (bit j negates coordinate j): the identity plus
/// size - 1 distinct others drawn uniformly.
std::vector<std::uint32_t> draw_sign_subset(int d, long long size, std::uint64_t seed);

using Predictor = std::function<Eigen::RowVectorXf(const Eigen::MatrixXf&)>;

/// Mean of predictor outputs over the sign patterns applied to the columns of x.
Eigen::RowVectorXf sign_average(const Predictor& f, const Eigen::MatrixXf& x, const std::vector<std::uint32_t>& patterns);

/// Fully connected d -> h1 -> h2 -> 1 network with ReLU, trained by minibatch SGD on squared loss.
class Mlp {
 public:
  Mlp(int d, int h1, int h2, std::uint64_t seed);

  /// Columns are samples.
  Eigen::RowVectorXf forward(const Eigen::MatrixXf& x) const;
  /// One SGD step on the batch; returns the batch loss before the step.
  double sgd_step(const Eigen::MatrixXf& x, const Eigen::RowVectorXf& y, float lr);
  /// Mean of forward() over the sign patterns applied to x.
  Eigen::RowVectorXf averaged(const Eigen::MatrixXf& x, const std::vector<std::uint32_t>& patterns) const;

 private:
  Eigen::MatrixXf w1_, w2_, w3_;
  Eigen::VectorXf b1_, b2_, b3_;
};

MlpResult mlp_experiment(const MlpConfig& cfg);
void write_mlp_subset_csv(std::ostream& os, const MlpResult& r);
void write_mlp_curve_csv(std::ostream& os, const MlpResult& r);

}  // namespace avgsym
