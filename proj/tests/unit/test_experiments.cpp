#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "avgsym/error.hpp"
#include "avgsym/experiments.hpp"

using namespace avgsym;

TEST(Figure1, FullSubsetMatchesFullAverage) {
  Figure1Config cfg;
  cfg.grid = 24;
  cfg.subset_sizes = {1, 5, 100};
  const auto r = figure1_demo(cfg);
  EXPECT_EQ(r.rel_distance[2], 0.0);
  EXPECT_EQ(r.averages[2], r.full_average);
  EXPECT_EQ(r.xs.size(), 24u * 24u);
  EXPECT_EQ(r.xs.front(), -1.0);
  EXPECT_EQ(r.xs[23], 1.0);
}

TEST(Figure1, SingleRotationIsTheRotatedField) {
  Figure1Config cfg;
  cfg.grid = 9;
  cfg.subset_sizes = {1};
  cfg.seed = 4;
  const auto r = figure1_demo(cfg);
  const double a = 2.0 * std::numbers::pi * r.subsets[0][0] / cfg.N;
  for (std::size_t p = 0; p < r.xs.size(); ++p) {
    const double x = std::cos(a) * r.xs[p] + std::sin(a) * r.ys[p];
    const double y = -std::sin(a) * r.xs[p] + std::cos(a) * r.ys[p];
    EXPECT_NEAR(r.averages[0][p], figure1_field(x, y), 1e-15);
  }
}

TEST(Figure1, FullAverageIsRotationInvariant) {
  Figure1Config cfg;
  cfg.grid = 7;
  cfg.subset_sizes = {1};
  const auto r = figure1_demo(cfg);
  std::vector<double> angles;
  for (int j = 0; j < cfg.N; ++j) angles.push_back(2.0 * std::numbers::pi * j / cfg.N);
  for (int k : {1, 17, 50}) {
    const double t = 2.0 * std::numbers::pi * k / cfg.N;
    for (std::size_t p = 0; p < r.xs.size(); ++p) {
      const double x = std::cos(t) * r.xs[p] - std::sin(t) * r.ys[p];
      const double y = std::sin(t) * r.xs[p] + std::cos(t) * r.ys[p];
      double s = 0.0;
      for (double a : angles) s += figure1_field(std::cos(a) * x + std::sin(a) * y, -std::sin(a) * x + std::cos(a) * y);
      EXPECT_NEAR(s / cfg.N, r.full_average[p], 1e-12);
    }
  }
}

TEST(Figure1, FiveRotationsUsuallyBeatOne) {
  int wins = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    Figure1Config cfg;
    cfg.grid = 32;
    cfg.subset_sizes = {1, 5};
    cfg.seed = s;
    const auto r = figure1_demo(cfg);
    wins += r.rel_distance[1] < r.rel_distance[0];
  }
  EXPECT_GE(wins, 18);
}

TEST(Figure1, BadConfig) {
  Figure1Config cfg;
  cfg.subset_sizes = {101};
  EXPECT_THROW(figure1_demo(cfg), Error);
  cfg.subset_sizes = {1};
  cfg.grid = 1;
  EXPECT_THROW(figure1_demo(cfg), Error);
}

TEST(Regression, Noiseless) {
  RegressionConfig cfg;
  cfg.sigma = 0.0;
  cfg.trials = 20;
  cfg.n = 16;
  cfg.eps = 0.3;
  const auto r = regression_risk(cfg);
  EXPECT_LE(r.erm.risk, 1e-18);
  EXPECT_LE(r.exact.risk, 1e-18);
  EXPECT_LE(r.weak.risk, 1e-18);
}

TEST(Regression, UniformSchemeEqualsExact) {
  RegressionConfig cfg;
  cfg.group = "dihedral:3";
  cfg.eps = 0.0;
  cfg.trials = 200;
  cfg.n = 60;
  const auto r = regression_risk(cfg);
  EXPECT_EQ(r.weak_trials, r.exact_trials);
  EXPECT_EQ(r.scheme.size(), 6);
}

TEST(Regression, ExactBeatsErm) {
  RegressionConfig cfg;
  cfg.group = "signflip:2";
  cfg.trials = 1000;
  cfg.n = 80;
  cfg.eps = 0.2;
  const auto r = regression_risk(cfg);
  EXPECT_LE(r.exact.risk, r.erm.risk + 2.0 * std::hypot(r.exact.std_error, r.erm.std_error));
  for (int t = 0; t < cfg.trials; ++t) EXPECT_LE(r.weak_trials[t], r.erm_trials[t] + 1e-15);
  EXPECT_EQ(r.m, 4);
  EXPECT_EQ(r.m_triv, 1);
}

TEST(Regression, Reproducible) {
  RegressionConfig cfg;
  cfg.group = "cyclic:5";
  cfg.trials = 50;
  cfg.n = 20;
  const auto a = regression_risk(cfg), b = regression_risk(cfg);
  EXPECT_EQ(a.erm_trials, b.erm_trials);
  EXPECT_EQ(a.weak_trials, b.weak_trials);
}

TEST(Regression, Errors) {
  RegressionConfig cfg;
  cfg.n = 3;
  EXPECT_THROW(regression_risk(cfg), Error);
  cfg.n = 40;
  cfg.rep = "permutation";
  EXPECT_THROW(regression_risk(cfg), Error);
}

namespace {

MlpConfig tiny_mlp() {
  MlpConfig cfg;
  cfg.d = 6;
  cfg.n_train = 512;
  cfg.n_test = 256;
  cfg.h1 = 16;
  cfg.h2 = 8;
  cfg.batch = 64;
  cfg.epochs = 4;
  cfg.k_max = 6;
  cfg.curve_subset = 8;
  cfg.lr = 1e-2;
  return cfg;
}

}  // namespace

TEST(Mlp, SignSubsets) {
  const auto s = draw_sign_subset(20, 32, 1);
  EXPECT_EQ(s.size(), 32u);
  EXPECT_EQ(s[0], 0u);
  EXPECT_EQ(std::set<std::uint32_t>(s.begin(), s.end()).size(), 32u);
  EXPECT_EQ(draw_sign_subset(3, 8, 2).size(), 8u);
  EXPECT_THROW(draw_sign_subset(3, 9, 2), Error);
}

TEST(Mlp, IdentitySubsetIsPlainEvaluation) {
  const auto r = mlp_experiment(tiny_mlp());
  EXPECT_EQ(r.subset_sizes.front(), 1);
  EXPECT_EQ(r.test_loss.front(), r.curve_plain.back());
  EXPECT_EQ(r.curve_epochs.back(), 4);
  EXPECT_EQ(r.subset_sizes.back(), 64);
}

TEST(Mlp, FullGroupAverageIsInvariant) {
  Mlp net(5, 12, 6, 3);
  std::vector<std::uint32_t> all(32);
  for (std::uint32_t p = 0; p < 32; ++p) all[p] = p;
  Eigen::MatrixXf x = Eigen::MatrixXf::Random(5, 40);
  const auto base = net.averaged(x, all);
  for (std::uint32_t p : {1u, 6u, 31u}) {
    Eigen::MatrixXf y = x;
    for (int j = 0; j < 5; ++j)
      if (p >> j & 1u) y.row(j) *= -1.0f;
    const auto flipped = net.averaged(y, all);
    for (int i = 0; i < 40; ++i) EXPECT_NEAR(flipped(i), base(i), 1e-5f * (1.0f + std::abs(base(i))));
  }
}

TEST(Mlp, InvariantPredictorUnchanged) {
  const int d = 4;
  const Predictor f = [](const Eigen::MatrixXf& x) -> Eigen::RowVectorXf {
    return Eigen::RowVectorXf::LinSpaced(x.rows(), 1.0f, 2.0f) * x.cwiseAbs();
  };
  const Eigen::MatrixXf x = Eigen::MatrixXf::Random(d, 10);
  const auto avg = sign_average(f, x, draw_sign_subset(d, 8, 5));
  EXPECT_TRUE(avg.isApprox(f(x), 1e-6f));
}

TEST(Mlp, Reproducible) {
  const auto a = mlp_experiment(tiny_mlp()), b = mlp_experiment(tiny_mlp());
  EXPECT_EQ(a.test_loss, b.test_loss);
  EXPECT_EQ(a.curve_averaged, b.curve_averaged);
}

TEST(Mlp, DivergenceIsReported) {
  auto cfg = tiny_mlp();
  cfg.lr = 1e4;
  try {
    mlp_experiment(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::training_failure);
    EXPECT_NE(std::string(e.what()).find("epoch"), std::string::npos);
  }
}

TEST(Mlp, BadConfig) {
  auto cfg = tiny_mlp();
  cfg.batch = cfg.n_train + 1;
  EXPECT_THROW(mlp_experiment(cfg), Error);
}
