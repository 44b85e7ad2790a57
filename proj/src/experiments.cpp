#include "avgsym/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>

#include "avgsym/error.hpp"
#include "avgsym/kernels.hpp"
#include "avgsym/rng.hpp"

namespace avgsym {

// ---- rotation averaging -----------------------------------------------------

double figure1_field(double x, double y) {
  const double dx = x - 0.6, dy = y - 0.1;
  return std::exp(-(dx * dx + dy * dy) / 0.08) + 0.4 * x;
}

namespace {

std::vector<double> angles_of(const std::vector<int>& idx, int n) {
  std::vector<double> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = 2.0 * std::numbers::pi * idx[i] / n;
  return out;
}

double l2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

Figure1Result figure1_demo(const Figure1Config& cfg) {
  if (cfg.N < 1) fail(ErrorKind::usage, "rotation count must be positive");
  if (cfg.grid < 2) fail(ErrorKind::usage, "grid resolution must be at least 2");
  for (int m : cfg.subset_sizes)
    if (m < 1 || m > cfg.N) fail(ErrorKind::usage, fmt::format("subset size {} outside [1, {}]", m, cfg.N));

  Figure1Result r;
  const int g = cfg.grid;
  r.xs.reserve(static_cast<std::size_t>(g) * g);
  r.ys.reserve(static_cast<std::size_t>(g) * g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      r.xs.push_back(-1.0 + 2.0 * j / (g - 1));
      r.ys.push_back(-1.0 + 2.0 * i / (g - 1));
    }

  std::vector<int> all(cfg.N);
  std::iota(all.begin(), all.end(), 0);
  r.full_average = kernels::parallel::rotation_average(r.xs, r.ys, angles_of(all, cfg.N), figure1_field);
  const double full_norm = l2(r.full_average);

  for (std::size_t s = 0; s < cfg.subset_sizes.size(); ++s) {
    const int m = cfg.subset_sizes[s];
    std::vector<int> pick;
    Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(s));
    std::sample(all.begin(), all.end(), std::back_inserter(pick), m, rng);
    std::sort(pick.begin(), pick.end());
    auto avg = kernels::parallel::rotation_average(r.xs, r.ys, angles_of(pick, cfg.N), figure1_field);
    std::vector<double> diff(avg.size());
    for (std::size_t p = 0; p < avg.size(); ++p) diff[p] = avg[p] - r.full_average[p];
    r.rel_distance.push_back(full_norm > 0.0 ? l2(diff) / full_norm : l2(diff));
    r.averages.push_back(std::move(avg));
    r.subsets.push_back(std::move(pick));
  }
  return r;
}

void write_grid_csv(std::ostream& os, const std::vector<double>& xs, const std::vector<double>& ys,
                    const std::vector<double>& values) {
  os << "x,y,value\n";
  for (std::size_t p = 0; p < values.size(); ++p) os << fmt::format("{:.17g},{:.17g},{:.17g}\n", xs[p], ys[p], values[p]);
}

nlohmann::json figure1_summary(const Figure1Config& cfg, const Figure1Result& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t s = 0; s < cfg.subset_sizes.size(); ++s)
    rows.push_back({{"subset_size", cfg.subset_sizes[s]}, {"rotations", r.subsets[s]}, {"rel_l2_distance", r.rel_distance[s]}});
  return {{"N", cfg.N}, {"grid", cfg.grid}, {"field", kFigure1FieldFormula}, {"subsets", rows}};
}

// ---- symmetrized least squares ----------------------------------------------

namespace {

RiskEstimate summarize(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var = v.size() > 1 ? var / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

}  // namespace

RegressionResult regression_risk(const RegressionConfig& cfg) {
  if (cfg.rep != "regular")
    fail(ErrorKind::capability, fmt::format("regression runs on the regular representation, not '{}'", cfg.rep));
  if (cfg.trials < 1) fail(ErrorKind::usage, "at least one trial is required");
  if (cfg.sigma < 0.0) fail(ErrorKind::usage, "noise level must be nonnegative");
  if (cfg.eps < 0.0 || cfg.eps >= 1.0) fail(ErrorKind::usage, "eps must lie in [0, 1)");
  auto g = parse_group(cfg.group);
  const int m = g->order();
  if (cfg.n < m) fail(ErrorKind::usage, fmt::format("n = {} is below the representation dimension {}", cfg.n, m));

  auto rho = rep_regular(g);
  RegressionResult r;
  r.m = m;
  r.m_triv = invariant_dimension(rho);
  r.n = cfg.n;
  r.sigma = cfg.sigma;
  r.eps = cfg.eps;

  const RMatrix proj = invariant_projector(rho).real();
  if (cfg.eps == 0.0) {
    r.scheme = uniform_scheme(g);
  } else {
    std::shared_ptr<const IrrepTable> table;
    try {
      table = std::make_shared<const IrrepTable>(irreps_of(g));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::capability) throw;
    }
    MinimizeOptions opts;
    opts.trials = cfg.search_trials;
    opts.seed = derive_seed(cfg.seed, 0xa5a5);
    r.scheme = minimize_scheme(Certifier(rho, std::move(table)), cfg.eps, opts).scheme;
  }
  const RMatrix mw = apply_scheme(r.scheme, rho).real();
  r.scheme_eps = Certifier(rho).weak(r.scheme);

  // f* = 1 on X, i.e. theta* = (1/sqrt(m), ..., 1/sqrt(m)); invariant with unit norm.
  const RVector theta_star = RVector::Constant(m, 1.0 / std::sqrt(static_cast<double>(m)));
  const double scale = std::sqrt(static_cast<double>(m));

  r.erm_trials.assign(cfg.trials, 0.0);
  r.exact_trials.assign(cfg.trials, 0.0);
  r.weak_trials.assign(cfg.trials, 0.0);
  std::vector<long long> redraws(cfg.trials, 0);
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < cfg.trials; ++t) {
    Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(t));
    std::uniform_int_distribution<int> pick(0, m - 1);
    std::normal_distribution<double> noise(0.0, 1.0);
    RMatrix phi(cfg.n, m);
    RVector y(cfg.n);
    for (;;) {
      phi.setZero();
      for (long long i = 0; i < cfg.n; ++i) {
        const int x = pick(rng);
        phi(i, x) = scale;
        y(i) = 1.0 + cfg.sigma * noise(rng);
      }
      if (numerical_rank(phi, 1e-12) == m) break;
      ++redraws[t];
    }
    const RVector theta = (phi.transpose() * phi).ldlt().solve(phi.transpose() * y);
    r.erm_trials[t] = (theta - theta_star).squaredNorm();
    r.exact_trials[t] = (proj * theta - theta_star).squaredNorm();
    r.weak_trials[t] = (mw * theta - theta_star).squaredNorm();
  }
  r.redraws = std::accumulate(redraws.begin(), redraws.end(), 0LL);
  r.erm = summarize(r.erm_trials);
  r.exact = summarize(r.exact_trials);
  r.weak = summarize(r.weak_trials);
  return r;
}

void write_regression_csv(std::ostream& os, const RegressionResult& r) {
  os << "estimator,risk,stderr,m,m_triv,n,sigma,eps\n";
  auto row = [&](const char* name, const RiskEstimate& e) {
    os << fmt::format("{},{:.17g},{:.17g},{},{},{},{:.17g},{:.17g}\n", name, e.risk, e.std_error, r.m, r.m_triv, r.n,
                      r.sigma, r.eps);
  };
  row("erm", r.erm);
  row("exact", r.exact);
  row("weak", r.weak);
}

// ---- MLP ----------------------------------------------------------------------

std::vector<std::uint32_t> draw_sign_subset(int d, long long size, std::uint64_t seed) {
  if (d < 1 || d > 30) fail(ErrorKind::usage, "sign-pattern dimension must lie in [1, 30]");
  const std::uint32_t total = 1u << d;
  if (size < 1 || size > static_cast<long long>(total)) fail(ErrorKind::usage, "subset size outside [1, 2^d]");
  std::vector<std::uint32_t> out{0};
  std::unordered_set<std::uint32_t> seen{0};
  Rng rng = make_rng(seed);
  std::uniform_int_distribution<std::uint32_t> pick(1, total - 1);
  while (static_cast<long long>(out.size()) < size) {
    const auto p = pick(rng);
    if (seen.insert(p).second) out.push_back(p);
  }
  return out;
}

namespace {

Eigen::MatrixXf uniform_matrix(int rows, int cols, float bound, Rng& rng) {
  std::uniform_real_distribution<float> u(-bound, bound);
  Eigen::MatrixXf m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = u(rng);
  return m;
}

Eigen::MatrixXf apply_signs(const Eigen::MatrixXf& x, std::uint32_t pattern) {
  Eigen::MatrixXf out = x;
  for (int j = 0; j < x.rows(); ++j)
    if (pattern >> j & 1u) out.row(j) *= -1.0f;
  return out;
}

double mse(const Eigen::RowVectorXf& pred, const Eigen::RowVectorXf& y) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double e = static_cast<double>(pred(i)) - y(i);
    s += e * e;
  }
  return s / static_cast<double>(y.size());
}

}  // namespace

Mlp::Mlp(int d, int h1, int h2, std::uint64_t seed) {
  if (d < 1 || h1 < 1 || h2 < 1) fail(ErrorKind::usage, "layer widths must be positive");
  Rng rng = make_rng(seed);
  // Fan-in scaled uniform initialization, bound 1/sqrt(fan_in), for weights and biases.
  auto bound = [](int fan_in) { return 1.0f / std::sqrt(static_cast<float>(fan_in)); };
  w1_ = uniform_matrix(h1, d, bound(d), rng);
  b1_ = uniform_matrix(h1, 1, bound(d), rng);
  w2_ = uniform_matrix(h2, h1, bound(h1), rng);
  b2_ = uniform_matrix(h2, 1, bound(h1), rng);
  w3_ = uniform_matrix(1, h2, bound(h2), rng);
  b3_ = uniform_matrix(1, 1, bound(h2), rng);
}

Eigen::RowVectorXf Mlp::forward(const Eigen::MatrixXf& x) const {
  const Eigen::MatrixXf a1 = ((w1_ * x).colwise() + b1_).cwiseMax(0.0f);
  const Eigen::MatrixXf a2 = ((w2_ * a1).colwise() + b2_).cwiseMax(0.0f);
  return (w3_ * a2).array() + b3_(0);
}

double Mlp::sgd_step(const Eigen::MatrixXf& x, const Eigen::RowVectorXf& y, float lr) {
  const Eigen::MatrixXf z1 = (w1_ * x).colwise() + b1_;
  const Eigen::MatrixXf a1 = z1.cwiseMax(0.0f);
  const Eigen::MatrixXf z2 = (w2_ * a1).colwise() + b2_;
  const Eigen::MatrixXf a2 = z2.cwiseMax(0.0f);
  const Eigen::RowVectorXf out = (w3_ * a2).array() + b3_(0);
  const double loss = mse(out, y);

  const float inv_b = 1.0f / static_cast<float>(x.cols());
  const Eigen::RowVectorXf g3 = 2.0f * inv_b * (out - y);
  Eigen::MatrixXf g2 = w3_.transpose() * g3;
  g2.array() *= (z2.array() > 0.0f).cast<float>();
  Eigen::MatrixXf g1 = w2_.transpose() * g2;
  g1.array() *= (z1.array() > 0.0f).cast<float>();

  w3_.noalias() -= lr * g3 * a2.transpose();
  b3_(0) -= lr * g3.sum();
  w2_.noalias() -= lr * g2 * a1.transpose();
  b2_.noalias() -= lr * g2.rowwise().sum();
  w1_.noalias() -= lr * g1 * x.transpose();
  b1_.noalias() -= lr * g1.rowwise().sum();
  return loss;
}

Eigen::RowVectorXf sign_average(const Predictor& f, const Eigen::MatrixXf& x, const std::vector<std::uint32_t>& patterns) {
  if (patterns.empty()) fail(ErrorKind::usage, "empty sign subset");
  const int count = static_cast<int>(patterns.size());
  std::vector<Eigen::RowVectorXf> per(count);
#pragma omp parallel for schedule(dynamic)
  for (int p = 0; p < count; ++p) per[p] = f(patterns[p] ? apply_signs(x, patterns[p]) : x);
  Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(x.cols());
  for (const auto& v : per) acc += v.cast<double>();
  return (acc / static_cast<double>(count)).cast<float>();
}

Eigen::RowVectorXf Mlp::averaged(const Eigen::MatrixXf& x, const std::vector<std::uint32_t>& patterns) const {
  return sign_average([this](const Eigen::MatrixXf& m) { return forward(m); }, x, patterns);
}

MlpResult mlp_experiment(const MlpConfig& cfg) {
  if (cfg.batch < 1 || cfg.batch > cfg.n_train) fail(ErrorKind::usage, "batch size must lie in [1, n_train]");
  if (cfg.n_test < 1 || cfg.epochs < 1 || cfg.curve_stride < 1) fail(ErrorKind::usage, "bad MLP configuration");
  if (cfg.k_max < 0 || cfg.k_max > cfg.d) fail(ErrorKind::usage, "k_max must lie in [0, d]");
  if (cfg.curve_subset < 1 || cfg.curve_subset > (1LL << cfg.d)) fail(ErrorKind::usage, "curve subset outside [1, 2^d]");

  Rng data_rng = make_rng(cfg.seed, 1);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  Eigen::VectorXf w_star(cfg.d);
  for (int j = 0; j < cfg.d; ++j) w_star(j) = normal(data_rng);
  auto draw = [&](int n, Eigen::MatrixXf& x, Eigen::RowVectorXf& y) {
    x.resize(cfg.d, n);
    for (int c = 0; c < n; ++c)
      for (int j = 0; j < cfg.d; ++j) x(j, c) = normal(data_rng);
    y = w_star.transpose() * x.cwiseAbs();
  };
  Eigen::MatrixXf x_train, x_test;
  Eigen::RowVectorXf y_train, y_test;
  draw(cfg.n_train, x_train, y_train);
  draw(cfg.n_test, x_test, y_test);

  const auto curve_patterns = draw_sign_subset(cfg.d, cfg.curve_subset, derive_seed(cfg.seed, 2));
  Mlp net(cfg.d, cfg.h1, cfg.h2, derive_seed(cfg.seed, 3));
  Rng shuffle_rng = make_rng(cfg.seed, 4);
  std::vector<int> order(cfg.n_train);
  std::iota(order.begin(), order.end(), 0);

  MlpResult r;
  Eigen::MatrixXf xb;
  Eigen::RowVectorXf yb;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (int start = 0; start < cfg.n_train; start += cfg.batch) {
      const int len = std::min(cfg.batch, cfg.n_train - start);
      xb.resize(cfg.d, len);
      yb.resize(len);
      for (int i = 0; i < len; ++i) {
        xb.col(i) = x_train.col(order[start + i]);
        yb(i) = y_train(order[start + i]);
      }
      const double loss = net.sgd_step(xb, yb, static_cast<float>(cfg.lr));
      if (!std::isfinite(loss))
        fail(ErrorKind::training_failure, fmt::format("training loss became non-finite in epoch {}", epoch));
    }
    if (epoch % cfg.curve_stride == 0 || epoch == cfg.epochs) {
      const double plain = mse(net.forward(x_test), y_test);
      if (!std::isfinite(plain))
        fail(ErrorKind::training_failure, fmt::format("test loss became non-finite in epoch {}", epoch));
      r.curve_epochs.push_back(epoch);
      r.curve_plain.push_back(plain);
      r.curve_averaged.push_back(mse(net.averaged(x_test, curve_patterns), y_test));
    }
  }

  for (int k = 0; k <= cfg.k_max; ++k) {
    const long long size = 1LL << k;
    const auto patterns = draw_sign_subset(cfg.d, size, derive_seed(cfg.seed, 100 + static_cast<std::uint64_t>(k)));
    r.subset_sizes.push_back(size);
    r.test_loss.push_back(mse(net.averaged(x_test, patterns), y_test));
  }
  return r;
}

void write_mlp_subset_csv(std::ostream& os, const MlpResult& r) {
  os << "subset_size,test_loss\n";
  for (std::size_t i = 0; i < r.subset_sizes.size(); ++i) os << fmt::format("{},{:.17g}\n", r.subset_sizes[i], r.test_loss[i]);
}

void write_mlp_curve_csv(std::ostream& os, const MlpResult& r) {
  os << "epoch,test_loss_plain,test_loss_averaged\n";
  for (std::size_t i = 0; i < r.curve_epochs.size(); ++i)
    os << fmt::format("{},{:.17g},{:.17g}\n", r.curve_epochs[i], r.curve_plain[i], r.curve_averaged[i]);
}

}  // namespace avgsym
