#include "avgsym/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "avgsym/error.hpp"
#include "avgsym/kernels.hpp"
#include "avgsym/rng.hpp"

namespace avgsym {

AveragingScheme AveragingScheme::make(GroupPtr group, std::vector<int> support, std::vector<double> weights) {
  if (!group) fail(ErrorKind::usage, "scheme without a group");
  if (support.size() != weights.size()) fail(ErrorKind::usage, "support and weights differ in length");
  std::map<int, double> merged;
  double total = 0.0;
  for (std::size_t s = 0; s < support.size(); ++s) {
    if (support[s] < 0 || support[s] >= group->order())
      fail(ErrorKind::usage, fmt::format("support element {} out of range", support[s]));
    if (!std::isfinite(weights[s])) fail(ErrorKind::usage, "non-finite scheme weight");
    merged[support[s]] += weights[s];
    total += weights[s];
  }
  if (std::abs(total - 1.0) > kSchemeSumTolerance)
    fail(ErrorKind::usage, fmt::format("scheme weights sum to {:.17g}, expected 1", total));
  AveragingScheme out;
  out.group = std::move(group);
  for (const auto& [g, w] : merged) {
    if (std::abs(w) <= kWeightEpsilon) continue;
    out.support.push_back(g);
    out.weights.push_back(w);
  }
  if (out.support.empty()) fail(ErrorKind::usage, "scheme has no nonzero weight");
  return out;
}

AveragingScheme uniform_scheme(GroupPtr g) {
  const int n = g->order();
  std::vector<int> s(n);
  for (int i = 0; i < n; ++i) s[i] = i;
  // Summing n copies of 1/n can miss 1 by a few ulps, well inside the tolerance.
  return AveragingScheme::make(std::move(g), std::move(s), std::vector<double>(n, 1.0 / n));
}

AveragingScheme delta_scheme(GroupPtr g, int element) {
  return AveragingScheme::make(std::move(g), {element}, {1.0});
}

AveragingScheme random_scheme(GroupPtr g, long long n, std::uint64_t seed) {
  std::map<int, long long> counts;
  if (n <= kDirectDrawLimit) {
    for (int x : sample_uniform(*g, n, seed)) ++counts[x];
  } else {
    // Multinomial counts by sequential binomials, so memory stays O(|G|).
    Rng rng = make_rng(seed, 1);
    long long left = n;
    const int order = g->order();
    for (int x = 0; x < order && left > 0; ++x) {
      long long c = left;
      if (x + 1 < order) {
        std::binomial_distribution<long long> bin(left, 1.0 / static_cast<double>(order - x));
        c = bin(rng);
      }
      if (c > 0) counts[x] = c;
      left -= c;
    }
  }
  std::vector<int> s;
  std::vector<double> w;
  for (const auto& [x, c] : counts) {
    s.push_back(x);
    w.push_back(static_cast<double>(c) / static_cast<double>(n));
  }
  return AveragingScheme::make(std::move(g), std::move(s), std::move(w));
}

AveragingScheme uniform_on(GroupPtr g, std::vector<int> s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.empty()) fail(ErrorKind::usage, "empty support");
  const auto m = s.size();
  return AveragingScheme::make(std::move(g), std::move(s), std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

long long theorem2_size(long long order, double eps, double delta) {
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorKind::usage, "eps must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorKind::usage, "delta must lie in (0, 1)");
  if (order < 1) fail(ErrorKind::usage, "group order must be positive");
  const double n = 2.67 * (std::log(static_cast<double>(order)) + std::log(1.0 / delta) + 0.7) / eps;
  return std::max(1LL, static_cast<long long>(std::ceil(n)));
}

CMatrix apply_scheme(const AveragingScheme& w, const Representation& rho) {
  if (!w.group->same_as(rho.group())) fail(ErrorKind::group_mismatch, "scheme and representation use different groups");
  return kernels::parallel::scheme_operator(rho, w.support, w.weights);
}

const char* to_string(CertMethod m) {
  return m == CertMethod::fourier_path ? "fourier_path" : "projector_path";
}

namespace {

double norm_sq(const CMatrix& a) {
  if (a.rows() == 1 && a.cols() == 1) return std::norm(a(0, 0));
  return operator_norm_sq(a);
}

}  // namespace

Certifier::Certifier(Representation rho, std::shared_ptr<const IrrepTable> table)
    : rho_(std::move(rho)), table_(std::move(table)) {
  if (table_) {
    if (!table_->group->same_as(rho_.group()))
      fail(ErrorKind::group_mismatch, "irrep table and representation use different groups");
    mult_ = decompose(rho_, *table_);
    invariant_dim_ = mult_[table_->trivial_index];
    for (int i = 0; i < table_->count(); ++i)
      if (!table_->is_trivial(i) && mult_[i] >= 1) present_.push_back(i);
    degenerate_ = present_.empty();
    return;
  }
  if (rho_.dim() > kProjectorMaxDim)
    fail(ErrorKind::size_limit,
         fmt::format("projector certification is limited to dimension {}; supply an irrep table", kProjectorMaxDim));
  const CMatrix p = invariant_projector(rho_);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(p);
  if (es.info() != Eigen::Success) fail(ErrorKind::numerical, "eigensolver failed on the invariant projector");
  std::vector<int> cols;
  for (int j = 0; j < rho_.dim(); ++j)
    if (es.eigenvalues()(j) < 0.5) cols.push_back(j);
  invariant_dim_ = rho_.dim() - static_cast<int>(cols.size());
  degenerate_ = cols.empty();
  complement_.resize(rho_.dim(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) complement_.col(c) = es.eigenvectors().col(cols[c]);
}

void Certifier::check_group(const AveragingScheme& w) const {
  if (!w.group->same_as(rho_.group())) fail(ErrorKind::group_mismatch, "scheme and representation use different groups");
  if (degenerate_)
    fail(ErrorKind::degenerate_rep, "representation has no non-invariant component; every scheme certifies 0");
}

std::vector<CMatrix> Certifier::present_blocks(const AveragingScheme& w) const {
  std::vector<CMatrix> out(present_.size());
  for (std::size_t k = 0; k < present_.size(); ++k) {
    const auto& pi = table_->irreps[present_[k]];
    CMatrix acc = CMatrix::Zero(pi.dim(), pi.dim());
    for (std::size_t s = 0; s < w.support.size(); ++s) acc.noalias() += w.weights[s] * pi.dense(w.support[s]).adjoint();
    out[k] = std::move(acc);
  }
  return out;
}

double Certifier::weak(const AveragingScheme& w) const {
  check_group(w);
  if (table_) {
    double worst = 0.0;
    for (const auto& b : present_blocks(w)) worst = std::max(worst, norm_sq(b));
    return worst;
  }
  const CMatrix m = apply_scheme(w, rho_);
  return operator_norm_sq(complement_.adjoint() * m * complement_);
}

double Certifier::strong(const AveragingScheme& w) const {
  check_group(w);
  if (table_) {
    const auto blocks = present_blocks(w);
    const int n = rho_.group().order();
    std::vector<double> per(n, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int g = 0; g < n; ++g) {
      double worst = 0.0;
      for (std::size_t k = 0; k < present_.size(); ++k) {
        const auto& pi = table_->irreps[present_[k]];
        CMatrix diff = pi.dense(g);
        diff.diagonal().array() -= 1.0;
        worst = std::max(worst, norm_sq(diff * blocks[k].adjoint()));
      }
      per[g] = worst;
    }
    return 0.5 * *std::max_element(per.begin(), per.end());
  }
  const CMatrix b = apply_scheme(w, rho_) * complement_;
  return 0.5 * kernels::parallel::max_translate_residual(rho_, b);
}

CertificationReport Certifier::report(const AveragingScheme& w) const {
  CertificationReport r;
  r.method = method();
  if (degenerate_) {
    if (!w.group->same_as(rho_.group())) fail(ErrorKind::group_mismatch, "scheme and representation use different groups");
    r.degenerate = true;
    return r;
  }
  r.eps_weak = weak(w);
  r.eps_strong = strong(w);
  if (table_) {
    const auto blocks = present_blocks(w);
    std::vector<std::pair<std::string, double>> norms;
    for (std::size_t k = 0; k < present_.size(); ++k) norms.emplace_back(table_->labels[present_[k]], norm_sq(blocks[k]));
    r.per_irrep_norms = std::move(norms);
  }
  return r;
}

double certify_weak(const AveragingScheme& w, const Representation& rho) { return Certifier(rho).weak(w); }
double certify_strong(const AveragingScheme& w, const Representation& rho) { return Certifier(rho).strong(w); }
CertificationReport certify(const AveragingScheme& w, const Representation& rho, std::shared_ptr<const IrrepTable> table) {
  return Certifier(rho, std::move(table)).report(w);
}

namespace {

struct Candidate {
  AveragingScheme scheme;
  double eps = 0.0;
};

/// Smaller size, then lower eps, then lexicographically smaller support.
bool better_feasible(const Candidate& a, const Candidate& b) {
  if (a.scheme.size() != b.scheme.size()) return a.scheme.size() < b.scheme.size();
  if (a.eps != b.eps) return a.eps < b.eps;
  return a.scheme.support < b.scheme.support;
}

/// Lower eps, then smaller size, then lexicographically smaller support.
bool better_infeasible(const Candidate& a, const Candidate& b) {
  if (a.eps != b.eps) return a.eps < b.eps;
  if (a.scheme.size() != b.scheme.size()) return a.scheme.size() < b.scheme.size();
  return a.scheme.support < b.scheme.support;
}

AveragingScheme swap_element(const AveragingScheme& w, int index, int element) {
  auto s = w.support;
  s[index] = element;
  return AveragingScheme::make(w.group, std::move(s), w.weights);
}

}  // namespace

MinimizeResult minimize_scheme(const Certifier& cert, double eps_target, const MinimizeOptions& opts) {
  if (!(eps_target > 0.0 && eps_target < 1.0)) fail(ErrorKind::usage, "eps target must lie in (0, 1)");
  if (opts.trials < 1) fail(ErrorKind::usage, "at least one trial per size is required");
  const GroupPtr& g = cert.group();
  const int order = g->order();

  MinimizeResult result;
  if (cert.degenerate()) {
    result.scheme = delta_scheme(g, g->identity());
    result.feasible = true;
    return result;
  }

  std::optional<Candidate> best_ok, best_bad;
  auto consider = [&](Candidate c) {
    if (c.eps <= eps_target) {
      if (!best_ok || better_feasible(c, *best_ok)) best_ok = std::move(c);
    } else if (!best_bad || better_infeasible(c, *best_bad)) {
      best_bad = std::move(c);
    }
  };

  auto batch = [&](long long draws) {
    std::vector<Candidate> out(opts.trials);
    const std::uint64_t base = derive_seed(opts.seed, static_cast<std::uint64_t>(draws));
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < opts.trials; ++t) {
      auto w = random_scheme(g, draws, derive_seed(base, static_cast<std::uint64_t>(t)));
      const double e = cert.weak(w);
      out[t] = Candidate{std::move(w), e};
    }
    SearchStep step{draws, 0, 0.0, 0};
    const Candidate* local = nullptr;
    for (const auto& c : out) {
      if (c.eps <= eps_target) ++step.feasible_trials;
      if (!local || better_infeasible(c, *local)) local = &c;
    }
    step.best_size = local->scheme.size();
    step.best_eps = local->eps;
    result.trace.push_back(step);
    for (auto& c : out) consider(std::move(c));
    return step.feasible_trials > 0;
  };

  if (opts.max_draws < 0) fail(ErrorKind::usage, "max_draws must be non-negative");
  const long long top =
      opts.max_draws > 0 ? opts.max_draws : std::max<long long>(order, theorem2_size(order, eps_target, 0.1));
  long long lo = 1, hi = top;
  while (lo < hi) {
    const long long mid = lo + (hi - lo) / 2;
    if (batch(mid)) hi = mid;
    else lo = mid + 1;
  }
  if (!best_ok) batch(top);

  // Swap phase: first try to push a smaller infeasible candidate under the target,
  // then spend the rest lowering the certificate of the best feasible scheme.
  Rng rng = make_rng(opts.seed, 0x5eed);
  std::uniform_int_distribution<int> pick_element(0, order - 1);
  int budget = opts.swap_budget;
  auto run_swaps = [&](Candidate cur, int steps) {
    for (int it = 0; it < steps && budget > 0; ++it, --budget) {
      std::uniform_int_distribution<int> pick_index(0, cur.scheme.size() - 1);
      const int idx = pick_index(rng);
      const int el = pick_element(rng);
      if (el == cur.scheme.support[idx]) continue;
      auto next = swap_element(cur.scheme, idx, el);
      const double e = cert.weak(next);
      if (e <= cur.eps) {
        cur = Candidate{std::move(next), e};
        ++result.swaps_accepted;
        consider(cur);
      }
    }
  };
  if (best_bad && (!best_ok || best_bad->scheme.size() < best_ok->scheme.size())) run_swaps(*best_bad, budget / 2);
  if (best_ok) run_swaps(*best_ok, budget);

  if (best_ok) {
    result.scheme = best_ok->scheme;
    result.eps = best_ok->eps;
    result.feasible = true;
  } else if (opts.allow_uniform_fallback) {
    result.scheme = uniform_scheme(g);
    result.eps = cert.weak(result.scheme);
    result.feasible = result.eps <= eps_target;
    result.used_fallback = true;
  } else {
    result.scheme = best_bad->scheme;
    result.eps = best_bad->eps;
    result.feasible = false;
  }
  return result;
}

nlohmann::json scheme_to_json(const AveragingScheme& w) {
  return {{"group", w.group->descriptor()},
          {"order", w.group->order()},
          {"size", w.size()},
          {"support", w.support},
          {"weights", w.weights}};
}

AveragingScheme scheme_from_json(const nlohmann::json& j) {
  try {
    auto g = parse_group(j.at("group").get<std::string>());
    if (j.contains("order") && j.at("order").get<int>() != g->order())
      fail(ErrorKind::group_mismatch, "scheme order does not match its group descriptor");
    return AveragingScheme::make(std::move(g), j.at("support").get<std::vector<int>>(),
                                 j.at("weights").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::io, fmt::format("malformed scheme JSON: {}", e.what()));
  }
}

nlohmann::json report_to_json(const CertificationReport& r) {
  nlohmann::json j{{"eps_weak", r.eps_weak},
                   {"eps_strong", r.eps_strong},
                   {"method", to_string(r.method)},
                   {"degenerate", r.degenerate},
                   {"tolerances", {{"weight_sum", kSchemeSumTolerance}, {"weight_zero", kWeightEpsilon}, {"sandwich", 1e-9}}}};
  if (r.per_irrep_norms) {
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [label, v] : *r.per_irrep_norms) m[label] = v;
    j["per_irrep_norms"] = std::move(m);
  } else {
    j["per_irrep_norms"] = nullptr;
  }
  return j;
}

}  // namespace avgsym
