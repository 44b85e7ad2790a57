// End-to-end acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "avgsym/averaging.hpp"
#include "avgsym/experiments.hpp"
#include "avgsym/fourier.hpp"
#include "avgsym/group.hpp"
#include "avgsym/irreps.hpp"
#include "avgsym/representation.hpp"
#include "avgsym/rng.hpp"
#include "avgsym/separation.hpp"

using namespace avgsym;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> body;
};

// ---- 1 ------------------------------------------------------------------------

const std::vector<std::string> kSmallGroups{
    "cyclic:1",  "cyclic:2",  "cyclic:3",   "cyclic:4",   "cyclic:5",           "cyclic:6",
    "cyclic:7",  "cyclic:8",  "cyclic:9",   "cyclic:10",  "cyclic:11",          "cyclic:12",
    "signflip:1", "signflip:2", "signflip:3", "dihedral:3", "dihedral:4",       "dihedral:5",
    "dihedral:6", "symmetric:1", "symmetric:2", "symmetric:3", "cyclic:2*cyclic:2", "cyclic:2*cyclic:3",
    "cyclic:2*cyclic:4", "cyclic:3*cyclic:3", "cyclic:2*cyclic:6", "cyclic:2*dihedral:3", "cyclic:3*cyclic:4",
    "cyclic:2*signflip:2"};

Outcome exactness() {
  constexpr double kWitnessTol = 1e-9;
  constexpr int kRandomSupports = 500;
  long long proper_checked = 0, wrong = 0;
  double worst_witness = 0.0;
  std::string first_bad;
  for (const auto& spec : kSmallGroups) {
    auto g = parse_group(spec);
    const int n = g->order();
    const auto table = irreps_of(g);
    auto record = [&](const std::vector<int>& s) {
      ++proper_checked;
      if (exact_feasible_on_support(s, table).feasible) {
        ++wrong;
        if (first_bad.empty()) first_bad = spec;
      }
    };
    if (n <= 8) {
      for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
        std::vector<int> s;
        for (int x = 0; x < n; ++x)
          if (mask >> x & 1u) s.push_back(x);
        record(s);
      }
    } else {
      Rng rng = make_rng(kSeed, static_cast<std::uint64_t>(n));
      std::vector<int> all(n);
      std::iota(all.begin(), all.end(), 0);
      std::uniform_int_distribution<int> size(1, n - 1);
      for (int t = 0; t < kRandomSupports; ++t) {
        std::vector<int> s;
        std::sample(all.begin(), all.end(), std::back_inserter(s), size(rng), rng);
        record(s);
      }
    }
    std::vector<int> full(n);
    std::iota(full.begin(), full.end(), 0);
    const auto r = exact_feasible_on_support(full, table);
    if (!r.feasible) {
      ++wrong;
      if (first_bad.empty()) first_bad = spec + " (full support infeasible)";
      continue;
    }
    for (double w : r.witness) worst_witness = std::max(worst_witness, std::abs(w - 1.0 / n));
  }
  const bool ok = wrong == 0 && worst_witness <= kWitnessTol;
  return {ok, fmt::format("{} groups, {} proper supports, {} wrong verdicts{}, max |w - 1/|G|| = {:.3g} (tol {:g})",
                          kSmallGroups.size(), proper_checked, wrong, first_bad.empty() ? "" : " first in " + first_bad,
                          worst_witness, kWitnessTol)};
}

// ---- 2, 3 ---------------------------------------------------------------------

long long expected_k(int d) { return d * (d + 1) / 2 - 1; }

Outcome k_bound_closed_form() {
  bool ok = true;
  std::string detail;
  for (int d = 2; d <= 5; ++d) {
    const long long k = k_bound(rep_permutation(Group::symmetric(d)));
    ok = ok && k == expected_k(d);
    detail += fmt::format("S{}: K={} (want {}) ", d, k, expected_k(d));
  }
  return {ok, detail};
}

Outcome claim1_coverage() {
  bool ok = true;
  std::string detail;
  for (int d : {3, 4}) {
    auto g = Group::symmetric(d);
    const auto table = irreps_of(g);
    const auto r = claim1_check(rep_permutation(g), expected_k(d), table);
    const auto covered = std::count(r.present.begin(), r.present.end(), true);
    ok = ok && r.all() && static_cast<int>(r.present.size()) == table.count();
    detail += fmt::format("S{}: {}/{} irreps by degree {} ", d, covered, table.count(), r.degrees_checked);
  }
  return {ok, detail};
}

// ---- 4 ------------------------------------------------------------------------

Outcome sampler() {
  constexpr int kTrials = 200;
  constexpr double kDelta = 0.1;
  const double p = 1.0 - kDelta;
  const double threshold = p - 3.0 * std::sqrt(p * (1.0 - p) / kTrials);
  bool ok = true;
  std::string detail;
  for (const char* spec : {"cyclic:64", "signflip:6", "dihedral:7"}) {
    auto g = parse_group(spec);
    const Certifier cert(rep_regular(g), std::make_shared<const IrrepTable>(irreps_of(g)));
    for (double eps : {0.5, 0.25}) {
      const long long n = theorem2_size(g->order(), eps, kDelta);
      int success = 0;
      for (int t = 0; t < kTrials; ++t) {
        const auto w = random_scheme(g, n, derive_seed(derive_seed(kSeed, g->order()), static_cast<std::uint64_t>(t)));
        if (cert.weak(w) <= eps) ++success;
      }
      const double frac = static_cast<double>(success) / kTrials;
      ok = ok && frac >= threshold;
      detail += fmt::format("{} eps={} n={} {:.3f}; ", spec, eps, n, frac);
    }
  }
  return {ok, detail + fmt::format("threshold {:.4f}", threshold)};
}

// ---- 5 ------------------------------------------------------------------------

Outcome separation_curve() {
  constexpr double kMinR2 = 0.8;
  const auto rows = separation_table("signflip:2..9", 0.5, 16, kSeed);
  std::vector<double> xs, ys;
  bool exact_ok = true, gap_ok = true;
  std::string costs;
  for (const auto& r : rows) {
    const int d = static_cast<int>(std::lround(std::log2(r.order)));
    xs.push_back(d);
    ys.push_back(static_cast<double>(r.approx_cost));
    exact_ok = exact_ok && r.exact_cost == (1LL << d);
    if (d >= 4) gap_ok = gap_ok && r.approx_cost < r.exact_cost;
    costs += fmt::format("{}:{}/{} ", d, r.approx_cost, r.exact_cost);
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  const bool ok = rows.size() == 8 && exact_ok && gap_ok && r2 >= kMinR2;
  return {ok, fmt::format("approx/exact {}R^2={:.4f} slope={:.3f}", costs, r2, sxy / sxx)};
}

// ---- 6 ------------------------------------------------------------------------

struct GroupRep {
  const char* group;
  const char* rep;
};

const std::vector<GroupRep> kSandwichCases{{"cyclic:8", "regular"},
                                           {"dihedral:5", "regular"},
                                           {"symmetric:4", "permutation"},
                                           {"signflip:3", "sign"},
                                           {"cyclic:2*dihedral:3", "regular"}};

Representation make_rep(GroupPtr g, const std::string& rep) {
  if (rep == "regular") return rep_regular(g);
  if (rep == "permutation") return rep_permutation(g);
  return rep_sign_action(g);
}

// Random support of random size; weights nonnegative on even draws, signed on odd ones.
AveragingScheme random_weighted(GroupPtr g, Rng& rng, bool signed_weights) {
  std::vector<int> all(g->order());
  std::iota(all.begin(), all.end(), 0);
  std::uniform_int_distribution<int> size(1, g->order());
  std::vector<int> s;
  std::sample(all.begin(), all.end(), std::back_inserter(s), size(rng), rng);
  std::vector<double> w(s.size());
  for (;;) {
    std::uniform_real_distribution<double> pos(0.05, 1.0);
    std::normal_distribution<double> gauss;
    for (auto& x : w) x = signed_weights ? gauss(rng) : pos(rng);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (std::abs(total) < 0.2) continue;
    for (auto& x : w) x /= total;
    return AveragingScheme::make(g, s, w);
  }
}

Outcome sandwich() {
  constexpr double kSlack = 1e-9;
  constexpr int kPerCase = 20;
  int instances = 0, violations = 0;
  double worst_ratio = 0.0;
  for (std::size_t c = 0; c < kSandwichCases.size(); ++c) {
    auto g = parse_group(kSandwichCases[c].group);
    const Certifier cert(make_rep(g, kSandwichCases[c].rep));
    Rng rng = make_rng(kSeed, 600 + c);
    for (int t = 0; t < kPerCase; ++t) {
      const auto w = random_weighted(g, rng, t % 2 == 1);
      const auto r = cert.report(w);
      ++instances;
      if (!(r.eps_weak >= 0.0 && r.eps_weak <= r.eps_strong + kSlack && r.eps_strong <= 4.0 * r.eps_weak + kSlack))
        ++violations;
      if (r.eps_weak > 1e-12) worst_ratio = std::max(worst_ratio, r.eps_strong / r.eps_weak);
    }
  }
  return {violations == 0 && instances == 100,
          fmt::format("{} instances, {} violations, max strong/weak = {:.4f}", instances, violations, worst_ratio)};
}

// ---- 7 ------------------------------------------------------------------------

const std::vector<std::string> kFourierGroups{
    "cyclic:1",   "cyclic:2",    "cyclic:7",    "cyclic:12",   "cyclic:60",          "cyclic:120",
    "signflip:1", "signflip:3",  "signflip:5",  "signflip:6",  "dihedral:3",         "dihedral:4",
    "dihedral:7", "dihedral:12", "dihedral:60", "symmetric:1", "symmetric:2",        "symmetric:3",
    "symmetric:4", "symmetric:5", "cyclic:2*dihedral:3", "cyclic:3*symmetric:3", "signflip:2*cyclic:5",
    "dihedral:4*symmetric:3"};

Outcome fourier_identities() {
  constexpr double kRoundTripTol = 1e-10;
  constexpr double kPlancherelTol = 1e-10;
  constexpr double kAgreeTol = 1e-8;
  constexpr int kSignals = 50;
  double worst_inv = 0.0, worst_planch = 0.0, worst_agree = 0.0;
  bool dims_ok = true;
  std::string dim_bad;
  for (const auto& spec : kFourierGroups) {
    auto g = parse_group(spec);
    const auto table = irreps_of(g);
    long long dsq = 0;
    for (int d : table.dims) dsq += 1LL * d * d;
    if (dsq != g->order()) {
      dims_ok = false;
      dim_bad += spec + " ";
    }
    Rng rng = make_rng(kSeed, 700 + static_cast<std::uint64_t>(g->order()));
    std::normal_distribution<double> n;
    for (int t = 0; t < kSignals; ++t) {
      std::vector<Complex> v(g->order());
      for (auto& x : v) x = {n(rng), n(rng)};
      const GroupSignal w(g, v);
      const auto back = inverse_fourier(fourier(w, table), table);
      for (int x = 0; x < g->order(); ++x) worst_inv = std::max(worst_inv, std::abs(back[x] - w[x]));
      worst_planch = std::max(worst_planch, plancherel_residual(w, table));
    }
  }

  // Projector-path certificates against the Fourier blocks of the irreps present in rho.
  const std::vector<GroupRep> pairs{{"cyclic:12", "regular"},   {"dihedral:5", "regular"},   {"symmetric:4", "permutation"},
                                    {"symmetric:3", "regular"}, {"signflip:4", "sign"},      {"dihedral:6", "regular"},
                                    {"symmetric:5", "permutation"}, {"cyclic:2*dihedral:3", "regular"},
                                    {"signflip:3", "regular"},  {"symmetric:4", "regular"}};
  int pair_count = 0;
  for (std::size_t c = 0; c < pairs.size(); ++c) {
    auto g = parse_group(pairs[c].group);
    auto table = std::make_shared<const IrrepTable>(irreps_of(g));
    const auto rho = make_rep(g, pairs[c].rep);
    const Certifier projector(rho), fourier_cert(rho, table);
    const auto mult = decompose(rho, *table);
    Rng rng = make_rng(kSeed, 750 + c);
    for (int t = 0; t < 5; ++t, ++pair_count) {
      const auto w = random_weighted(g, rng, t % 2 == 1);
      const double direct = max_nontrivial_norm(fourier(w.signal(), *table), *table, &mult);
      const double pw = projector.weak(w), fw = fourier_cert.weak(w);
      const double ps = projector.strong(w), fs = fourier_cert.strong(w);
      worst_agree = std::max({worst_agree, std::abs(pw - direct), std::abs(fw - direct), std::abs(ps - fs)});
    }
  }
  const bool ok = dims_ok && worst_inv <= kRoundTripTol && worst_planch <= kPlancherelTol && worst_agree <= kAgreeTol &&
                  pair_count == 50;
  return {ok, fmt::format("{} groups: inversion {:.3g} (tol {:g}), Plancherel {:.3g} (tol {:g}), sum d^2 {}; "
                          "{} scheme/rep pairs: max disagreement {:.3g} (tol {:g})",
                          kFourierGroups.size(), worst_inv, kRoundTripTol, worst_planch, kPlancherelTol,
                          dims_ok ? "exact" : "wrong for " + dim_bad, pair_count, worst_agree, kAgreeTol)};
}

// ---- 8 ------------------------------------------------------------------------

Outcome lower_bound() {
  constexpr double kTol = 1e-9;
  constexpr int kPerDim = 50;
  int cases = 0, failures = 0;
  double worst = 2.0;
  for (int d = 2; d <= 8; ++d) {
    auto g = Group::sign_flip(d);
    const auto cert = sign_flip_regular_certifier(d);
    const int n = g->order();
    Rng rng = make_rng(kSeed, 800 + static_cast<std::uint64_t>(d));
    std::uniform_int_distribution<int> functional(1, n - 1);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < kPerDim; ++t) {
      // Elements annihilated by a nonzero functional form an index-2 subgroup.
      const int a = functional(rng);
      std::vector<int> kernel;
      for (int x = 0; x < n; ++x)
        if (__builtin_popcount(static_cast<unsigned>(a & x)) % 2 == 0) kernel.push_back(x);
      std::uniform_int_distribution<int> size(1, static_cast<int>(kernel.size()));
      std::vector<int> s;
      std::sample(kernel.begin(), kernel.end(), std::back_inserter(s), size(rng), rng);
      std::vector<double> w(s.size());
      double total = 0.0;
      while (std::abs(total) < 0.2) {
        for (auto& x : w) x = gauss(rng);
        total = std::accumulate(w.begin(), w.end(), 0.0);
      }
      for (auto& x : w) x /= total;
      const bool generates = static_cast<int>(closure(*g, ElementSet(s.begin(), s.end())).size()) == n;
      const auto r = sign_flip_lower_bound_check(cert, s, w);
      ++cases;
      worst = std::min(worst, r.eps_weak_on_regular);
      if (generates || r.generates || r.eps_weak_on_regular < 1.0 - kTol) ++failures;
    }
  }
  return {failures == 0 && cases == 350,
          fmt::format("{} non-generating supports, {} failures, min eps_weak = {:.12f} (tol {:g})", cases, failures, worst,
                      kTol)};
}

// ---- 9 ------------------------------------------------------------------------

Outcome regression() {
  constexpr double kRatioTol = 0.25;
  bool ok = true;
  std::string detail;
  for (const char* spec : {"signflip:2", "signflip:3"}) {
    const int m = parse_group(spec)->order();
    RegressionConfig cfg;
    cfg.group = spec;
    cfg.sigma = 1.0;
    cfg.n = 100LL * m;
    cfg.trials = 2000;
    cfg.seed = kSeed;
    cfg.eps = 0.05;
    const auto weak = regression_risk(cfg);
    cfg.eps = 0.0;
    const auto uniform = regression_risk(cfg);
    const double ratio = weak.erm.risk / weak.exact.risk;
    const double target = static_cast<double>(weak.m) / weak.m_triv;
    const bool ratio_ok = std::abs(ratio - target) <= kRatioTol * target;
    const bool uniform_ok = uniform.weak.risk == uniform.exact.risk && uniform.weak_trials == uniform.exact_trials;
    const bool weak_ok = weak.weak.risk <= weak.erm.risk;
    ok = ok && ratio_ok && uniform_ok && weak_ok;
    detail += fmt::format("{}: R_erm/R_exact={:.3f} (m={}, tol {:.0f}%), R_weak(uniform){}R_exact, "
                          "R_weak(eps {:.3g})={:.4g} vs R_erm={:.4g}; ",
                          spec, ratio, target, 100 * kRatioTol, uniform_ok ? "==" : "!=", weak.scheme_eps,
                          weak.weak.risk, weak.erm.risk);
  }
  return {ok, detail};
}

// ---- 10 -----------------------------------------------------------------------

Outcome mlp() {
  constexpr int kSeeds = 10;
  constexpr double kTailShare = 0.25;
  int improved = 0, saturated = 0;
  std::string losses;
  for (int s = 0; s < kSeeds; ++s) {
    MlpConfig cfg;
    cfg.d = 20;
    cfg.n_train = cfg.n_test = 10000;
    cfg.epochs = 100;
    cfg.k_max = 10;
    cfg.seed = derive_seed(kSeed, 1000 + static_cast<std::uint64_t>(s));
    cfg.curve_stride = cfg.epochs;
    const auto r = mlp_experiment(cfg);
    auto loss_at = [&](long long size) {
      const auto it = std::find(r.subset_sizes.begin(), r.subset_sizes.end(), size);
      return r.test_loss[static_cast<std::size_t>(it - r.subset_sizes.begin())];
    };
    const double l1 = loss_at(1), l32 = loss_at(32), l1024 = loss_at(1024);
    if (l32 < l1) ++improved;
    const double head = l1 - l32, tail = l32 - l1024;
    if (head > 0.0 && tail < kTailShare * head) ++saturated;
    losses += fmt::format("[{:.4f} {:.4f} {:.4f}]", l1, l32, l1024);
  }
  return {improved >= 9 && saturated >= 8,
          fmt::format("|S|=32 beats |S|=1 in {}/10, tail gain < {:.0f}% of head gain in {}/10; loss at 1/32/1024 {}",
                      improved, 100 * kTailShare, saturated, losses)};
}

// ---- 11 -----------------------------------------------------------------------

Outcome figure1() {
  constexpr int kSeeds = 100;
  int closer = 0, full_exact = 0;
  double mean1 = 0.0, mean5 = 0.0;
  for (int s = 0; s < kSeeds; ++s) {
    Figure1Config cfg;
    cfg.N = 100;
    cfg.subset_sizes = {1, 5, 100};
    cfg.seed = derive_seed(kSeed, 1100 + static_cast<std::uint64_t>(s));
    const auto r = figure1_demo(cfg);
    if (r.rel_distance[1] < r.rel_distance[0]) ++closer;
    if (r.rel_distance[2] == 0.0) ++full_exact;
    mean1 += r.rel_distance[0] / kSeeds;
    mean5 += r.rel_distance[1] / kSeeds;
  }
  return {closer >= 95 && full_exact == kSeeds,
          fmt::format("m=5 closer than m=1 in {}/100 (mean {:.4f} vs {:.4f}), m=N distance exactly 0 in {}/100", closer,
                      mean5, mean1, full_exact)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "exactness needs the whole group", 120, exactness},
      {2, "K-bound closed form for S_d", 60, k_bound_closed_form},
      {3, "Sym^k coverage of all irreps", 60, claim1_coverage},
      {4, "random sampler success rate", 300, sampler},
      {5, "exponential separation curve", 600, separation_curve},
      {6, "weak/strong sandwich", 60, sandwich},
      {7, "Fourier identities", 120, fourier_identities},
      {8, "Z_2^d lower bound", 180, lower_bound},
      {9, "regression risk ratios", 300, regression},
      {10, "MLP subset averaging", 1800, mlp},
      {11, "rotation averaging demo", 120, figure1},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.body();
    } catch (const std::exception& e) {
      out = {false, fmt::format("exception: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_seconds;
    const bool passed = out.passed && in_time;
    if (!passed) ++failed;
    fmt::print("[{}] {:2d} {}: {} | {:.1f}s (budget {:.0f}s){}\n", passed ? "PASS" : "FAIL", c.id, c.name, out.detail,
               secs, c.budget_seconds, in_time ? "" : " over budget");
    std::cout.flush();
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
