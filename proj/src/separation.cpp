#include "avgsym/separation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "avgsym/error.hpp"
#include "avgsym/kernels.hpp"
#include "avgsym/rng.hpp"

namespace avgsym {

bool Claim1Report::all() const {
  return std::all_of(present.begin(), present.end(), [](bool b) { return b; });
}

Claim1Report claim1_check(const Representation& rho, long long K, const IrrepTable& table) {
  if (K < 0) fail(ErrorKind::usage, "K must be >= 0");
  const Group& g = rho.group();
  if (!g.same_as(*table.group)) fail(ErrorKind::group_mismatch, "representation and irrep table use different groups");
  const auto chi = rho.character();
  const int r = chi.size();
  const int n = table.count();

  Claim1Report out;
  out.present.assign(n, false);
  out.first_degree.assign(n, -1);

  // Newton recursion chi_k = (1/k) sum_j chi(g^j) chi_{k-j}, advanced one degree at a time.
  std::vector<std::vector<Complex>> sym{std::vector<Complex>(r, Complex(1.0, 0.0))};
  std::vector<std::vector<Complex>> powers{std::vector<Complex>(r)};
  int remaining = n;
  for (long long k = 0; k <= K; ++k) {
    if (k > 0) {
      powers.emplace_back(r);
      for (int c = 0; c < r; ++c) powers[k][c] = chi[g.power_class(c, k)];
      std::vector<Complex> next(r);
      for (int c = 0; c < r; ++c) {
        Complex s = 0.0;
        for (long long j = 1; j <= k; ++j) s += powers[j][c] * sym[k - j][c];
        next[c] = s / static_cast<double>(k);
      }
      sym.push_back(std::move(next));
    }
    const CharacterVector chi_k{sym[k]};
    for (int i = 0; i < n; ++i) {
      if (out.present[i]) continue;
      const double m = character_inner(chi_k, table.characters[i], g).real();
      if (std::round(m) >= 1.0) {
        out.present[i] = true;
        out.first_degree[i] = static_cast<int>(k);
        --remaining;
      }
    }
    out.degrees_checked = static_cast<int>(k);
    if (remaining == 0) break;
  }
  return out;
}

double exact_violation(const AveragingScheme& w, const Representation& rho) {
  const CMatrix m = apply_scheme(w, rho);
  return std::sqrt(kernels::parallel::max_translate_residual(rho, m));
}

FeasibilityResult exact_feasible_on_support(const std::vector<int>& support, const IrrepTable& table) {
  if (support.empty()) fail(ErrorKind::usage, "support must be nonempty");
  FeasibilityResult out;
  out.support = support;
  std::sort(out.support.begin(), out.support.end());
  out.support.erase(std::unique(out.support.begin(), out.support.end()), out.support.end());
  for (int g : out.support)
    if (g < 0 || g >= table.group->order()) fail(ErrorKind::usage, "support element out of range");

  long long rows = 1;
  for (int i = 0; i < table.count(); ++i)
    if (!table.is_trivial(i)) rows += 2LL * table.dims[i] * table.dims[i];
  const auto cols = static_cast<Eigen::Index>(out.support.size());
  RMatrix a = RMatrix::Zero(rows, cols);
  RVector b = RVector::Zero(rows);
  Eigen::Index row = 0;
  for (int i = 0; i < table.count(); ++i) {
    if (table.is_trivial(i)) continue;
    const int d = table.dims[i];
    for (Eigen::Index c = 0; c < cols; ++c) {
      const CMatrix adj = table.irreps[i].dense(out.support[c]).adjoint();
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
          const Eigen::Index base = row + 2 * (p * d + q);
          a(base, c) = adj(p, q).real();
          a(base + 1, c) = adj(p, q).imag();
        }
    }
    row += 2LL * d * d;
  }
  a.row(row).setOnes();
  b(row) = 1.0;

  RMatrix ab(rows, cols + 1);
  ab << a, b;
  out.rank_a = numerical_rank(a, kRankTolerance);
  out.rank_ab = numerical_rank(ab, kRankTolerance);
  out.feasible = out.rank_a == out.rank_ab;
  const RVector x = a.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
  out.witness.assign(x.data(), x.data() + x.size());
  out.residual = (a * x - b).norm();
  return out;
}

Certifier sign_flip_regular_certifier(int d) {
  auto g = Group::sign_flip(d);
  std::shared_ptr<const IrrepTable> table;
  if (static_cast<long long>(g->order()) * g->order() <= kIrrepTableMaxEntries)
    table = std::make_shared<const IrrepTable>(irreps_of(g));
  return Certifier(rep_regular(g), std::move(table));
}

LowerBoundReport sign_flip_lower_bound_check(const Certifier& regular, const std::vector<int>& support,
                                             const std::vector<double>& weights) {
  const auto& g = regular.group();
  if (g->family() != Family::sign_flip) fail(ErrorKind::usage, "lower-bound check needs a sign-flip group");
  const auto w = AveragingScheme::make(g, support, weights);
  LowerBoundReport out;
  out.generates = static_cast<int>(closure(*g, w.support).size()) == g->order();
  out.eps_weak_on_regular = regular.weak(w);
  return out;
}

LowerBoundReport sign_flip_lower_bound_check(int d, const std::vector<int>& support, const std::vector<double>& weights) {
  return sign_flip_lower_bound_check(sign_flip_regular_certifier(d), support, weights);
}

FamilySpec parse_family(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) fail(ErrorKind::usage, fmt::format("family spec '{}' needs family:range", spec));
  FamilySpec out{spec.substr(0, colon), {}};
  const std::string body = spec.substr(colon + 1);
  try {
    const auto dots = body.find("..");
    if (dots != std::string::npos) {
      const int lo = std::stoi(body.substr(0, dots));
      const int hi = std::stoi(body.substr(dots + 2));
      if (lo > hi) fail(ErrorKind::usage, fmt::format("empty range in '{}'", spec));
      for (int p = lo; p <= hi; ++p) out.params.push_back(p);
    } else {
      std::stringstream ss(body);
      std::string item;
      while (std::getline(ss, item, ',')) out.params.push_back(std::stoi(item));
    }
  } catch (const std::logic_error&) {
    fail(ErrorKind::usage, fmt::format("bad family range in '{}'", spec));
  }
  if (out.params.empty()) fail(ErrorKind::usage, fmt::format("no parameters in '{}'", spec));
  for (int p : out.params) parse_group(fmt::format("{}:{}", out.family, p));
  return out;
}

std::vector<SeparationRow> separation_table(const std::string& family_spec, double eps, int trials, std::uint64_t seed,
                                            int swap_budget) {
  const auto fam = parse_family(family_spec);
  std::vector<SeparationRow> rows(fam.params.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto g = parse_group(fmt::format("{}:{}", fam.family, fam.params[r]));
    SeparationRow& row = rows[r];
    row.family = fam.family;
    row.group = g->descriptor();
    row.order = g->order();
    row.exact_cost = g->order();
    row.eps = eps;
    row.seed = derive_seed(seed, static_cast<std::uint64_t>(g->order()));
    try {
      auto rho = rep_regular(g);
      row.K = k_bound(rho);
      std::shared_ptr<const IrrepTable> table;
      try {
        table = std::make_shared<const IrrepTable>(irreps_of(g));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::capability) throw;
      }
      const Certifier cert(std::move(rho), std::move(table));
      MinimizeOptions opts;
      opts.trials = trials;
      opts.swap_budget = swap_budget;
      opts.seed = row.seed;
      const auto res = minimize_scheme(cert, eps, opts);
      row.approx_cost = res.scheme.size();
      row.certified_eps = res.eps;
      row.status = !res.feasible ? "incomplete" : res.used_fallback ? "fallback" : "ok";
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::usage) throw;
      row.status = "incomplete";
      row.approx_cost = row.exact_cost;
    }
  }
  return rows;
}

void write_separation_csv(std::ostream& os, const std::vector<SeparationRow>& rows) {
  os << "family,order,K,exact_cost,approx_cost,eps,seed,status\n";
  for (const auto& r : rows)
    os << fmt::format("{},{},{},{},{},{:.17g},{},{}\n", r.family, r.order, r.K, r.exact_cost, r.approx_cost, r.eps,
                      r.seed, r.status);
}

}  // namespace avgsym
