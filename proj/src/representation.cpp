#include "avgsym/representation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "avgsym/error.hpp"
#include "avgsym/rng.hpp"

namespace avgsym {

RootOfUnity RootOfUnity::make(long long num, long long den) {
  if (den < 1) fail(ErrorKind::usage, "root of unity needs a positive denominator");
  num %= den;
  if (num < 0) num += den;
  const long long g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  return {static_cast<int>(num), static_cast<int>(den)};
}

Complex RootOfUnity::value() const {
  return std::polar(1.0, 2.0 * std::numbers::pi * num / den);
}

long long EigenProfile::total() const {
  return std::accumulate(max_mult.begin(), max_mult.end(), 0LL);
}

long long EigenProfile::max_mult_of(RootOfUnity lambda) const {
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    if (lambdas[i] == lambda) return max_mult[i];
  return 0;
}

Representation Representation::from_matrices(GroupPtr group, std::string name, std::vector<CMatrix> mats) {
  if (!group) fail(ErrorKind::usage, "representation needs a group");
  if (static_cast<int>(mats.size()) != group->order())
    fail(ErrorKind::usage, fmt::format("representation needs {} matrices, got {}", group->order(), mats.size()));
  const auto dim = mats.front().rows();
  if (dim < 1) fail(ErrorKind::usage, "representation dimension must be positive");
  for (const auto& m : mats)
    if (m.rows() != dim || m.cols() != dim) fail(ErrorKind::usage, "representation matrices must be square of equal size");
  if (mats.front() != CMatrix::Identity(dim, dim))
    fail(ErrorKind::numerical, "representation must send the identity to I");
  Representation rho;
  rho.group_ = std::move(group);
  rho.name_ = std::move(name);
  rho.dim_ = static_cast<int>(dim);
  rho.storage_ = Storage::dense;
  rho.mats_ = std::move(mats);
  return rho;
}

Representation Representation::from_permutations(GroupPtr group, std::string name, int dim, std::vector<int> images) {
  if (!group) fail(ErrorKind::usage, "representation needs a group");
  if (dim < 1) fail(ErrorKind::usage, "representation dimension must be positive");
  if (images.size() != static_cast<std::size_t>(group->order()) * dim)
    fail(ErrorKind::usage, "permutation images have the wrong size");
  for (int j = 0; j < dim; ++j)
    if (images[j] != j) fail(ErrorKind::numerical, "representation must send the identity to I");
  Representation rho;
  rho.group_ = std::move(group);
  rho.name_ = std::move(name);
  rho.dim_ = dim;
  rho.storage_ = Storage::permutation;
  rho.images_ = std::move(images);
  return rho;
}

CMatrix Representation::matrix(int g) const {
  if (storage_ == Storage::dense) return mats_[g];
  CMatrix m = CMatrix::Zero(dim_, dim_);
  for (int j = 0; j < dim_; ++j) m(image(g, j), j) = 1.0;
  return m;
}

const CMatrix& Representation::dense(int g) const {
  if (storage_ != Storage::dense) fail(ErrorKind::usage, "dense() on a permutation representation");
  return mats_[g];
}

Complex Representation::trace(int g) const {
  if (storage_ == Storage::dense) return mats_[g].trace();
  int fixed = 0;
  for (int j = 0; j < dim_; ++j) fixed += image(g, j) == j;
  return Complex(fixed, 0.0);
}

void Representation::accumulate(int g, Complex w, CMatrix& out) const {
  if (storage_ == Storage::dense) {
    out.noalias() += w * mats_[g];
    return;
  }
  for (int j = 0; j < dim_; ++j) out(image(g, j), j) += w;
}

CharacterVector Representation::character() const {
  const auto& part = group_->conjugacy();
  CharacterVector chi;
  chi.values.resize(part.count());
  const double tol = 1e-8 * std::max(1, dim_);
  for (int c = 0; c < part.count(); ++c) {
    const Complex ref = trace(part.representatives[c]);
    for (int g : part.classes[c])
      if (std::abs(trace(g) - ref) > tol)
        fail(ErrorKind::numerical, fmt::format("{}: character not constant on class {}", name_, c));
    chi.values[c] = ref;
  }
  return chi;
}

double Representation::homomorphism_residual(std::uint64_t seed) const {
  const int n = group_->order();
  auto pair_residual = [&](int g, int h) -> double {
    const int gh = group_->mul(g, h);
    if (storage_ == Storage::permutation) {
      int bad = 0;
      for (int j = 0; j < dim_; ++j) bad += image(gh, j) != image(g, image(h, j));
      return std::sqrt(2.0 * bad);
    }
    return (mats_[gh] - mats_[g] * mats_[h]).norm();
  };
  double worst = 0.0;
  if (n < 256) {
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h) worst = std::max(worst, pair_residual(g, h));
  } else {
    Rng rng = make_rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int t = 0; t < 4096; ++t) worst = std::max(worst, pair_residual(pick(rng), pick(rng)));
  }
  return worst;
}

double Representation::unitarity_residual() const {
  if (storage_ == Storage::permutation) {
    double worst = 0.0;
    for (int g = 0; g < group_->order(); ++g) {
      std::vector<char> hit(dim_, 0);
      for (int j = 0; j < dim_; ++j)
        if (hit[image(g, j)]++) worst = 1.0;
    }
    return worst;
  }
  double worst = 0.0;
  const CMatrix id = CMatrix::Identity(dim_, dim_);
  for (const auto& m : mats_) worst = std::max(worst, (m.adjoint() * m - id).norm());
  return worst;
}

Representation rep_trivial(GroupPtr g) {
  const int n = g->order();
  return Representation::from_permutations(std::move(g), "trivial", 1, std::vector<int>(n, 0));
}

Representation rep_permutation(GroupPtr g) {
  if (g->family() != Family::symmetric)
    fail(ErrorKind::usage, fmt::format("permutation representation needs a symmetric group, got {}", g->descriptor()));
  const int d = g->parameter();
  std::vector<int> images(static_cast<std::size_t>(g->order()) * d);
  for (int a = 0; a < g->order(); ++a)
    for (int j = 0; j < d; ++j) images[static_cast<std::size_t>(a) * d + j] = g->permutation(a)[j];
  return Representation::from_permutations(std::move(g), "permutation", d, std::move(images));
}

Representation rep_sign_action(GroupPtr g) {
  if (g->family() != Family::sign_flip)
    fail(ErrorKind::usage, fmt::format("sign action needs a sign_flip group, got {}", g->descriptor()));
  const int d = g->parameter();
  std::vector<CMatrix> mats(g->order(), CMatrix::Zero(d, d));
  for (int a = 0; a < g->order(); ++a)
    for (int j = 0; j < d; ++j) mats[a](j, j) = (a >> j & 1) ? -1.0 : 1.0;
  return Representation::from_matrices(std::move(g), "sign", std::move(mats));
}

Representation rep_regular(GroupPtr g) {
  const int n = g->order();
  if (n > kRegularMaxOrder)
    fail(ErrorKind::size_limit, fmt::format("regular representation capped at order {}, got {}", kRegularMaxOrder, n));
  std::vector<int> images(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int h = 0; h < n; ++h) images[static_cast<std::size_t>(a) * n + h] = g->mul(a, h);
  return Representation::from_permutations(std::move(g), "regular", n, std::move(images));
}

namespace {

void require_same_group(const Representation& a, const Representation& b) {
  if (!a.group().same_as(b.group()))
    fail(ErrorKind::group_mismatch,
         fmt::format("representations live on different groups ({} vs {})", a.group().descriptor(), b.group().descriptor()));
}

}  // namespace

Representation rep_direct_sum(const Representation& a, const Representation& b) {
  require_same_group(a, b);
  const int n = a.group().order(), da = a.dim(), db = b.dim();
  const std::string name = a.name() + "+" + b.name();
  if (a.storage() == Representation::Storage::permutation && b.storage() == Representation::Storage::permutation) {
    std::vector<int> images(static_cast<std::size_t>(n) * (da + db));
    for (int g = 0; g < n; ++g) {
      int* row = images.data() + static_cast<std::size_t>(g) * (da + db);
      for (int j = 0; j < da; ++j) row[j] = a.image(g, j);
      for (int j = 0; j < db; ++j) row[da + j] = da + b.image(g, j);
    }
    return Representation::from_permutations(a.group_ptr(), name, da + db, std::move(images));
  }
  std::vector<CMatrix> mats(n);
  for (int g = 0; g < n; ++g) {
    mats[g] = CMatrix::Zero(da + db, da + db);
    mats[g].topLeftCorner(da, da) = a.matrix(g);
    mats[g].bottomRightCorner(db, db) = b.matrix(g);
  }
  return Representation::from_matrices(a.group_ptr(), name, std::move(mats));
}

Representation rep_tensor(const Representation& a, const Representation& b) {
  require_same_group(a, b);
  const int n = a.group().order(), da = a.dim(), db = b.dim();
  const std::string name = a.name() + "x" + b.name();
  if (a.storage() == Representation::Storage::permutation && b.storage() == Representation::Storage::permutation) {
    std::vector<int> images(static_cast<std::size_t>(n) * da * db);
    for (int g = 0; g < n; ++g) {
      int* row = images.data() + static_cast<std::size_t>(g) * da * db;
      for (int i = 0; i < da; ++i)
        for (int j = 0; j < db; ++j) row[i * db + j] = a.image(g, i) * db + b.image(g, j);
    }
    return Representation::from_permutations(a.group_ptr(), name, da * db, std::move(images));
  }
  std::vector<CMatrix> mats(n);
  for (int g = 0; g < n; ++g) {
    const CMatrix ma = a.matrix(g), mb = b.matrix(g);
    mats[g].resize(da * db, da * db);
    for (int i = 0; i < da; ++i)
      for (int k = 0; k < da; ++k) mats[g].block(i * db, k * db, db, db) = ma(i, k) * mb;
  }
  return Representation::from_matrices(a.group_ptr(), name, std::move(mats));
}

long long sym_power_dim(int dim, int k) {
  // C(dim + k - 1, k), computed incrementally with saturation.
  long double c = 1.0L;
  long long exact = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * (dim - 1 + i) / i;
    if (c > static_cast<long double>(std::numeric_limits<long long>::max() / 2))
      return std::numeric_limits<long long>::max();
    exact = exact * (dim - 1 + i) / i;
  }
  return exact;
}

namespace {

/// Degree-graded monomial bases with "multiply by x_j" transition tables.
struct MonomialBasis {
  int vars = 0;
  std::vector<std::vector<std::vector<int>>> exps;  // exps[t][idx] = exponent vector
  std::vector<std::vector<int>> next;               // next[t][idx * vars + j] = index in degree t+1

  MonomialBasis(int m, int k) : vars(m), exps(k + 1), next(k) {
    exps[0].push_back(std::vector<int>(m, 0));
    for (int t = 0; t < k; ++t) {
      std::map<std::vector<int>, int> index;
      for (const auto& e : exps[t]) {
        for (int j = 0; j < m; ++j) {
          auto f = e;
          ++f[j];
          index.emplace(std::move(f), 0);
        }
      }
      int pos = 0;
      for (auto& [e, idx] : index) {
        idx = pos++;
        exps[t + 1].push_back(e);
      }
      next[t].resize(exps[t].size() * m);
      for (std::size_t i = 0; i < exps[t].size(); ++i)
        for (int j = 0; j < m; ++j) {
          auto f = exps[t][i];
          ++f[j];
          next[t][i * m + j] = index.at(f);
        }
    }
  }
};

double log_multi_factorial(const std::vector<int>& e) {
  double s = 0.0;
  for (int x : e) s += std::lgamma(x + 1.0);
  return s;
}

}  // namespace

Representation rep_sym_power(const Representation& rho, int k, long long cap) {
  if (k < 0) fail(ErrorKind::usage, "symmetric power degree must be >= 0");
  const int m = rho.dim();
  const long long target = sym_power_dim(m, k);
  if (target > cap)
    fail(ErrorKind::size_limit,
         fmt::format("Sym^{} of a {}-dimensional representation has dimension {} > cap {}; use sym_power_character",
                     k, m, target, cap));
  const std::string name = fmt::format("sym{}({})", k, rho.name());
  const int n = rho.group().order();
  if (k == 0) return Representation::from_permutations(rho.group_ptr(), name, 1, std::vector<int>(n, 0));

  const MonomialBasis basis(m, k);
  const auto& top = basis.exps[k];
  const int dim = static_cast<int>(top.size());
  std::vector<double> log_fact(dim);
  for (int i = 0; i < dim; ++i) log_fact[i] = log_multi_factorial(top[i]);

  std::vector<CMatrix> mats(n);
#pragma omp parallel for schedule(dynamic)
  for (int g = 0; g < n; ++g) {
    const CMatrix a = rho.matrix(g);
    CMatrix out(dim, dim);
    std::vector<Complex> poly, grown;
    for (int col = 0; col < dim; ++col) {
      // Expand prod_i (sum_j a(j, i) x_j)^{alpha_i}.
      poly.assign(1, Complex(1.0, 0.0));
      int degree = 0;
      for (int i = 0; i < m; ++i) {
        for (int rep = 0; rep < top[col][i]; ++rep) {
          grown.assign(basis.exps[degree + 1].size(), Complex(0.0, 0.0));
          for (std::size_t b = 0; b < poly.size(); ++b) {
            if (poly[b] == Complex(0.0, 0.0)) continue;
            for (int j = 0; j < m; ++j) {
              const Complex aji = a(j, i);
              if (aji != Complex(0.0, 0.0)) grown[basis.next[degree][b * m + j]] += poly[b] * aji;
            }
          }
          poly.swap(grown);
          ++degree;
        }
      }
      for (int row = 0; row < dim; ++row)
        out(row, col) = poly[row] * std::exp(0.5 * (log_fact[row] - log_fact[col]));
    }
    if (g == 0) out = CMatrix::Identity(dim, dim);
    mats[g] = std::move(out);
  }
  return Representation::from_matrices(rho.group_ptr(), name, std::move(mats));
}

std::vector<CharacterVector> sym_power_characters(const CharacterVector& chi, int max_k, const Group& g) {
  if (max_k < 0) fail(ErrorKind::usage, "symmetric power degree must be >= 0");
  const int r = chi.size();
  if (r != g.conjugacy().count()) fail(ErrorKind::group_mismatch, "character length does not match class count");
  // powers[j][c] = chi(g^j) for g in class c.
  std::vector<std::vector<Complex>> powers(max_k + 1, std::vector<Complex>(r));
  for (int j = 1; j <= max_k; ++j)
    for (int c = 0; c < r; ++c) powers[j][c] = chi[g.power_class(c, j)];
  std::vector<CharacterVector> out(max_k + 1);
  out[0].values.assign(r, Complex(1.0, 0.0));
  for (int k = 1; k <= max_k; ++k) {
    out[k].values.assign(r, Complex(0.0, 0.0));
    for (int c = 0; c < r; ++c) {
      Complex s = 0.0;
      for (int j = 1; j <= k; ++j) s += powers[j][c] * out[k - j][c];
      out[k].values[c] = s / static_cast<double>(k);
    }
  }
  return out;
}

CharacterVector sym_power_character(const CharacterVector& chi, int k, const Group& g) {
  return sym_power_characters(chi, k, g).back();
}

CMatrix invariant_projector(const Representation& rho) {
  const int n = rho.group().order();
  CMatrix p = CMatrix::Zero(rho.dim(), rho.dim());
  const Complex w(1.0 / n, 0.0);
  for (int g = 0; g < n; ++g) rho.accumulate(g, w, p);
  return p;
}

int invariant_dimension(const Representation& rho) {
  const auto& part = rho.group().conjugacy();
  const auto chi = rho.character();
  Complex avg = 0.0;
  for (int c = 0; c < part.count(); ++c) avg += static_cast<double>(part.classes[c].size()) * chi[c];
  avg /= static_cast<double>(rho.group().order());
  const double rounded = std::round(avg.real());
  const double residual = std::abs(avg - Complex(rounded, 0.0));
  if (residual > 1e-6)
    fail(ErrorKind::numerical, fmt::format("{}: invariant dimension residual {:.3g}", rho.name(), residual));
  return static_cast<int>(rounded);
}

namespace {

void merge_counts(std::map<RootOfUnity, long long>& best, const std::map<RootOfUnity, long long>& counts) {
  for (const auto& [lambda, mult] : counts) {
    auto& slot = best[lambda];
    slot = std::max(slot, mult);
  }
}

std::map<RootOfUnity, long long> numeric_counts(const Representation& rho, int g) {
  const int ord = rho.group().element_order(g);
  Eigen::ComplexEigenSolver<CMatrix> solver(rho.matrix(g), false);
  std::map<RootOfUnity, long long> counts;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const Complex z = solver.eigenvalues()(i);
    double turns = std::arg(z) / (2.0 * std::numbers::pi);
    if (turns < 0) turns += 1.0;
    const long long p = std::llround(turns * ord) % ord;
    const auto lambda = RootOfUnity::make(p, ord);
    const double dist = std::abs(z - lambda.value());
    if (dist > 1e-6)
      fail(ErrorKind::numerical,
           fmt::format("{}: eigenvalue of element {} is {:.3g} from the nearest root of unity", rho.name(), g, dist));
    ++counts[lambda];
  }
  return counts;
}

std::map<RootOfUnity, long long> cycle_counts(const Representation& rho, int g) {
  std::map<RootOfUnity, long long> counts;
  std::vector<char> seen(rho.dim(), 0);
  for (int j = 0; j < rho.dim(); ++j) {
    if (seen[j]) continue;
    int len = 0;
    for (int x = j; !seen[x]; x = rho.image(g, x)) {
      seen[x] = 1;
      ++len;
    }
    for (int p = 0; p < len; ++p) ++counts[RootOfUnity::make(p, len)];
  }
  return counts;
}

std::map<RootOfUnity, long long> character_counts(const Representation& rho, const CharacterVector& chi, int cls) {
  const auto& grp = rho.group();
  const int g = grp.conjugacy().representatives[cls];
  const int ord = grp.element_order(g);
  std::vector<Complex> chi_pow(ord);
  for (int j = 0; j < ord; ++j) chi_pow[j] = chi[grp.power_class(cls, j)];
  std::map<RootOfUnity, long long> counts;
  long long total = 0;
  for (int p = 0; p < ord; ++p) {
    Complex s = 0.0;
    for (int j = 0; j < ord; ++j)
      s += chi_pow[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((1LL * p * j) % ord) / ord);
    s /= static_cast<double>(ord);
    const double rounded = std::round(s.real());
    if (std::abs(s - Complex(rounded, 0.0)) > 1e-6 || rounded < 0)
      fail(ErrorKind::numerical, fmt::format("{}: eigenvalue multiplicity not integral for class {}", rho.name(), cls));
    if (rounded > 0) counts[RootOfUnity::make(p, ord)] += static_cast<long long>(rounded);
    total += static_cast<long long>(rounded);
  }
  if (total != rho.dim())
    fail(ErrorKind::numerical, fmt::format("{}: eigenvalue multiplicities sum to {} != {}", rho.name(), total, rho.dim()));
  return counts;
}

}  // namespace

EigenProfile eigen_profile(const Representation& rho, EigenMethod method) {
  if (method == EigenMethod::automatic) {
    if (rho.storage() == Representation::Storage::permutation) method = EigenMethod::cycle_type;
    else if (rho.dim() <= kNumericEigenMaxDim) method = EigenMethod::numeric;
    else method = EigenMethod::character;
  }
  if (method == EigenMethod::cycle_type && rho.storage() != Representation::Storage::permutation)
    fail(ErrorKind::usage, "cycle-type eigenvalues need a permutation representation");

  const auto& part = rho.group().conjugacy();
  CharacterVector chi;
  if (method == EigenMethod::character) chi = rho.character();
  std::map<RootOfUnity, long long> best;
  for (int c = 0; c < part.count(); ++c) {
    const int g = part.representatives[c];
    switch (method) {
      case EigenMethod::numeric: merge_counts(best, numeric_counts(rho, g)); break;
      case EigenMethod::cycle_type: merge_counts(best, cycle_counts(rho, g)); break;
      case EigenMethod::character: merge_counts(best, character_counts(rho, chi, c)); break;
      case EigenMethod::automatic: break;
    }
  }
  EigenProfile profile;
  for (const auto& [lambda, mult] : best) {
    profile.lambdas.push_back(lambda);
    profile.max_mult.push_back(mult);
  }
  return profile;
}

long long k_bound(const EigenProfile& profile, int group_order) {
  return std::min<long long>(group_order, profile.total() - 1);
}

long long k_bound(const Representation& rho, EigenMethod method) {
  return k_bound(eigen_profile(rho, method), rho.group().order());
}

std::string format_complex(Complex z) {
  const double im = z.imag() == 0.0 ? 0.0 : z.imag();
  return fmt::format("{:.17g}{}{:.17g}i", z.real(), std::signbit(im) ? "-" : "+", std::abs(im));
}

Complex parse_complex(const std::string& text) {
  if (text.empty() || text.back() != 'i') fail(ErrorKind::io, fmt::format("bad complex literal '{}'", text));
  std::size_t split = std::string::npos;
  for (std::size_t i = text.size() - 1; i-- > 1;) {
    if ((text[i] == '+' || text[i] == '-') && text[i - 1] != 'e' && text[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) fail(ErrorKind::io, fmt::format("bad complex literal '{}'", text));
  try {
    const double re = std::stod(text.substr(0, split));
    const double im = std::stod(text.substr(split, text.size() - split - 1));
    return {re, im};
  } catch (const std::exception&) {
    fail(ErrorKind::io, fmt::format("bad complex literal '{}'", text));
  }
}

void write_representation(std::ostream& os, const Representation& rho) {
  const int n = rho.group().order(), d = rho.dim();
  if (static_cast<long long>(n) * d * d > 50'000'000LL)
    fail(ErrorKind::size_limit, "representation too large to export as text");
  os << "rep " << rho.name() << ' ' << d << ' ' << n << '\n';
  std::string line;
  for (int g = 0; g < n; ++g) {
    const CMatrix m = rho.matrix(g);
    for (int i = 0; i < d; ++i) {
      line.clear();
      for (int j = 0; j < d; ++j) {
        if (j) line += ' ';
        line += format_complex(m(i, j));
      }
      os << line << '\n';
    }
  }
}

Representation read_representation(std::istream& is, GroupPtr group) {
  std::string tag, name;
  int d = 0, n = 0;
  if (!(is >> tag >> name >> d >> n) || tag != "rep" || d < 1)
    fail(ErrorKind::io, "bad representation header");
  if (n != group->order()) fail(ErrorKind::group_mismatch, "representation order does not match the group");
  std::vector<CMatrix> mats(n, CMatrix(d, d));
  std::string tok;
  for (int g = 0; g < n; ++g)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        if (!(is >> tok)) fail(ErrorKind::io, "truncated representation");
        mats[g](i, j) = parse_complex(tok);
      }
  return Representation::from_matrices(std::move(group), name, std::move(mats));
}

}  // namespace avgsym
