#include "avgsym/group.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "avgsym/error.hpp"
#include "avgsym/rng.hpp"

namespace avgsym {

const char* to_string(Family family) {
  switch (family) {
    case Family::cyclic: return "cyclic";
    case Family::sign_flip: return "sign_flip";
    case Family::dihedral: return "dihedral";
    case Family::symmetric: return "symmetric";
    case Family::product: return "product";
    case Family::custom: return "custom";
  }
  return "unknown";
}

namespace {

long long factorial(int d) {
  long long f = 1;
  for (int i = 2; i <= d; ++i) f *= i;
  return f;
}

int permutation_rank(const std::vector<int>& p) {
  const int d = static_cast<int>(p.size());
  long long rank = 0;
  for (int i = 0; i < d; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < d; ++j) smaller += p[j] < p[i];
    rank += smaller * factorial(d - 1 - i);
  }
  return static_cast<int>(rank);
}

std::string binary_label(int value, int bits) {
  std::string s(bits, '0');
  for (int j = 0; j < bits; ++j)
    if (value >> j & 1) s[bits - 1 - j] = '1';
  return s;
}

}  // namespace

GroupPtr Group::cyclic(int n) {
  if (n < 1) fail(ErrorKind::usage, fmt::format("cyclic group needs n >= 1, got {}", n));
  if (n > (1 << 20)) fail(ErrorKind::size_limit, fmt::format("cyclic order {} exceeds cap {}", n, 1 << 20));
  auto g = std::shared_ptr<Group>(new Group());
  g->family_ = Family::cyclic;
  g->param_ = n;
  g->order_ = n;
  g->descriptor_ = fmt::format("cyclic:{}", n);
  g->labels_.resize(n);
  for (int k = 0; k < n; ++k) g->labels_[k] = std::to_string(k);
  if (n > 1) g->generators_ = {1};
  g->finalize();
  return g;
}

GroupPtr Group::sign_flip(int d) {
  if (d < 1) fail(ErrorKind::usage, fmt::format("sign_flip group needs d >= 1, got {}", d));
  if (d > kSignFlipMaxDim)
    fail(ErrorKind::size_limit, fmt::format("sign_flip dimension {} exceeds cap {}", d, kSignFlipMaxDim));
  auto g = std::shared_ptr<Group>(new Group());
  g->family_ = Family::sign_flip;
  g->param_ = d;
  g->order_ = 1 << d;
  g->descriptor_ = fmt::format("signflip:{}", d);
  g->labels_.resize(g->order_);
  for (int a = 0; a < g->order_; ++a) g->labels_[a] = binary_label(a, d);
  for (int j = 0; j < d; ++j) g->generators_.push_back(1 << j);
  g->finalize();
  return g;
}

GroupPtr Group::dihedral(int n) {
  if (n < 3) fail(ErrorKind::usage, fmt::format("dihedral group needs n >= 3, got {}", n));
  if (n > (1 << 19)) fail(ErrorKind::size_limit, fmt::format("dihedral n {} exceeds cap", n));
  auto g = std::shared_ptr<Group>(new Group());
  g->family_ = Family::dihedral;
  g->param_ = n;
  g->order_ = 2 * n;
  g->descriptor_ = fmt::format("dihedral:{}", n);
  g->labels_.resize(2 * n);
  for (int k = 0; k < n; ++k) {
    g->labels_[k] = fmt::format("r{}", k);
    g->labels_[n + k] = fmt::format("s{}", k);
  }
  g->generators_ = {1, n};
  g->finalize();
  return g;
}

GroupPtr Group::symmetric(int d) {
  if (d < 1) fail(ErrorKind::usage, fmt::format("symmetric group needs d >= 1, got {}", d));
  if (d > kSymmetricMaxDegree)
    fail(ErrorKind::size_limit, fmt::format("symmetric degree {} exceeds cap {}", d, kSymmetricMaxDegree));
  auto g = std::shared_ptr<Group>(new Group());
  g->family_ = Family::symmetric;
  g->param_ = d;
  g->order_ = static_cast<int>(factorial(d));
  g->descriptor_ = fmt::format("symmetric:{}", d);
  std::vector<int> p(d);
  std::iota(p.begin(), p.end(), 0);
  do {
    g->perms_.push_back(p);
    std::string label;
    for (int x : p) label += std::to_string(x + 1);
    g->labels_.push_back(label);
  } while (std::next_permutation(p.begin(), p.end()));
  for (int i = 0; i + 1 < d; ++i) {
    std::vector<int> t(d);
    std::iota(t.begin(), t.end(), 0);
    std::swap(t[i], t[i + 1]);
    g->generators_.push_back(permutation_rank(t));
  }
  g->finalize();
  return g;
}

GroupPtr Group::product(GroupPtr left, GroupPtr right) {
  if (!left || !right) fail(ErrorKind::usage, "product needs two groups");
  const long long order = static_cast<long long>(left->order()) * right->order();
  if (order > (1 << 20)) fail(ErrorKind::size_limit, fmt::format("product order {} exceeds cap", order));
  auto g = std::shared_ptr<Group>(new Group());
  g->family_ = Family::product;
  g->order_ = static_cast<int>(order);
  g->descriptor_ = left->descriptor() + "*" + right->descriptor();
  const int h = right->order();
  g->labels_.resize(g->order_);
  for (int a = 0; a < left->order(); ++a)
    for (int b = 0; b < h; ++b)
      g->labels_[a * h + b] = fmt::format("({},{})", left->label(a), right->label(b));
  for (int s : left->generators()) g->generators_.push_back(s * h);
  for (int s : right->generators()) g->generators_.push_back(s);
  g->left_ = std::move(left);
  g->right_ = std::move(right);
  g->finalize();
  return g;
}

GroupPtr Group::custom(std::vector<std::vector<int>> table) {
  const int n = static_cast<int>(table.size());
  if (n < 1) fail(ErrorKind::usage, "custom group needs a nonempty table");
  if (n > kDenseTableMaxOrder)
    fail(ErrorKind::size_limit, fmt::format("custom group order {} exceeds cap {}", n, kDenseTableMaxOrder));
  auto g = std::shared_ptr<Group>(new Group());
  g->family_ = Family::custom;
  g->order_ = n;
  g->descriptor_ = "custom";
  g->table_.resize(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(table[a].size()) != n)
      fail(ErrorKind::usage, fmt::format("custom table row {} has wrong length", a));
    for (int b = 0; b < n; ++b) {
      const int v = table[a][b];
      if (v < 0 || v >= n) fail(ErrorKind::numerical, fmt::format("table entry out of range at ({},{})", a, b));
      g->table_[static_cast<std::size_t>(a) * n + b] = v;
    }
  }
  g->labels_.resize(n);
  for (int a = 0; a < n; ++a) g->labels_[a] = std::to_string(a);
  // Latin-square/identity checks first so inverse lookup below is well defined.
  for (int a = 0; a < n; ++a)
    if (g->table_[a] != a || g->table_[static_cast<std::size_t>(a) * n] != a)
      fail(ErrorKind::numerical, "custom table: element 0 is not the identity");
  g->finalize();
  g->validate();
  // Greedy generating set.
  ElementSet span = {0};
  g->generators_.clear();
  for (int a = 1; a < n; ++a) {
    if (std::binary_search(span.begin(), span.end(), a)) continue;
    g->generators_.push_back(a);
    span = closure(*g, g->generators_);
  }
  g->conjugacy_ = conjugacy_classes(*g);
  return g;
}

int Group::mul_formula(int a, int b) const {
  switch (family_) {
    case Family::cyclic: return (a + b) % order_;
    case Family::sign_flip: return a ^ b;
    case Family::dihedral: {
      // x -> e x + k, composed as (a o b)(x) = a(b(x)).
      const int n = param_;
      const bool ra = a >= n, rb = b >= n;
      const int ka = ra ? a - n : a, kb = rb ? b - n : b;
      const int k = ((ra ? -kb : kb) + ka + n) % n;
      return (ra != rb) ? n + k : k;
    }
    case Family::symmetric: {
      const auto& pa = perms_[a];
      const auto& pb = perms_[b];
      std::vector<int> c(pa.size());
      for (std::size_t x = 0; x < c.size(); ++x) c[x] = pa[pb[x]];
      return permutation_rank(c);
    }
    case Family::product: {
      const int h = right_->order();
      return left_->mul(a / h, b / h) * h + right_->mul(a % h, b % h);
    }
    case Family::custom: break;
  }
  return table_[static_cast<std::size_t>(a) * order_ + b];
}

int Group::mul(int a, int b) const {
  if (!table_.empty()) return table_[static_cast<std::size_t>(a) * order_ + b];
  return mul_formula(a, b);
}

int Group::power(int a, long long k) const {
  const int ord = element_order_.empty() ? 0 : element_order_[a];
  if (ord > 0) {
    k %= ord;
    if (k < 0) k += ord;
  } else if (k < 0) {
    a = inv(a);
    k = -k;
  }
  int result = 0, base = a;
  while (k > 0) {
    if (k & 1) result = mul(result, base);
    base = mul(base, base);
    k >>= 1;
  }
  return result;
}

bool Group::is_abelian() const { return conjugacy_.count() == order_; }

const std::vector<int>& Group::permutation(int a) const {
  if (family_ != Family::symmetric) fail(ErrorKind::usage, "permutation() requires a symmetric group");
  return perms_[a];
}

int Group::power_class(int cls, long long j) const {
  return conjugacy_.class_of[power(conjugacy_.representatives[cls], j)];
}

void Group::finalize() {
  const int n = order_;
  if (table_.empty() && n <= kDenseTableMaxOrder && family_ != Family::custom) {
    table_.resize(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) table_[static_cast<std::size_t>(a) * n + b] = mul_formula(a, b);
  }
  inverse_.assign(n, -1);
  switch (family_) {
    case Family::cyclic:
      for (int a = 0; a < n; ++a) inverse_[a] = (n - a) % n;
      break;
    case Family::sign_flip:
      for (int a = 0; a < n; ++a) inverse_[a] = a;
      break;
    case Family::dihedral:
      for (int k = 0; k < param_; ++k) {
        inverse_[k] = (param_ - k) % param_;
        inverse_[param_ + k] = param_ + k;
      }
      break;
    case Family::symmetric:
      for (int a = 0; a < n; ++a) {
        std::vector<int> q(perms_[a].size());
        for (std::size_t x = 0; x < q.size(); ++x) q[perms_[a][x]] = static_cast<int>(x);
        inverse_[a] = permutation_rank(q);
      }
      break;
    case Family::product: {
      const int h = right_->order();
      for (int a = 0; a < n; ++a) inverse_[a] = left_->inv(a / h) * h + right_->inv(a % h);
      break;
    }
    case Family::custom:
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
          if (mul(a, b) == 0) {
            inverse_[a] = b;
            break;
          }
        if (inverse_[a] < 0) fail(ErrorKind::numerical, fmt::format("custom table: element {} has no inverse", a));
      }
      break;
  }
  element_order_.assign(n, 0);
  for (int a = 0; a < n; ++a) {
    int x = a, k = 1;
    while (x != 0) {
      x = mul(x, a);
      ++k;
      if (k > n) fail(ErrorKind::numerical, fmt::format("element {} has no finite order", a));
    }
    element_order_[a] = k;
  }
  if (family_ != Family::custom) conjugacy_ = conjugacy_classes(*this);
}

void Group::validate() const {
  const int n = order_;
  for (int a = 0; a < n; ++a) {
    if (mul(0, a) != a || mul(a, 0) != a)
      fail(ErrorKind::numerical, fmt::format("{}: identity law fails at {}", descriptor_, a));
    if (mul(a, inv(a)) != 0) fail(ErrorKind::numerical, fmt::format("{}: inverse law fails at {}", descriptor_, a));
  }
  auto check_row = [&](int a) {
    std::vector<char> row(n, 0), col(n, 0);
    for (int b = 0; b < n; ++b) {
      const int r = mul(a, b), c = mul(b, a);
      if (row[r]++ || col[c]++)
        fail(ErrorKind::numerical, fmt::format("{}: table is not a Latin square at {}", descriptor_, a));
    }
  };
  if (n <= 4096) {
    for (int a = 0; a < n; ++a) check_row(a);
  } else {
    Rng rng = make_rng(0x1a71, n);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int t = 0; t < 256; ++t) check_row(pick(rng));
  }
  if (n <= kExhaustiveCheckMaxOrder) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const int ab = mul(a, b);
        for (int c = 0; c < n; ++c)
          if (mul(ab, c) != mul(a, mul(b, c)))
            fail(ErrorKind::numerical, fmt::format("{}: associativity fails at ({},{},{})", descriptor_, a, b, c));
      }
  } else {
    Rng rng = make_rng(0xa55c, n);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int t = 0; t < 200000; ++t) {
      const int a = pick(rng), b = pick(rng), c = pick(rng);
      if (mul(mul(a, b), c) != mul(a, mul(b, c)))
        fail(ErrorKind::numerical, fmt::format("{}: associativity fails at ({},{},{})", descriptor_, a, b, c));
    }
  }
}

bool Group::same_as(const Group& other) const {
  if (this == &other) return true;
  if (order_ != other.order_ || descriptor_ != other.descriptor_) return false;
  if (family_ != Family::custom) return true;
  return table_ == other.table_;
}

ConjugacyPartition conjugacy_classes(const Group& g) {
  const int n = g.order();
  ConjugacyPartition part;
  part.class_of.assign(n, -1);
  std::vector<int> gens = g.generators();
  for (int s = 0; s < n; ++s) {
    if (part.class_of[s] >= 0) continue;
    const int cls = part.count();
    std::vector<int> members = {s};
    part.class_of[s] = cls;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const int x = members[i];
      for (int h : gens) {
        const int y = g.mul(g.mul(h, x), g.inv(h));
        if (part.class_of[y] < 0) {
          part.class_of[y] = cls;
          members.push_back(y);
        }
      }
    }
    std::sort(members.begin(), members.end());
    part.representatives.push_back(members.front());
    part.classes.push_back(std::move(members));
  }
  return part;
}

ElementSet closure(const Group& g, const ElementSet& s) {
  if (s.empty()) fail(ErrorKind::usage, "closure needs a nonempty element set");
  const int n = g.order();
  std::vector<char> in(n, 0);
  std::vector<int> members = {0};
  in[0] = 1;
  for (int x : s) {
    if (x < 0 || x >= n) fail(ErrorKind::usage, fmt::format("element {} out of range", x));
    if (!in[x]) {
      in[x] = 1;
      members.push_back(x);
    }
  }
  // In a finite group, closing under right multiplication by S gives <S>.
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (int t : s) {
      const int y = g.mul(members[i], t);
      if (!in[y]) {
        in[y] = 1;
        members.push_back(y);
      }
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

std::vector<int> sample_uniform(const Group& g, long long n, std::uint64_t seed) {
  if (n < 1) fail(ErrorKind::usage, fmt::format("sample size must be >= 1, got {}", n));
  Rng rng = make_rng(seed);
  std::uniform_int_distribution<int> pick(0, g.order() - 1);
  std::vector<int> out(static_cast<std::size_t>(n));
  for (auto& x : out) x = pick(rng);
  return out;
}

namespace {

GroupPtr parse_factor(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) fail(ErrorKind::usage, fmt::format("group spec '{}' needs family:param", spec));
  const std::string family = spec.substr(0, colon);
  int param = 0;
  try {
    std::size_t used = 0;
    param = std::stoi(spec.substr(colon + 1), &used);
    if (used != spec.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    fail(ErrorKind::usage, fmt::format("group spec '{}' has a bad parameter", spec));
  }
  if (family == "cyclic") return Group::cyclic(param);
  if (family == "signflip" || family == "sign_flip") return Group::sign_flip(param);
  if (family == "dihedral") return Group::dihedral(param);
  if (family == "symmetric") return Group::symmetric(param);
  fail(ErrorKind::usage, fmt::format("unknown group family '{}'", family));
}

}  // namespace

GroupPtr parse_group(const std::string& spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : spec) {
    if (c == '*') {
      parts.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  parts.push_back(cur);
  GroupPtr g = parse_factor(parts.front());
  for (std::size_t i = 1; i < parts.size(); ++i) g = Group::product(g, parse_factor(parts[i]));
  return g;
}

void write_group(std::ostream& os, const Group& g) {
  const int n = g.order();
  if (n > 4096) fail(ErrorKind::size_limit, fmt::format("refusing to serialize a table of order {}", n));
  std::string params;
  switch (g.family()) {
    case Family::product: params = g.descriptor(); break;
    case Family::custom: params = "-"; break;
    default: params = std::to_string(g.parameter()); break;
  }
  os << "group " << to_string(g.family()) << ' ' << params << ' ' << n << '\n';
  std::string row;
  for (int a = 0; a < n; ++a) {
    row.clear();
    for (int b = 0; b < n; ++b) {
      if (b) row += ' ';
      row += std::to_string(g.mul(a, b));
    }
    os << row << '\n';
  }
}

GroupPtr read_group(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) fail(ErrorKind::io, "empty group stream");
  std::istringstream hs(header);
  std::string tag, family, params;
  int order = 0;
  if (!(hs >> tag >> family >> params >> order) || tag != "group" || order < 1)
    fail(ErrorKind::io, fmt::format("bad group header '{}'", header));
  std::vector<std::vector<int>> table(order, std::vector<int>(order));
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b)
      if (!(is >> table[a][b])) fail(ErrorKind::io, fmt::format("truncated group table at row {}", a));

  GroupPtr g;
  if (family == "custom") {
    g = Group::custom(std::move(table));
  } else {
    if (family == "product") {
      g = parse_group(params);
    } else {
      const std::string name = family == "sign_flip" ? "signflip" : family;
      g = parse_group(name + ":" + params);
    }
    if (g->order() != order) fail(ErrorKind::io, "group header order does not match family");
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b)
        if (g->mul(a, b) != table[a][b])
          fail(ErrorKind::io, fmt::format("table disagrees with family {} at ({},{})", family, a, b));
  }
  return g;
}

}  // namespace avgsym
