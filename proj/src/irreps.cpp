#include "avgsym/irreps.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <bit>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "avgsym/error.hpp"

namespace avgsym {

namespace {

struct RawIrrep {
  std::string label;
  std::vector<CMatrix> mats;
};

std::vector<RawIrrep> cyclic_irreps(const Group& g) {
  const int n = g.order();
  std::vector<RawIrrep> out(n);
  for (int j = 0; j < n; ++j) {
    out[j].label = fmt::format("chi{}", j);
    out[j].mats.assign(n, CMatrix(1, 1));
    for (int k = 0; k < n; ++k)
      out[j].mats[k](0, 0) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((1LL * j * k) % n) / n);
    out[j].mats[0](0, 0) = 1.0;
  }
  return out;
}

std::vector<RawIrrep> sign_flip_irreps(const Group& g) {
  const int n = g.order();
  std::vector<RawIrrep> out(n);
  for (int mask = 0; mask < n; ++mask) {
    out[mask].label = "chi" + g.label(mask);
    out[mask].mats.assign(n, CMatrix(1, 1));
    for (int a = 0; a < n; ++a) out[mask].mats[a](0, 0) = (std::popcount(static_cast<unsigned>(mask & a)) & 1) ? -1.0 : 1.0;
  }
  return out;
}

std::vector<RawIrrep> dihedral_irreps(const Group& g) {
  const int n = g.parameter(), order = g.order();
  std::vector<RawIrrep> out;
  auto add_1d = [&](const std::string& label, auto value_of) {
    RawIrrep r{label, std::vector<CMatrix>(order, CMatrix(1, 1))};
    for (int a = 0; a < order; ++a) r.mats[a](0, 0) = value_of(a >= n, a % n);
    out.push_back(std::move(r));
  };
  add_1d("trivial", [](bool, int) { return 1.0; });
  add_1d("sign", [](bool refl, int) { return refl ? -1.0 : 1.0; });
  if (n % 2 == 0) {
    add_1d("alt", [](bool, int k) { return (k % 2) ? -1.0 : 1.0; });
    add_1d("altsign", [](bool refl, int k) { return ((k % 2) != refl) ? -1.0 : 1.0; });
  }
  for (int h = 1; 2 * h < n; ++h) {
    RawIrrep r{fmt::format("rho{}", h), std::vector<CMatrix>(order, CMatrix(2, 2))};
    for (int a = 0; a < order; ++a) {
      const bool refl = a >= n;
      const int k = a % n;
      const double theta = 2.0 * std::numbers::pi * static_cast<double>((1LL * h * k) % n) / n;
      const double c = std::cos(theta), s = std::sin(theta);
      // Rotation by theta, composed with diag(1, -1) for reflections.
      const double f = refl ? -1.0 : 1.0;
      r.mats[a] << c, -s * f, s, c * f;
    }
    r.mats[0] = CMatrix::Identity(2, 2);
    out.push_back(std::move(r));
  }
  return out;
}

void partitions(int remaining, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions(remaining - p, p, cur, out);
    cur.pop_back();
  }
}

/// Standard Young tableaux of a shape, each as (row, col) of entries 0..d-1.
std::vector<std::vector<std::pair<int, int>>> standard_tableaux(const std::vector<int>& shape, int d) {
  std::vector<std::vector<std::pair<int, int>>> out;
  std::vector<int> len(shape.size(), 0);
  std::vector<std::pair<int, int>> pos(d);
  auto fill = [&](auto&& self, int x) -> void {
    if (x == d) {
      out.push_back(pos);
      return;
    }
    for (std::size_t r = 0; r < shape.size(); ++r) {
      if (len[r] < shape[r] && (r == 0 || len[r - 1] > len[r])) {
        pos[x] = {static_cast<int>(r), len[r]};
        ++len[r];
        self(self, x + 1);
        --len[r];
      }
    }
  };
  fill(fill, 0);
  return out;
}

std::vector<RawIrrep> symmetric_irreps(const Group& g) {
  const int d = g.parameter(), order = g.order();
  std::vector<std::vector<int>> shapes;
  std::vector<int> cur;
  partitions(d, d, cur, shapes);
  std::vector<RawIrrep> out;
  for (const auto& shape : shapes) {
    const auto tableaux = standard_tableaux(shape, d);
    const int dim = static_cast<int>(tableaux.size());
    std::map<std::vector<std::pair<int, int>>, int> index;
    for (int t = 0; t < dim; ++t) index[tableaux[t]] = t;

    // Young's orthogonal form on the adjacent transpositions (i, i+1).
    std::vector<CMatrix> gen(std::max(d - 1, 0), CMatrix::Zero(dim, dim));
    for (int i = 0; i + 1 < d; ++i) {
      for (int t = 0; t < dim; ++t) {
        const auto& tab = tableaux[t];
        const int ci = tab[i].second - tab[i].first;
        const int cj = tab[i + 1].second - tab[i + 1].first;
        const double r = cj - ci;
        gen[i](t, t) = 1.0 / r;
        if (std::abs(r) > 1.0) {
          auto swapped = tab;
          std::swap(swapped[i], swapped[i + 1]);
          gen[i](index.at(swapped), t) = std::sqrt(1.0 - 1.0 / (r * r));
        }
      }
    }
    // Breadth-first extension rho(s q) = rho(s) rho(q) over the Cayley graph.
    RawIrrep irrep;
    irrep.label = "p";
    for (int p : shape) irrep.label += std::to_string(p);
    irrep.mats.assign(order, CMatrix());
    std::vector<char> done(order, 0);
    irrep.mats[0] = CMatrix::Identity(dim, dim);
    done[0] = 1;
    std::vector<int> queue = {0};
    const auto& gens = g.generators();
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const int q = queue[qi];
      for (std::size_t s = 0; s < gens.size(); ++s) {
        const int p = g.mul(gens[s], q);
        if (done[p]) continue;
        done[p] = 1;
        irrep.mats[p] = gen[s] * irrep.mats[q];
        queue.push_back(p);
      }
    }
    out.push_back(std::move(irrep));
  }
  return out;
}

std::vector<RawIrrep> raw_irreps(const GroupPtr& g);

std::vector<RawIrrep> product_irreps(const Group& g) {
  const auto left = raw_irreps(g.left_factor());
  const auto right = raw_irreps(g.right_factor());
  const int h = g.right_factor()->order();
  std::vector<RawIrrep> out;
  for (const auto& a : left) {
    for (const auto& b : right) {
      RawIrrep r;
      r.label = a.label + "x" + b.label;
      r.mats.resize(g.order());
      const auto da = a.mats[0].rows(), db = b.mats[0].rows();
      for (int x = 0; x < g.order(); ++x) {
        const CMatrix& ma = a.mats[x / h];
        const CMatrix& mb = b.mats[x % h];
        CMatrix m(da * db, da * db);
        for (Eigen::Index i = 0; i < da; ++i)
          for (Eigen::Index k = 0; k < da; ++k) m.block(i * db, k * db, db, db) = ma(i, k) * mb;
        r.mats[x] = std::move(m);
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

bool supported(const Group& g) {
  switch (g.family()) {
    case Family::cyclic:
    case Family::sign_flip:
    case Family::dihedral: return true;
    case Family::symmetric: return g.parameter() <= kSymmetricIrrepMaxDegree;
    case Family::product: return supported(*g.left_factor()) && supported(*g.right_factor());
    case Family::custom: return false;
  }
  return false;
}

std::vector<RawIrrep> raw_irreps(const GroupPtr& g) {
  switch (g->family()) {
    case Family::cyclic: return cyclic_irreps(*g);
    case Family::sign_flip: return sign_flip_irreps(*g);
    case Family::dihedral: return dihedral_irreps(*g);
    case Family::symmetric: return symmetric_irreps(*g);
    case Family::product: return product_irreps(*g);
    case Family::custom: break;
  }
  fail(ErrorKind::capability, fmt::format("no irrep table for {}", g->descriptor()));
}

bool character_less(const CharacterVector& a, const CharacterVector& b) {
  for (int c = 0; c < a.size(); ++c) {
    const long long ar = std::llround(a[c].real() * 1e9), br = std::llround(b[c].real() * 1e9);
    if (ar != br) return ar < br;
    const long long ai = std::llround(a[c].imag() * 1e9), bi = std::llround(b[c].imag() * 1e9);
    if (ai != bi) return ai < bi;
  }
  return false;
}

}  // namespace

IrrepTable irreps_of(GroupPtr g) {
  if (!supported(*g))
    fail(ErrorKind::capability, fmt::format("irrep tables are not available for {}", g->descriptor()));
  // Every built-in family has sum d^2 = |G|, so the table stores |G|^2 entries.
  if (static_cast<long long>(g->order()) * g->order() > kIrrepTableMaxEntries)
    fail(ErrorKind::capability, fmt::format("irrep table for {} exceeds the size cap", g->descriptor()));

  auto raw = raw_irreps(g);
  struct Entry {
    Representation rep;
    CharacterVector chi;
    bool trivial;
  };
  std::vector<Entry> entries;
  entries.reserve(raw.size());
  for (auto& r : raw) {
    auto rep = Representation::from_matrices(g, r.label, std::move(r.mats));
    auto chi = rep.character();
    bool trivial = rep.dim() == 1;
    for (int c = 0; trivial && c < chi.size(); ++c) trivial = std::abs(chi[c] - Complex(1.0, 0.0)) < 1e-9;
    entries.push_back({std::move(rep), std::move(chi), trivial});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.trivial != b.trivial) return a.trivial;
    if (a.rep.dim() != b.rep.dim()) return a.rep.dim() < b.rep.dim();
    return character_less(a.chi, b.chi);
  });
  IrrepTable table;
  table.group = g;
  for (auto& e : entries) {
    table.labels.push_back(e.rep.name());
    table.dims.push_back(e.rep.dim());
    table.characters.push_back(std::move(e.chi));
    table.irreps.push_back(std::move(e.rep));
  }
  table.trivial_index = 0;
  return table;
}

Complex character_inner(const CharacterVector& chi, const CharacterVector& psi, const Group& g) {
  const auto& part = g.conjugacy();
  if (chi.size() != part.count() || psi.size() != part.count())
    fail(ErrorKind::group_mismatch, "character length does not match class count");
  Complex s = 0.0;
  for (int c = 0; c < part.count(); ++c) s += static_cast<double>(part.classes[c].size()) * chi[c] * std::conj(psi[c]);
  return s / static_cast<double>(g.order());
}

int multiplicity(const CharacterVector& chi, int irrep, const IrrepTable& table) {
  if (irrep < 0 || irrep >= table.count()) fail(ErrorKind::usage, fmt::format("irrep index {} out of range", irrep));
  const Complex ip = character_inner(chi, table.characters[irrep], *table.group);
  const double rounded = std::round(ip.real());
  const double residual = std::abs(ip - Complex(rounded, 0.0));
  if (residual > 1e-6 || rounded < 0)
    fail(ErrorKind::numerical,
         fmt::format("multiplicity of {} is not a nonnegative integer (residual {:.3g})", table.labels[irrep], residual));
  return static_cast<int>(rounded);
}

int multiplicity(const Representation& rho, int irrep, const IrrepTable& table) {
  if (!rho.group().same_as(*table.group)) fail(ErrorKind::group_mismatch, "representation and table groups differ");
  return multiplicity(rho.character(), irrep, table);
}

std::vector<int> decompose(const CharacterVector& chi, const IrrepTable& table) {
  std::vector<int> m(table.count());
  long long total = 0;
  for (int i = 0; i < table.count(); ++i) {
    m[i] = multiplicity(chi, i, table);
    total += static_cast<long long>(m[i]) * table.dims[i];
  }
  const long long dim = std::llround(chi[0].real());
  if (total != dim)
    fail(ErrorKind::numerical, fmt::format("decomposition accounts for dimension {} of {}", total, dim));
  return m;
}

std::vector<int> decompose(const Representation& rho, const IrrepTable& table) {
  if (!rho.group().same_as(*table.group)) fail(ErrorKind::group_mismatch, "representation and table groups differ");
  return decompose(rho.character(), table);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

void write_character_table_csv(std::ostream& os, const IrrepTable& table) {
  const auto& g = *table.group;
  const auto& part = g.conjugacy();
  os << "irrep";
  for (int rep : part.representatives) os << ',' << csv_field(g.label(rep));
  os << '\n';
  for (int i = 0; i < table.count(); ++i) {
    os << csv_field(table.labels[i]);
    for (int c = 0; c < part.count(); ++c) os << ',' << format_complex(table.characters[i][c]);
    os << '\n';
  }
}

}  // namespace avgsym
