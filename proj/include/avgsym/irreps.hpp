#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "avgsym/representation.hpp"

namespace avgsym {

inline constexpr int kSymmetricIrrepMaxDegree = 6;
/// Cap on sum_pi d_pi^2 * |G| stored entries.
inline constexpr long long kIrrepTableMaxEntries = 1LL << 22;

/// Complete set of pairwise inequivalent unitary irreps of a built-in group.
/// Ordered trivial first, then by dimension, then lexicographically by character.
struct IrrepTable {
  GroupPtr group;
  std::vector<Representation> irreps;
  std::vector<std::string> labels;
  std::vector<CharacterVector> characters;
  std::vector<int> dims;
  int trivial_index = 0;

  int count() const { return static_cast<int>(irreps.size()); }
  bool is_trivial(int i) const { return i == trivial_index; }
};

/// Capability error for unsupported families (custom, symmetric d > 6) and
/// for tables above kIrrepTableMaxEntries.
IrrepTable irreps_of(GroupPtr g);

/// (1/|G|) sum_g chi(g) conj(psi(g)).
Complex character_inner(const CharacterVector& chi, const CharacterVector& psi, const Group& g);

int multiplicity(const CharacterVector& chi, int irrep, const IrrepTable& table);
int multiplicity(const Representation& rho, int irrep, const IrrepTable& table);
/// Multiplicity of every irrep; checks sum_i m_i d_i == dim.
std::vector<int> decompose(const Representation& rho, const IrrepTable& table);
std::vector<int> decompose(const CharacterVector& chi, const IrrepTable& table);

/// Rows are irreps, columns are conjugacy-class representatives, entries `a+bi`.
void write_character_table_csv(std::ostream& os, const IrrepTable& table);

}  // namespace avgsym
