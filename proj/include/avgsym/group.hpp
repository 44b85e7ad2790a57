#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace avgsym {

enum class Family { cyclic, sign_flip, dihedral, symmetric, product, custom };

const char* to_string(Family family);

inline constexpr int kSignFlipMaxDim = 16;
inline constexpr int kSymmetricMaxDegree = 8;
/// Dense multiplication tables are cached only up to this order.
inline constexpr int kDenseTableMaxOrder = 2048;
/// Associativity is checked exhaustively up to this order, by random triples above.
inline constexpr int kExhaustiveCheckMaxOrder = 512;

class Group;
using GroupPtr = std::shared_ptr<const Group>;

struct ConjugacyPartition {
  std::vector<std::vector<int>> classes;
  std::vector<int> representatives;
  /// class_of[g] is the index of the class containing g.
  std::vector<int> class_of;

  int count() const { return static_cast<int>(classes.size()); }
};

/// A finite group on dense element indices 0..order-1 with the identity at 0.
///
/// Built-in families compute products from a closed form; a dense table is
/// cached for small orders. Element ordering per family:
///   cyclic(n)     residue k
///   sign_flip(d)  bit pattern read as a binary number (bit j flips coordinate j)
///   dihedral(n)   rotations x -> x + k first, then reflections x -> -x + k
///   symmetric(d)  lexicographic rank of the one-line notation
///   product       a * |H| + b for (a, b) in G x H
class Group {
 public:
  static GroupPtr cyclic(int n);
  static GroupPtr sign_flip(int d);
  static GroupPtr dihedral(int n);
  static GroupPtr symmetric(int d);
  static GroupPtr product(GroupPtr left, GroupPtr right);
  /// Validates the table (Latin square, identity at 0, associativity).
  static GroupPtr custom(std::vector<std::vector<int>> table);

  int order() const { return order_; }
  Family family() const { return family_; }
  /// Family parameter (n or d); 0 for product and custom.
  int parameter() const { return param_; }
  /// Round-trippable descriptor such as "cyclic:4" or "cyclic:2*dihedral:3".
  const std::string& descriptor() const { return descriptor_; }

  int identity() const { return 0; }
  int mul(int a, int b) const;
  int inv(int a) const { return inverse_[a]; }
  int power(int a, long long k) const;
  int element_order(int a) const { return element_order_[a]; }
  const std::string& label(int a) const { return labels_[a]; }
  const std::vector<int>& generators() const { return generators_; }
  bool is_abelian() const;

  /// Factors of a product group (null otherwise).
  const GroupPtr& left_factor() const { return left_; }
  const GroupPtr& right_factor() const { return right_; }
  /// One-line notation of a symmetric-group element (0-based images).
  const std::vector<int>& permutation(int a) const;

  const ConjugacyPartition& conjugacy() const { return conjugacy_; }
  /// power_class(c, j) is the class of g^j for g in class c.
  int power_class(int cls, long long j) const;

  /// Throws numerical error when an invariant fails.
  void validate() const;

  bool same_as(const Group& other) const;

 private:
  Group() = default;
  void finalize();
  int mul_formula(int a, int b) const;

  Family family_ = Family::custom;
  int param_ = 0;
  int order_ = 0;
  std::string descriptor_;
  std::vector<int> table_;   // row-major order x order, may be empty
  std::vector<int> inverse_;
  std::vector<int> element_order_;
  std::vector<std::string> labels_;
  std::vector<int> generators_;
  std::vector<std::vector<int>> perms_;  // symmetric only
  GroupPtr left_, right_;
  ConjugacyPartition conjugacy_;
};

using ElementSet = std::vector<int>;

/// Conjugacy classes of g, computed by closing each element's orbit under
/// conjugation by the generators.
ConjugacyPartition conjugacy_classes(const Group& g);

/// Smallest subgroup containing s (sorted). Throws usage error on empty s.
ElementSet closure(const Group& g, const ElementSet& s);

/// n i.i.d. uniform element indices. Throws usage error when n < 1.
std::vector<int> sample_uniform(const Group& g, long long n, std::uint64_t seed);

/// Parses "cyclic:4", "signflip:3", "dihedral:5", "symmetric:4" and
/// "*"-separated products of those.
GroupPtr parse_group(const std::string& spec);

/// Text format: `group <family> <params> <order>` followed by the table rows.
void write_group(std::ostream& os, const Group& g);
GroupPtr read_group(std::istream& is);

}  // namespace avgsym
