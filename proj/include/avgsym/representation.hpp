#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "avgsym/group.hpp"
#include "avgsym/linalg.hpp"

namespace avgsym {

/// Character values, one per conjugacy class (class order of the group).
struct CharacterVector {
  std::vector<Complex> values;

  int size() const { return static_cast<int>(values.size()); }
  Complex operator[](int cls) const { return values[cls]; }
};

/// exp(2 pi i num / den) in lowest terms with 0 <= num < den.
struct RootOfUnity {
  int num = 0;
  int den = 1;

  static RootOfUnity make(long long num, long long den);
  Complex value() const;
  friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;
  /// Orders by angle in [0, 2 pi).
  friend bool operator<(const RootOfUnity& a, const RootOfUnity& b) {
    return static_cast<long long>(a.num) * b.den < static_cast<long long>(b.num) * a.den;
  }
};

/// Distinct eigenvalues over all rho(g) and, for each, the largest multiplicity
/// attained by a single rho(g).
struct EigenProfile {
  std::vector<RootOfUnity> lambdas;
  std::vector<long long> max_mult;

  long long total() const;
  long long max_mult_of(RootOfUnity lambda) const;
};

enum class EigenMethod { automatic, numeric, cycle_type, character };

/// Numeric eigensolves are used by `automatic` up to this dimension.
inline constexpr int kNumericEigenMaxDim = 256;
inline constexpr int kRegularMaxOrder = 4096;
inline constexpr long long kSymPowerDefaultCap = 2000;

/// Unitary representation g -> rho(g) of a built-in group.
///
/// Matrices are either stored densely per element or, for permutation
/// representations, as images of basis vectors: rho(g) e_j = e_{image(g, j)}.
class Representation {
 public:
  enum class Storage { dense, permutation };

  /// Takes ownership of one dim x dim matrix per element; rho(identity) must be I.
  static Representation from_matrices(GroupPtr group, std::string name, std::vector<CMatrix> mats);
  /// images is order x dim, row g holding the image of each basis index.
  static Representation from_permutations(GroupPtr group, std::string name, int dim, std::vector<int> images);

  const Group& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  Storage storage() const { return storage_; }

  /// Materialized rho(g).
  CMatrix matrix(int g) const;
  /// Stored matrix; dense storage only.
  const CMatrix& dense(int g) const;
  /// Basis image; permutation storage only.
  int image(int g, int j) const { return images_[static_cast<std::size_t>(g) * dim_ + j]; }

  Complex trace(int g) const;
  /// out += w * rho(g)
  void accumulate(int g, Complex w, CMatrix& out) const;

  /// Per-class traces; throws numerical error if traces differ inside a class.
  CharacterVector character() const;

  /// max ||rho(gh) - rho(g) rho(h)||_F, exhaustive below order 256, sampled pairs above.
  double homomorphism_residual(std::uint64_t seed = 7) const;
  /// max ||rho(g)^H rho(g) - I||_F.
  double unitarity_residual() const;

 private:
  Representation() = default;

  GroupPtr group_;
  std::string name_;
  int dim_ = 0;
  Storage storage_ = Storage::dense;
  std::vector<CMatrix> mats_;
  std::vector<int> images_;
};

Representation rep_trivial(GroupPtr g);
/// Natural action of S_d on coordinates; usage error for other families.
Representation rep_permutation(GroupPtr g);
/// diag((-1)^{bit j}) on R^d; usage error for other families.
Representation rep_sign_action(GroupPtr g);
/// Left translation h -> gh on functions over G; size-limit error above order 4096.
Representation rep_regular(GroupPtr g);
Representation rep_direct_sum(const Representation& a, const Representation& b);
Representation rep_tensor(const Representation& a, const Representation& b);

/// Binomial C(dim + k - 1, k), saturating at INT64_MAX.
long long sym_power_dim(int dim, int k);

/// Action on degree-k monomials in an orthonormal basis (monomial x^a scaled
/// by sqrt(k!/a!)). Size-limit error when the dimension exceeds cap; use
/// sym_power_character for larger cases.
Representation rep_sym_power(const Representation& rho, int k, long long cap = kSymPowerDefaultCap);

/// Character of Sym^k from the base character by the Newton recursion
/// chi_k(g) = (1/k) sum_{j=1..k} chi(g^j) chi_{k-j}(g).
CharacterVector sym_power_character(const CharacterVector& chi, int k, const Group& g);
/// Characters of Sym^0 .. Sym^K.
std::vector<CharacterVector> sym_power_characters(const CharacterVector& chi, int max_k, const Group& g);

/// (1/|G|) sum_g rho(g).
CMatrix invariant_projector(const Representation& rho);
/// Dimension of the invariant subspace from the average character.
int invariant_dimension(const Representation& rho);

EigenProfile eigen_profile(const Representation& rho, EigenMethod method = EigenMethod::automatic);
/// K = min{|G|, sum_lambda M_lambda - 1}.
long long k_bound(const Representation& rho, EigenMethod method = EigenMethod::automatic);
long long k_bound(const EigenProfile& profile, int group_order);

/// Text export: `rep <name> <dim> <order>` then dim rows of `a+bi` per element.
void write_representation(std::ostream& os, const Representation& rho);
Representation read_representation(std::istream& is, GroupPtr group);

std::string format_complex(Complex z);
Complex parse_complex(const std::string& text);

}  // namespace avgsym
