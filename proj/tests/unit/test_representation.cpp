#include <gtest/gtest.h>

#include <sstream>

#include "avgsym/error.hpp"
#include "avgsym/representation.hpp"

using namespace avgsym;

namespace {

CharacterVector chi_of(const Representation& r) { return r.character(); }

/// Class index of the representative with the given cycle type in S_d (by fixed points count here).
int class_with_trace(const Representation& perm, double trace) {
  const auto chi = perm.character();
  for (int c = 0; c < chi.size(); ++c)
    if (std::abs(chi[c].real() - trace) < 1e-12) return c;
  return -1;
}

}  // namespace

TEST(Representation, PermutationS3) {
  auto g = Group::symmetric(3);
  auto rho = rep_permutation(g);
  EXPECT_EQ(rho.dim(), 3);
  EXPECT_TRUE(rho.matrix(0).isApprox(CMatrix::Identity(3, 3)));
  const auto chi = rho.character();
  std::vector<double> values;
  for (int c = 0; c < chi.size(); ++c) values.push_back(chi[c].real());
  std::sort(values.begin(), values.end());
  EXPECT_EQ(values, (std::vector<double>{0.0, 1.0, 3.0}));
  EXPECT_LT(rep_permutation(Group::symmetric(4)).unitarity_residual(), 1e-12);
  EXPECT_THROW(rep_permutation(Group::cyclic(3)), Error);
}

TEST(Representation, SignAction) {
  auto g1 = Group::sign_flip(1);
  EXPECT_NEAR(rep_sign_action(g1).matrix(1)(0, 0).real(), -1.0, 0.0);
  auto g3 = Group::sign_flip(3);
  const auto m = rep_sign_action(g3).matrix(0b101);
  CMatrix expect = CMatrix::Zero(3, 3);
  expect.diagonal() << -1.0, 1.0, -1.0;
  EXPECT_TRUE(m.isApprox(expect));
  for (int a = 0; a < g3->order(); ++a) {
    const auto x = rep_sign_action(g3).matrix(a);
    EXPECT_TRUE((x * x).isApprox(CMatrix::Identity(3, 3)));
  }
}

TEST(Representation, Regular) {
  for (auto g : {Group::cyclic(5), Group::dihedral(4), Group::symmetric(3)}) {
    auto rho = rep_regular(g);
    const auto chi = rho.character();
    EXPECT_EQ(chi[g->conjugacy().class_of[0]], Complex(g->order(), 0.0));
    for (int c = 0; c < chi.size(); ++c)
      if (c != g->conjugacy().class_of[0]) EXPECT_EQ(chi[c], Complex(0.0, 0.0));
    EXPECT_EQ(invariant_dimension(rho), 1);
    EXPECT_LT(rho.homomorphism_residual(), 1e-12);
  }
  const auto c2 = rep_regular(Group::cyclic(2)).matrix(1);
  EXPECT_TRUE(c2.isApprox((CMatrix(2, 2) << 0, 1, 1, 0).finished()));
}

TEST(Representation, SumAndTensor) {
  auto g = Group::symmetric(3);
  auto p = rep_permutation(g), r = rep_regular(g);
  auto s = rep_direct_sum(p, r), t = rep_tensor(p, r);
  EXPECT_EQ(s.dim(), 9);
  EXPECT_EQ(t.dim(), 18);
  EXPECT_EQ(rep_tensor(p, rep_direct_sum(rep_trivial(g), p)).dim(), 12);
  const auto cp = chi_of(p), cr = chi_of(r), cs = chi_of(s), ct = chi_of(t);
  for (int c = 0; c < cp.size(); ++c) {
    EXPECT_NEAR(std::abs(cs[c] - (cp[c] + cr[c])), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(ct[c] - cp[c] * cr[c]), 0.0, 1e-12);
  }
  EXPECT_LT(s.homomorphism_residual(), 1e-9);
  EXPECT_LT(t.unitarity_residual(), 1e-9);
  EXPECT_THROW(rep_direct_sum(p, rep_regular(Group::cyclic(6))), Error);
}

TEST(Representation, SymPowerExamples) {
  auto g = Group::symmetric(3);
  auto p = rep_permutation(g);
  EXPECT_EQ(rep_sym_power(p, 0).dim(), 1);
  EXPECT_NEAR(rep_sym_power(p, 0).trace(3).real(), 1.0, 1e-15);
  EXPECT_EQ(sym_power_dim(3, 2), 6);
  // Sym^2 of the permutation rep: traces (6, 2, 0) on (identity, transposition, 3-cycle).
  const auto chi2 = rep_sym_power(p, 2).character();
  EXPECT_NEAR(chi2[class_with_trace(p, 3.0)].real(), 6.0, 1e-12);
  EXPECT_NEAR(chi2[class_with_trace(p, 1.0)].real(), 2.0, 1e-12);
  EXPECT_NEAR(chi2[class_with_trace(p, 0.0)].real(), 0.0, 1e-12);
  auto z2 = Group::sign_flip(1);
  EXPECT_NEAR(rep_sym_power(rep_sign_action(z2), 2).matrix(1)(0, 0).real(), 1.0, 1e-15);
}

TEST(Representation, SymPowerMatchesCharacterRecursion) {
  const std::vector<std::pair<Representation, int>> cases{
      {rep_permutation(Group::symmetric(4)), 4}, {rep_sign_action(Group::sign_flip(3)), 3},
      {rep_regular(Group::cyclic(3)), 3}, {rep_regular(Group::dihedral(3)), 2}};
  for (const auto& [rho, kmax] : cases) {
    const auto chars = sym_power_characters(rho.character(), kmax, rho.group());
    for (int k = 0; k <= kmax; ++k) {
      const auto explicit_rep = rep_sym_power(rho, k);
      EXPECT_LT(explicit_rep.unitarity_residual(), 1e-9);
      EXPECT_LT(explicit_rep.homomorphism_residual(), 1e-9);
      const auto chi = explicit_rep.character();
      for (int c = 0; c < chi.size(); ++c) EXPECT_NEAR(std::abs(chi[c] - chars[k][c]), 0.0, 1e-8);
    }
  }
}

TEST(Representation, SymPowerCap) {
  auto rho = rep_regular(Group::cyclic(20));
  try {
    rep_sym_power(rho, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::size_limit);
  }
}

TEST(Representation, InvariantProjector) {
  auto g = Group::symmetric(3);
  EXPECT_TRUE(invariant_projector(rep_trivial(g)).isApprox(CMatrix::Ones(1, 1)));
  EXPECT_NEAR(std::abs(invariant_projector(rep_sign_action(Group::sign_flip(1)))(0, 0)), 0.0, 1e-15);
  const auto p = invariant_projector(rep_permutation(g));
  EXPECT_TRUE(p.isApprox(CMatrix::Constant(3, 3, 1.0 / 3.0), 1e-12));
  EXPECT_EQ(invariant_dimension(rep_permutation(g)), 1);
  EXPECT_EQ(invariant_dimension(rep_direct_sum(rep_trivial(g), rep_trivial(g))), 2);
}

TEST(Representation, ProjectorProperties) {
  for (auto rho : {rep_permutation(Group::symmetric(4)), rep_regular(Group::dihedral(5)),
                   rep_sign_action(Group::sign_flip(3)), rep_sym_power(rep_permutation(Group::symmetric(3)), 2)}) {
    const auto p = invariant_projector(rho);
    EXPECT_LT((p * p - p).norm(), 1e-9);
    EXPECT_LT((p.adjoint() - p).norm(), 1e-9);
    EXPECT_NEAR(p.trace().real(), invariant_dimension(rho), 1e-6);
    for (int g = 0; g < rho.group().order(); ++g) {
      EXPECT_LT((rho.matrix(g) * p - p).norm(), 1e-9);
      EXPECT_LT((p * rho.matrix(g) - p).norm(), 1e-9);
    }
  }
}

TEST(Representation, EigenProfileExamples) {
  const auto sign = eigen_profile(rep_sign_action(Group::sign_flip(1)));
  EXPECT_EQ(sign.max_mult_of(RootOfUnity::make(0, 1)), 1);
  EXPECT_EQ(sign.max_mult_of(RootOfUnity::make(1, 2)), 1);
  EXPECT_EQ(sign.lambdas.size(), 2u);
  const auto reg = eigen_profile(rep_regular(Group::cyclic(2)), EigenMethod::numeric);
  EXPECT_EQ(reg.max_mult_of(RootOfUnity::make(0, 1)), 2);
  EXPECT_EQ(reg.max_mult_of(RootOfUnity::make(1, 2)), 1);
  // A full d-cycle in S_d has every d-th root of unity as an eigenvalue.
  const auto s5 = eigen_profile(rep_permutation(Group::symmetric(5)), EigenMethod::numeric);
  for (int p = 0; p < 5; ++p) EXPECT_GE(s5.max_mult_of(RootOfUnity::make(p, 5)), 1);
}

TEST(Representation, EigenRoutesAgree) {
  for (auto rho : {rep_permutation(Group::symmetric(4)), rep_regular(Group::dihedral(4)),
                   rep_regular(Group::cyclic(6)), rep_tensor(rep_permutation(Group::symmetric(3)), rep_regular(Group::symmetric(3)))}) {
    const auto num = eigen_profile(rho, EigenMethod::numeric);
    const auto chr = eigen_profile(rho, EigenMethod::character);
    EXPECT_EQ(num.lambdas, chr.lambdas) << rho.name();
    EXPECT_EQ(num.max_mult, chr.max_mult) << rho.name();
  }
  const auto reg = rep_regular(Group::symmetric(4));
  const auto cyc = eigen_profile(reg, EigenMethod::cycle_type);
  const auto chr = eigen_profile(reg, EigenMethod::character);
  EXPECT_EQ(cyc.lambdas, chr.lambdas);
  EXPECT_EQ(cyc.max_mult, chr.max_mult);
}

TEST(Representation, KBound) {
  for (int d = 2; d <= 5; ++d) EXPECT_EQ(k_bound(rep_permutation(Group::symmetric(d))), d * (d + 1) / 2 - 1) << d;
  EXPECT_EQ(k_bound(rep_sign_action(Group::sign_flip(1))), 1);
}

TEST(Representation, KBoundMonotoneUnderDirectSum) {
  auto g = Group::symmetric(3);
  auto p = rep_permutation(g);
  EXPECT_GE(k_bound(rep_direct_sum(p, rep_regular(g))), k_bound(p));
  EXPECT_GE(k_bound(rep_direct_sum(p, p)), k_bound(p));
}

TEST(Representation, TextRoundTrip) {
  auto g = Group::dihedral(3);
  auto rho = rep_tensor(rep_regular(g), rep_trivial(g));
  std::stringstream ss;
  write_representation(ss, rho);
  auto back = read_representation(ss, g);
  EXPECT_EQ(back.dim(), rho.dim());
  for (int a = 0; a < g->order(); ++a) EXPECT_EQ(back.matrix(a), rho.matrix(a));
}

TEST(Representation, ComplexFormat) {
  for (Complex z : {Complex(1.5, -2.25), Complex(-1e-300, 3e10), Complex(0.1, 0.0), Complex(1.0 / 3.0, -0.0)}) {
    EXPECT_EQ(parse_complex(format_complex(z)), z);
  }
  EXPECT_EQ(format_complex(Complex(1.0, -2.0)), "1-2i");
  EXPECT_THROW(parse_complex("12"), Error);
}
