#include <gtest/gtest.h>

#include <random>

#include "aisle/complex.hpp"
#include "aisle/error.hpp"
#include "test_util.hpp"

using namespace aisle;
using aisle::testing::random_kronecker_module;
using aisle::testing::random_null_homotopic;
using aisle::testing::random_vector_complex;

namespace {

const Field Q = Field::rationals();

bool same_complex(const BoundedComplex& x, const BoundedComplex& y) {
  if (x.lo() != y.lo() || x.hi() != y.hi()) return false;
  for (int k = x.lo(); k <= x.hi(); ++k) {
    if (x.dim(k) != y.dim(k) || x.d(k) != y.d(k)) return false;
  }
  return true;
}

/// Kronecker: P(v1)^2 in degree -1 mapping to P(v0) in degree 0 by the arrows.
PerfectComplex kronecker_cone(const AlgebraPtr& a) {
  return PerfectComplex::from_elements(a, -1, {{1, 1}, {0}}, {{{a->basis_vector(2), a->basis_vector(3)}}});
}

}  // namespace

TEST(Shift, ZeroShiftIsIdentity) {
  const AlgebraPtr k = field_algebra(Q);
  std::mt19937_64 rng(1);
  const BoundedComplex c = random_vector_complex(k, -1, 3, rng);
  EXPECT_TRUE(same_complex(shift(c, 0), c));
  EXPECT_TRUE(same_complex(shift(shift(c, 1), -1), c));
}

TEST(Shift, StalkMovesDown) {
  const AlgebraPtr k = field_algebra(Q);
  const BoundedComplex s = shift(BoundedComplex::stalk(regular_module(k), 0), 1);
  EXPECT_EQ(s.lo(), -1);
  EXPECT_EQ(s.hi(), -1);
  EXPECT_EQ(s.dim(-1), 1u);
}

TEST(Shift, NegatesDifferential) {
  const AlgebraPtr k = field_algebra(Q);
  std::mt19937_64 rng(2);
  const BoundedComplex c = random_vector_complex(k, 0, 2, rng);
  EXPECT_EQ(shift(c, 1).d(-1), -c.d(0));
}

TEST(Cone, OfIdentityIsAcyclic) {
  const AlgebraPtr k = field_algebra(Q);
  std::mt19937_64 rng(3);
  const BoundedComplex c = random_vector_complex(k, 0, 3, rng);
  EXPECT_TRUE(is_acyclic(cone(ChainMap::identity(c)).complex));
}

TEST(Cone, OfZeroIsSum) {
  const AlgebraPtr k = field_algebra(Q);
  std::mt19937_64 rng(4);
  const BoundedComplex c = random_vector_complex(k, 0, 2, rng);
  const BoundedComplex d = random_vector_complex(k, -1, 2, rng);
  const BoundedComplex co = cone(ChainMap::zero(c, d)).complex;
  const BoundedComplex sum = direct_sum(shift(c, 1), d);
  for (int n = -3; n <= 3; ++n) EXPECT_EQ(co.dim(n), sum.dim(n));
  EXPECT_EQ(cohomology_dims(co), cohomology_dims(sum));
}

TEST(Cone, KroneckerArrowsGiveSimpleTop) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const PerfectComplex e = kronecker_cone(a);
  EXPECT_EQ(cohomology_dims(e.complex()), (std::map<int, std::size_t>{{0, 1}}));
  const FDModule h0 = cohomology_module(e.complex(), 0);
  EXPECT_TRUE(find_isomorphism(h0, simple(a, 0)).has_value());
}

TEST(Cone, KroneckerAsConeOfChainMap) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const BoundedComplex src = BoundedComplex::stalk(projective_sum(a, {1, 1}), 0);
  const BoundedComplex tgt = BoundedComplex::stalk(projective(a, 0), 0);
  const Matrix f = hstack(projective_map(a, 1, 0, a->basis_vector(2)), projective_map(a, 1, 0, a->basis_vector(3)));
  const ChainMap fm(src, tgt, {{0, f}});
  const Cone c = cone(fm);
  EXPECT_EQ(cohomology_dims(c.complex), (std::map<int, std::size_t>{{0, 1}}));
  EXPECT_TRUE(cone_sequence_exact(fm));
}

TEST(Complex, RejectsNonzeroSquare) {
  const AlgebraPtr k = field_algebra(Q);
  const FDModule m = regular_module(k);
  const Matrix one = Matrix::identity(1, Q);
  EXPECT_THROW(BoundedComplex(k, 0, {m, m, m}, {one, one}), VerificationFailure);
}

TEST(Complex, RejectsNonLinearDifferential) {
  const AlgebraPtr a = kronecker_algebra(Q);
  // The inclusion of the top of P(v0) is not A-linear into P(v0).
  const Matrix bad = Matrix::from_ints({{1}, {0}, {0}}, Q);
  EXPECT_THROW(BoundedComplex(a, 0, {simple(a, 0), projective(a, 0)}, {bad}), VerificationFailure);
}

TEST(ChainMap, RejectsNonCommuting) {
  const AlgebraPtr k = field_algebra(Q);
  const FDModule m = regular_module(k);
  const BoundedComplex c(k, 0, {m, m}, {Matrix::identity(1, Q)});
  EXPECT_THROW(ChainMap(c, c, {{0, Matrix::identity(1, Q)}}), VerificationFailure);
}

TEST(Cohomology, StalkModule) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const BoundedComplex s = BoundedComplex::stalk(projective(a, 0), 0);
  EXPECT_EQ(cohomology_dims(s), (std::map<int, std::size_t>{{0, 3}}));
}

TEST(Cohomology, AcyclicTwoTerm) {
  const AlgebraPtr k = field_algebra(Q);
  const FDModule m = regular_module(k);
  EXPECT_TRUE(is_acyclic(BoundedComplex(k, 0, {m, m}, {Matrix::identity(1, Q)})));
}

TEST(Truncation, SoftTruncationsSplitCohomology) {
  const AlgebraPtr k = field_algebra(Q);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const BoundedComplex c = random_vector_complex(k, -2, 4, rng);
    const auto h = cohomology_dims(c);
    for (int n = -3; n <= 2; ++n) {
      const Truncation le = soft_tau_leq(c, n);
      const Truncation ge = soft_tau_geq(c, n);
      std::map<int, std::size_t> expect_le;
      std::map<int, std::size_t> expect_ge;
      for (const auto& [deg, dim] : h) {
        if (deg <= n) expect_le[deg] = dim;
        if (deg >= n) expect_ge[deg] = dim;
      }
      EXPECT_EQ(cohomology_dims(le.complex), expect_le);
      EXPECT_EQ(cohomology_dims(ge.complex), expect_ge);
      for (int m = -3; m <= n; ++m) {
        const Matrix im = induced_map(le.map, m);
        EXPECT_EQ(rank(im), im.rows());
      }
    }
  }
}

TEST(Cancellation, ConeOfIdentityVanishes) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const BoundedComplex p = BoundedComplex::stalk(projective(a, 0), 0);
  const Reduction r = cancel_contractible(cone(ChainMap::identity(p)).complex);
  EXPECT_TRUE(r.reduced.is_zero());
  EXPECT_EQ(r.cancelled, 1u);
}

TEST(Cancellation, KroneckerConeIsMinimal) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const Reduction r = cancel_contractible(kronecker_cone(a).complex());
  EXPECT_EQ(r.cancelled, 0u);
}

TEST(NullHomotopy, IdentityOfNonAcyclicIsNot) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const PerfectComplex e = kronecker_cone(a);
  EXPECT_FALSE(is_null_homotopic(ChainMap::identity(e.complex())));
}

TEST(NullHomotopy, IdentityOfContractibleIs) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const BoundedComplex p = BoundedComplex::stalk(projective(a, 1), 0);
  const BoundedComplex c = cone(ChainMap::identity(p)).complex;
  EXPECT_TRUE(is_null_homotopic(ChainMap::identity(c)));
}

TEST(Perfect, GroupsAreConnectedComponents) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const PerfectComplex t = direct_sum(
      std::vector<PerfectComplex>{PerfectComplex::stalk(a, {0}), PerfectComplex::from_elements(a, -1, {{1}, {0, 0}},
                                                                                             {{{a->basis_vector(2)},
                                                                                               {a->basis_vector(3)}}})},
      a);
  EXPECT_EQ(t.groups().size(), 2u);
  EXPECT_EQ(t.summand_count(), 4u);
  const ChainMap p = group_projection(t, {1});
  EXPECT_TRUE(compose(p, p) == p);
  const PerfectSummand s = group_summand(t, {0});
  EXPECT_TRUE(compose(s.projection, s.inclusion) == ChainMap::identity(s.complex.complex()));
}

TEST(Perfect, ComponentRoundTrip) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const PerfectComplex e = kronecker_cone(a);
  EXPECT_EQ(e.component(-1, 0, 0), a->basis_vector(2));
  EXPECT_EQ(e.component(-1, 0, 1), a->basis_vector(3));
}

TEST(Perfect, RejectsElementOutsidePeirceSpace) {
  const AlgebraPtr a = kronecker_algebra(Q);
  EXPECT_THROW(PerfectComplex::from_elements(a, -1, {{0}, {1}}, {{{a->basis_vector(2)}}}), InvalidInput);
}

TEST(Perfect, RejectsCrossingGroups) {
  const AlgebraPtr a = kronecker_algebra(Q);
  PerfectComplex::Groups g{{{-1, 0}, {-1, 1}}, {{0, 0}}};
  EXPECT_THROW(PerfectComplex::from_elements(a, -1, {{1, 1}, {0}}, {{{a->basis_vector(2), a->basis_vector(3)}}}, g),
               InvalidInput);
}

TEST(Perfect, ShiftKeepsGroups) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const PerfectComplex e = shift(kronecker_cone(a), 2);
  EXPECT_EQ(e.lo(), -3);
  EXPECT_EQ(e.groups().size(), 1u);
  EXPECT_EQ(e.groups()[0].front().degree, -3);
}

// Long exact sequence of the cone triangle for random chain maps.
TEST(ComplexProperty, ConeSequenceExact) {
  const AlgebraPtr k = field_algebra(Q);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 15; ++trial) {
    const BoundedComplex c = random_vector_complex(k, -1, 3, rng);
    const ChainMap f = ChainMap::identity(c).scaled(Q.from_int(static_cast<long long>(rng() % 3))) +
                       random_null_homotopic(c, rng);
    EXPECT_TRUE(cone_sequence_exact(f));
  }
}

TEST(ComplexProperty, NullHomotopicDetected) {
  const AlgebraPtr k = field_algebra(Q);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 15; ++trial) {
    const BoundedComplex c = random_vector_complex(k, 0, 3, rng);
    EXPECT_TRUE(is_null_homotopic(random_null_homotopic(c, rng)));
    EXPECT_EQ(is_null_homotopic(ChainMap::identity(c)), is_acyclic(c));
  }
}

TEST(ComplexProperty, CancellationPreservesCohomology) {
  const AlgebraPtr k = field_algebra(Q);
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 15; ++trial) {
    const BoundedComplex c = random_vector_complex(k, -1, 4, rng);
    // Blocks of size 1 so that every nonzero entry can be cancelled.
    std::vector<FDModule> terms;
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<Matrix> diffs;
    for (int n = c.lo(); n <= c.hi(); ++n) {
      terms.push_back(c.term(n));
      blocks.emplace_back(c.dim(n), 1);
      if (n < c.hi()) diffs.push_back(c.d(n));
    }
    const BoundedComplex fine(k, c.lo(), terms, diffs, blocks);
    const Reduction r = cancel_contractible(fine);
    EXPECT_EQ(cohomology_dims(r.reduced), cohomology_dims(c));
    EXPECT_TRUE(is_quasi_iso(r.to_reduced));
    EXPECT_TRUE(is_quasi_iso(r.from_reduced));
    // Fully cancelled: minimal complexes of vector spaces have zero differential.
    for (int n = r.reduced.lo(); n < r.reduced.hi(); ++n) EXPECT_TRUE(r.reduced.d(n).is_zero());
  }
}

TEST(ComplexProperty, ModuleComplexCohomologyModule) {
  const AlgebraPtr a = kronecker_algebra(Q);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const FDModule m = random_kronecker_module(a, rng);
    const BoundedComplex s = BoundedComplex::stalk(m, 1);
    const FDModule h = cohomology_module(s, 1);
    EXPECT_EQ(h.dim(), m.dim());
    EXPECT_EQ(is_acyclic(s), m.dim() == 0);
  }
}
