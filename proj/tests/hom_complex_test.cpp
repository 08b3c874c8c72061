#include <gtest/gtest.h>

#include "aisle/error.hpp"
#include "aisle/hom_complex.hpp"
#include "aisle/sampling.hpp"

using namespace aisle;

namespace {

const Field Q = Field::rationals();

std::vector<AlgebraPtr> fixture_algebras() { return {field_algebra(Q), dual_numbers(Q), kronecker_algebra(Q)}; }

std::map<int, std::size_t> hom_cohomology(const HomComplex& h) {
  std::map<int, std::size_t> out;
  for (int n = h.lo(); n <= h.hi(); ++n) {
    const std::size_t d = h.cohomology(n).dim;
    if (d > 0) out[n] = d;
  }
  return out;
}

}  // namespace

TEST(HomComplex, RegularIntoRegular) {
  for (const AlgebraPtr& a : fixture_algebras()) {
    const PerfectComplex e = PerfectComplex::regular(a);
    const HomComplex h(e, e.complex());
    EXPECT_EQ(hom_cohomology(h), (std::map<int, std::size_t>{{0, a->dim()}}));
  }
}

TEST(HomComplex, KroneckerProjectives) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const HomComplex h(PerfectComplex::stalk(a, {1}), BoundedComplex::stalk(projective(a, 0), 0));
  EXPECT_EQ(hom_cohomology(h), (std::map<int, std::size_t>{{0, 2}}));
  // Oracle: the intertwiner solver.
  EXPECT_EQ(h.cohomology(0).dim, hom_dim(projective(a, 1), projective(a, 0)));
}

TEST(HomComplex, MismatchedAlgebras) {
  EXPECT_THROW(HomComplex(PerfectComplex::regular(kronecker_algebra(Q)),
                          BoundedComplex::stalk(regular_module(kronecker_algebra(Q)))),
               Mismatch);
}

TEST(HomComplex, CyclesAreChainMaps) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const PerfectComplex e =
      PerfectComplex::from_elements(a, -1, {{1, 1}, {0}}, {{{a->basis_vector(2), a->basis_vector(3)}}});
  Sampler s(3);
  for (int trial = 0; trial < 10; ++trial) {
    const BoundedComplex m = s.complex(a, -1, 3);
    const HomComplex h(e, m);
    for (int n = h.lo(); n <= h.hi(); ++n) {
      const Cohomology c = h.cohomology(n);
      for (std::size_t j = 0; j < c.cycles.cols(); ++j) {
        const ChainMap f = h.chain_map(n, c.cycles.col(j));
        // Re-check through the validating constructor.
        EXPECT_NO_THROW(ChainMap(f.source(), f.target(), f.components()));
        EXPECT_EQ(h.encode(f, -n), c.cycles.col(j));
      }
    }
  }
}

TEST(HomClassBasis, Window) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const PerfectComplex e = PerfectComplex::regular(a);
  EXPECT_EQ(homotopy_class_basis(e, e.complex(), 0).size(), 4u);
  EXPECT_TRUE(homotopy_class_basis(e, e.complex(), 3).empty());
}

TEST(HomClassBasis, ClassesAreNotNullHomotopic) {
  const AlgebraPtr a = dual_numbers(Q);
  Sampler s(4);
  for (int trial = 0; trial < 10; ++trial) {
    const BoundedComplex m = s.complex(a, -1, 3);
    for (int k = -2; k <= 2; ++k) {
      for (const ChainMap& f : homotopy_class_basis(PerfectComplex::regular(a), m, k)) {
        EXPECT_FALSE(is_null_homotopic(f));
      }
    }
  }
}

// H^n(Hom(A, M)) ≅ H^n(M) and the class count equals dim H^{-k}(M).
TEST(HomComplexProperty, RegularComputesCohomology) {
  for (const AlgebraPtr& a : fixture_algebras()) {
    Sampler s(5);
    for (int trial = 0; trial < 15; ++trial) {
      const BoundedComplex m = s.complex(a, -2, 1 + s.below(4));
      const PerfectComplex e = PerfectComplex::regular(a);
      EXPECT_EQ(hom_cohomology(HomComplex(e, m)), cohomology_dims(m));
      for (int k = -3; k <= 3; ++k) {
        const auto h = cohomology_dims(m);
        const std::size_t expect = h.count(-k) ? h.at(-k) : 0;
        EXPECT_EQ(homotopy_class_basis(e, m, k).size(), expect);
      }
    }
  }
}

TEST(HomComplexProperty, ShiftMovesDegrees) {
  const AlgebraPtr a = kronecker_algebra(Q);
  Sampler s(6);
  for (int trial = 0; trial < 10; ++trial) {
    const BoundedComplex m = s.complex(a, 0, 2);
    const PerfectComplex e = PerfectComplex::stalk(a, {s.below(2)});
    const auto base = derived_hom_dims(e, m);
    std::map<int, std::size_t> shifted;
    // Hom(E[k], M[-2]) = Hom(E[k + 2], M).
    for (const auto& [k, d] : base) shifted[k - 2] = d;
    EXPECT_EQ(derived_hom_dims(e, shift(m, -2)), shifted);
  }
}

TEST(Resolution, ProjectiveIsItsOwn) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const ModuleResolution r = projective_resolution(projective(a, 0), 4);
  EXPECT_TRUE(r.terminated);
  EXPECT_EQ(r.length, 0u);
  EXPECT_EQ(r.complex.vertices(0), (std::vector<std::size_t>{0}));
}

TEST(Resolution, KroneckerSourceSimple) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const ModuleResolution r = projective_resolution(simple(a, 0), 4);
  EXPECT_TRUE(r.terminated);
  EXPECT_EQ(r.length, 1u);
  EXPECT_EQ(r.complex.vertices(-1), (std::vector<std::size_t>{1, 1}));
}

TEST(Resolution, DualNumbersIsPeriodic) {
  const AlgebraPtr a = dual_numbers(Q);
  const ModuleResolution r = projective_resolution(simple(a, 0), 5);
  EXPECT_FALSE(r.terminated);
  for (int k = -5; k <= 0; ++k) EXPECT_EQ(r.complex.complex().dim(k), 2u);
}

TEST(ResolutionProperty, ExactAndMinimal) {
  for (const AlgebraPtr& a : {kronecker_algebra(Q), beilinson_algebra(2, Q)}) {
    Sampler s(7);
    for (int trial = 0; trial < 15; ++trial) {
      const FDModule m = s.module(a);
      const ModuleResolution r = projective_resolution(m, 8);
      ASSERT_TRUE(r.terminated);
      const BoundedComplex& c = r.complex.complex();
      // Augmented complex is exact: H^0 ≅ M, nothing else.
      const auto h = cohomology_dims(c);
      if (m.dim() > 0) {
        EXPECT_EQ(h, (std::map<int, std::size_t>{{0, m.dim()}}));
      }
      // Images of the differentials lie in the radical.
      for (int k = c.lo(); k < c.hi(); ++k) {
        const Subspace rad(radical_submodule(c.term(k + 1)));
        if (!c.d(k).is_zero()) EXPECT_TRUE(rad.contains(c.d(k)));
      }
    }
  }
}

TEST(ResolveComplex, QuasiIsomorphism) {
  for (const AlgebraPtr& a : {kronecker_algebra(Q), beilinson_algebra(2, Q)}) {
    Sampler s(8);
    for (int trial = 0; trial < 10; ++trial) {
      const BoundedComplex m = s.complex(a, -1, 1 + s.below(3));
      const ComplexResolution r = resolve_complex(m);
      EXPECT_TRUE(is_quasi_iso(r.map));
      EXPECT_EQ(cohomology_dims(r.complex.complex()), cohomology_dims(m));
    }
  }
}

TEST(ResolveComplex, NonTerminationIsReported) {
  const AlgebraPtr a = dual_numbers(Q);
  EXPECT_THROW(resolve_complex(BoundedComplex::stalk(simple(a, 0), 0), 4), NonTermination);
}
