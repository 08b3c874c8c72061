#include <gtest/gtest.h>

#include <random>

#include "aisle/error.hpp"
#include "aisle/module.hpp"
#include "test_util.hpp"

using namespace aisle;
using aisle::testing::random_kronecker_module;

namespace {

const Field Q = Field::rationals();

}  // namespace

TEST(HomModule, FieldOverItself) {
  const AlgebraPtr k = field_algebra(Q);
  EXPECT_EQ(hom_dim(regular_module(k), regular_module(k)), 1u);
}

TEST(HomModule, KroneckerSimplesAreOrthogonal) {
  const AlgebraPtr a = kronecker_algebra(Q);
  EXPECT_EQ(hom_dim(simple(a, 0), simple(a, 1)), 0u);
  EXPECT_EQ(hom_dim(simple(a, 0), simple(a, 0)), 1u);
}

TEST(HomModule, KroneckerProjectives) {
  const AlgebraPtr a = kronecker_algebra(Q);
  EXPECT_EQ(hom_dim(projective(a, 1), projective(a, 0)), 2u);
  EXPECT_EQ(hom_dim(projective(a, 0), projective(a, 1)), 0u);
  EXPECT_EQ(hom_dim(projective(a, 0), projective(a, 0)), 1u);
  // Each basis map is P(v1) -> P(v0), x ↦ x·r for an arrow r.
  for (const Matrix& h : hom_module(projective(a, 1), projective(a, 0))) {
    EXPECT_TRUE(is_module_map(projective(a, 1), projective(a, 0), h));
  }
}

TEST(Projective, KroneckerDimensions) {
  const AlgebraPtr a = kronecker_algebra(Q);
  EXPECT_EQ(projective(a, 0).dim(), 3u);
  EXPECT_EQ(projective(a, 1).dim(), 1u);
  // Oracle: paths starting at the vertex.
  for (std::size_t v = 0; v < 2; ++v) EXPECT_EQ(projective(a, v).dim(), path_count(*a, v, 0) + path_count(*a, v, 1));
}

TEST(Projective, FieldIsItself) {
  const AlgebraPtr k = field_algebra(Q);
  EXPECT_EQ(projective(k, 0).dim(), 1u);
}

TEST(Projective, MapElementRoundTrip) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const Matrix r = a->basis_vector(2);  // arrow a
  const Matrix phi = projective_map(a, 1, 0, r);
  EXPECT_TRUE(is_module_map(projective(a, 1), projective(a, 0), phi));
  EXPECT_EQ(projective_map_element(a, 1, 0, phi), r);
}

TEST(Module, RejectsBrokenAction) {
  const AlgebraPtr a = dual_numbers(Q);
  // x acting by 1 violates x·x = 0.
  EXPECT_THROW(FDModule(a, 1, {Matrix::identity(1, Q), Matrix::identity(1, Q)}), VerificationFailure);
  EXPECT_THROW(FDModule(a, 1, {Matrix::identity(1, Q)}), InvalidInput);
}

TEST(Module, RepresentationMatchesProjective) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const FDModule m = module_from_representation(a, {1, 2}, {Matrix::from_ints({{1}, {0}}, Q), Matrix::from_ints({{0}, {1}}, Q)});
  const auto iso = find_isomorphism(m, projective(a, 0));
  ASSERT_TRUE(iso.has_value());
  EXPECT_TRUE(is_module_map(m, projective(a, 0), *iso));
  EXPECT_EQ(rank(*iso), 3u);
}

TEST(Module, TopAndRadical) {
  const AlgebraPtr a = kronecker_algebra(Q);
  EXPECT_EQ(top(projective(a, 0)).module.dim(), 1u);
  EXPECT_EQ(radical_submodule(projective(a, 0)).cols(), 2u);
  EXPECT_FALSE(find_isomorphism(top(projective(a, 0)).module, simple(a, 1)).has_value());
}

TEST(Presentation, ProjectiveHasNoRelations) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const Presentation p = minimal_presentation(projective(a, 0));
  EXPECT_EQ(p.p0.vertices, (std::vector<std::size_t>{0}));
  EXPECT_TRUE(p.p1.vertices.empty());
}

TEST(Presentation, DualNumbersSimple) {
  const AlgebraPtr a = dual_numbers(Q);
  const Presentation p = minimal_presentation(simple(a, 0));
  EXPECT_EQ(p.p0.module.dim(), 2u);
  EXPECT_EQ(p.p1.module.dim(), 2u);
}

TEST(Presentation, KroneckerSourceSimple) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const Presentation p = minimal_presentation(simple(a, 0));
  EXPECT_EQ(p.p0.vertices, (std::vector<std::size_t>{0}));
  EXPECT_EQ(p.p1.vertices, (std::vector<std::size_t>{1, 1}));
  EXPECT_TRUE((p.p0.map * p.d).is_zero());
}

TEST(Module, CyclicGenerator) {
  const AlgebraPtr a = kronecker_algebra(Q);
  EXPECT_TRUE(find_cyclic_generator(projective(a, 0)).has_value());
  EXPECT_FALSE(find_cyclic_generator(direct_sum(simple(a, 0), simple(a, 0))).has_value());
}

TEST(Module, RejectsMixedAlgebras) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const AlgebraPtr b = kronecker_algebra(Q);
  EXPECT_THROW(hom_module(projective(a, 0), projective(b, 0)), Mismatch);
}

// Yoneda: Hom(P(i), M) ≅ e_i M and Hom(A, M) ≅ M.
TEST(ModuleProperty, YonedaDimensions) {
  const AlgebraPtr a = kronecker_algebra(Q);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const FDModule m = random_kronecker_module(a, rng);
    EXPECT_EQ(hom_dim(regular_module(a), m), m.dim());
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(hom_dim(projective(a, i), m), m.peirce(i).dim());
  }
}

TEST(ModuleProperty, HomBasisIsLinearAndIndependent) {
  const AlgebraPtr a = kronecker_algebra(Q);
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 15; ++trial) {
    const FDModule m = random_kronecker_module(a, rng);
    const FDModule n = random_kronecker_module(a, rng);
    const auto basis = hom_module(m, n);
    std::vector<Matrix> cols;
    for (const Matrix& h : basis) {
      EXPECT_TRUE(is_module_map(m, n, h));
      Matrix v(h.rows() * h.cols(), 1, Q);
      for (std::size_t r = 0; r < h.rows(); ++r) {
        for (std::size_t c = 0; c < h.cols(); ++c) v(r * h.cols() + c, 0) = h(r, c);
      }
      cols.push_back(v);
    }
    if (!cols.empty()) EXPECT_EQ(rank(hstack(cols, m.dim() * n.dim(), Q)), basis.size());
  }
}

TEST(ModuleProperty, PresentationIsExact) {
  const AlgebraPtr a = kronecker_algebra(Q);
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const FDModule m = random_kronecker_module(a, rng);
    const Presentation p = minimal_presentation(m);
    EXPECT_EQ(rank(p.p0.map), m.dim());
    EXPECT_TRUE((p.p0.map * p.d).is_zero());
    // im d = ker of the cover map.
    EXPECT_EQ(rank(p.d), p.p0.module.dim() - m.dim());
    // Minimality: the cover has as many summands as the top has dimension.
    EXPECT_EQ(p.p0.vertices.size(), top(m).module.dim());
  }
}

TEST(ModuleProperty, TopPlusRadical) {
  const AlgebraPtr a = beilinson_algebra(2, Q);
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t v = rng() % 3;
    const FDModule p = projective(a, v);
    EXPECT_EQ(top(p).module.dim() + radical_submodule(p).cols(), p.dim());
    EXPECT_EQ(top(p).module.dim(), 1u);
  }
}

TEST(ModuleProperty, DirectSumHomAdditivity) {
  const AlgebraPtr a = kronecker_algebra(Q);
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const FDModule x = random_kronecker_module(a, rng);
    const FDModule y = random_kronecker_module(a, rng);
    const FDModule z = random_kronecker_module(a, rng);
    EXPECT_EQ(hom_dim(direct_sum(x, y), z), hom_dim(x, z) + hom_dim(y, z));
  }
}
