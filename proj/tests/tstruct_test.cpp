#include <gtest/gtest.h>

#include <climits>

#include "aisle/fixtures.hpp"
#include "aisle/hom_complex.hpp"
#include "aisle/sampling.hpp"
#include "aisle/tstruct.hpp"

using namespace aisle;

namespace {

const Field Q = Field::rationals();

std::vector<AlgebraPtr> fixture_algebras() { return {field_algebra(Q), dual_numbers(Q), kronecker_algebra(Q)}; }

std::map<int, std::size_t> dims_in(const BoundedComplex& c, int lo, int hi) {
  std::map<int, std::size_t> out;
  for (const auto& [k, d] : cohomology_dims(c)) {
    if (k >= lo && k <= hi) out[k] = d;
  }
  return out;
}

std::map<int, std::size_t> add(std::map<int, std::size_t> x, const std::map<int, std::size_t>& y) {
  for (const auto& [k, d] : y) x[k] += d;
  return x;
}

// Hom_D(X[k], B) vanishes for every k >= 0.
bool right_orthogonal(const BoundedComplex& x, const BoundedComplex& b) {
  const auto p = as_perfect(x);
  EXPECT_TRUE(p.has_value());
  for (const auto& [k, d] : derived_hom_dims(*p, b)) {
    if (k >= 0 && d > 0) return false;
  }
  return true;
}

struct Tilt {
  AlgebraPtr a = kronecker_algebra(Q);
  PerfectComplex t = kronecker_tilt(a);
  ThickCertificate cert = kronecker_tilt_certificate(t);
  TruncationOptions opts() const { return {64, 512, cert}; }
};

// Generators used by the axiom checks, each with the options it needs.
struct Generator {
  PerfectComplex e;
  TruncationOptions opts;
};

std::vector<Generator> axiom_generators() {
  const Tilt tilt;
  std::vector<Generator> out;
  for (const AlgebraPtr& a : fixture_algebras()) {
    out.push_back({PerfectComplex::regular(a), {}});
    out.push_back({PerfectComplex::regular(a, 1), {}});
  }
  out.push_back({tilt.t, tilt.opts()});
  return out;
}

FDModule m23(const AlgebraPtr& a) {
  const Matrix pa = projective_map(a, 1, 0, a->basis_vector(2));
  const Matrix pb = projective_map(a, 1, 0, a->basis_vector(3));
  Matrix image(pa.rows() * 2, 1, Q);
  image.set_block(0, 0, pa);
  image.set_block(pa.rows(), 0, pb);
  return quotient(projective_sum(a, {0, 0}), image).module;
}

}  // namespace

TEST(Certificate, KroneckerTiltGenerates) {
  const Tilt tilt;
  EXPECT_TRUE(verify_generation(tilt.t, tilt.cert));
  EXPECT_EQ(perp_bound(tilt.cert), 0);
  const auto objects = replay(tilt.cert);
  // Step 4 is the cone that recovers P(v1).
  EXPECT_EQ(cohomology_dims(objects[4]), (std::map<int, std::size_t>{{0, 1}}));
  for (const BoundedComplex& x : objects) EXPECT_TRUE(is_compact_presentation(x));
}

TEST(Certificate, RegularAndShift) {
  for (const AlgebraPtr& a : fixture_algebras()) {
    const PerfectComplex r = PerfectComplex::regular(a);
    const auto std_cert = standard_generation_certificate(r);
    ASSERT_TRUE(std_cert.has_value());
    EXPECT_TRUE(verify_generation(r, *std_cert));
    EXPECT_EQ(perp_bound(*std_cert), 1);
    const PerfectComplex r5 = shift(r, 5);
    const ThickCertificate one{r5, {ThickStep::take(-5)}};
    EXPECT_TRUE(verify_generation(r5, one));
    EXPECT_EQ(perp_bound(shift_generator(*std_cert, 5)), perp_bound(one));
  }
}

TEST(Certificate, NonGeneratorIsFalse) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const PerfectComplex p0 = PerfectComplex::stalk(a, {0});
  EXPECT_FALSE(verify_generation(p0, {p0, {ThickStep::take(0)}}));
}

TEST(Certificate, MalformedStepsReported) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const PerfectComplex r = PerfectComplex::regular(a);
  try {
    verify_generation(r, {r, {ThickStep::take(0), ThickStep::sum({0, 3})}});
    FAIL() << "dangling reference accepted";
  } catch (const CertificateError& e) {
    EXPECT_EQ(e.step(), 1u);
  }
  const Matrix twice = Matrix::identity(4, Q) * Q.from_int(2);
  try {
    verify_generation(r, {r, {ThickStep::take(0), ThickStep::summand(0, {{0, twice}})}});
    FAIL() << "non-idempotent accepted";
  } catch (const CertificateError& e) {
    EXPECT_EQ(e.step(), 1u);
  }
  EXPECT_THROW(verify_generation(r, {shift(r, 1), {ThickStep::take(0)}}), InvalidInput);
}

TEST(Certificate, HomotopyIdempotentNeedsStrictVersion) {
  // On cone(id_A) every endomorphism is null-homotopic, so the identity plus
  // a non-idempotent matrix is idempotent up to homotopy only.
  const AlgebraPtr k = field_algebra(Q);
  const PerfectComplex c = perfect_cone(PerfectComplex::regular(k), PerfectComplex::regular(k),
                                        ChainMap::identity(PerfectComplex::regular(k).complex()));
  const Matrix two = Matrix::identity(1, Q) * Q.from_int(2);
  try {
    replay(ThickCertificate{c, {ThickStep::take(0), ThickStep::summand(0, {{-1, two}, {0, two}})}});
    FAIL() << "homotopy idempotent accepted";
  } catch (const CertificateError& e) {
    EXPECT_NE(std::string(e.what()).find("strict"), std::string::npos);
  }
}

TEST(Truncate, FieldInAisle) {
  const AlgebraPtr k = field_algebra(Q);
  const BoundedComplex m = BoundedComplex::stalk(regular_module(k), 0);
  const TruncationResult r = truncate(PerfectComplex::regular(k), m);
  EXPECT_EQ(r.iterations, 1u);
  EXPECT_TRUE(r.coaisle.is_zero());
  EXPECT_TRUE(is_quasi_iso(r.to_input));
}

TEST(Truncate, RegularMatchesSoftTruncation) {
  for (const AlgebraPtr& a : fixture_algebras()) {
    Sampler s(21);
    for (int trial = 0; trial < 20; ++trial) {
      const BoundedComplex m = s.complex(a, -2, 2 + s.below(3));
      const TruncationResult r = truncate(PerfectComplex::regular(a), m);
      const bool low = !dims_in(m, INT_MIN, 0).empty();
      EXPECT_EQ(r.iterations, low ? 1u : 0u);
      EXPECT_EQ(cohomology_dims(r.coaisle), dims_in(m, 1, INT_MAX));
      EXPECT_EQ(cohomology_dims(r.aisle), dims_in(m, INT_MIN, 0));
      EXPECT_EQ(cohomology_dims(r.coaisle), cohomology_dims(soft_tau_geq(m, 1).complex));
    }
  }
}

TEST(Truncate, ShiftedRegularMatchesSoftTruncation) {
  for (const AlgebraPtr& a : fixture_algebras()) {
    Sampler s(22);
    for (int trial = 0; trial < 10; ++trial) {
      const BoundedComplex m = s.complex(a, -1, 2 + s.below(3));
      const TruncationResult r = truncate(PerfectComplex::regular(a, 1), m);
      EXPECT_EQ(cohomology_dims(r.coaisle), dims_in(m, 2, INT_MAX));
    }
  }
}

TEST(Truncate, CertificateReplaysFiniteStage) {
  const AlgebraPtr a = kronecker_algebra(Q);
  Sampler s(23);
  for (int trial = 0; trial < 10; ++trial) {
    const BoundedComplex m = s.complex(a, -1, 3);
    const TruncationResult r = truncate(PerfectComplex::regular(a), m);
    const auto objects = replay(r.certificate);
    if (!r.tail_bound) {
      // Nothing was cut off: the certified stage already models N.
      EXPECT_EQ(cohomology_dims(objects.back()), cohomology_dims(r.aisle));
    }
    for (const BoundedComplex& x : objects) {
      if (!x.is_zero()) EXPECT_TRUE(right_orthogonal(x, r.coaisle));
    }
  }
}

TEST(Truncate, NonTerminationReported) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const BoundedComplex m = BoundedComplex::stalk(simple(a, 0), 0);
  try {
    truncate(PerfectComplex::regular(a), m, {0, 512, std::nullopt});
    FAIL() << "max_iter = 0 returned";
  } catch (const TruncationDiverged& e) {
    EXPECT_EQ(e.iterations(), 0u);
    EXPECT_FALSE(e.partial().is_zero());
  }
  // A ⊕ A[1] has a positive self-extension, so the tail cannot be closed and
  // the syzygies of the simple module over K[x]/(x²) never run out.
  const AlgebraPtr kx = dual_numbers(Q);
  EXPECT_THROW(truncate(regular_plus_shift(kx), BoundedComplex::stalk(simple(kx, 0), 0), {64, 100, std::nullopt}),
               NonTermination);
}

TEST(TruncateProperty, Axioms) {
  Sampler s(24);
  for (const Generator& g : axiom_generators()) {
    const AlgebraPtr& a = g.e.algebra();
    for (int trial = 0; trial < 6; ++trial) {
      const BoundedComplex m = s.complex(a, -2, 2 + s.below(3));
      const TruncationResult r = truncate(g.e, m, g.opts);
      // (t3)
      EXPECT_TRUE(long_exact_sequence_holds(r.to_input, r.to_coaisle, r.connecting));
      // Orthogonality over the full computed window.
      for (int k = r.window_lo; k <= r.window_hi; ++k) {
        EXPECT_TRUE(homotopy_class_basis(g.e, r.coaisle, k).empty()) << "k = " << k;
      }
      // (t1) against certified aisle objects.
      for (const BoundedComplex& x : replay(r.certificate)) {
        if (!x.is_zero()) EXPECT_TRUE(right_orthogonal(x, r.coaisle));
      }
    }
  }
}

TEST(TruncateProperty, IdempotentAndShiftStable) {
  Sampler s(25);
  for (const Generator& g : axiom_generators()) {
    for (int trial = 0; trial < 4; ++trial) {
      const BoundedComplex m = s.complex(g.e.algebra(), -2, 3);
      const TruncationResult r = truncate(g.e, m, g.opts);
      EXPECT_TRUE(is_acyclic(truncate(g.e, r.aisle, g.opts).coaisle));
      EXPECT_TRUE(is_acyclic(truncate(g.e, r.coaisle, g.opts).aisle));
      EXPECT_TRUE(is_acyclic(truncate(g.e, shift(r.aisle, 1), g.opts).coaisle));
    }
  }
}

TEST(TruncateProperty, PreservesFiniteSums) {
  Sampler s(26);
  for (const Generator& g : axiom_generators()) {
    for (int trial = 0; trial < 4; ++trial) {
      const BoundedComplex m = s.complex(g.e.algebra(), -2, 3);
      const BoundedComplex n = s.complex(g.e.algebra(), -1, 2);
      const auto whole = cohomology_dims(truncate(g.e, direct_sum(m, n), g.opts).coaisle);
      EXPECT_EQ(whole, add(cohomology_dims(truncate(g.e, m, g.opts).coaisle),
                           cohomology_dims(truncate(g.e, n, g.opts).coaisle)));
    }
  }
}

TEST(Tau, RegularGivesSoftTruncations) {
  for (const AlgebraPtr& a : fixture_algebras()) {
    Sampler s(27);
    const PerfectComplex r = PerfectComplex::regular(a);
    for (int trial = 0; trial < 5; ++trial) {
      const BoundedComplex m = s.complex(a, -2, 4);
      for (int n = -1; n <= 1; ++n) {
        EXPECT_EQ(cohomology_dims(tau_leq(r, n, m)), dims_in(m, INT_MIN, n));
        EXPECT_EQ(cohomology_dims(tau_geq(r, n, m)), dims_in(m, n, INT_MAX));
      }
    }
  }
}

TEST(Tau, AisleMemberHasNoCoaislePart) {
  const Tilt tilt;
  Sampler s(28);
  for (int trial = 0; trial < 4; ++trial) {
    const TruncationResult r = truncate(tilt.t, s.complex(tilt.a, -1, 3), tilt.opts());
    EXPECT_TRUE(is_acyclic(tau_geq(tilt.t, 1, r.aisle, tilt.opts())));
  }
}

TEST(Tau, ShiftBookkeeping) {
  const Tilt tilt;
  Sampler s(29);
  for (int trial = 0; trial < 4; ++trial) {
    const BoundedComplex m = s.complex(tilt.a, -1, 3);
    for (int k = -1; k <= 1; ++k) {
      EXPECT_EQ(cohomology_dims(shift(tau_leq(tilt.t, 0, m, tilt.opts()), -k)),
                cohomology_dims(tau_leq(tilt.t, k, shift(m, -k), tilt.opts())));
    }
  }
}

TEST(Heart, Examples) {
  for (const AlgebraPtr& a : fixture_algebras()) {
    Sampler s(30);
    const PerfectComplex r = PerfectComplex::regular(a);
    const FDModule x = s.module(a);
    EXPECT_EQ(cohomology_dims(heart_h0(r, BoundedComplex::stalk(x, 0))), cohomology_dims(BoundedComplex::stalk(x, 0)));
    const BoundedComplex m = s.complex(a, -2, 4);
    EXPECT_EQ(cohomology_dims(heart_h0(r, m)), dims_in(m, 0, 0));
  }
  const Tilt tilt;
  const BoundedComplex h = heart_h0(tilt.t, tilt.t.complex(), tilt.opts());
  EXPECT_EQ(cohomology_dims(h), cohomology_dims(tilt.t.complex()));
  EXPECT_EQ(derived_hom_dims(tilt.t, h), derived_hom_dims(tilt.t, tilt.t.complex()));
}

TEST(Exceptional, Examples) {
  for (const AlgebraPtr& a : fixture_algebras()) {
    EXPECT_TRUE(is_exceptional(PerfectComplex::regular(a)).exceptional);
    const ExceptionalReport rep = is_exceptional(regular_plus_shift(a));
    EXPECT_FALSE(rep.exceptional);
    bool degree_one = false;
    for (const ExceptionalWitness& w : rep.witnesses) {
      degree_one = degree_one || w.j == 1;
      EXPECT_FALSE(is_null_homotopic(w.map));
    }
    EXPECT_TRUE(degree_one);
  }
  const Tilt tilt;
  EXPECT_TRUE(is_exceptional(tilt.t).exceptional);
}

// Oracle for the tilt: over the hereditary Kronecker algebra
// dim Hom - dim Ext¹ is the Euler form x0 y0 + x1 y1 - 2 x0 y1.
TEST(Exceptional, KroneckerTiltEulerForm) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const std::vector<FDModule> mods{projective(a, 0), m23(a)};
  const std::vector<std::pair<long, long>> dv{{1, 2}, {2, 3}};
  const std::vector<std::size_t> homs{1, 2, 0, 1};
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const long euler = dv[i].first * dv[j].first + dv[i].second * dv[j].second - 2 * dv[i].first * dv[j].second;
      const long hom = static_cast<long>(hom_dim(mods[i], mods[j]));
      EXPECT_EQ(hom, static_cast<long>(homs[2 * i + j]));
      EXPECT_EQ(hom - euler, 0) << "Ext¹ between summands " << i << " and " << j;
    }
  }
}

TEST(Compact, Examples) {
  const AlgebraPtr a = kronecker_algebra(Q);
  EXPECT_TRUE(is_compact_presentation(PerfectComplex::regular(a)));
  EXPECT_FALSE(is_compact_presentation(BoundedComplex::stalk(simple(a, 0), 0)));
  const auto p = as_perfect(PerfectComplex::regular(a).complex());
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->summand_count(), 2u);
}

TEST(Window, Examples) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const PerfectComplex r = PerfectComplex::regular(a);
  const BoundedComplex m = BoundedComplex::stalk(simple(a, 1), 0);
  const Window w = window_membership(r, m);
  EXPECT_EQ(w.a, 0);
  EXPECT_EQ(w.b, 1);
  for (int n = -2; n <= 2; ++n) {
    const Window v = window_membership(r, shift(m, n));
    EXPECT_EQ(v.a, n);
    EXPECT_EQ(v.b, n + 1);
  }
  const Tilt tilt;
  const Window t = window_membership(tilt.t, tilt.t.complex(), tilt.opts());
  EXPECT_EQ(t.a, 0);
  EXPECT_EQ(t.b, 1);
}
