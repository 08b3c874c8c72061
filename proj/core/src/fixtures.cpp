#include "aisle/fixtures.hpp"

#include "aisle/linalg.hpp"

namespace aisle {

namespace {

/// Strict idempotent of a perfect complex keeping the listed groups.
std::map<int, Matrix> group_idempotent(const PerfectComplex& e, const std::vector<std::size_t>& groups) {
  const ChainMap p = group_projection(e, groups);
  return p.components();
}

}  // namespace

PerfectComplex kronecker_tilt(const AlgebraPtr& a) {
  const Matrix zero(a->dim(), 1, a->field());
  const PerfectComplex::Groups groups{{{0, 0}}, {{-1, 0}, {0, 1}, {0, 2}}};
  return PerfectComplex::from_elements(a, -1, {{1}, {0, 0, 0}},
                                       {{{zero}, {a->basis_vector(2)}, {a->basis_vector(3)}}}, groups);
}

ThickCertificate kronecker_tilt_certificate(const PerfectComplex& tilt) {
  const AlgebraPtr& a = tilt.algebra();
  const PerfectComplex left = shift(tilt, -1);
  ThickCertificate cert{tilt, {}};
  cert.steps.push_back(ThickStep::take(-1));                                  // 0: T[-1]
  cert.steps.push_back(ThickStep::summand(0, group_idempotent(left, {1})));  // 1: [P(v1) -> P(v0)²] in degrees 0, 1
  cert.steps.push_back(ThickStep::summand(0, group_idempotent(left, {0})));  // 2: P(v0) in degree 1
  cert.steps.push_back(ThickStep::sum({2, 2}));                               // 3

  // The map P(v0)² -> [P(v1) -> P(v0)²] onto the degree 1 term, written in
  // the coordinates the replay gives the two images.
  const std::vector<BoundedComplex> objs = replay(cert);
  const BoundedComplex& two = objs[1];
  const BoundedComplex& pair = objs[3];
  const Subcomplex big = generated_subcomplex(left.complex(), group_idempotent(left, {1}));
  const Subcomplex small = generated_subcomplex(left.complex(), group_idempotent(left, {0}));
  const std::size_t p = projective(a, 0).dim();
  const std::size_t n1 = left.complex().dim(1);
  Matrix moved(n1, 2 * small.complex.dim(1), a->field());
  for (std::size_t c = 0; c < 2; ++c) {
    // Summand 0 of degree 1 moved onto summand c + 1.
    Matrix shiftc(n1, n1, a->field());
    for (std::size_t j = 0; j < p; ++j) shiftc((c + 1) * p + j, j) = a->field().one();
    moved.set_block(0, c * small.complex.dim(1), shiftc * small.inclusion.at(1));
  }
  const Matrix f1 = Subspace(big.inclusion.at(1)).coordinates_or_throw(moved);
  if (f1.rows() != two.dim(1) || f1.cols() != pair.dim(1)) throw VerificationFailure("tilt certificate coordinates");
  cert.steps.push_back(ThickStep::cone_of(3, 1, {{1, f1}}));  // 4: ≃ P(v1) in degree 0
  cert.steps.push_back(ThickStep::take(0));                    // 5: T
  cert.steps.push_back(ThickStep::summand(5, group_idempotent(tilt, {0})));  // 6: P(v0)
  cert.steps.push_back(ThickStep::sum({6, 4}));               // 7: ≃ A
  return cert;
}

PerfectComplex regular_plus_shift(const AlgebraPtr& a) {
  return direct_sum({PerfectComplex::regular(a, 0), PerfectComplex::regular(a, -1)}, a);
}

}  // namespace aisle
