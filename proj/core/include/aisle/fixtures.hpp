#pragma once

#include "aisle/tstruct.hpp"

namespace aisle {

/// Kronecker preprojective tilt M(1,2) ⊕ M(2,3), presented as
/// P(v0) ⊕ [P(v1) -(a, b)-> P(v0)²] in degrees -1, 0. Group 0 is P(v0),
/// group 1 the two-term summand.
PerfectComplex kronecker_tilt(const AlgebraPtr& kronecker);

/// Trace recovering A from the tilt: P(v1) ≃ cone(P(v0)² -> [P(v1) -> P(v0)²])
/// one step to the right, then A = P(v0) ⊕ P(v1).
ThickCertificate kronecker_tilt_certificate(const PerfectComplex& tilt);

/// A ⊕ A[1], the smallest non-exceptional fixture.
PerfectComplex regular_plus_shift(const AlgebraPtr& a);

}  // namespace aisle
