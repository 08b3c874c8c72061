#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "aisle/complex.hpp"

namespace aisle {

/// Hom complex Hom^•(E, M) for perfect E. Degree n is ⊕_p Hom(E^p, M^{p+n});
/// a map out of the summand P(i) is recorded by the image of e_i in e_i M^{p+n}.
/// The differential is D(φ) = d_M φ - (-1)^n φ d_E, so degree-n cycles are chain
/// maps E -> M[n] and H^{-k} computes Hom_D(E[k], M).
class HomComplex {
 public:
  struct Block {
    int p = 0;              // degree in E
    std::size_t summand = 0;  // index inside E^p
    std::size_t vertex = 0;
    std::size_t offset = 0;  // coordinate offset inside degree n
    std::size_t dim = 0;     // dim e_vertex M^{p+n}
  };

  HomComplex(PerfectComplex e, BoundedComplex m);

  const PerfectComplex& source() const { return e_; }
  const BoundedComplex& target() const { return m_; }
  const LinearComplex& linear() const { return linear_; }
  /// Degrees that can be nonzero: [lo M - hi E, hi M - lo E].
  int lo() const { return linear_.lo; }
  int hi() const { return linear_.hi(); }
  std::size_t dim(int n) const { return linear_.dim(n); }
  const std::vector<Block>& blocks(int n) const;

  /// Module maps E^p -> M^{p+n} of a degree-n element (one column).
  std::map<int, Matrix> components(int n, const Matrix& v) const;
  /// Inverse of components().
  Matrix encode(int n, const std::map<int, Matrix>& components) const;
  /// Chain map E[-n] -> M of a degree-n cycle.
  ChainMap chain_map(int n, const Matrix& cycle) const;
  /// Degree -k element of a chain map E[k] -> M.
  Matrix encode(const ChainMap& f, int k) const;
  Cohomology cohomology(int n) const;

 private:
  PerfectComplex e_;
  BoundedComplex m_;
  LinearComplex linear_;
  std::map<int, std::vector<Block>> blocks_;
};

/// Matrix of post-composition with g: from.target() -> to.target() in degree n.
Matrix postcompose(const HomComplex& from, const HomComplex& to, const ChainMap& g, int n);

/// Chain maps E[k] -> M lifting a basis of Hom_D(E[k], M); independence modulo
/// homotopy is verified.
std::vector<ChainMap> homotopy_class_basis(const PerfectComplex& e, const BoundedComplex& m, int k);

/// k -> dim Hom_D(E[k], M) for the k where it is nonzero.
std::map<int, std::size_t> derived_hom_dims(const PerfectComplex& e, const BoundedComplex& m);

struct ModuleResolution {
  PerfectComplex complex;  // P_len -> ... -> P_0 in degrees -len..0
  Matrix augmentation;     // P_0 -> M
  bool terminated = false;
  std::size_t length = 0;
};
/// Iterated minimal presentations; terminated iff some kernel vanishes
/// within max_len steps. Terminated resolutions are checked for exactness.
ModuleResolution projective_resolution(const FDModule& m, std::size_t max_len);

struct ComplexResolution {
  PerfectComplex complex;
  ChainMap map;  // quasi-isomorphism complex -> M
};
/// Perfect complex quasi-isomorphic to M, built by resolving the terms and
/// gluing along cones. Throws NonTermination if a term has no projective
/// resolution of length at most max_len.
ComplexResolution resolve_complex(const BoundedComplex& m, std::size_t max_len = 16);

}  // namespace aisle
