#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aisle/hom_complex.hpp"
#include "aisle/tstruct.hpp"

namespace aisle {

/// S = H^0 Hom(E, E) with product s * t = t ∘ s, so that precomposition makes
/// every Hom•(E, M) a left S-module and F(E) ≅ S. The basis is adapted to
/// the groups of E: the group projections come first (they are the
/// idempotents of S), then bases of the pieces Hom(group b, group a).
class EndomorphismRing {
 public:
  explicit EndomorphismRing(PerfectComplex e);

  const PerfectComplex& generator() const { return e_; }
  const AlgebraPtr& algebra() const { return s_; }
  std::size_t dim() const { return lifts_.size(); }
  /// Chain endomorphism lifting basis element i.
  const ChainMap& lift(std::size_t i) const { return lifts_.at(i); }
  /// Group indices (source, target) of the piece containing basis element i.
  std::pair<std::size_t, std::size_t> piece(std::size_t i) const { return pieces_.at(i); }
  /// dim Hom_D(group `from`, group `to`).
  std::size_t piece_dim(std::size_t from, std::size_t to) const;
  /// Whether the lifts multiply on the nose, not just up to homotopy; needed
  /// for F to land in honest S-modules.
  bool strict() const { return strict_; }
  /// Coordinates in S of the class of a chain endomorphism of E.
  Matrix class_of(const ChainMap& f) const;

 private:
  PerfectComplex e_;
  HomComplex hom_;
  Cohomology h0_;
  Matrix to_basis_;  // representative class coordinates -> S coordinates
  std::vector<ChainMap> lifts_;
  std::vector<std::pair<std::size_t, std::size_t>> pieces_;
  AlgebraPtr s_;
  bool strict_ = false;
};

/// The canonical map A -> End(A) sending a to right multiplication by a,
/// as a matrix into S coordinates; verified to be an algebra isomorphism.
/// Requires the generator to be the regular complex.
Matrix regular_endomorphism_isomorphism(const EndomorphismRing& ring);

/// An algebra isomorphism from the Kronecker algebra (e_v0, e_v1, a, b) to s
/// that sends vertex idempotents to idempotents of s, when one exists.
std::optional<Matrix> kronecker_isomorphism(const AlgebraPtr& kronecker, const AlgebraPtr& s);

/// F(M) = Hom•(E, M) as a complex of S-modules, S acting by precomposition.
BoundedComplex real_functor_image(const EndomorphismRing& ring, const BoundedComplex& m);
/// F(g) by postcomposition.
ChainMap real_functor_map(const EndomorphismRing& ring, const ChainMap& g);

struct HomDimRow {
  int k = 0;
  std::optional<std::size_t> source;  // dim Hom_{D(A)}(M, N[k])
  std::optional<std::size_t> target;  // dim Hom_{D(S)}(FM, FN[k])
  bool computed() const { return source.has_value() && target.has_value(); }
  bool equal() const { return computed() && *source == *target; }
};
/// Both sides through perfect models: complexes of projectives are used as
/// they are, everything else is resolved. A side whose resolution does not
/// terminate within max_len is left empty ("not computed").
std::vector<HomDimRow> compare_hom_dims(const EndomorphismRing& ring, const BoundedComplex& m,
                                        const BoundedComplex& n, int k_lo, int k_hi, std::size_t max_len = 16);

struct HeartRow {
  std::size_t heart_side = 0;    // dim Hom_D(E, H^0(M)) with H^0 from the truncations
  std::size_t functor_side = 0;  // dim H^0(F(M))
  bool equal() const { return heart_side == functor_side; }
};
HeartRow heart_comparison(const EndomorphismRing& ring, const BoundedComplex& m, const TruncationOptions& opts = {});

struct EquivalenceRow {
  std::size_t pair = 0;  // index of the (M, N) sample
  HomDimRow dims;
};
struct EquivalenceReport {
  std::string direction = "F = Hom(E, -): D^b(A) -> D^b(S)";
  std::size_t ring_dim = 0;
  std::vector<EquivalenceRow> rows;
  std::vector<HeartRow> heart;
  bool all_equal() const;
  bool any_not_computed() const;
};
EquivalenceReport equivalence_report(const EndomorphismRing& ring,
                                     const std::vector<std::pair<BoundedComplex, BoundedComplex>>& pairs, int k_lo,
                                     int k_hi, const std::vector<BoundedComplex>& heart_samples,
                                     const TruncationOptions& opts = {});

struct BeilinsonEntry {
  std::size_t from = 0;
  std::size_t to = 0;
  std::size_t paths = 0;     // path count from -> to
  std::size_t binomial = 0;  // C(to - from + d, d)
  bool twists_agree = true;  // graded_hom_dim(d, from + t, to + t) == paths over the twist range
};
struct KroneckerTiltSuite {
  bool compact = false;
  bool exceptional = false;
  bool generates = false;
  std::size_t ring_dim = 0;
  std::vector<std::size_t> hom_pattern;  // End T0, Hom(T0, T1), Hom(T1, T0), End T1
  bool ring_is_kronecker = false;
  bool beilinson_is_kronecker = false;
  bool hom_rows_equal = false;
};
struct BeilinsonReport {
  std::size_t d = 0;
  std::size_t algebra_dim = 0;
  std::size_t expected_dim = 0;  // Σ_k (d + 1 - k) C(k + d, d)
  std::vector<BeilinsonEntry> table;
  bool regular_is_tilting = false;
  std::optional<KroneckerTiltSuite> tilt;  // d = 1 only
  bool ok() const;
};
BeilinsonReport beilinson_pipeline(std::size_t d, int twist_lo, int twist_hi, Field field = Field::rationals());

}  // namespace aisle
