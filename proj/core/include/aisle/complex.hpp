#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "aisle/module.hpp"

namespace aisle {

/// Complex of vector spaces: dims[k - lo] and d[k - lo]: degree k -> k+1.
struct LinearComplex {
  Field field;
  int lo = 0;
  std::vector<std::size_t> dims;
  std::vector<Matrix> d;

  int hi() const { return lo + static_cast<int>(dims.size()) - 1; }
  std::size_t dim(int k) const;
  Matrix diff(int k) const;
};

struct Cohomology {
  std::size_t dim = 0;
  Matrix cycles;           // basis of ker d^n
  Matrix boundaries;       // basis of im d^{n-1}
  Matrix representatives;  // cycles completing the boundaries, one per class

  /// Class coordinates of the cycles in `z`; throws if some column is not a cycle.
  Matrix class_coordinates(const Matrix& z) const;
};

Cohomology cohomology(const LinearComplex& c, int n);

/// Bounded complex of modules. Terms outside [lo, hi] are zero; the zero
/// complex has lo = 0, hi = -1. Each term carries a partition into direct
/// summand blocks (consecutive coordinate ranges, each an A-submodule).
class BoundedComplex {
 public:
  BoundedComplex() = default;
  /// The zero complex.
  explicit BoundedComplex(AlgebraPtr a);
  /// terms[k - lo] in degree k; diffs[k - lo] is d^k (size terms.size() - 1).
  /// Verifies A-linearity and d∘d = 0. Empty `blocks` means one block per term.
  BoundedComplex(AlgebraPtr a, int lo, std::vector<FDModule> terms, std::vector<Matrix> diffs,
                 std::vector<std::vector<std::size_t>> blocks = {});
  static BoundedComplex unchecked(AlgebraPtr a, int lo, std::vector<FDModule> terms, std::vector<Matrix> diffs,
                                  std::vector<std::vector<std::size_t>> blocks = {});
  static BoundedComplex stalk(const FDModule& m, int degree = 0);

  const AlgebraPtr& algebra() const { return algebra_; }
  Field field() const { return algebra_->field(); }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(terms_.size()) - 1; }
  bool is_zero() const { return terms_.empty(); }
  FDModule term(int k) const;
  std::size_t dim(int k) const;
  std::size_t total_dim() const;
  /// d^k: term(k) -> term(k+1), a zero matrix outside the support.
  Matrix d(int k) const;
  /// Block sizes of term(k); empty outside the support.
  std::vector<std::size_t> blocks(int k) const;

  LinearComplex linear() const;

 private:
  static BoundedComplex build(AlgebraPtr a, int lo, std::vector<FDModule> terms, std::vector<Matrix> diffs,
                              std::vector<std::vector<std::size_t>> blocks, bool check);
  AlgebraPtr algebra_;
  FDModule zero_;
  int lo_ = 0;
  std::vector<FDModule> terms_;
  std::vector<Matrix> diffs_;
  std::vector<std::vector<std::size_t>> blocks_;
};

/// Chain map given by one module map per degree.
class ChainMap {
 public:
  /// Verifies A-linearity and commutation with differentials. Missing
  /// degrees are zero.
  ChainMap(BoundedComplex source, BoundedComplex target, std::map<int, Matrix> components);
  static ChainMap unchecked(BoundedComplex source, BoundedComplex target, std::map<int, Matrix> components);
  static ChainMap identity(const BoundedComplex& c);
  static ChainMap zero(const BoundedComplex& source, const BoundedComplex& target);

  const BoundedComplex& source() const { return source_; }
  const BoundedComplex& target() const { return target_; }
  /// Component in degree k (target.dim(k) x source.dim(k)).
  Matrix at(int k) const;
  const std::map<int, Matrix>& components() const { return components_; }

  ChainMap operator+(const ChainMap& o) const;
  ChainMap operator-(const ChainMap& o) const;
  ChainMap scaled(const Scalar& s) const;

 private:
  ChainMap() = default;
  BoundedComplex source_;
  BoundedComplex target_;
  std::map<int, Matrix> components_;
};

/// g ∘ f.
ChainMap compose(const ChainMap& g, const ChainMap& f);
bool operator==(const ChainMap& a, const ChainMap& b);

/// C[n]^k = C^{k+n}, differential multiplied by (-1)^n.
BoundedComplex shift(const BoundedComplex& c, int n);
/// f[n]^k = f^{k+n}.
ChainMap shift(const ChainMap& f, int n);

struct Cone {
  BoundedComplex complex;
  ChainMap inclusion;   // target -> cone
  ChainMap projection;  // cone -> source[1]
};
/// cone(f)^k = source^{k+1} ⊕ target^k with differential [[-d_s, 0], [f, d_t]].
Cone cone(const ChainMap& f);

BoundedComplex direct_sum(const std::vector<BoundedComplex>& parts, const AlgebraPtr& a);
BoundedComplex direct_sum(const BoundedComplex& x, const BoundedComplex& y);
/// Block diagonal sum of chain maps.
ChainMap direct_sum(const std::vector<ChainMap>& parts, const AlgebraPtr& a);

Cohomology cohomology(const BoundedComplex& c, int n);
/// Nonzero cohomology dimensions by degree.
std::map<int, std::size_t> cohomology_dims(const BoundedComplex& c);
bool is_acyclic(const BoundedComplex& c);
/// H^n(C) as an A-module.
FDModule cohomology_module(const BoundedComplex& c, int n);
/// Matrix of H^n(f) in the representative bases of cohomology().
Matrix induced_map(const ChainMap& f, int n);
bool is_quasi_iso(const ChainMap& f);

/// Exactness of the long cohomology sequence of X -f-> Y -g-> Z -h-> X[1].
bool long_exact_sequence_holds(const ChainMap& f, const ChainMap& g, const ChainMap& h);
/// The same check for the cone triangle of f.
bool cone_sequence_exact(const ChainMap& f);

struct Truncation {
  BoundedComplex complex;
  ChainMap map;  // inclusion (tau_leq) or quotient (tau_geq)
};
/// Standard soft truncations: ... -> C^{n-1} -> ker d^n and C^n / im d^{n-1} -> C^{n+1} -> ...
Truncation soft_tau_leq(const BoundedComplex& c, int n);
Truncation soft_tau_geq(const BoundedComplex& c, int n);

struct Reduction {
  BoundedComplex reduced;
  ChainMap to_reduced;    // C -> C'
  ChainMap from_reduced;  // C' -> C; to_reduced ∘ from_reduced = id
  std::size_t cancelled = 0;
};
/// Repeated Gaussian elimination of differential components that are
/// isomorphisms between blocks. The result is homotopy equivalent to C.
Reduction cancel_contractible(const BoundedComplex& c);

struct Subcomplex {
  BoundedComplex complex;
  ChainMap inclusion;
};
/// Smallest subcomplex containing the given vectors (columns, keyed by degree).
Subcomplex generated_subcomplex(const BoundedComplex& c, const std::map<int, Matrix>& generators);

struct QuotientComplex {
  BoundedComplex complex;
  ChainMap projection;
};
/// C / S for a subcomplex S spanned by the given columns in each degree.
QuotientComplex quotient_complex(const BoundedComplex& c, const std::map<int, Matrix>& sub);

/// Whether f = d h + h d for module maps h: source^k -> target^{k-1}.
bool is_null_homotopic(const ChainMap& f);

/// Bounded complex of finite sums of the projectives P(v) = A e_v.
class PerfectComplex {
 public:
  struct Summand {
    int degree = 0;
    std::size_t index = 0;
    friend bool operator==(const Summand&, const Summand&) = default;
    friend auto operator<=>(const Summand&, const Summand&) = default;
  };
  using Groups = std::vector<std::vector<Summand>>;

  PerfectComplex() = default;
  /// vertices[k - lo] lists the summands in degree k; diffs as for
  /// BoundedComplex. `groups` declares a direct-sum decomposition into
  /// subcomplexes; by default the connected components of the differential.
  PerfectComplex(AlgebraPtr a, int lo, std::vector<std::vector<std::size_t>> vertices, std::vector<Matrix> diffs,
                 std::optional<Groups> groups = std::nullopt);
  /// Differential from algebra elements: elements[k - lo][t][s] ∈ e_s A e_t
  /// for the component from summand s in degree k to summand t in degree k+1.
  static PerfectComplex from_elements(AlgebraPtr a, int lo, std::vector<std::vector<std::size_t>> vertices,
                                      const std::vector<std::vector<std::vector<Matrix>>>& elements,
                                      std::optional<Groups> groups = std::nullopt);
  static PerfectComplex stalk(AlgebraPtr a, std::vector<std::size_t> vertices, int degree = 0);
  /// The regular module A = ⊕ P(i) in the given degree.
  static PerfectComplex regular(AlgebraPtr a, int degree = 0);
  static PerfectComplex zero(AlgebraPtr a);

  const BoundedComplex& complex() const { return complex_; }
  const AlgebraPtr& algebra() const { return complex_.algebra(); }
  Field field() const { return complex_.field(); }
  int lo() const { return complex_.lo(); }
  int hi() const { return complex_.hi(); }
  bool is_zero() const { return complex_.is_zero(); }
  /// Vertices of the summands in degree k (empty outside the support).
  std::vector<std::size_t> vertices(int k) const;
  /// Coordinate offset of summand s inside term(k).
  std::size_t offset(int k, std::size_t s) const;
  /// Algebra element of the differential component s (degree k) -> t (degree k+1).
  Matrix component(int k, std::size_t t, std::size_t s) const;
  const Groups& groups() const { return groups_; }
  std::size_t summand_count() const;

 private:
  BoundedComplex complex_;
  std::vector<std::vector<std::size_t>> vertices_;
  Groups groups_;
  void init_groups(std::optional<Groups> groups);
};

PerfectComplex shift(const PerfectComplex& e, int n);
PerfectComplex direct_sum(const std::vector<PerfectComplex>& parts, const AlgebraPtr& a);
/// Direct sum of copies: copies[j] of shift(e, shifts[j]).
PerfectComplex shifted_copies(const PerfectComplex& e, const std::vector<std::pair<int, std::size_t>>& shifts);
/// cone of a chain map between perfect complexes, kept perfect.
PerfectComplex perfect_cone(const PerfectComplex& source, const PerfectComplex& target, const ChainMap& f);
/// The subcomplex given by a union of groups, with its inclusion and projection.
struct PerfectSummand {
  PerfectComplex complex;
  ChainMap inclusion;
  ChainMap projection;
};
PerfectSummand group_summand(const PerfectComplex& e, const std::vector<std::size_t>& group_indices);
/// Idempotent chain endomorphism projecting onto the listed groups.
ChainMap group_projection(const PerfectComplex& e, const std::vector<std::size_t>& group_indices);

}  // namespace aisle
