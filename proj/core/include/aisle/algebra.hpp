#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aisle/linalg.hpp"
#include "aisle/matrix.hpp"

namespace aisle {

/// Finite quiver. Arrows are stored with indices into `vertices`.
struct Quiver {
  struct Arrow {
    std::string label;
    std::size_t source = 0;
    std::size_t target = 0;
  };

  std::vector<std::string> vertices;
  std::vector<Arrow> arrows;

  /// Labels unique, endpoints in range. Throws InvalidInput.
  void validate() const;
  std::optional<std::size_t> vertex_index(const std::string& label) const;
  std::optional<std::size_t> arrow_index(const std::string& label) const;
};

/// A path written in traversal order: arrows[0] is walked first.
/// Length-zero paths are the trivial paths and carry their vertex.
struct Path {
  std::size_t source = 0;
  std::size_t target = 0;
  std::vector<std::size_t> arrows;

  std::size_t length() const noexcept { return arrows.size(); }
  friend bool operator==(const Path&, const Path&) = default;
};

/// Linear combination of parallel paths of a common length.
struct Relation {
  std::vector<std::pair<Scalar, Path>> terms;
};

/// Finite-dimensional associative unital algebra, stored through its
/// left-regular structure constants: column j of left(i) is b_i * b_j.
///
/// For path algebras the product p * q means "walk q, then p", so the
/// vertex idempotents satisfy e_t * p * e_s = p for a path from s to t, and
/// the left projective A e_s is spanned by the paths that start at s.
class FDAlgebra {
 public:
  struct PathData {
    Quiver quiver;
    std::vector<Path> basis_paths;  // one per basis element
  };

  /// Verifies associativity on all basis triples, the unit, and the
  /// idempotent axioms. Throws VerificationFailure / InvalidInput.
  FDAlgebra(Field field, std::vector<std::string> labels, std::vector<Matrix> left_mult, Matrix unit,
            std::vector<Matrix> idempotents);

  Field field() const noexcept { return field_; }
  std::size_t dim() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Left multiplication by the i-th basis element.
  const Matrix& left(std::size_t i) const { return left_.at(i); }
  /// Right multiplication by the i-th basis element.
  const Matrix& right(std::size_t i) const { return right_.at(i); }
  Matrix left_by(const Matrix& x) const;
  Matrix right_by(const Matrix& x) const;
  Matrix multiply(const Matrix& x, const Matrix& y) const;
  Matrix basis_vector(std::size_t i) const;

  const Matrix& unit() const noexcept { return unit_; }
  std::size_t idempotent_count() const noexcept { return idempotents_.size(); }
  const Matrix& idempotent(std::size_t i) const { return idempotents_.at(i); }

  /// Basis of the left ideal A e_i (columns are algebra vectors).
  const Matrix& projective_basis(std::size_t i) const { return projective_bases_.at(i).basis(); }
  const Subspace& projective_subspace(std::size_t i) const { return projective_bases_.at(i); }
  /// Coordinates of the idempotent e_i inside projective_basis(i).
  const Matrix& projective_generator(std::size_t i) const { return projective_generators_.at(i); }

  /// Basis indices that generate the algebra together with the idempotents.
  const std::vector<std::size_t>& generators() const noexcept { return generators_; }

  /// Radical known from the presentation (arrow ideal of a bound quiver
  /// algebra), as basis columns.
  const std::optional<Matrix>& structural_radical() const noexcept { return structural_radical_; }
  const std::optional<PathData>& path_data() const noexcept { return path_data_; }

  FDAlgebra with_presentation(std::vector<std::size_t> generators, std::optional<Matrix> radical,
                              std::optional<PathData> paths) const;

 private:
  Field field_;
  std::vector<std::string> labels_;
  std::vector<Matrix> left_;
  std::vector<Matrix> right_;
  Matrix unit_;
  std::vector<Matrix> idempotents_;
  std::vector<Subspace> projective_bases_;
  std::vector<Matrix> projective_generators_;
  std::vector<std::size_t> generators_;
  std::optional<Matrix> structural_radical_;
  std::optional<PathData> path_data_;
};

using AlgebraPtr = std::shared_ptr<const FDAlgebra>;

/// Bound quiver algebra K Q / I with I generated by homogeneous relations.
/// Every path of length >= length_bound must lie in I; this is verified
/// degreewise. Throws InvalidInput when the bound is not reached.
AlgebraPtr build_bound_quiver_algebra(const Quiver& q, const std::vector<Relation>& relations,
                                      std::size_t length_bound, Field field);

/// Endomorphism algebra of O ⊕ O(-1) ⊕ ... ⊕ O(-d) on projective d-space:
/// vertices 0..d, arrows x_0..x_d from i to i+1, commutativity relations.
AlgebraPtr beilinson_algebra(std::size_t d, Field field);

/// dim Hom(O(a), O(b)) on P^d by enumerating monomials of degree b - a in
/// d + 1 variables.
std::size_t graded_hom_dim(std::size_t d, long a, long b);

/// Number of basis paths from vertex i to vertex j of a path algebra.
std::size_t path_count(const FDAlgebra& a, std::size_t from, std::size_t to);

/// Jacobson radical as the kernel of the trace form Tr(L_x L_y). Only valid
/// in characteristic zero: throws UnsupportedField otherwise.
Matrix radical(const FDAlgebra& a);

/// structural_radical() when present, else radical().
Matrix radical_basis(const FDAlgebra& a);

/// A / I for a two-sided ideal I given by basis columns.
AlgebraPtr quotient_algebra(const FDAlgebra& a, const Matrix& ideal);

/// Basis of the product of two subspaces (span of x*y).
Matrix product_space(const FDAlgebra& a, const Matrix& x, const Matrix& y);

/// Checks that `phi` (columns: images of the basis of `from`) is an algebra
/// isomorphism from -> to: bijective, unital and multiplicative.
bool is_algebra_isomorphism(const FDAlgebra& from, const FDAlgebra& to, const Matrix& phi);

/// Convenience fixtures used throughout tests and the CLI.
AlgebraPtr field_algebra(Field field);           // K
AlgebraPtr dual_numbers(Field field);            // K[x]/(x^2)
AlgebraPtr kronecker_algebra(Field field);       // two vertices, arrows a, b: v0 -> v1
AlgebraPtr matrix_algebra(std::size_t n, Field field);  // M_n(K) with diagonal idempotents

}  // namespace aisle
