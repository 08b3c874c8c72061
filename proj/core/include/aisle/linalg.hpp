#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "aisle/matrix.hpp"

namespace aisle {

struct Rref {
  Matrix reduced;
  std::vector<std::size_t> pivots;

  std::size_t rank() const noexcept { return pivots.size(); }
};

/// Reduced row echelon form, pivot columns and rank.
Rref rref(const Matrix& m);

std::size_t rank(const Matrix& m);

/// Columns form a basis of {x : m x = 0}; there are cols - rank of them.
Matrix kernel_basis(const Matrix& m);

/// Some x with a x = b (b may have several columns), or nullopt when b is
/// not in the column space of a. Throws InvalidInput on shape mismatch.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);

std::optional<Matrix> inverse(const Matrix& m);

/// Linearly independent subset of the columns of m spanning its column space.
Matrix column_space_basis(const Matrix& m);

/// Columns of `candidates` that are independent modulo span(base), chosen
/// greedily from the left.
Matrix relative_basis(const Matrix& base, const Matrix& candidates);

/// Standard basis vectors completing the columns of `sub` to a basis.
Matrix complement_basis(const Matrix& sub);

/// A subspace of K^n with a fixed basis and fast coordinate extraction.
class Subspace {
 public:
  Subspace() = default;
  /// `basis` must have independent columns.
  explicit Subspace(Matrix basis);
  /// Convenience: the span of arbitrary columns.
  static Subspace span(const Matrix& columns);

  const Matrix& basis() const noexcept { return basis_; }
  std::size_t dim() const noexcept { return basis_.cols(); }
  std::size_t ambient() const noexcept { return basis_.rows(); }

  /// Coordinates of each column of v; nullopt if some column is outside.
  std::optional<Matrix> coordinates(const Matrix& v) const;
  /// As coordinates() but throws VerificationFailure when v is outside.
  Matrix coordinates_or_throw(const Matrix& v) const;
  bool contains(const Matrix& v) const { return coordinates(v).has_value(); }

 private:
  Matrix basis_;
  std::vector<std::size_t> rows_;
  Matrix row_inverse_;
};

}  // namespace aisle
