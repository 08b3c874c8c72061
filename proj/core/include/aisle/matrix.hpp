#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "aisle/field.hpp"

namespace aisle {

/// Dense row-major matrix over a fixed field. Zero-sized dimensions are
/// legal and common (maps into or out of the zero module).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, Field field);

  static Matrix identity(std::size_t n, Field field);
  /// Column vector from entries.
  static Matrix column(std::vector<Scalar> entries, Field field);
  /// Builds from integer rows; all rows must have the same length.
  static Matrix from_ints(const std::vector<std::vector<long long>>& rows, Field field);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Field field() const noexcept { return field_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Scalar> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  bool is_zero() const;
  bool is_identity() const;

  Matrix transpose() const;
  /// Rows [r0, r0+nr) and columns [c0, c0+nc).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& m);
  Matrix col(std::size_t c) const;
  Matrix select_columns(std::span<const std::size_t> cols) const;
  Matrix select_rows(std::span<const std::size_t> rows) const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(const Scalar& s);
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const Scalar& s) { return a *= s; }
  friend Matrix operator*(const Scalar& s, Matrix a) { return a *= s; }
  Matrix operator-() const;
  friend Matrix operator*(const Matrix& a, const Matrix& b);

  friend bool operator==(const Matrix& a, const Matrix& b);
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Field field_;
  std::vector<Scalar> data_;
};

/// [a | b]; row counts must agree.
Matrix hstack(const Matrix& a, const Matrix& b);
/// [a ; b]; column counts must agree.
Matrix vstack(const Matrix& a, const Matrix& b);
Matrix hstack(std::span<const Matrix> parts, std::size_t rows, Field field);
Matrix vstack(std::span<const Matrix> parts, std::size_t cols, Field field);
/// Block diagonal matrix.
Matrix direct_sum(std::span<const Matrix> blocks, Field field);
Matrix direct_sum(const Matrix& a, const Matrix& b);
/// Kronecker product a ⊗ b.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace aisle
