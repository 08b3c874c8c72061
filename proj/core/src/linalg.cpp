#include "aisle/linalg.hpp"

#include <numeric>
#include <utility>

#include "aisle/error.hpp"

namespace aisle {

Rref rref(const Matrix& m) {
  Rref out{m, {}};
  Matrix& a = out.reduced;
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
    std::size_t sel = rows;
    for (std::size_t r = pivot_row; r < rows; ++r) {
      if (!a(r, c).is_zero()) {
        sel = r;
        break;
      }
    }
    if (sel == rows) continue;
    if (sel != pivot_row) {
      for (std::size_t j = c; j < cols; ++j) std::swap(a(sel, j), a(pivot_row, j));
    }
    const Scalar inv = a(pivot_row, c).inverse();
    for (std::size_t j = c; j < cols; ++j) a(pivot_row, j) *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == pivot_row || a(r, c).is_zero()) continue;
      const Scalar factor = a(r, c);
      for (std::size_t j = c; j < cols; ++j) {
        if (!a(pivot_row, j).is_zero()) a(r, j) -= factor * a(pivot_row, j);
      }
    }
    out.pivots.push_back(c);
    ++pivot_row;
  }
  return out;
}

std::size_t rank(const Matrix& m) {
  if (m.empty()) return 0;
  return rref(m).rank();
}

Matrix kernel_basis(const Matrix& m) {
  const Rref r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : r.pivots) is_pivot[p] = true;
  const std::size_t nullity = m.cols() - r.rank();
  Matrix k(m.cols(), nullity, m.field());
  std::size_t out = 0;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    k(f, out) = m.field().one();
    for (std::size_t i = 0; i < r.pivots.size(); ++i) k(r.pivots[i], out) = -r.reduced(i, f);
    ++out;
  }
  return k;
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw InvalidInput("solve: system has " + std::to_string(a.rows()) + " rows but right-hand side has " +
                       std::to_string(b.rows()));
  }
  const Rref r = rref(hstack(a, b));
  const std::size_t n = a.cols();
  Matrix x(n, b.cols(), a.field());
  for (std::size_t i = 0; i < r.pivots.size(); ++i) {
    if (r.pivots[i] >= n) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x(r.pivots[i], j) = r.reduced(i, n + j);
  }
  return x;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const std::size_t n = m.rows();
  const Rref r = rref(hstack(m, Matrix::identity(n, m.field())));
  if (r.rank() < n || (n > 0 && r.pivots[n - 1] >= n)) return std::nullopt;
  return r.reduced.block(0, n, n, n);
}

Matrix column_space_basis(const Matrix& m) {
  if (m.cols() == 0) return m;
  const Rref r = rref(m);
  return m.select_columns(r.pivots);
}

Matrix relative_basis(const Matrix& base, const Matrix& candidates) {
  const Rref r = rref(hstack(base, candidates));
  std::vector<std::size_t> chosen;
  for (auto p : r.pivots) {
    if (p >= base.cols()) chosen.push_back(p - base.cols());
  }
  return candidates.select_columns(chosen);
}

Matrix complement_basis(const Matrix& sub) {
  const std::size_t n = sub.rows();
  std::vector<bool> covered(n, false);
  if (sub.cols() > 0) {
    for (auto p : rref(sub.transpose()).pivots) covered[p] = true;
  }
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < n; ++i) {
    if (!covered[i]) free.push_back(i);
  }
  return Matrix::identity(n, sub.field()).select_columns(free);
}

Subspace::Subspace(Matrix basis) : basis_(std::move(basis)) {
  const std::size_t r = basis_.cols();
  if (r == 0) return;
  const Rref t = rref(basis_.transpose());
  if (t.rank() != r) throw VerificationFailure("Subspace basis columns are dependent");
  rows_ = t.pivots;
  auto inv = inverse(basis_.select_rows(rows_));
  if (!inv) throw VerificationFailure("Subspace pivot block is singular");
  row_inverse_ = std::move(*inv);
}

Subspace Subspace::span(const Matrix& columns) { return Subspace(column_space_basis(columns)); }

std::optional<Matrix> Subspace::coordinates(const Matrix& v) const {
  if (v.rows() != ambient()) throw InvalidInput("Subspace::coordinates: ambient dimension mismatch");
  if (dim() == 0) {
    if (!v.is_zero()) return std::nullopt;
    return Matrix(0, v.cols(), v.field());
  }
  Matrix c = row_inverse_ * v.select_rows(rows_);
  if (basis_ * c != v) return std::nullopt;
  return c;
}

Matrix Subspace::coordinates_or_throw(const Matrix& v) const {
  auto c = coordinates(v);
  if (!c) throw VerificationFailure("vector lies outside the expected subspace");
  return std::move(*c);
}

}  // namespace aisle
