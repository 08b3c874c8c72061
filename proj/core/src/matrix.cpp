#include "aisle/matrix.hpp"

#include <ostream>
#include <string>

#include "aisle/error.hpp"

namespace aisle {

namespace {

std::string shape(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

void require_field(const Matrix& a, const Matrix& b) {
  if (a.field() != b.field()) throw Mismatch("matrix field mismatch: " + a.field().name() + " vs " + b.field().name());
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, Field field)
    : rows_(rows), cols_(cols), field_(field), data_(rows * cols, field.zero()) {}

Matrix Matrix::identity(std::size_t n, Field field) {
  Matrix m(n, n, field);
  const Scalar one = field.one();
  for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
  return m;
}

Matrix Matrix::column(std::vector<Scalar> entries, Field field) {
  Matrix m(entries.size(), 1, field);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].field() != field) throw Mismatch("column entry over the wrong field");
    m(i, 0) = std::move(entries[i]);
  }
  return m;
}

Matrix Matrix::from_ints(const std::vector<std::vector<long long>>& rows, Field field) {
  const std::size_t nc = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), nc, field);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != nc) throw InvalidInput("ragged matrix rows");
    for (std::size_t c = 0; c < nc; ++c) m(r, c) = field.from_int(rows[r][c]);
  }
  return m;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_) {
    if (!x.is_zero()) return false;
  }
  return true;
}

bool Matrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      const Scalar& x = (*this)(r, c);
      if (r == c ? !x.is_one() : !x.is_zero()) return false;
    }
  }
  return true;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_, field_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw InvalidInput("block out of range of " + shape(*this));
  Matrix b(nr, nc, field_);
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
  }
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& m) {
  if (r0 + m.rows() > rows_ || c0 + m.cols() > cols_) throw InvalidInput("set_block out of range of " + shape(*this));
  require_field(*this, m);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) (*this)(r0 + r, c0 + c) = m(r, c);
  }
}

Matrix Matrix::col(std::size_t c) const { return block(0, c, rows_, 1); }

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
  Matrix m(rows_, cols.size(), field_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t j = 0; j < cols.size(); ++j) m(r, j) = (*this)(r, cols[j]);
  }
  return m;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  Matrix m(rows.size(), cols_, field_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < cols_; ++c) m(i, c) = (*this)(rows[i], c);
  }
  return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidInput("sum of " + shape(*this) + " and " + shape(o));
  require_field(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidInput("difference of " + shape(*this) + " and " + shape(o));
  require_field(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(const Scalar& s) {
  for (auto& x : data_) x *= s;
  return *this;
}

Matrix Matrix::operator-() const {
  Matrix m = *this;
  for (auto& x : m.data_) x = -x;
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw InvalidInput("product of " + shape(a) + " and " + shape(b));
  require_field(a, b);
  Matrix c(a.rows_, b.cols_, a.field_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Scalar& bkj = b(k, j);
        if (bkj.is_zero()) continue;
        c(i, j) += aik * bkj;
      }
    }
  }
  return c;
}

bool operator==(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.field_ != b.field_) return false;
  for (std::size_t i = 0; i < a.data_.size(); ++i) {
    if (a.data_[i] != b.data_[i]) return false;
  }
  return true;
}

std::ostream& operator<<(std::ostream& os, const Matrix& m) {
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << (r == 0 ? "[" : " [");
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c == 0 ? "" : ", ") << m(r, c);
    os << ']';
  }
  return os << ']';
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw InvalidInput("hstack of " + shape(a) + " and " + shape(b));
  require_field(a, b);
  Matrix m(a.rows(), a.cols() + b.cols(), a.field());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw InvalidInput("vstack of " + shape(a) + " and " + shape(b));
  require_field(a, b);
  Matrix m(a.rows() + b.rows(), a.cols(), a.field());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

Matrix hstack(std::span<const Matrix> parts, std::size_t rows, Field field) {
  std::size_t cols = 0;
  for (const auto& p : parts) cols += p.cols();
  Matrix m(rows, cols, field);
  std::size_t at = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw InvalidInput("hstack row mismatch");
    m.set_block(0, at, p);
    at += p.cols();
  }
  return m;
}

Matrix vstack(std::span<const Matrix> parts, std::size_t cols, Field field) {
  std::size_t rows = 0;
  for (const auto& p : parts) rows += p.rows();
  Matrix m(rows, cols, field);
  std::size_t at = 0;
  for (const auto& p : parts) {
    if (p.cols() != cols) throw InvalidInput("vstack column mismatch");
    m.set_block(at, 0, p);
    at += p.rows();
  }
  return m;
}

Matrix direct_sum(std::span<const Matrix> blocks, Field field) {
  std::size_t rows = 0;
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix m(rows, cols, field);
  std::size_t r = 0;
  std::size_t c = 0;
  for (const auto& b : blocks) {
    m.set_block(r, c, b);
    r += b.rows();
    c += b.cols();
  }
  return m;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  const Matrix parts[] = {a, b};
  return direct_sum(parts, a.field());
}

Matrix kron(const Matrix& a, const Matrix& b) {
  require_field(a, b);
  Matrix m(a.rows() * b.rows(), a.cols() * b.cols(), a.field());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j).is_zero()) continue;
      for (std::size_t k = 0; k < b.rows(); ++k) {
        for (std::size_t l = 0; l < b.cols(); ++l) m(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
      }
    }
  }
  return m;
}

}  // namespace aisle
