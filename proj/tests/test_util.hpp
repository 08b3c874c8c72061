#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "aisle/complex.hpp"

namespace aisle::testing {

inline Matrix random_matrix(std::size_t rows, std::size_t cols, Field f, std::mt19937_64& rng, int bound = 3) {
  Matrix m(rows, cols, f);
  const auto span = static_cast<std::uint64_t>(2 * bound + 1);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = f.from_int(static_cast<long long>(rng() % span) - bound);
  }
  return m;
}

/// Random representation of the Kronecker quiver with small dimensions.
inline FDModule random_kronecker_module(const AlgebraPtr& a, std::mt19937_64& rng) {
  const std::size_t d0 = rng() % 3;
  const std::size_t d1 = rng() % 3;
  const Field f = a->field();
  return module_from_representation(a, {d0, d1}, {random_matrix(d1, d0, f, rng), random_matrix(d1, d0, f, rng)});
}

/// Random complex of vector spaces over the field algebra in degrees [lo, lo + len).
inline BoundedComplex random_vector_complex(const AlgebraPtr& k, int lo, std::size_t len, std::mt19937_64& rng) {
  const Field f = k->field();
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i < len; ++i) dims.push_back(1 + rng() % 3);
  std::vector<Matrix> diffs;
  for (std::size_t i = 0; i + 1 < len; ++i) {
    Matrix d = random_matrix(dims[i + 1], dims[i], f, rng, 2);
    if (i > 0) {
      // d must kill the image of the previous differential: d = X * K^T with K spanning ker(prev^T).
      const Matrix prev = diffs.back();
      const Matrix ker_t = kernel_basis(prev.transpose());
      d = random_matrix(dims[i + 1], ker_t.cols(), f, rng, 2) * ker_t.transpose();
    }
    diffs.push_back(std::move(d));
  }
  std::vector<FDModule> terms;
  for (auto n : dims) {
    std::vector<Matrix> act{Matrix::identity(n, f)};
    terms.push_back(FDModule(k, n, act));
  }
  return BoundedComplex(k, lo, std::move(terms), std::move(diffs));
}

/// Null-homotopic endomorphism d h + h d of C for a random h.
inline ChainMap random_null_homotopic(const BoundedComplex& c, std::mt19937_64& rng) {
  std::map<int, Matrix> h;
  for (int k = c.lo(); k <= c.hi(); ++k) h.emplace(k, random_matrix(c.dim(k - 1), c.dim(k), c.field(), rng, 2));
  std::map<int, Matrix> comps;
  for (int k = c.lo(); k <= c.hi(); ++k) {
    Matrix m = c.d(k - 1) * h.at(k);
    if (k + 1 <= c.hi()) m += h.at(k + 1) * c.d(k);
    comps.emplace(k, std::move(m));
  }
  return ChainMap(c, c, std::move(comps));
}

}  // namespace aisle::testing
