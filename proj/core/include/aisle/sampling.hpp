#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "aisle/hocolim.hpp"

namespace aisle {

/// Seeded generators for property suites. All draws go through one
/// std::mt19937_64 so that a seed fixes the whole sample.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(rng_() % n); }
  /// Uniform integer in [-bound, bound].
  long long small(int bound) { return static_cast<long long>(below(2 * static_cast<std::size_t>(bound) + 1)) - bound; }

  Matrix matrix(std::size_t rows, std::size_t cols, Field f, int bound = 3);
  /// Quotient of a small sum of projectives by the submodule generated by a random element.
  FDModule module(const AlgebraPtr& a, std::size_t max_summands = 2);
  /// Random combination of a basis of Hom_A(M, N).
  Matrix module_map(const FDModule& m, const FDModule& n);
  /// Complex of random modules in degrees [lo, lo + len) with random differentials
  /// composing to zero.
  BoundedComplex complex(const AlgebraPtr& a, int lo, std::size_t len);
  /// Complex of small sums of projectives in degrees [lo, lo + len).
  PerfectComplex perfect(const AlgebraPtr& a, int lo, std::size_t len);
  /// Eventually constant sequence whose steps are inclusions into larger
  /// complexes or projections onto quotients.
  DirectedSystem sequence(const AlgebraPtr& a, std::size_t steps);
  /// Subcomplexes of one random complex ordered by inclusion: either a poset
  /// with a top element or a span b > a < c.
  DirectedSystem poset_system(const AlgebraPtr& a);

 private:
  /// Random differentials between consecutive terms composing to zero.
  std::vector<Matrix> differentials(const std::vector<FDModule>& terms);
  std::mt19937_64 rng_;
};

}  // namespace aisle
