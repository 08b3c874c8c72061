#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "aisle/complex.hpp"
#include "aisle/error.hpp"

namespace aisle {

/// One step of a trace building an object of the aisle generated by E.
struct AisleStep {
  enum class Kind { TakeGenerator, FiniteSum, Extension };
  Kind kind = Kind::FiniteSum;
  int shift = 0;                   // TakeGenerator: E[shift], shift >= 0
  std::vector<std::size_t> parts;  // FiniteSum: earlier steps
  std::size_t sub = 0;             // Extension: X
  std::size_t quotient = 0;        // Extension: Z
  std::map<int, Matrix> gluing;    // Extension: chain map Z[-1] -> X; Y = cone(gluing)

  static AisleStep take(int shift);
  static AisleStep sum(std::vector<std::size_t> parts);
  static AisleStep extension(std::size_t sub, std::size_t quotient, std::map<int, Matrix> gluing);
};

struct AisleCertificate {
  PerfectComplex generator;
  std::vector<AisleStep> steps;
};
/// Objects of every step, in order. Throws CertificateError.
std::vector<BoundedComplex> replay(const AisleCertificate& cert);

/// One step of a trace building an object of the thick closure of E.
struct ThickStep {
  enum class Kind { TakeGenerator, FiniteSum, ConeOf, SummandVia };
  Kind kind = Kind::FiniteSum;
  int shift = 0;                   // TakeGenerator: E[shift]
  std::vector<std::size_t> parts;  // FiniteSum
  std::size_t source = 0;          // ConeOf: source step; SummandVia: the step split
  std::size_t target = 0;          // ConeOf: target step
  std::map<int, Matrix> map;       // ConeOf: chain map; SummandVia: idempotent

  static ThickStep take(int shift);
  static ThickStep sum(std::vector<std::size_t> parts);
  static ThickStep cone_of(std::size_t source, std::size_t target, std::map<int, Matrix> map);
  static ThickStep summand(std::size_t of, std::map<int, Matrix> idempotent);
};

struct ThickCertificate {
  PerfectComplex generator;
  std::vector<ThickStep> steps;
};
/// Objects of every step. A summand is split off as the image of its
/// idempotent, which must be idempotent on the nose. Throws CertificateError.
std::vector<BoundedComplex> replay(const ThickCertificate& cert);
/// True iff the last step replays to a complex quasi-isomorphic to A in
/// degree 0. Throws InvalidInput if cert is about another generator.
bool verify_generation(const PerfectComplex& e, const ThickCertificate& cert);
/// Integer β with U^⊥ ⊂ D^{≥β} for the aisle U generated by E, read off a
/// certificate whose last step is A: β(E[k]) = 1 + k, sums take the minimum,
/// β(cone(X -> Y)) = min(β(X) + 1, β(Y)) and summands inherit.
int perp_bound(const ThickCertificate& cert);
/// The same trace read as a certificate for the generator E[n].
ThickCertificate shift_generator(const ThickCertificate& cert, int n);
/// Certificate for a stalk complex of projectives containing every P(i):
/// split A off the generator moved to degree 0.
std::optional<ThickCertificate> standard_generation_certificate(const PerfectComplex& e);

struct TruncationOptions {
  std::size_t max_iter = 64;
  /// Budget on the total dimension of the reduced iterate (and four times it
  /// on the unreduced cone); exceeding it is reported like running out of
  /// iterations.
  std::size_t max_dim = 512;
  /// Enables closing the telescope tail; when absent a standard
  /// certificate is tried.
  std::optional<ThickCertificate> generation;
};

struct TruncationResult {
  BoundedComplex input;
  BoundedComplex aisle;    // N
  BoundedComplex coaisle;  // B
  ChainMap to_input;       // N -> M
  ChainMap to_coaisle;     // M -> B
  ChainMap connecting;     // B -> N[1]
  std::size_t iterations = 0;
  /// Shifts k whose Hom(E[k], B) was verified to vanish.
  int window_lo = 0;
  int window_hi = -1;
  /// Replays to the finite stage N_n; when the tail was closed, N is an
  /// extension of that stage by classes that die in the telescope.
  AisleCertificate certificate;
  std::optional<int> tail_bound;  // β used to close the tail
};

/// NonTermination carrying the last iterate B_n.
class TruncationDiverged : public NonTermination {
 public:
  TruncationDiverged(std::size_t iterations, const std::string& what, BoundedComplex partial)
      : NonTermination(iterations, what), partial_(std::move(partial)) {}
  const BoundedComplex& partial() const { return partial_; }

 private:
  BoundedComplex partial_;
};

/// Triangle N -> M -> B with N in the aisle generated by E and B in its
/// right orthogonal. Iterates B_n = cone(⊕ E[k] -> B_{n-1}) over a basis of
/// the Hom classes with k >= 0.
TruncationResult truncate(const PerfectComplex& e, const BoundedComplex& m, const TruncationOptions& opts = {});
/// Aisle part for the generator E[-n].
BoundedComplex tau_leq(const PerfectComplex& e, int n, const BoundedComplex& m, const TruncationOptions& opts = {});
/// Co-aisle part for the generator E[-(n - 1)].
BoundedComplex tau_geq(const PerfectComplex& e, int n, const BoundedComplex& m, const TruncationOptions& opts = {});
/// τ^{≥0} τ^{≤0} M.
BoundedComplex heart_h0(const PerfectComplex& e, const BoundedComplex& m, const TruncationOptions& opts = {});

struct ExceptionalWitness {
  int j = 0;     // Hom(E, E[j]) ≠ 0
  ChainMap map;  // representative E[-j] -> E
};
struct ExceptionalReport {
  bool exceptional = true;
  std::vector<ExceptionalWitness> witnesses;
};
ExceptionalReport is_exceptional(const PerfectComplex& e);

/// Structural compactness: bounded with finitely generated projective terms.
bool is_compact_presentation(const PerfectComplex& e);
bool is_compact_presentation(const BoundedComplex& c);
/// The same complex with every term identified with a sum of P(v), when
/// all terms are projective.
std::optional<PerfectComplex> as_perfect(const BoundedComplex& c);

struct Window {
  int a = 0;  // M ∈ U[a]
  int b = 0;  // M ∈ U^⊥[b]
};
/// Extremal shifts j with Hom(E[j], M) ≠ 0: a is the smallest and b one more
/// than the largest. Both memberships are verified.
Window window_membership(const PerfectComplex& e, const BoundedComplex& m, const TruncationOptions& opts = {});

}  // namespace aisle
