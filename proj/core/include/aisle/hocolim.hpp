#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "aisle/complex.hpp"

namespace aisle {

/// Diagram of complexes over a finite poset, or an eventually constant
/// sequence G_0 -> G_1 -> ... -> G_n = G_{n+1} = ... .
class DirectedSystem {
 public:
  /// maps[(s, t)] = μ_{s,t} for every s < t; the keys define the order.
  /// Rejects cycles, missing composites and non-functorial triples.
  DirectedSystem(AlgebraPtr a, std::vector<BoundedComplex> objects, std::map<std::pair<std::size_t, std::size_t>, ChainMap> maps);
  /// Sequence with steps[i]: G_i -> G_{i+1}; constant after the last object.
  static DirectedSystem sequence(AlgebraPtr a, std::vector<BoundedComplex> objects, std::vector<ChainMap> steps);

  const AlgebraPtr& algebra() const { return algebra_; }
  std::size_t size() const { return objects_.size(); }
  const BoundedComplex& object(std::size_t s) const { return objects_.at(s); }
  bool less(std::size_t s, std::size_t t) const { return maps_.count({s, t}) > 0; }
  /// μ_{s,t}; the identity when s == t.
  ChainMap map(std::size_t s, std::size_t t) const;
  bool is_sequence() const { return sequence_; }
  /// Strictly increasing chains s_0 < ... < s_r.
  std::vector<std::vector<std::size_t>> chains(std::size_t r) const;

 private:
  AlgebraPtr algebra_;
  std::vector<BoundedComplex> objects_;
  std::map<std::pair<std::size_t, std::size_t>, ChainMap> maps_;
  bool sequence_ = false;
};

struct Colimit {
  BoundedComplex complex;
  std::vector<ChainMap> legs;  // G_s -> colim
};
/// Degreewise colimit: (⊕ G_s) / span{x - μ_{s,t} x}.
Colimit colimit(const DirectedSystem& sys);

struct Hocolim {
  BoundedComplex complex;
  ChainMap to_colimit;  // canonical comparison map
  bool quasi_iso = false;
};
/// Finite Milnor telescope cone(1 - μ: ⊕_{i<n} G_i -> ⊕_{i<=n} G_i) of a sequence.
Hocolim hocolim_sequence(const DirectedSystem& sys);
/// Totalization of the bicomplex with columns ⊕_{s_0 < ... < s_r} G_{s_0} in
/// horizontal degree -r and differential
/// (x; s_0 < ... < s_r) ↦ (μ_{s_0 s_1} x; s_1 < ...) + Σ_{i>=1} (-1)^i (x; ... ŝ_i ...).
Hocolim hocolim_bicomplex(const DirectedSystem& sys);

}  // namespace aisle
