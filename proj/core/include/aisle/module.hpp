#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "aisle/algebra.hpp"

namespace aisle {

/// Finite-dimensional left module: one action matrix per algebra basis
/// element. Cheap to copy; the data is shared and immutable.
class FDModule {
 public:
  FDModule() = default;
  /// Verifies the representation axioms on all basis pairs.
  FDModule(AlgebraPtr algebra, std::size_t dim, std::vector<Matrix> action);
  /// Skips the axiom check; for modules built from verified pieces.
  static FDModule unchecked(AlgebraPtr algebra, std::size_t dim, std::vector<Matrix> action);
  static FDModule zero(AlgebraPtr algebra);

  bool valid() const noexcept { return d_ != nullptr; }
  const AlgebraPtr& algebra() const { return d_->algebra; }
  Field field() const { return d_->algebra->field(); }
  std::size_t dim() const { return d_->dim; }
  const Matrix& act(std::size_t basis_index) const { return d_->action.at(basis_index); }
  Matrix act_by(const Matrix& element) const;
  /// Action of the i-th idempotent.
  const Matrix& idempotent_action(std::size_t i) const { return d_->idempotent_action.at(i); }
  /// Basis of e_i M.
  const Subspace& peirce(std::size_t i) const { return d_->peirce.at(i); }

  /// Same owning algebra (by identity).
  bool compatible(const FDModule& o) const { return valid() && o.valid() && algebra() == o.algebra(); }

 private:
  struct Data {
    AlgebraPtr algebra;
    std::size_t dim = 0;
    std::vector<Matrix> action;
    std::vector<Matrix> idempotent_action;
    std::vector<Subspace> peirce;
  };
  static FDModule build(AlgebraPtr algebra, std::size_t dim, std::vector<Matrix> action, bool check);
  std::shared_ptr<const Data> d_;
};

/// Throws Mismatch unless both modules live over the same algebra object.
void require_same_algebra(const FDModule& a, const FDModule& b);

/// True iff m (target.dim x source.dim) intertwines the actions.
bool is_module_map(const FDModule& source, const FDModule& target, const Matrix& m);

struct ModuleMap {
  FDModule source;
  FDModule target;
  Matrix matrix;

  /// Throws VerificationFailure if `matrix` is not A-linear.
  ModuleMap(FDModule s, FDModule t, Matrix m);
  static ModuleMap unchecked(FDModule s, FDModule t, Matrix m);
};

/// Basis of Hom_A(M, N) as matrices (N.dim x M.dim).
std::vector<Matrix> hom_module(const FDModule& m, const FDModule& n);
std::size_t hom_dim(const FDModule& m, const FDModule& n);

FDModule regular_module(const AlgebraPtr& a);
/// A e_i with the left regular action, in the basis projective_basis(i).
FDModule projective(const AlgebraPtr& a, std::size_t i);
/// ⊕ P(v) over the listed vertices, in order.
FDModule projective_sum(const AlgebraPtr& a, const std::vector<std::size_t>& vertices);
/// Top of P(i).
FDModule simple(const AlgebraPtr& a, std::size_t i);

FDModule direct_sum(const std::vector<FDModule>& parts, const AlgebraPtr& a);
FDModule direct_sum(const FDModule& x, const FDModule& y);

/// Submodule spanned by the independent columns of `basis`; throws
/// InvalidInput if the span is not invariant. Returns the module in the
/// given basis.
FDModule submodule(const FDModule& m, const Matrix& basis);

struct Quotient {
  FDModule module;
  Matrix projection;  // dim Q x dim M
  Matrix section;     // dim M x dim Q, projection * section = 1 (linear only)
};
/// M / S for an invariant subspace S (basis columns).
Quotient quotient(const FDModule& m, const Matrix& sub);

/// Span of r * M over the radical r of the algebra.
Matrix radical_submodule(const FDModule& m);
Quotient top(const FDModule& m);

/// Element of Hom(P(i), N) corresponding to m ∈ e_i N: x ↦ x·m.
Matrix map_from_projective(const AlgebraPtr& a, std::size_t i, const FDModule& n, const Matrix& m);
/// The map P(i) -> P(j), x ↦ x·r, for r ∈ e_i A e_j given as an algebra vector.
Matrix projective_map(const AlgebraPtr& a, std::size_t i, std::size_t j, const Matrix& r);
/// Inverse of projective_map: the algebra element r with phi(e_i) = r.
Matrix projective_map_element(const AlgebraPtr& a, std::size_t i, std::size_t j, const Matrix& phi);

/// Representation of a bound quiver algebra from vector spaces and arrow
/// matrices (arrow a: s -> t gives a dims[t] x dims[s] matrix).
FDModule module_from_representation(const AlgebraPtr& a, const std::vector<std::size_t>& dims,
                                    const std::vector<Matrix>& arrows);

struct ProjectiveCover {
  std::vector<std::size_t> vertices;  // summands P(v) of the cover, in order
  FDModule module;
  Matrix map;  // surjection module -> M
};
/// Cover by projectives generated from lifts of a top basis, choosing
/// generators greedily so that no summand is redundant.
ProjectiveCover projective_cover(const FDModule& m);

struct Presentation {
  ProjectiveCover p0;
  ProjectiveCover p1;  // covers ker(p0.map)
  Matrix d;            // P1 -> P0
};
Presentation minimal_presentation(const FDModule& m);

/// Some isomorphism M -> N when one is found (random search over Hom with
/// the given seed); nullopt means none was found.
std::optional<Matrix> find_isomorphism(const FDModule& m, const FDModule& n, std::uint64_t seed = 1);

/// An element m with A·m = M, when found by seeded search.
std::optional<Matrix> find_cyclic_generator(const FDModule& m, std::uint64_t seed = 1);

}  // namespace aisle
