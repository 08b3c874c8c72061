#include "aisle/module.hpp"

#include <random>

#include "aisle/error.hpp"

namespace aisle {

namespace {

std::vector<std::size_t> checked_elements(const FDAlgebra& a) { return a.generators(); }

Matrix random_combination(std::mt19937_64& rng, std::size_t n, Field f) {
  Matrix v(n, 1, f);
  for (std::size_t i = 0; i < n; ++i) v(i, 0) = f.from_int(static_cast<long long>(rng() % 11) - 5);
  return v;
}

}  // namespace

FDModule FDModule::build(AlgebraPtr algebra, std::size_t dim, std::vector<Matrix> action, bool check) {
  if (!algebra) throw InvalidInput("module without an algebra");
  const FDAlgebra& a = *algebra;
  if (action.size() != a.dim()) throw InvalidInput("module needs one action matrix per algebra basis element");
  for (const auto& m : action) {
    if (m.rows() != dim || m.cols() != dim) throw InvalidInput("action matrix has the wrong shape");
    if (m.field() != a.field()) throw Mismatch("action matrix over the wrong field");
  }
  auto data = std::make_shared<Data>();
  data->algebra = std::move(algebra);
  data->dim = dim;
  data->action = std::move(action);
  FDModule out;
  out.d_ = data;
  if (check) {
    if (!out.act_by(a.unit()).is_identity()) throw VerificationFailure("unit does not act as the identity");
    for (std::size_t i = 0; i < a.dim(); ++i) {
      for (std::size_t j = 0; j < a.dim(); ++j) {
        if (out.act(i) * out.act(j) != out.act_by(a.left(i).col(j))) {
          throw VerificationFailure("action is not multiplicative at (" + a.labels()[i] + ", " + a.labels()[j] + ")");
        }
      }
    }
  }
  for (std::size_t i = 0; i < a.idempotent_count(); ++i) {
    data->idempotent_action.push_back(out.act_by(a.idempotent(i)));
    data->peirce.emplace_back(column_space_basis(data->idempotent_action.back()));
  }
  return out;
}

FDModule::FDModule(AlgebraPtr algebra, std::size_t dim, std::vector<Matrix> action)
    : FDModule(build(std::move(algebra), dim, std::move(action), true)) {}

FDModule FDModule::unchecked(AlgebraPtr algebra, std::size_t dim, std::vector<Matrix> action) {
  return build(std::move(algebra), dim, std::move(action), false);
}

FDModule FDModule::zero(AlgebraPtr algebra) {
  const std::size_t n = algebra->dim();
  const Field f = algebra->field();
  return unchecked(std::move(algebra), 0, std::vector<Matrix>(n, Matrix(0, 0, f)));
}

Matrix FDModule::act_by(const Matrix& element) const {
  Matrix out(dim(), dim(), field());
  for (std::size_t k = 0; k < element.rows(); ++k) {
    if (!element(k, 0).is_zero()) out += element(k, 0) * act(k);
  }
  return out;
}

void require_same_algebra(const FDModule& a, const FDModule& b) {
  if (!a.compatible(b)) throw Mismatch("modules live over different algebras");
}

bool is_module_map(const FDModule& source, const FDModule& target, const Matrix& m) {
  require_same_algebra(source, target);
  if (m.rows() != target.dim() || m.cols() != source.dim() || m.field() != source.field()) return false;
  const FDAlgebra& a = *source.algebra();
  for (std::size_t i = 0; i < a.idempotent_count(); ++i) {
    if (target.idempotent_action(i) * m != m * source.idempotent_action(i)) return false;
  }
  for (auto g : checked_elements(a)) {
    if (target.act(g) * m != m * source.act(g)) return false;
  }
  return true;
}

ModuleMap::ModuleMap(FDModule s, FDModule t, Matrix m) : source(std::move(s)), target(std::move(t)), matrix(std::move(m)) {
  if (!is_module_map(source, target, matrix)) throw VerificationFailure("matrix is not a module homomorphism");
}

ModuleMap ModuleMap::unchecked(FDModule s, FDModule t, Matrix m) {
  ModuleMap out(FDModule::zero(s.algebra()), FDModule::zero(s.algebra()), Matrix(0, 0, s.field()));
  out.source = std::move(s);
  out.target = std::move(t);
  out.matrix = std::move(m);
  return out;
}

std::vector<Matrix> hom_module(const FDModule& m, const FDModule& n) {
  require_same_algebra(m, n);
  const FDAlgebra& a = *m.algebra();
  const Field f = a.field();
  const std::size_t dm = m.dim();
  const std::size_t dn = n.dim();
  if (dm == 0 || dn == 0) return {};

  // X commutes with the idempotents iff X = sum_i V_i Y_i U*_i, where U*
  // are the coordinate rows dual to the Peirce decomposition of M.
  const std::size_t r = a.idempotent_count();
  std::vector<Matrix> u_parts;
  for (std::size_t i = 0; i < r; ++i) u_parts.push_back(m.peirce(i).basis());
  const auto u_inv = inverse(hstack(u_parts, dm, f));
  if (!u_inv) throw VerificationFailure("Peirce decomposition of a module is not direct");
  struct Unknown {
    std::size_t block, row, col;
  };
  std::vector<Unknown> unknowns;
  std::vector<Matrix> ustar;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < r; ++i) {
    ustar.push_back(u_inv->block(offset, 0, u_parts[i].cols(), dm));
    offset += u_parts[i].cols();
    for (std::size_t row = 0; row < n.peirce(i).dim(); ++row) {
      for (std::size_t col = 0; col < ustar[i].rows(); ++col) unknowns.push_back({i, row, col});
    }
  }
  if (unknowns.empty()) return {};

  std::vector<std::vector<Scalar>> rows;
  for (auto g : checked_elements(a)) {
    std::vector<Matrix> av;
    std::vector<Matrix> bu;
    for (std::size_t i = 0; i < r; ++i) {
      av.push_back(n.act(g) * n.peirce(i).basis());
      bu.push_back(ustar[i] * m.act(g));
    }
    for (std::size_t p = 0; p < dn; ++p) {
      for (std::size_t q = 0; q < dm; ++q) {
        std::vector<Scalar> row(unknowns.size(), f.zero());
        bool nonzero = false;
        for (std::size_t u = 0; u < unknowns.size(); ++u) {
          const auto& [i, rr, cc] = unknowns[u];
          Scalar x = av[i](p, rr) * ustar[i](cc, q) - n.peirce(i).basis()(p, rr) * bu[i](cc, q);
          if (!x.is_zero()) {
            nonzero = true;
            row[u] = std::move(x);
          }
        }
        if (nonzero) rows.push_back(std::move(row));
      }
    }
  }
  Matrix system(rows.size(), unknowns.size(), f);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < unknowns.size(); ++j) system(i, j) = rows[i][j];
  }
  const Matrix kernel = kernel_basis(system);
  std::vector<Matrix> out;
  for (std::size_t c = 0; c < kernel.cols(); ++c) {
    Matrix x(dn, dm, f);
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
      if (kernel(u, c).is_zero()) continue;
      const auto& [i, rr, cc] = unknowns[u];
      const Matrix& v = n.peirce(i).basis();
      for (std::size_t p = 0; p < dn; ++p) {
        if (v(p, rr).is_zero()) continue;
        for (std::size_t q = 0; q < dm; ++q) {
          if (!ustar[i](cc, q).is_zero()) x(p, q) += kernel(u, c) * v(p, rr) * ustar[i](cc, q);
        }
      }
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::size_t hom_dim(const FDModule& m, const FDModule& n) { return hom_module(m, n).size(); }

FDModule regular_module(const AlgebraPtr& a) {
  std::vector<Matrix> action;
  for (std::size_t k = 0; k < a->dim(); ++k) action.push_back(a->left(k));
  return FDModule::unchecked(a, a->dim(), std::move(action));
}

FDModule projective(const AlgebraPtr& a, std::size_t i) {
  if (i >= a->idempotent_count()) throw InvalidInput("projective: idempotent index out of range");
  const Subspace& sub = a->projective_subspace(i);
  std::vector<Matrix> action;
  for (std::size_t k = 0; k < a->dim(); ++k) action.push_back(sub.coordinates_or_throw(a->left(k) * sub.basis()));
  return FDModule::unchecked(a, sub.dim(), std::move(action));
}

FDModule projective_sum(const AlgebraPtr& a, const std::vector<std::size_t>& vertices) {
  std::vector<FDModule> parts;
  for (auto v : vertices) parts.push_back(projective(a, v));
  return direct_sum(parts, a);
}

FDModule simple(const AlgebraPtr& a, std::size_t i) { return top(projective(a, i)).module; }

FDModule direct_sum(const std::vector<FDModule>& parts, const AlgebraPtr& a) {
  std::size_t dim = 0;
  for (const auto& p : parts) {
    if (p.algebra() != a) throw Mismatch("direct sum of modules over different algebras");
    dim += p.dim();
  }
  std::vector<Matrix> action;
  std::vector<Matrix> blocks(parts.size());
  for (std::size_t k = 0; k < a->dim(); ++k) {
    for (std::size_t j = 0; j < parts.size(); ++j) blocks[j] = parts[j].act(k);
    action.push_back(aisle::direct_sum(blocks, a->field()));
  }
  return FDModule::unchecked(a, dim, std::move(action));
}

FDModule direct_sum(const FDModule& x, const FDModule& y) {
  require_same_algebra(x, y);
  return direct_sum({x, y}, x.algebra());
}

FDModule submodule(const FDModule& m, const Matrix& basis) {
  if (basis.rows() != m.dim()) throw InvalidInput("submodule basis has the wrong ambient dimension");
  if (rank(basis) != basis.cols()) throw InvalidInput("submodule basis is dependent");
  const Subspace sub(basis);
  std::vector<Matrix> action;
  for (std::size_t k = 0; k < m.algebra()->dim(); ++k) {
    auto c = sub.coordinates(m.act(k) * basis);
    if (!c) throw InvalidInput("subspace is not a submodule");
    action.push_back(std::move(*c));
  }
  return FDModule::unchecked(m.algebra(), basis.cols(), std::move(action));
}

Quotient quotient(const FDModule& m, const Matrix& sub) {
  if (sub.rows() != m.dim()) throw InvalidInput("quotient: subspace has the wrong ambient dimension");
  const Matrix s = column_space_basis(sub);
  const Subspace space(s);
  for (std::size_t k = 0; k < m.algebra()->dim(); ++k) {
    if (!space.contains(m.act(k) * s)) throw InvalidInput("quotient by a subspace that is not a submodule");
  }
  const Matrix comp = complement_basis(s);
  const auto inv = inverse(hstack(s, comp));
  if (!inv) throw VerificationFailure("quotient: complement is not complementary");
  Matrix proj = inv->block(s.cols(), 0, comp.cols(), m.dim());
  std::vector<Matrix> action;
  for (std::size_t k = 0; k < m.algebra()->dim(); ++k) action.push_back(proj * m.act(k) * comp);
  return {FDModule::unchecked(m.algebra(), comp.cols(), std::move(action)), std::move(proj), comp};
}

Matrix radical_submodule(const FDModule& m) {
  const Matrix rad = radical_basis(*m.algebra());
  if (m.dim() == 0 || rad.cols() == 0) return Matrix(m.dim(), 0, m.field());
  std::vector<Matrix> parts;
  for (std::size_t c = 0; c < rad.cols(); ++c) parts.push_back(m.act_by(rad.col(c)));
  return column_space_basis(hstack(parts, m.dim(), m.field()));
}

Quotient top(const FDModule& m) { return quotient(m, radical_submodule(m)); }

Matrix map_from_projective(const AlgebraPtr& a, std::size_t i, const FDModule& n, const Matrix& m) {
  const Matrix& basis = a->projective_basis(i);
  Matrix out(n.dim(), basis.cols(), a->field());
  for (std::size_t c = 0; c < basis.cols(); ++c) out.set_block(0, c, n.act_by(basis.col(c)) * m);
  return out;
}

Matrix projective_map(const AlgebraPtr& a, std::size_t i, std::size_t j, const Matrix& r) {
  const Matrix& bi = a->projective_basis(i);
  const Subspace& pj = a->projective_subspace(j);
  return pj.coordinates_or_throw(a->right_by(r) * bi);
}

Matrix projective_map_element(const AlgebraPtr& a, std::size_t i, std::size_t j, const Matrix& phi) {
  return a->projective_basis(j) * (phi * a->projective_generator(i));
}

FDModule module_from_representation(const AlgebraPtr& a, const std::vector<std::size_t>& dims,
                                    const std::vector<Matrix>& arrows) {
  if (!a->path_data()) throw InvalidInput("module_from_representation needs a bound quiver algebra");
  const auto& pd = *a->path_data();
  const Quiver& q = pd.quiver;
  if (dims.size() != q.vertices.size() || arrows.size() != q.arrows.size()) {
    throw InvalidInput("representation does not match the quiver");
  }
  for (std::size_t k = 0; k < arrows.size(); ++k) {
    const auto& arr = q.arrows[k];
    if (arrows[k].rows() != dims[arr.target] || arrows[k].cols() != dims[arr.source]) {
      throw InvalidInput("matrix for arrow '" + arr.label + "' has the wrong shape");
    }
    bool is_basis = false;
    for (const auto& p : pd.basis_paths) is_basis = is_basis || (p.length() == 1 && p.arrows[0] == k);
    if (!is_basis) throw InvalidInput("arrow '" + arr.label + "' is not a basis element; unsupported");
  }
  std::vector<std::size_t> offset(dims.size() + 1, 0);
  for (std::size_t v = 0; v < dims.size(); ++v) offset[v + 1] = offset[v] + dims[v];
  const std::size_t total = offset.back();
  const Field f = a->field();
  std::vector<Matrix> action;
  for (const auto& p : pd.basis_paths) {
    Matrix m = Matrix::identity(dims[p.source], f);
    for (auto k : p.arrows) m = arrows[k] * m;
    Matrix full(total, total, f);
    full.set_block(offset[p.target], offset[p.source], m);
    action.push_back(std::move(full));
  }
  return FDModule(a, total, std::move(action));
}

ProjectiveCover projective_cover(const FDModule& m) {
  const AlgebraPtr& a = m.algebra();
  const Field f = m.field();
  ProjectiveCover out{{}, FDModule::zero(a), Matrix(m.dim(), 0, f)};
  if (m.dim() == 0) return out;
  const Quotient t = top(m);
  Matrix span = radical_submodule(m);
  std::vector<Matrix> maps;
  for (std::size_t i = 0; i < a->idempotent_count() && span.cols() < m.dim(); ++i) {
    const Matrix& tb = t.module.peirce(i).basis();
    for (std::size_t c = 0; c < tb.cols() && span.cols() < m.dim(); ++c) {
      const Matrix gen = m.idempotent_action(i) * (t.section * tb.col(c));
      if (rank(hstack(span, gen)) == span.cols()) continue;
      Matrix phi = map_from_projective(a, i, m, gen);
      span = column_space_basis(hstack(span, phi));
      out.vertices.push_back(i);
      maps.push_back(std::move(phi));
    }
  }
  out.module = projective_sum(a, out.vertices);
  out.map = hstack(maps, m.dim(), f);
  if (rank(out.map) != m.dim()) throw VerificationFailure("projective cover is not surjective");
  return out;
}

Presentation minimal_presentation(const FDModule& m) {
  ProjectiveCover p0 = projective_cover(m);
  const Matrix k = kernel_basis(p0.map);
  const FDModule kmod = submodule(p0.module, k);
  ProjectiveCover p1 = projective_cover(kmod);
  Matrix d = k * p1.map;
  if (!(p0.map * d).is_zero()) throw VerificationFailure("presentation composite is nonzero");
  return {std::move(p0), std::move(p1), std::move(d)};
}

std::optional<Matrix> find_isomorphism(const FDModule& m, const FDModule& n, std::uint64_t seed) {
  require_same_algebra(m, n);
  if (m.dim() != n.dim()) return std::nullopt;
  if (m.dim() == 0) return Matrix(0, 0, m.field());
  const auto basis = hom_module(m, n);
  if (basis.empty()) return std::nullopt;
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Matrix c = random_combination(rng, basis.size(), m.field());
    Matrix x(n.dim(), m.dim(), m.field());
    for (std::size_t i = 0; i < basis.size(); ++i) x += c(i, 0) * basis[i];
    if (rank(x) == m.dim()) return x;
  }
  return std::nullopt;
}

std::optional<Matrix> find_cyclic_generator(const FDModule& m, std::uint64_t seed) {
  const FDAlgebra& a = *m.algebra();
  if (m.dim() == 0) return Matrix(0, 1, m.field());
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Matrix v = random_combination(rng, m.dim(), m.field());
    std::vector<Matrix> images;
    for (std::size_t k = 0; k < a.dim(); ++k) images.push_back(m.act(k) * v);
    if (rank(hstack(images, m.dim(), m.field())) == m.dim()) return v;
  }
  return std::nullopt;
}

}  // namespace aisle
