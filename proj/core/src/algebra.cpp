#include "aisle/algebra.hpp"

#include <map>
#include <set>
#include <tuple>

#include "aisle/error.hpp"

namespace aisle {

namespace {

using SparseVec = std::vector<std::pair<std::size_t, Scalar>>;

Matrix trace_form(const FDAlgebra& a) {
  const std::size_t n = a.dim();
  Matrix t(n, n, a.field());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Scalar s = a.field().zero();
      const Matrix& li = a.left(i);
      const Matrix& lj = a.left(j);
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
          if (li(k, l).is_zero() || lj(l, k).is_zero()) continue;
          s += li(k, l) * lj(l, k);
        }
      }
      t(i, j) = s;
      t(j, i) = s;
    }
  }
  return t;
}

bool is_two_sided_ideal(const FDAlgebra& a, const Matrix& ideal) {
  if (ideal.cols() == 0) return true;
  const Subspace sub(ideal);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (!sub.contains(a.left(i) * ideal) || !sub.contains(a.right(i) * ideal)) return false;
  }
  return true;
}

std::string path_label(const Quiver& q, const Path& p) {
  if (p.arrows.empty()) return "e_" + q.vertices[p.source];
  std::string out;
  for (std::size_t i = 0; i < p.arrows.size(); ++i) {
    if (i > 0) out += '.';
    out += q.arrows[p.arrows[i]].label;
  }
  return out;
}

}  // namespace

void Quiver::validate() const {
  std::set<std::string> seen;
  for (const auto& v : vertices) {
    if (!seen.insert(v).second) throw InvalidInput("duplicate vertex label '" + v + "'");
  }
  std::set<std::string> arrow_seen;
  for (const auto& a : arrows) {
    if (!arrow_seen.insert(a.label).second) throw InvalidInput("duplicate arrow label '" + a.label + "'");
    if (a.source >= vertices.size() || a.target >= vertices.size()) {
      throw InvalidInput("arrow '" + a.label + "' has an undeclared endpoint");
    }
  }
}

std::optional<std::size_t> Quiver::vertex_index(const std::string& label) const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] == label) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Quiver::arrow_index(const std::string& label) const {
  for (std::size_t i = 0; i < arrows.size(); ++i) {
    if (arrows[i].label == label) return i;
  }
  return std::nullopt;
}

FDAlgebra::FDAlgebra(Field field, std::vector<std::string> labels, std::vector<Matrix> left_mult, Matrix unit,
                     std::vector<Matrix> idempotents)
    : field_(field),
      labels_(std::move(labels)),
      left_(std::move(left_mult)),
      unit_(std::move(unit)),
      idempotents_(std::move(idempotents)) {
  const std::size_t n = labels_.size();
  if (n == 0) throw InvalidInput("algebra must have positive dimension");
  if (left_.size() != n) throw InvalidInput("multiplication table size does not match the basis");
  for (const auto& l : left_) {
    if (l.rows() != n || l.cols() != n) throw InvalidInput("multiplication table entry has the wrong shape");
    if (l.field() != field_) throw Mismatch("multiplication table over the wrong field");
  }
  auto check_vector = [&](const Matrix& v, const char* what) {
    if (v.rows() != n || v.cols() != 1) throw InvalidInput(std::string(what) + " is not an algebra vector");
    if (v.field() != field_) throw Mismatch(std::string(what) + " over the wrong field");
  };
  check_vector(unit_, "unit");
  for (const auto& e : idempotents_) check_vector(e, "idempotent");

  right_.assign(n, Matrix(n, n, field_));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t r = 0; r < n; ++r) right_[k](r, j) = left_[j](r, k);
    }
  }

  // Exhaustive associativity check on basis triples using sparse products.
  std::vector<std::vector<SparseVec>> prod(n, std::vector<SparseVec>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t r = 0; r < n; ++r) {
        if (!left_[i](r, j).is_zero()) prod[i][j].emplace_back(r, left_[i](r, j));
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        std::map<std::size_t, Scalar> lhs;
        for (const auto& [m, c] : prod[j][k]) {
          for (const auto& [r, x] : prod[i][m]) lhs.try_emplace(r, field_.zero()).first->second += c * x;
        }
        std::map<std::size_t, Scalar> rhs;
        for (const auto& [m, c] : prod[i][j]) {
          for (const auto& [r, x] : prod[m][k]) rhs.try_emplace(r, field_.zero()).first->second += c * x;
        }
        std::erase_if(lhs, [](const auto& e) { return e.second.is_zero(); });
        std::erase_if(rhs, [](const auto& e) { return e.second.is_zero(); });
        if (lhs != rhs) {
          throw VerificationFailure("multiplication is not associative at (" + labels_[i] + ", " + labels_[j] + ", " +
                                    labels_[k] + ")");
        }
      }
    }
  }
  if (!left_by(unit_).is_identity() || !right_by(unit_).is_identity()) {
    throw VerificationFailure("unit is not a two-sided identity");
  }
  if (idempotents_.empty()) throw InvalidInput("algebra needs at least one idempotent");
  Matrix total(n, 1, field_);
  for (std::size_t i = 0; i < idempotents_.size(); ++i) {
    total += idempotents_[i];
    for (std::size_t j = 0; j < idempotents_.size(); ++j) {
      const Matrix prod = multiply(idempotents_[i], idempotents_[j]);
      if (prod != (i == j ? idempotents_[i] : Matrix(n, 1, field_))) {
        throw VerificationFailure("idempotents are not orthogonal idempotents");
      }
    }
    if (idempotents_[i].is_zero()) throw VerificationFailure("zero idempotent");
  }
  if (total != unit_) throw VerificationFailure("idempotents do not sum to the unit");

  for (const auto& e : idempotents_) {
    Subspace basis(column_space_basis(right_by(e)));
    projective_generators_.push_back(basis.coordinates_or_throw(e));
    projective_bases_.push_back(std::move(basis));
  }
  for (std::size_t i = 0; i < n; ++i) generators_.push_back(i);
}

Matrix FDAlgebra::left_by(const Matrix& x) const {
  Matrix out(dim(), dim(), field_);
  for (std::size_t k = 0; k < dim(); ++k) {
    if (!x(k, 0).is_zero()) out += x(k, 0) * left_[k];
  }
  return out;
}

Matrix FDAlgebra::right_by(const Matrix& x) const {
  Matrix out(dim(), dim(), field_);
  for (std::size_t k = 0; k < dim(); ++k) {
    if (!x(k, 0).is_zero()) out += x(k, 0) * right_[k];
  }
  return out;
}

Matrix FDAlgebra::multiply(const Matrix& x, const Matrix& y) const { return left_by(x) * y; }

Matrix FDAlgebra::basis_vector(std::size_t i) const {
  Matrix v(dim(), 1, field_);
  v(i, 0) = field_.one();
  return v;
}

FDAlgebra FDAlgebra::with_presentation(std::vector<std::size_t> generators, std::optional<Matrix> radical,
                                       std::optional<PathData> paths) const {
  FDAlgebra copy = *this;
  for (auto g : generators) {
    if (g >= dim()) throw InvalidInput("generator index out of range");
  }
  if (radical && !is_two_sided_ideal(*this, *radical)) throw VerificationFailure("declared radical is not an ideal");
  copy.generators_ = std::move(generators);
  copy.structural_radical_ = std::move(radical);
  copy.path_data_ = std::move(paths);
  return copy;
}

AlgebraPtr build_bound_quiver_algebra(const Quiver& q, const std::vector<Relation>& relations,
                                      std::size_t length_bound, Field field) {
  q.validate();
  if (q.vertices.empty()) throw InvalidInput("quiver has no vertices");
  if (length_bound == 0) throw InvalidInput("length bound must be positive");

  // paths[l] lists all paths of length l; index[l] looks them up by arrows.
  std::vector<std::vector<Path>> paths(length_bound + 1);
  std::vector<std::map<std::vector<std::size_t>, std::size_t>> index(length_bound + 1);
  for (std::size_t v = 0; v < q.vertices.size(); ++v) paths[0].push_back(Path{v, v, {}});
  for (std::size_t l = 1; l <= length_bound; ++l) {
    for (const auto& p : paths[l - 1]) {
      for (std::size_t a = 0; a < q.arrows.size(); ++a) {
        if (q.arrows[a].source != p.target) continue;
        Path ext{p.source, q.arrows[a].target, p.arrows};
        ext.arrows.push_back(a);
        index[l][ext.arrows] = paths[l].size();
        paths[l].push_back(std::move(ext));
      }
    }
  }

  for (const auto& r : relations) {
    if (r.terms.empty()) throw InvalidInput("empty relation");
    bool nonzero = false;
    const Path& first = r.terms.front().second;
    for (const auto& [c, p] : r.terms) {
      if (c.field() != field) throw Mismatch("relation coefficient over the wrong field");
      if (!c.is_zero()) nonzero = true;
      if (p.length() == 0) throw InvalidInput("relations must involve paths of positive length");
      if (p.source != first.source || p.target != first.target) throw InvalidInput("relation paths are not parallel");
      if (p.length() != first.length()) {
        throw InvalidInput("relation is not homogeneous: all paths must have the same length");
      }
      if (p.length() > length_bound) throw InvalidInput("relation longer than the length bound");
      if (!index[p.length()].count(p.arrows)) throw InvalidInput("relation term is not a path of the quiver");
      const Path& known = paths[p.length()][index[p.length()].at(p.arrows)];
      if (known.source != p.source || known.target != p.target) throw InvalidInput("relation path endpoints are wrong");
    }
    if (!nonzero) throw InvalidInput("relation has no nonzero coefficient");
  }

  using SliceKey = std::tuple<std::size_t, std::size_t, std::size_t>;
  std::map<SliceKey, std::vector<std::size_t>> slices;  // (length, source, target) -> path indices
  std::vector<std::vector<std::size_t>> slice_pos(length_bound + 1);
  for (std::size_t l = 0; l <= length_bound; ++l) {
    slice_pos[l].resize(paths[l].size());
    for (std::size_t i = 0; i < paths[l].size(); ++i) {
      auto& s = slices[{l, paths[l][i].source, paths[l][i].target}];
      slice_pos[l][i] = s.size();
      s.push_back(i);
    }
  }

  // Ideal elements u * r * w, grouped by slice.
  std::map<SliceKey, std::vector<std::vector<Scalar>>> generated;
  for (std::size_t l = 1; l <= length_bound; ++l) {
    for (const auto& r : relations) {
      const Path& shape = r.terms.front().second;
      const std::size_t m = shape.length();
      if (m > l) continue;
      for (std::size_t a = 0; a + m <= l; ++a) {
        const std::size_t b = l - m - a;
        for (const auto& u : paths[a]) {
          if (u.target != shape.source) continue;
          for (const auto& w : paths[b]) {
            if (w.source != shape.target) continue;
            const SliceKey key{l, u.source, w.target};
            std::vector<Scalar> row(slices.at(key).size(), field.zero());
            for (const auto& [c, p] : r.terms) {
              std::vector<std::size_t> arrows = u.arrows;
              arrows.insert(arrows.end(), p.arrows.begin(), p.arrows.end());
              arrows.insert(arrows.end(), w.arrows.begin(), w.arrows.end());
              row[slice_pos[l][index[l].at(arrows)]] += c;
            }
            generated[key].push_back(std::move(row));
          }
        }
      }
    }
  }

  // Row reduce every slice; non-pivot paths form the basis.
  std::vector<Path> basis_paths;
  std::vector<std::vector<std::optional<std::size_t>>> basis_of(length_bound);
  std::map<SliceKey, Rref> reduced;
  for (std::size_t l = 0; l < length_bound; ++l) basis_of[l].assign(paths[l].size(), std::nullopt);
  for (const auto& [key, members] : slices) {
    const std::size_t l = std::get<0>(key);
    std::vector<bool> pivot(members.size(), false);
    auto it = generated.find(key);
    if (it != generated.end()) {
      Matrix m(it->second.size(), members.size(), field);
      for (std::size_t r = 0; r < it->second.size(); ++r) {
        for (std::size_t c = 0; c < members.size(); ++c) m(r, c) = it->second[r][c];
      }
      Rref rr = rref(m);
      for (auto p : rr.pivots) pivot[p] = true;
      reduced.emplace(key, std::move(rr));
    }
    if (l == length_bound) {
      for (std::size_t c = 0; c < members.size(); ++c) {
        if (!pivot[c]) {
          throw InvalidInput("ideal is not admissible within length bound " + std::to_string(length_bound) + ": path " +
                             path_label(q, paths[l][members[c]]) + " survives");
        }
      }
      continue;
    }
    for (std::size_t c = 0; c < members.size(); ++c) {
      if (pivot[c]) continue;
      basis_of[l][members[c]] = basis_paths.size();
      basis_paths.push_back(paths[l][members[c]]);
    }
  }
  // Trivial paths come first since slices are ordered by length.
  const std::size_t n = basis_paths.size();

  auto normal_form = [&](const std::vector<std::size_t>& arrows, std::size_t vertex) -> SparseVec {
    const std::size_t l = arrows.size();
    if (l >= length_bound) return {};
    const std::size_t pi = l == 0 ? vertex : index[l].at(arrows);
    if (basis_of[l][pi]) return {{*basis_of[l][pi], field.one()}};
    const Path& p = paths[l][pi];
    const SliceKey key{l, p.source, p.target};
    const Rref& rr = reduced.at(key);
    const auto& members = slices.at(key);
    const std::size_t col = slice_pos[l][pi];
    std::size_t row = 0;
    while (rr.pivots[row] != col) ++row;
    SparseVec out;
    for (std::size_t c = 0; c < members.size(); ++c) {
      if (c == col || rr.reduced(row, c).is_zero()) continue;
      out.emplace_back(*basis_of[l][members[c]], -rr.reduced(row, c));
    }
    return out;
  };

  std::vector<std::string> labels;
  for (const auto& p : basis_paths) labels.push_back(path_label(q, p));
  std::vector<Matrix> left(n, Matrix(n, n, field));
  for (std::size_t i = 0; i < n; ++i) {
    const Path& pi = basis_paths[i];
    for (std::size_t j = 0; j < n; ++j) {
      const Path& pj = basis_paths[j];
      // b_i * b_j walks b_j first.
      if (pj.target != pi.source) continue;
      std::vector<std::size_t> arrows = pj.arrows;
      arrows.insert(arrows.end(), pi.arrows.begin(), pi.arrows.end());
      for (const auto& [k, c] : normal_form(arrows, pj.source)) left[i](k, j) += c;
    }
  }
  Matrix unit(n, 1, field);
  std::vector<Matrix> idempotents;
  for (std::size_t v = 0; v < q.vertices.size(); ++v) {
    Matrix e(n, 1, field);
    e(v, 0) = field.one();
    unit(v, 0) = field.one();
    idempotents.push_back(std::move(e));
  }
  FDAlgebra algebra(field, std::move(labels), std::move(left), std::move(unit), std::move(idempotents));

  std::vector<std::size_t> gens;
  std::vector<std::size_t> rad_cols;
  for (std::size_t k = 0; k < n; ++k) {
    if (basis_paths[k].length() == 1) gens.push_back(k);
    if (basis_paths[k].length() >= 1) rad_cols.push_back(k);
  }
  Matrix rad = Matrix::identity(n, field).select_columns(rad_cols);
  return std::make_shared<const FDAlgebra>(
      algebra.with_presentation(std::move(gens), std::move(rad), FDAlgebra::PathData{q, std::move(basis_paths)}));
}

AlgebraPtr beilinson_algebra(std::size_t d, Field field) {
  Quiver q;
  for (std::size_t v = 0; v <= d; ++v) q.vertices.push_back(std::to_string(v));
  // arrow (v, k) has index v * (d + 1) + k
  for (std::size_t v = 0; v < d; ++v) {
    for (std::size_t k = 0; k <= d; ++k) {
      q.arrows.push_back({"x" + std::to_string(k) + "_" + std::to_string(v), v, v + 1});
    }
  }
  auto arrow = [d](std::size_t v, std::size_t k) { return v * (d + 1) + k; };
  std::vector<Relation> rels;
  for (std::size_t v = 0; v + 2 <= d; ++v) {
    for (std::size_t i = 0; i <= d; ++i) {
      for (std::size_t j = i + 1; j <= d; ++j) {
        Relation r;
        r.terms.emplace_back(field.one(), Path{v, v + 2, {arrow(v, i), arrow(v + 1, j)}});
        r.terms.emplace_back(-field.one(), Path{v, v + 2, {arrow(v, j), arrow(v + 1, i)}});
        rels.push_back(std::move(r));
      }
    }
  }
  return build_bound_quiver_algebra(q, rels, d + 1, field);
}

namespace {

std::size_t count_monomials(std::size_t vars, std::size_t degree) {
  if (vars == 1) return 1;
  std::size_t total = 0;
  for (std::size_t e = 0; e <= degree; ++e) total += count_monomials(vars - 1, degree - e);
  return total;
}

}  // namespace

std::size_t graded_hom_dim(std::size_t d, long a, long b) {
  if (b < a) return 0;
  return count_monomials(d + 1, static_cast<std::size_t>(b - a));
}

std::size_t path_count(const FDAlgebra& a, std::size_t from, std::size_t to) {
  return rank(a.left_by(a.idempotent(to)) * a.right_by(a.idempotent(from)));
}

Matrix radical(const FDAlgebra& a) {
  if (!a.field().is_rational()) {
    throw UnsupportedField("radical via the trace form needs characteristic 0, got " + a.field().name());
  }
  Matrix rad = kernel_basis(trace_form(a));
  if (!is_two_sided_ideal(a, rad)) throw VerificationFailure("trace-form kernel is not a two-sided ideal");
  Matrix power = rad;
  for (std::size_t step = 0; power.cols() > 0; ++step) {
    if (step > a.dim()) throw VerificationFailure("trace-form kernel is not nilpotent");
    power = product_space(a, rad, power);
  }
  if (rad.cols() > 0) {
    const AlgebraPtr top = quotient_algebra(a, rad);
    if (rank(trace_form(*top)) != top->dim()) throw VerificationFailure("quotient by the radical is not semisimple");
  }
  return rad;
}

Matrix radical_basis(const FDAlgebra& a) {
  if (a.structural_radical()) return *a.structural_radical();
  return radical(a);
}

AlgebraPtr quotient_algebra(const FDAlgebra& a, const Matrix& ideal) {
  if (!is_two_sided_ideal(a, ideal)) throw InvalidInput("quotient by a subspace that is not a two-sided ideal");
  const std::size_t n = a.dim();
  const Matrix comp = complement_basis(ideal);
  const std::size_t m = comp.cols();
  const auto inv = inverse(hstack(ideal, comp));
  if (!inv) throw VerificationFailure("ideal basis is dependent");
  const Matrix proj = inv->block(ideal.cols(), 0, m, n);

  std::vector<std::string> labels;
  std::vector<std::size_t> reps;
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t r = 0; r < n; ++r) {
      if (comp(r, c).is_one()) {
        reps.push_back(r);
        labels.push_back(a.labels()[r]);
        break;
      }
    }
  }
  std::vector<Matrix> left;
  for (std::size_t i = 0; i < m; ++i) left.push_back(proj * a.left(reps[i]) * comp);
  std::vector<Matrix> idempotents;
  for (std::size_t i = 0; i < a.idempotent_count(); ++i) {
    Matrix e = proj * a.idempotent(i);
    if (!e.is_zero()) idempotents.push_back(std::move(e));
  }
  return std::make_shared<const FDAlgebra>(a.field(), std::move(labels), std::move(left), proj * a.unit(),
                                           std::move(idempotents));
}

Matrix product_space(const FDAlgebra& a, const Matrix& x, const Matrix& y) {
  std::vector<Matrix> cols;
  for (std::size_t i = 0; i < x.cols(); ++i) cols.push_back(a.left_by(x.col(i)) * y);
  if (cols.empty()) return Matrix(a.dim(), 0, a.field());
  return column_space_basis(hstack(cols, a.dim(), a.field()));
}

bool is_algebra_isomorphism(const FDAlgebra& from, const FDAlgebra& to, const Matrix& phi) {
  if (from.field() != to.field() || phi.field() != from.field()) return false;
  if (phi.rows() != to.dim() || phi.cols() != from.dim() || from.dim() != to.dim()) return false;
  if (!inverse(phi)) return false;
  if (phi * from.unit() != to.unit()) return false;
  for (std::size_t i = 0; i < from.dim(); ++i) {
    const Matrix li = to.left_by(phi.col(i));
    for (std::size_t j = 0; j < from.dim(); ++j) {
      if (phi * from.left(i).col(j) != li * phi.col(j)) return false;
    }
  }
  return true;
}

AlgebraPtr field_algebra(Field field) {
  Quiver q;
  q.vertices = {"v"};
  return build_bound_quiver_algebra(q, {}, 1, field);
}

AlgebraPtr dual_numbers(Field field) {
  Quiver q;
  q.vertices = {"v"};
  q.arrows = {{"x", 0, 0}};
  Relation r;
  r.terms.emplace_back(field.one(), Path{0, 0, {0, 0}});
  return build_bound_quiver_algebra(q, {r}, 2, field);
}

AlgebraPtr kronecker_algebra(Field field) {
  Quiver q;
  q.vertices = {"v0", "v1"};
  q.arrows = {{"a", 0, 1}, {"b", 0, 1}};
  return build_bound_quiver_algebra(q, {}, 2, field);
}

AlgebraPtr matrix_algebra(std::size_t n, Field field) {
  if (n == 0) throw InvalidInput("matrix algebra of size 0");
  const std::size_t dim = n * n;
  std::vector<std::string> labels;
  std::vector<Matrix> left;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      labels.push_back("E" + std::to_string(i) + std::to_string(j));
      Matrix l(dim, dim, field);
      // E_ij * E_jk = E_ik
      for (std::size_t k = 0; k < n; ++k) l(i * n + k, j * n + k) = field.one();
      left.push_back(std::move(l));
    }
  }
  Matrix unit(dim, 1, field);
  std::vector<Matrix> idempotents;
  for (std::size_t i = 0; i < n; ++i) {
    Matrix e(dim, 1, field);
    e(i * n + i, 0) = field.one();
    unit(i * n + i, 0) = field.one();
    idempotents.push_back(std::move(e));
  }
  return std::make_shared<const FDAlgebra>(field, std::move(labels), std::move(left), std::move(unit),
                                           std::move(idempotents));
}

}  // namespace aisle
