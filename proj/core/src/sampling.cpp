#include "aisle/sampling.hpp"

#include <set>

namespace aisle {

Matrix Sampler::matrix(std::size_t rows, std::size_t cols, Field f, int bound) {
  Matrix m(rows, cols, f);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = f.from_int(small(bound));
  }
  return m;
}

FDModule Sampler::module(const AlgebraPtr& a, std::size_t max_summands) {
  const std::size_t count = 1 + below(max_summands);
  std::vector<std::size_t> vs;
  for (std::size_t i = 0; i < count; ++i) vs.push_back(below(a->idempotent_count()));
  const FDModule p = projective_sum(a, vs);
  if (below(3) == 0) return p;
  const Matrix v = matrix(p.dim(), 1, a->field(), 2);
  std::vector<Matrix> orbit;
  for (std::size_t k = 0; k < a->dim(); ++k) orbit.push_back(p.act(k) * v);
  const Matrix sub = column_space_basis(hstack(orbit, p.dim(), a->field()));
  return quotient(p, sub).module;
}

Matrix Sampler::module_map(const FDModule& m, const FDModule& n) {
  Matrix out(n.dim(), m.dim(), m.field());
  for (const Matrix& h : hom_module(m, n)) out += h * m.field().from_int(small(2));
  return out;
}

std::vector<Matrix> Sampler::differentials(const std::vector<FDModule>& terms) {
  std::vector<Matrix> diffs;
  for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
    const Field f = terms[i].field();
    const auto basis = hom_module(terms[i], terms[i + 1]);
    Matrix d(terms[i + 1].dim(), terms[i].dim(), f);
    if (i == 0) {
      d = module_map(terms[i], terms[i + 1]);
    } else if (!basis.empty()) {
      // Coefficients c with (Σ c_j h_j) ∘ d_prev = 0.
      const Matrix& prev = diffs.back();
      std::vector<Matrix> cols;
      for (const Matrix& h : basis) {
        const Matrix hp = h * prev;
        Matrix col(hp.rows() * hp.cols(), 1, f);
        for (std::size_t r = 0; r < hp.rows(); ++r) {
          for (std::size_t c = 0; c < hp.cols(); ++c) col(r * hp.cols() + c, 0) = hp(r, c);
        }
        cols.push_back(std::move(col));
      }
      const Matrix ker = kernel_basis(hstack(cols, terms[i + 1].dim() * prev.cols(), f));
      if (ker.cols() > 0) {
        const Matrix coeff = ker * matrix(ker.cols(), 1, f, 2);
        for (std::size_t j = 0; j < basis.size(); ++j) d += basis[j] * coeff(j, 0);
      }
    }
    diffs.push_back(std::move(d));
  }
  return diffs;
}

BoundedComplex Sampler::complex(const AlgebraPtr& a, int lo, std::size_t len) {
  std::vector<FDModule> terms;
  for (std::size_t i = 0; i < len; ++i) terms.push_back(module(a));
  std::vector<Matrix> diffs = differentials(terms);
  return BoundedComplex(a, lo, std::move(terms), std::move(diffs));
}

PerfectComplex Sampler::perfect(const AlgebraPtr& a, int lo, std::size_t len) {
  std::vector<std::vector<std::size_t>> vertices;
  std::vector<FDModule> terms;
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<std::size_t> vs(1 + below(2));
    for (auto& v : vs) v = below(a->idempotent_count());
    terms.push_back(projective_sum(a, vs));
    vertices.push_back(std::move(vs));
  }
  return PerfectComplex(a, lo, std::move(vertices), differentials(terms));
}

DirectedSystem Sampler::sequence(const AlgebraPtr& a, std::size_t steps) {
  const Field f = a->field();
  std::vector<BoundedComplex> objects{complex(a, -1, 1 + below(3))};
  std::vector<ChainMap> maps;
  for (std::size_t i = 0; i < steps; ++i) {
    const BoundedComplex& g = objects.back();
    if (below(2) == 0 || g.is_zero()) {
      const BoundedComplex extra = complex(a, -1, 1 + below(2));
      const BoundedComplex next = direct_sum(g, extra);
      std::map<int, Matrix> inc;
      for (int k = g.lo(); k <= g.hi() && !g.is_zero(); ++k) {
        Matrix m(next.dim(k), g.dim(k), f);
        m.set_block(0, 0, Matrix::identity(g.dim(k), f));
        inc.emplace(k, std::move(m));
      }
      maps.push_back(ChainMap(g, next, std::move(inc)));
      objects.push_back(next);
    } else {
      const int k = g.lo() + static_cast<int>(below(static_cast<std::size_t>(g.hi() - g.lo() + 1)));
      const Subcomplex sub = generated_subcomplex(g, {{k, matrix(g.dim(k), 1, f, 2)}});
      std::map<int, Matrix> span;
      for (const auto& [deg, m] : sub.inclusion.components()) span.emplace(deg, m);
      const QuotientComplex q = quotient_complex(g, span);
      maps.push_back(q.projection);
      objects.push_back(q.complex);
    }
  }
  return DirectedSystem::sequence(a, std::move(objects), std::move(maps));
}

DirectedSystem Sampler::poset_system(const AlgebraPtr& a) {
  const Field f = a->field();
  const BoundedComplex c = complex(a, -1, 2 + below(2));
  const std::size_t n = 2 + below(3);
  // below[t] lists every s <= t (reflexive, transitive).
  std::vector<std::set<std::size_t>> downset(n);
  const bool span = n == 3 && below(2) == 0;
  for (std::size_t t = 0; t < n; ++t) {
    downset[t].insert(t);
    for (std::size_t s = 0; s < t; ++s) {
      const bool edge = span ? (s == 0) : (t == n - 1 || below(2) == 0);
      if (edge) downset[t].insert(downset[s].begin(), downset[s].end());
    }
  }
  std::vector<std::map<int, Matrix>> gens(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (c.is_zero()) break;
    const int k = c.lo() + static_cast<int>(below(static_cast<std::size_t>(c.hi() - c.lo() + 1)));
    gens[s].emplace(k, matrix(c.dim(k), 1, f, 2));
  }
  std::vector<Subcomplex> subs;
  for (std::size_t t = 0; t < n; ++t) {
    std::map<int, Matrix> all;
    for (std::size_t s : downset[t]) {
      for (const auto& [k, m] : gens[s]) {
        auto it = all.find(k);
        if (it == all.end()) {
          all.emplace(k, m);
        } else {
          it->second = hstack(it->second, m);
        }
      }
    }
    subs.push_back(generated_subcomplex(c, all));
  }
  std::vector<BoundedComplex> objects;
  for (const auto& s : subs) objects.push_back(s.complex);
  std::map<std::pair<std::size_t, std::size_t>, ChainMap> maps;
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t s : downset[t]) {
      if (s == t) continue;
      std::map<int, Matrix> comps;
      for (int k = objects[s].lo(); k <= objects[s].hi() && !objects[s].is_zero(); ++k) {
        comps.emplace(k, Subspace(subs[t].inclusion.at(k)).coordinates_or_throw(subs[s].inclusion.at(k)));
      }
      maps.emplace(std::make_pair(s, t), ChainMap(objects[s], objects[t], std::move(comps)));
    }
  }
  return DirectedSystem(a, std::move(objects), std::move(maps));
}

}  // namespace aisle
