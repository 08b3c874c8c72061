#include "aisle/hom_complex.hpp"

#include <tuple>

#include "aisle/error.hpp"

namespace aisle {

namespace {

Scalar sign(Field f, int n) { return (n % 2 == 0) ? f.one() : -f.one(); }

/// σ^{≥k} M as a complex (terms below k dropped).
BoundedComplex brutal_geq(const BoundedComplex& m, int k) {
  std::vector<FDModule> terms;
  std::vector<Matrix> diffs;
  std::vector<std::vector<std::size_t>> blocks;
  for (int j = k; j <= m.hi(); ++j) {
    terms.push_back(m.term(j));
    blocks.push_back(m.blocks(j));
    if (j < m.hi()) diffs.push_back(m.d(j));
  }
  return BoundedComplex::unchecked(m.algebra(), k, std::move(terms), std::move(diffs), std::move(blocks));
}

}  // namespace

HomComplex::HomComplex(PerfectComplex e, BoundedComplex m) : e_(std::move(e)), m_(std::move(m)) {
  if (e_.algebra() != m_.algebra()) throw Mismatch("hom complex between complexes over different algebras");
  const Field f = e_.field();
  linear_.field = f;
  if (e_.is_zero() || m_.is_zero()) return;
  const int lo = m_.lo() - e_.hi();
  const int hi = m_.hi() - e_.lo();
  linear_.lo = lo;
  for (int n = lo; n <= hi; ++n) {
    std::vector<Block> bs;
    std::size_t off = 0;
    for (int p = e_.lo(); p <= e_.hi(); ++p) {
      const FDModule t = m_.term(p + n);
      const auto vs = e_.vertices(p);
      for (std::size_t s = 0; s < vs.size(); ++s) {
        const std::size_t dim = t.peirce(vs[s]).dim();
        bs.push_back({p, s, vs[s], off, dim});
        off += dim;
      }
    }
    linear_.dims.push_back(off);
    blocks_.emplace(n, std::move(bs));
  }

  // Differential components of E, keyed by (degree, target summand, source summand).
  std::map<std::tuple<int, std::size_t, std::size_t>, Matrix> comps;
  for (int p = e_.lo(); p < e_.hi(); ++p) {
    for (std::size_t t = 0; t < e_.vertices(p + 1).size(); ++t) {
      for (std::size_t s = 0; s < e_.vertices(p).size(); ++s) {
        Matrix r = e_.component(p, t, s);
        if (!r.is_zero()) comps.emplace(std::make_tuple(p, t, s), std::move(r));
      }
    }
  }
  // Block j has the same (p, summand) in every degree, so row and column blocks align by index.
  std::map<std::pair<int, std::size_t>, std::size_t> index;
  {
    const auto& bs = blocks_.at(lo);
    for (std::size_t j = 0; j < bs.size(); ++j) index[{bs[j].p, bs[j].summand}] = j;
  }
  for (int n = lo; n < hi; ++n) {
    const auto& src = blocks_.at(n);
    const auto& tgt = blocks_.at(n + 1);
    Matrix d(linear_.dim(n + 1), linear_.dim(n), f);
    const Scalar eps = -sign(f, n);
    for (std::size_t j = 0; j < src.size(); ++j) {
      const Block& b = src[j];
      if (b.dim == 0) continue;
      const FDModule mn = m_.term(b.p + n);
      const FDModule mn1 = m_.term(b.p + n + 1);
      const Matrix& basis = mn.peirce(b.vertex).basis();
      if (tgt[j].dim > 0) {
        d.set_block(tgt[j].offset, b.offset, mn1.peirce(b.vertex).coordinates_or_throw(m_.d(b.p + n) * basis));
      }
      // φ at (p, s) feeds (p-1, t) through the component t -> s of d_E.
      for (std::size_t t = 0; t < e_.vertices(b.p - 1).size(); ++t) {
        auto it = comps.find({b.p - 1, b.summand, t});
        if (it == comps.end()) continue;
        const Block& row = tgt[index.at({b.p - 1, t})];
        if (row.dim == 0) continue;
        const Matrix block = mn.peirce(row.vertex).coordinates_or_throw(mn.act_by(it->second) * basis) * eps;
        d.set_block(row.offset, b.offset, block);
      }
    }
    linear_.d.push_back(std::move(d));
  }
}

const std::vector<HomComplex::Block>& HomComplex::blocks(int n) const {
  static const std::vector<Block> empty;
  auto it = blocks_.find(n);
  return it == blocks_.end() ? empty : it->second;
}

std::map<int, Matrix> HomComplex::components(int n, const Matrix& v) const {
  if (v.rows() != dim(n) || v.cols() != 1) throw InvalidInput("hom complex element has the wrong shape");
  std::map<int, Matrix> out;
  const AlgebraPtr& a = e_.algebra();
  for (const Block& b : blocks(n)) {
    if (b.dim == 0) continue;
    const FDModule t = m_.term(b.p + n);
    auto it = out.find(b.p);
    if (it == out.end()) it = out.emplace(b.p, Matrix(t.dim(), e_.complex().dim(b.p), e_.field())).first;
    const Matrix image = t.peirce(b.vertex).basis() * v.block(b.offset, 0, b.dim, 1);
    it->second.set_block(0, e_.offset(b.p, b.summand), map_from_projective(a, b.vertex, t, image));
  }
  return out;
}

Matrix HomComplex::encode(int n, const std::map<int, Matrix>& components) const {
  Matrix v(dim(n), 1, e_.field());
  const AlgebraPtr& a = e_.algebra();
  for (const Block& b : blocks(n)) {
    if (b.dim == 0) continue;
    auto it = components.find(b.p);
    if (it == components.end()) continue;
    const std::size_t width = a->projective_basis(b.vertex).cols();
    const Matrix phi = it->second.block(0, e_.offset(b.p, b.summand), it->second.rows(), width);
    const Matrix image = phi * a->projective_generator(b.vertex);
    v.set_block(b.offset, 0, m_.term(b.p + n).peirce(b.vertex).coordinates_or_throw(image));
  }
  return v;
}

ChainMap HomComplex::chain_map(int n, const Matrix& cycle) const {
  if (!(linear_.diff(n) * cycle).is_zero()) throw InvalidInput("hom complex element is not a cycle");
  std::map<int, Matrix> comps;
  for (auto& [p, m] : components(n, cycle)) comps.emplace(p + n, std::move(m));
  return ChainMap::unchecked(shift(e_.complex(), -n), m_, std::move(comps));
}

Matrix HomComplex::encode(const ChainMap& f, int k) const {
  std::map<int, Matrix> comps;
  for (int p = e_.lo(); p <= e_.hi() && !e_.is_zero(); ++p) comps.emplace(p, f.at(p - k));
  return encode(-k, comps);
}

Cohomology HomComplex::cohomology(int n) const { return aisle::cohomology(linear_, n); }

Matrix postcompose(const HomComplex& from, const HomComplex& to, const ChainMap& g, int n) {
  const auto& fb = from.blocks(n);
  const auto& tb = to.blocks(n);
  Matrix out(to.dim(n), from.dim(n), from.linear().field);
  if (fb.size() != tb.size()) {
    if (fb.empty() || tb.empty()) return out;
    throw InvalidInput("postcompose: hom complexes have different sources");
  }
  for (std::size_t j = 0; j < fb.size(); ++j) {
    if (fb[j].dim == 0 || tb[j].dim == 0) continue;
    const int deg = fb[j].p + n;
    const Matrix image = g.at(deg) * from.target().term(deg).peirce(fb[j].vertex).basis();
    out.set_block(tb[j].offset, fb[j].offset, to.target().term(deg).peirce(tb[j].vertex).coordinates_or_throw(image));
  }
  return out;
}

std::vector<ChainMap> homotopy_class_basis(const PerfectComplex& e, const BoundedComplex& m, int k) {
  const HomComplex h(e, m);
  const int n = -k;
  std::vector<ChainMap> out;
  if (h.dim(n) == 0) return out;
  const Cohomology c = h.cohomology(n);
  if (rank(hstack(c.boundaries, c.representatives)) != c.boundaries.cols() + c.dim) {
    throw VerificationFailure("homotopy class representatives are dependent");
  }
  for (std::size_t j = 0; j < c.dim; ++j) out.push_back(h.chain_map(n, c.representatives.col(j)));
  return out;
}

std::map<int, std::size_t> derived_hom_dims(const PerfectComplex& e, const BoundedComplex& m) {
  const HomComplex h(e, m);
  std::map<int, std::size_t> out;
  if (h.linear().dims.empty()) return out;
  std::map<int, std::size_t> ranks;
  for (int n = h.lo() - 1; n <= h.hi(); ++n) ranks[n] = rank(h.linear().diff(n));
  for (int n = h.lo(); n <= h.hi(); ++n) {
    const std::size_t d = h.dim(n) - ranks[n] - ranks[n - 1];
    if (d > 0) out[-n] = d;
  }
  return out;
}

ModuleResolution projective_resolution(const FDModule& m, std::size_t max_len) {
  const AlgebraPtr& a = m.algebra();
  const Field f = m.field();
  ModuleResolution out;
  if (m.dim() == 0) {
    out.complex = PerfectComplex::zero(a);
    out.augmentation = Matrix(0, 0, f);
    out.terminated = true;
    return out;
  }
  ProjectiveCover cover = projective_cover(m);
  std::vector<std::vector<std::size_t>> levels{cover.vertices};
  std::vector<Matrix> maps;  // maps[j]: P_{j+1} -> P_j
  FDModule current = cover.module;
  Matrix kernel = kernel_basis(cover.map);
  out.augmentation = cover.map;
  while (true) {
    if (kernel.cols() == 0) {
      out.terminated = true;
      break;
    }
    if (maps.size() == max_len) break;
    const ProjectiveCover next = projective_cover(submodule(current, kernel));
    maps.push_back(kernel * next.map);
    levels.push_back(next.vertices);
    kernel = kernel_basis(next.map);
    current = next.module;
  }
  out.length = maps.size();
  std::vector<std::vector<std::size_t>> vertices(levels.rbegin(), levels.rend());
  std::vector<Matrix> diffs(maps.rbegin(), maps.rend());
  out.complex = PerfectComplex(a, -static_cast<int>(out.length), std::move(vertices), std::move(diffs));
  if (out.terminated) {
    // Exactness: im d_{j+1} = ker d_j with d_0 the augmentation.
    Matrix prev = out.augmentation;
    if (rank(prev) != m.dim()) throw VerificationFailure("resolution: augmentation is not surjective");
    for (std::size_t j = 0; j <= out.length; ++j) {
      const Matrix next = j < out.length ? maps[j] : Matrix(prev.cols(), 0, f);
      if (!(prev * next).is_zero() || rank(next) + rank(prev) != prev.cols()) {
        throw VerificationFailure("resolution is not exact");
      }
      prev = next;
    }
  }
  return out;
}

namespace {

ComplexResolution resolve_stalk(const FDModule& n, int degree, std::size_t max_len) {
  const ModuleResolution r = projective_resolution(n, max_len);
  if (!r.terminated) {
    throw NonTermination(max_len, "module has no projective resolution of length <= " + std::to_string(max_len));
  }
  const PerfectComplex p = shift(r.complex, -degree);
  const BoundedComplex s = BoundedComplex::stalk(n, degree);
  return {p, ChainMap::unchecked(p.complex(), s, {{degree, r.augmentation}})};
}

ComplexResolution resolve_nonzero(const BoundedComplex& m, std::size_t max_len) {
  const int lo = m.lo();
  if (lo == m.hi()) {
    ComplexResolution r = resolve_stalk(m.term(lo), lo, max_len);
    return {r.complex, ChainMap::unchecked(r.complex.complex(), m, r.map.components())};
  }
  // M = cone(f: W -> X) with W = M^lo in degree lo+1 and X the terms above lo.
  const BoundedComplex x = brutal_geq(m, lo + 1);
  const ComplexResolution rw = resolve_stalk(m.term(lo), lo + 1, max_len);
  const ComplexResolution rx = resolve_nonzero(x, max_len);
  const BoundedComplex& w = rw.map.target();
  const ChainMap f = ChainMap::unchecked(w, x, {{lo + 1, m.d(lo)}});

  // Lift: f̃ ∈ Z^0 Hom(P_W, P_X) and h ∈ Hom^{-1}(P_W, X) with q_X f̃ - f q_W = D h.
  const HomComplex h1(rw.complex, rx.complex.complex());
  const HomComplex h2(rw.complex, x);
  const Field fld = m.field();
  const std::size_t nu = h1.dim(0);
  const std::size_t nv = h2.dim(-1);
  const Matrix d1 = h1.linear().diff(0);
  const Matrix d2 = h2.linear().diff(-1);
  Matrix sys(d1.rows() + h2.dim(0), nu + nv, fld);
  sys.set_block(0, 0, d1);
  sys.set_block(d1.rows(), 0, postcompose(h1, h2, rx.map, 0));
  sys.set_block(d1.rows(), nu, -d2);
  Matrix rhs(sys.rows(), 1, fld);
  rhs.set_block(d1.rows(), 0, h2.encode(compose(f, rw.map), 0));
  const auto sol = solve(sys, rhs);
  if (!sol) throw VerificationFailure("resolve_complex: lifting system is inconsistent");
  const ChainMap lift = h1.chain_map(0, sol->block(0, 0, nu, 1));
  const std::map<int, Matrix> homotopy = h2.components(-1, sol->block(nu, 0, nv, 1));

  const PerfectComplex c = perfect_cone(rw.complex, rx.complex, lift);
  std::map<int, Matrix> q;
  for (int k = c.lo(); k <= c.hi() && !c.is_zero(); ++k) {
    const std::size_t pw = rw.complex.complex().dim(k + 1);
    const std::size_t px = rx.complex.complex().dim(k);
    const std::size_t mw = w.dim(k + 1);
    const std::size_t mx = x.dim(k);
    Matrix qk(mw + mx, pw + px, fld);
    qk.set_block(0, 0, rw.map.at(k + 1));
    auto it = homotopy.find(k + 1);
    if (it != homotopy.end()) qk.set_block(mw, 0, it->second);
    qk.set_block(mw, pw, rx.map.at(k));
    q.emplace(k, std::move(qk));
  }
  return {c, ChainMap(c.complex(), m, std::move(q))};
}

}  // namespace

ComplexResolution resolve_complex(const BoundedComplex& m, std::size_t max_len) {
  if (m.is_zero()) {
    const PerfectComplex z = PerfectComplex::zero(m.algebra());
    return {z, ChainMap::zero(z.complex(), m)};
  }
  ComplexResolution r = resolve_nonzero(m, max_len);
  if (!is_quasi_iso(r.map)) throw VerificationFailure("resolve_complex: result is not quasi-isomorphic");
  return r;
}

}  // namespace aisle
