#include "aisle/complex.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "aisle/error.hpp"

namespace aisle {

namespace {

Scalar sign(Field f, int n) { return (n % 2 == 0) ? f.one() : -f.one(); }

std::vector<std::size_t> range_indices(std::size_t from, std::size_t count) {
  std::vector<std::size_t> v(count);
  std::iota(v.begin(), v.end(), from);
  return v;
}

/// Module on a coordinate subset that is known to be a submodule.
FDModule coordinate_submodule(const FDModule& m, const std::vector<std::size_t>& idx) {
  std::vector<Matrix> action;
  for (std::size_t k = 0; k < m.algebra()->dim(); ++k) action.push_back(m.act(k).select_rows(idx).select_columns(idx));
  return FDModule::unchecked(m.algebra(), idx.size(), std::move(action));
}

Matrix coordinate_inclusion(std::size_t ambient, const std::vector<std::size_t>& idx, Field f) {
  Matrix m(ambient, idx.size(), f);
  for (std::size_t j = 0; j < idx.size(); ++j) m(idx[j], j) = f.one();
  return m;
}

}  // namespace

std::size_t LinearComplex::dim(int k) const {
  if (k < lo || k > hi()) return 0;
  return dims[static_cast<std::size_t>(k - lo)];
}

Matrix LinearComplex::diff(int k) const {
  if (k < lo || k >= hi()) return Matrix(dim(k + 1), dim(k), field);
  return d[static_cast<std::size_t>(k - lo)];
}

Matrix Cohomology::class_coordinates(const Matrix& z) const {
  if (z.cols() == 0) return Matrix(dim, 0, z.field());
  const auto x = solve(hstack(boundaries, representatives), z);
  if (!x) throw VerificationFailure("class_coordinates: vector is not a cycle");
  return x->block(boundaries.cols(), 0, dim, z.cols());
}

Cohomology cohomology(const LinearComplex& c, int n) {
  Cohomology h;
  const Matrix dn = c.diff(n);
  h.cycles = kernel_basis(dn);
  h.boundaries = column_space_basis(c.diff(n - 1));
  h.representatives = relative_basis(h.boundaries, h.cycles);
  h.dim = h.representatives.cols();
  return h;
}

BoundedComplex::BoundedComplex(AlgebraPtr a) : algebra_(std::move(a)) {
  if (!algebra_) throw InvalidInput("complex without an algebra");
  zero_ = FDModule::zero(algebra_);
}

BoundedComplex::BoundedComplex(AlgebraPtr a, int lo, std::vector<FDModule> terms, std::vector<Matrix> diffs,
                               std::vector<std::vector<std::size_t>> blocks)
    : BoundedComplex(build(std::move(a), lo, std::move(terms), std::move(diffs), std::move(blocks), true)) {}

BoundedComplex BoundedComplex::unchecked(AlgebraPtr a, int lo, std::vector<FDModule> terms, std::vector<Matrix> diffs,
                                         std::vector<std::vector<std::size_t>> blocks) {
  return build(std::move(a), lo, std::move(terms), std::move(diffs), std::move(blocks), false);
}

BoundedComplex BoundedComplex::build(AlgebraPtr a, int lo, std::vector<FDModule> terms, std::vector<Matrix> diffs,
                                     std::vector<std::vector<std::size_t>> blocks, bool check) {
  BoundedComplex c(std::move(a));
  if (terms.empty()) return c;
  if (diffs.size() + 1 != terms.size()) throw InvalidInput("complex needs one differential between consecutive terms");
  if (blocks.empty()) {
    for (const auto& t : terms) blocks.push_back(t.dim() ? std::vector<std::size_t>{t.dim()} : std::vector<std::size_t>{});
  }
  if (blocks.size() != terms.size()) throw InvalidInput("complex needs one block list per term");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!terms[i].valid() || terms[i].algebra() != c.algebra_) throw Mismatch("complex term over a different algebra");
    std::erase(blocks[i], std::size_t{0});
    if (std::accumulate(blocks[i].begin(), blocks[i].end(), std::size_t{0}) != terms[i].dim()) {
      throw InvalidInput("block sizes do not add up to the term dimension");
    }
  }
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    if (diffs[i].rows() != terms[i + 1].dim() || diffs[i].cols() != terms[i].dim()) {
      throw InvalidInput("differential in degree " + std::to_string(lo + static_cast<int>(i)) + " has the wrong shape");
    }
    if (diffs[i].field() != c.field()) throw Mismatch("differential over the wrong field");
  }
  if (check) {
    for (std::size_t i = 0; i < diffs.size(); ++i) {
      if (!is_module_map(terms[i], terms[i + 1], diffs[i])) {
        throw VerificationFailure("differential in degree " + std::to_string(lo + static_cast<int>(i)) +
                                  " is not A-linear");
      }
      if (i + 1 < diffs.size() && !(diffs[i + 1] * diffs[i]).is_zero()) {
        throw VerificationFailure("d∘d is nonzero in degree " + std::to_string(lo + static_cast<int>(i)));
      }
    }
    const FDAlgebra& alg = *c.algebra_;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      std::size_t off = 0;
      for (auto b : blocks[i]) {
        const auto inside = range_indices(off, b);
        std::vector<std::size_t> outside;
        for (std::size_t j = 0; j < terms[i].dim(); ++j) {
          if (j < off || j >= off + b) outside.push_back(j);
        }
        for (std::size_t g = 0; g < alg.dim(); ++g) {
          if (!terms[i].act(g).select_rows(outside).select_columns(inside).is_zero()) {
            throw VerificationFailure("declared block is not a submodule");
          }
        }
        off += b;
      }
    }
  }
  // Trim zero terms at both ends.
  std::size_t first = 0;
  std::size_t last = terms.size();
  while (first < last && terms[first].dim() == 0) ++first;
  while (last > first && terms[last - 1].dim() == 0) --last;
  if (first == last) return c;
  c.lo_ = lo + static_cast<int>(first);
  c.terms_.assign(terms.begin() + static_cast<long>(first), terms.begin() + static_cast<long>(last));
  c.diffs_.assign(diffs.begin() + static_cast<long>(first), diffs.begin() + static_cast<long>(last - 1));
  c.blocks_.assign(blocks.begin() + static_cast<long>(first), blocks.begin() + static_cast<long>(last));
  return c;
}

BoundedComplex BoundedComplex::stalk(const FDModule& m, int degree) {
  return unchecked(m.algebra(), degree, {m}, {});
}

FDModule BoundedComplex::term(int k) const {
  if (k < lo() || k > hi()) return zero_;
  return terms_[static_cast<std::size_t>(k - lo_)];
}

std::size_t BoundedComplex::dim(int k) const {
  if (k < lo() || k > hi()) return 0;
  return terms_[static_cast<std::size_t>(k - lo_)].dim();
}

std::size_t BoundedComplex::total_dim() const {
  std::size_t t = 0;
  for (const auto& m : terms_) t += m.dim();
  return t;
}

Matrix BoundedComplex::d(int k) const {
  if (k < lo() || k >= hi()) return Matrix(dim(k + 1), dim(k), field());
  return diffs_[static_cast<std::size_t>(k - lo_)];
}

std::vector<std::size_t> BoundedComplex::blocks(int k) const {
  if (k < lo() || k > hi()) return {};
  return blocks_[static_cast<std::size_t>(k - lo_)];
}

LinearComplex BoundedComplex::linear() const {
  LinearComplex l{field(), lo_, {}, diffs_};
  for (const auto& t : terms_) l.dims.push_back(t.dim());
  return l;
}

ChainMap ChainMap::unchecked(BoundedComplex source, BoundedComplex target, std::map<int, Matrix> components) {
  ChainMap f;
  f.source_ = std::move(source);
  f.target_ = std::move(target);
  for (auto& [k, m] : components) {
    if (m.rows() != f.target_.dim(k) || m.cols() != f.source_.dim(k)) {
      throw InvalidInput("chain map component in degree " + std::to_string(k) + " has the wrong shape");
    }
    if (m.empty() || m.is_zero()) continue;
    f.components_.emplace(k, std::move(m));
  }
  return f;
}

ChainMap::ChainMap(BoundedComplex source, BoundedComplex target, std::map<int, Matrix> components)
    : ChainMap(unchecked(std::move(source), std::move(target), std::move(components))) {
  if (source_.algebra() != target_.algebra()) throw Mismatch("chain map between complexes over different algebras");
  for (const auto& [k, m] : components_) {
    if (!is_module_map(source_.term(k), target_.term(k), m)) {
      throw VerificationFailure("chain map component in degree " + std::to_string(k) + " is not A-linear");
    }
  }
  const int lo = std::min(source_.lo(), target_.lo()) - 1;
  const int hi = std::max(source_.hi(), target_.hi()) + 1;
  for (int k = lo; k <= hi; ++k) {
    if (at(k + 1) * source_.d(k) != target_.d(k) * at(k)) {
      throw VerificationFailure("chain map does not commute with differentials in degree " + std::to_string(k));
    }
  }
}

ChainMap ChainMap::identity(const BoundedComplex& c) {
  std::map<int, Matrix> comps;
  for (int k = c.lo(); k <= c.hi(); ++k) comps.emplace(k, Matrix::identity(c.dim(k), c.field()));
  return unchecked(c, c, std::move(comps));
}

ChainMap ChainMap::zero(const BoundedComplex& source, const BoundedComplex& target) {
  return unchecked(source, target, {});
}

Matrix ChainMap::at(int k) const {
  auto it = components_.find(k);
  if (it == components_.end()) return Matrix(target_.dim(k), source_.dim(k), source_.field());
  return it->second;
}

ChainMap ChainMap::operator+(const ChainMap& o) const {
  std::map<int, Matrix> comps = components_;
  for (const auto& [k, m] : o.components_) {
    auto it = comps.find(k);
    if (it == comps.end()) {
      comps.emplace(k, m);
    } else {
      it->second += m;
    }
  }
  return unchecked(source_, target_, std::move(comps));
}

ChainMap ChainMap::scaled(const Scalar& s) const {
  std::map<int, Matrix> comps = components_;
  for (auto& [k, m] : comps) m *= s;
  return unchecked(source_, target_, std::move(comps));
}

ChainMap ChainMap::operator-(const ChainMap& o) const { return *this + o.scaled(-source_.field().one()); }

ChainMap compose(const ChainMap& g, const ChainMap& f) {
  std::map<int, Matrix> comps;
  for (const auto& [k, m] : f.components()) {
    if (g.source().dim(k) != f.target().dim(k)) throw InvalidInput("compose: chain maps do not match");
    comps.emplace(k, g.at(k) * m);
  }
  return ChainMap::unchecked(f.source(), g.target(), std::move(comps));
}

bool operator==(const ChainMap& a, const ChainMap& b) {
  std::set<int> degrees;
  for (const auto& [k, m] : a.components()) degrees.insert(k);
  for (const auto& [k, m] : b.components()) degrees.insert(k);
  for (int k : degrees) {
    if (a.at(k) != b.at(k)) return false;
  }
  return true;
}

BoundedComplex shift(const BoundedComplex& c, int n) {
  if (c.is_zero()) return c;
  std::vector<FDModule> terms;
  std::vector<Matrix> diffs;
  std::vector<std::vector<std::size_t>> blocks;
  const Scalar s = sign(c.field(), n);
  for (int k = c.lo(); k <= c.hi(); ++k) {
    terms.push_back(c.term(k));
    blocks.push_back(c.blocks(k));
    if (k < c.hi()) diffs.push_back(c.d(k) * s);
  }
  return BoundedComplex::unchecked(c.algebra(), c.lo() - n, std::move(terms), std::move(diffs), std::move(blocks));
}

ChainMap shift(const ChainMap& f, int n) {
  std::map<int, Matrix> comps;
  for (const auto& [k, m] : f.components()) comps.emplace(k - n, m);
  return ChainMap::unchecked(shift(f.source(), n), shift(f.target(), n), std::move(comps));
}

Cone cone(const ChainMap& f) {
  const BoundedComplex& s = f.source();
  const BoundedComplex& t = f.target();
  const AlgebraPtr& a = s.algebra();
  const Field fld = s.field();
  if (s.is_zero() && t.is_zero()) {
    BoundedComplex z(a);
    return {z, ChainMap::zero(t, z), ChainMap::zero(z, shift(s, 1))};
  }
  int lo = t.is_zero() ? s.lo() - 1 : t.lo();
  int hi = t.is_zero() ? s.hi() - 1 : t.hi();
  if (!s.is_zero()) {
    lo = std::min(lo, s.lo() - 1);
    hi = std::max(hi, s.hi() - 1);
  }
  std::vector<FDModule> terms;
  std::vector<Matrix> diffs;
  std::vector<std::vector<std::size_t>> blocks;
  for (int k = lo; k <= hi; ++k) {
    terms.push_back(direct_sum(s.term(k + 1), t.term(k)));
    auto b = s.blocks(k + 1);
    const auto bt = t.blocks(k);
    b.insert(b.end(), bt.begin(), bt.end());
    blocks.push_back(std::move(b));
    if (k < hi) {
      Matrix d(s.dim(k + 2) + t.dim(k + 1), s.dim(k + 1) + t.dim(k), fld);
      d.set_block(0, 0, -s.d(k + 1));
      d.set_block(s.dim(k + 2), 0, f.at(k + 1));
      d.set_block(s.dim(k + 2), s.dim(k + 1), t.d(k));
      diffs.push_back(std::move(d));
    }
  }
  BoundedComplex c = BoundedComplex::unchecked(a, lo, std::move(terms), std::move(diffs), std::move(blocks));
  std::map<int, Matrix> inc;
  std::map<int, Matrix> proj;
  for (int k = lo; k <= hi; ++k) {
    Matrix i(s.dim(k + 1) + t.dim(k), t.dim(k), fld);
    i.set_block(s.dim(k + 1), 0, Matrix::identity(t.dim(k), fld));
    inc.emplace(k, std::move(i));
    Matrix p(s.dim(k + 1), s.dim(k + 1) + t.dim(k), fld);
    p.set_block(0, 0, Matrix::identity(s.dim(k + 1), fld));
    proj.emplace(k, std::move(p));
  }
  ChainMap inclusion = ChainMap::unchecked(t, c, std::move(inc));
  ChainMap projection = ChainMap::unchecked(c, shift(s, 1), std::move(proj));
  return {std::move(c), std::move(inclusion), std::move(projection)};
}

BoundedComplex direct_sum(const std::vector<BoundedComplex>& parts, const AlgebraPtr& a) {
  int lo = 0;
  int hi = -1;
  bool any = false;
  for (const auto& p : parts) {
    if (p.algebra() != a) throw Mismatch("direct sum of complexes over different algebras");
    if (p.is_zero()) continue;
    lo = any ? std::min(lo, p.lo()) : p.lo();
    hi = any ? std::max(hi, p.hi()) : p.hi();
    any = true;
  }
  if (!any) return BoundedComplex(a);
  std::vector<FDModule> terms;
  std::vector<Matrix> diffs;
  std::vector<std::vector<std::size_t>> blocks;
  for (int k = lo; k <= hi; ++k) {
    std::vector<FDModule> ms;
    std::vector<std::size_t> b;
    std::vector<Matrix> ds;
    for (const auto& p : parts) {
      ms.push_back(p.term(k));
      const auto pb = p.blocks(k);
      b.insert(b.end(), pb.begin(), pb.end());
      ds.push_back(p.d(k));
    }
    terms.push_back(direct_sum(ms, a));
    blocks.push_back(std::move(b));
    if (k < hi) diffs.push_back(aisle::direct_sum(ds, a->field()));
  }
  return BoundedComplex::unchecked(a, lo, std::move(terms), std::move(diffs), std::move(blocks));
}

BoundedComplex direct_sum(const BoundedComplex& x, const BoundedComplex& y) {
  return direct_sum(std::vector<BoundedComplex>{x, y}, x.algebra());
}

ChainMap direct_sum(const std::vector<ChainMap>& parts, const AlgebraPtr& a) {
  std::vector<BoundedComplex> sources;
  std::vector<BoundedComplex> targets;
  std::set<int> degrees;
  for (const auto& f : parts) {
    sources.push_back(f.source());
    targets.push_back(f.target());
    for (const auto& [k, m] : f.components()) degrees.insert(k);
  }
  BoundedComplex s = direct_sum(sources, a);
  BoundedComplex t = direct_sum(targets, a);
  std::map<int, Matrix> comps;
  for (int k : degrees) {
    std::vector<Matrix> bs;
    for (const auto& f : parts) bs.push_back(f.at(k));
    comps.emplace(k, aisle::direct_sum(bs, a->field()));
  }
  return ChainMap::unchecked(std::move(s), std::move(t), std::move(comps));
}

Cohomology cohomology(const BoundedComplex& c, int n) {
  LinearComplex l{c.field(), n - 1, {c.dim(n - 1), c.dim(n), c.dim(n + 1)}, {c.d(n - 1), c.d(n)}};
  return cohomology(l, n);
}

std::map<int, std::size_t> cohomology_dims(const BoundedComplex& c) {
  std::map<int, std::size_t> out;
  if (c.is_zero()) return out;
  std::map<int, std::size_t> ranks;
  for (int k = c.lo() - 1; k <= c.hi(); ++k) ranks[k] = rank(c.d(k));
  for (int k = c.lo(); k <= c.hi(); ++k) {
    const std::size_t h = c.dim(k) - ranks[k] - ranks[k - 1];
    if (h > 0) out[k] = h;
  }
  return out;
}

bool is_acyclic(const BoundedComplex& c) { return cohomology_dims(c).empty(); }

FDModule cohomology_module(const BoundedComplex& c, int n) {
  const Matrix z = kernel_basis(c.d(n));
  if (z.cols() == 0) return FDModule::zero(c.algebra());
  const FDModule zmod = submodule(c.term(n), z);
  const Matrix b = Subspace(z).coordinates_or_throw(c.d(n - 1));
  return quotient(zmod, b).module;
}

Matrix induced_map(const ChainMap& f, int n) {
  const Cohomology hs = cohomology(f.source(), n);
  const Cohomology ht = cohomology(f.target(), n);
  return ht.class_coordinates(f.at(n) * hs.representatives);
}

bool is_quasi_iso(const ChainMap& f) {
  const BoundedComplex& s = f.source();
  const BoundedComplex& t = f.target();
  const int lo = std::min(s.is_zero() ? t.lo() : s.lo(), t.is_zero() ? s.lo() : t.lo());
  const int hi = std::max(s.is_zero() ? t.hi() : s.hi(), t.is_zero() ? s.hi() : t.hi());
  for (int n = lo; n <= hi; ++n) {
    const Matrix m = induced_map(f, n);
    if (m.rows() != m.cols() || rank(m) != m.rows()) return false;
  }
  return true;
}

bool long_exact_sequence_holds(const ChainMap& f, const ChainMap& g, const ChainMap& h) {
  const BoundedComplex& x = f.source();
  const BoundedComplex& y = g.source();
  const BoundedComplex& z = h.source();
  int lo = 0;
  int hi = -1;
  bool any = false;
  for (const BoundedComplex* c : {&x, &y, &z}) {
    if (c->is_zero()) continue;
    lo = any ? std::min(lo, c->lo()) : c->lo();
    hi = any ? std::max(hi, c->hi()) : c->hi();
    any = true;
  }
  if (!any) return true;
  for (int n = lo - 1; n <= hi + 1; ++n) {
    const Matrix hf = induced_map(f, n);
    const Matrix hg = induced_map(g, n);
    const Matrix hh = induced_map(h, n);
    const Matrix hf1 = induced_map(f, n + 1);
    if (!(hg * hf).is_zero() || rank(hf) + rank(hg) != hf.rows()) return false;
    if (!(hh * hg).is_zero() || rank(hg) + rank(hh) != hg.rows()) return false;
    if (!(hf1 * hh).is_zero() || rank(hh) + rank(hf1) != hh.rows()) return false;
  }
  return true;
}

bool cone_sequence_exact(const ChainMap& f) {
  const Cone c = cone(f);
  return long_exact_sequence_holds(f, c.inclusion, c.projection);
}

Truncation soft_tau_leq(const BoundedComplex& c, int n) {
  if (c.is_zero() || n < c.lo()) {
    BoundedComplex z(c.algebra());
    return {z, ChainMap::zero(z, c)};
  }
  if (n >= c.hi()) return {c, ChainMap::identity(c)};
  std::vector<FDModule> terms;
  std::vector<Matrix> diffs;
  std::vector<std::vector<std::size_t>> blocks;
  std::map<int, Matrix> inc;
  const Matrix ker = kernel_basis(c.d(n));
  for (int k = c.lo(); k < n; ++k) {
    terms.push_back(c.term(k));
    blocks.push_back(c.blocks(k));
    inc.emplace(k, Matrix::identity(c.dim(k), c.field()));
    if (k + 1 < n) diffs.push_back(c.d(k));
  }
  terms.push_back(submodule(c.term(n), ker));
  blocks.push_back({ker.cols()});
  if (n > c.lo()) diffs.push_back(Subspace(ker).coordinates_or_throw(c.d(n - 1)));
  inc.emplace(n, ker);
  BoundedComplex t = BoundedComplex::unchecked(c.algebra(), c.lo(), std::move(terms), std::move(diffs), std::move(blocks));
  return {t, ChainMap::unchecked(t, c, std::move(inc))};
}

Truncation soft_tau_geq(const BoundedComplex& c, int n) {
  if (c.is_zero() || n > c.hi()) {
    BoundedComplex z(c.algebra());
    return {z, ChainMap::zero(c, z)};
  }
  if (n <= c.lo()) return {c, ChainMap::identity(c)};
  const Quotient q = quotient(c.term(n), c.d(n - 1));
  std::vector<FDModule> terms{q.module};
  std::vector<Matrix> diffs;
  std::vector<std::vector<std::size_t>> blocks{{q.module.dim()}};
  std::map<int, Matrix> proj;
  proj.emplace(n, q.projection);
  if (n < c.hi()) diffs.push_back(c.d(n) * q.section);
  for (int k = n + 1; k <= c.hi(); ++k) {
    terms.push_back(c.term(k));
    blocks.push_back(c.blocks(k));
    proj.emplace(k, Matrix::identity(c.dim(k), c.field()));
    if (k < c.hi()) diffs.push_back(c.d(k));
  }
  BoundedComplex t = BoundedComplex::unchecked(c.algebra(), n, std::move(terms), std::move(diffs), std::move(blocks));
  return {t, ChainMap::unchecked(c, t, std::move(proj))};
}

Reduction cancel_contractible(const BoundedComplex& c) {
  const Field f = c.field();
  const AlgebraPtr& a = c.algebra();
  if (c.is_zero()) return {c, ChainMap::identity(c), ChainMap::identity(c), 0};
  const int lo = c.lo();
  const int hi = c.hi();
  std::vector<FDModule> terms;
  std::vector<Matrix> diffs;
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<Matrix> to;    // accumulated C -> current, per degree
  std::vector<Matrix> from;  // accumulated current -> C
  for (int k = lo; k <= hi; ++k) {
    terms.push_back(c.term(k));
    blocks.push_back(c.blocks(k));
    to.push_back(Matrix::identity(c.dim(k), f));
    from.push_back(Matrix::identity(c.dim(k), f));
  }
  for (int k = lo; k < hi; ++k) diffs.push_back(c.d(k));
  const std::size_t len = terms.size();

  std::size_t cancelled = 0;
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = 0; i + 1 < len && !progress; ++i) {
      std::size_t off_s = 0;
      for (std::size_t bs = 0; bs < blocks[i].size() && !progress; ++bs) {
        const std::size_t size = blocks[i][bs];
        std::size_t off_t = 0;
        for (std::size_t bt = 0; bt < blocks[i + 1].size(); ++bt) {
          if (blocks[i + 1][bt] != size) {
            off_t += blocks[i + 1][bt];
            continue;
          }
          const Matrix phi = diffs[i].block(off_t, off_s, size, size);
          const auto phi_inv = inverse(phi);
          if (!phi_inv) {
            off_t += size;
            continue;
          }
          const std::size_t dk = terms[i].dim();
          const std::size_t dk1 = terms[i + 1].dim();
          std::vector<std::size_t> sidx = range_indices(off_s, size);
          std::vector<std::size_t> tidx = range_indices(off_t, size);
          std::vector<std::size_t> xidx;
          std::vector<std::size_t> yidx;
          for (std::size_t j = 0; j < dk; ++j) {
            if (j < off_s || j >= off_s + size) xidx.push_back(j);
          }
          for (std::size_t j = 0; j < dk1; ++j) {
            if (j < off_t || j >= off_t + size) yidx.push_back(j);
          }
          const Matrix& d = diffs[i];
          const Matrix beta = d.select_rows(tidx).select_columns(xidx);
          const Matrix gamma = d.select_rows(yidx).select_columns(sidx);
          const Matrix delta = d.select_rows(yidx).select_columns(xidx);
          const Matrix gphi = gamma * *phi_inv;

          // Chain maps of the elimination lemma, in degrees i and i+1.
          Matrix f_k = Matrix::identity(dk, f).select_rows(xidx);
          Matrix f_k1 = Matrix::identity(dk1, f).select_rows(yidx) - gphi * Matrix::identity(dk1, f).select_rows(tidx);
          Matrix g_k = coordinate_inclusion(dk, xidx, f) - coordinate_inclusion(dk, sidx, f) * (*phi_inv * beta);
          Matrix g_k1 = coordinate_inclusion(dk1, yidx, f);

          if (i > 0) diffs[i - 1] = diffs[i - 1].select_rows(xidx);
          if (i + 2 < len) diffs[i + 1] = diffs[i + 1].select_columns(yidx);
          diffs[i] = delta - gphi * beta;
          terms[i] = coordinate_submodule(terms[i], xidx);
          terms[i + 1] = coordinate_submodule(terms[i + 1], yidx);
          blocks[i].erase(blocks[i].begin() + static_cast<long>(bs));
          blocks[i + 1].erase(blocks[i + 1].begin() + static_cast<long>(bt));
          to[i] = f_k * to[i];
          to[i + 1] = f_k1 * to[i + 1];
          from[i] = from[i] * g_k;
          from[i + 1] = from[i + 1] * g_k1;
          ++cancelled;
          progress = true;
          break;
        }
        off_s += size;
      }
    }
  }

  BoundedComplex reduced = BoundedComplex::unchecked(a, lo, terms, diffs, blocks);
  std::map<int, Matrix> to_map;
  std::map<int, Matrix> from_map;
  for (std::size_t i = 0; i < len; ++i) {
    const int k = lo + static_cast<int>(i);
    to_map.emplace(k, to[i]);
    from_map.emplace(k, from[i]);
  }
  Reduction r{reduced, ChainMap::unchecked(c, reduced, std::move(to_map)),
              ChainMap::unchecked(reduced, c, std::move(from_map)), cancelled};
  if (cancelled > 0) {
    if (!(compose(r.to_reduced, r.from_reduced) == ChainMap::identity(reduced))) {
      throw VerificationFailure("cancellation maps are not a retraction");
    }
    if (cohomology_dims(reduced) != cohomology_dims(c)) {
      throw VerificationFailure("cancellation changed cohomology");
    }
  }
  return r;
}

Subcomplex generated_subcomplex(const BoundedComplex& c, const std::map<int, Matrix>& generators) {
  const Field f = c.field();
  if (c.is_zero()) return {c, ChainMap::identity(c)};
  std::vector<Matrix> bases;
  Matrix carried(c.dim(c.lo()), 0, f);
  for (int k = c.lo(); k <= c.hi(); ++k) {
    const FDModule t = c.term(k);
    Matrix seeds = carried;
    auto it = generators.find(k);
    if (it != generators.end()) {
      if (it->second.rows() != t.dim()) throw InvalidInput("subcomplex generators have the wrong shape");
      seeds = hstack(seeds, it->second);
    }
    std::vector<Matrix> orbit;
    for (std::size_t b = 0; b < c.algebra()->dim(); ++b) orbit.push_back(t.act(b) * seeds);
    bases.push_back(column_space_basis(hstack(orbit, t.dim(), f)));
    carried = c.d(k) * bases.back();
  }
  std::vector<FDModule> terms;
  std::vector<Matrix> diffs;
  std::map<int, Matrix> inc;
  for (int k = c.lo(); k <= c.hi(); ++k) {
    const Matrix& b = bases[static_cast<std::size_t>(k - c.lo())];
    terms.push_back(submodule(c.term(k), b));
    if (k < c.hi()) diffs.push_back(Subspace(bases[static_cast<std::size_t>(k - c.lo() + 1)]).coordinates_or_throw(c.d(k) * b));
    inc.emplace(k, b);
  }
  BoundedComplex s = BoundedComplex::unchecked(c.algebra(), c.lo(), std::move(terms), std::move(diffs));
  // Trimming may move the support; rebuild the inclusion against the trimmed complex.
  std::map<int, Matrix> comps;
  for (auto& [k, m] : inc) {
    if (s.dim(k) > 0) comps.emplace(k, std::move(m));
  }
  return {s, ChainMap::unchecked(s, c, std::move(comps))};
}

QuotientComplex quotient_complex(const BoundedComplex& c, const std::map<int, Matrix>& sub) {
  if (c.is_zero()) return {c, ChainMap::identity(c)};
  const Field f = c.field();
  std::vector<Quotient> qs;
  for (int k = c.lo(); k <= c.hi(); ++k) {
    auto it = sub.find(k);
    const Matrix span = it == sub.end() ? Matrix(c.dim(k), 0, f) : column_space_basis(it->second);
    if (!(span.rows() == c.dim(k))) throw InvalidInput("quotient_complex: subspace has the wrong shape");
    qs.push_back(quotient(c.term(k), span));
  }
  std::vector<FDModule> terms;
  std::vector<Matrix> diffs;
  std::map<int, Matrix> proj;
  for (int k = c.lo(); k <= c.hi(); ++k) {
    const auto i = static_cast<std::size_t>(k - c.lo());
    terms.push_back(qs[i].module);
    if (k < c.hi()) {
      const Matrix d = qs[i + 1].projection * c.d(k);
      // The subspace must be a subcomplex for the differential to descend.
      if (!(d * (Matrix::identity(c.dim(k), f) - qs[i].section * qs[i].projection)).is_zero()) {
        throw InvalidInput("quotient_complex: subspace is not a subcomplex");
      }
      diffs.push_back(d * qs[i].section);
    }
    proj.emplace(k, qs[i].projection);
  }
  BoundedComplex q = BoundedComplex::unchecked(c.algebra(), c.lo(), std::move(terms), std::move(diffs));
  std::map<int, Matrix> comps;
  for (auto& [k, m] : proj) {
    if (q.dim(k) > 0) comps.emplace(k, std::move(m));
  }
  return {q, ChainMap::unchecked(c, q, std::move(comps))};
}

bool is_null_homotopic(const ChainMap& fm) {
  const BoundedComplex& x = fm.source();
  const BoundedComplex& y = fm.target();
  const Field f = x.field();
  if (fm.components().empty()) return true;
  if (x.is_zero() || y.is_zero()) return true;
  // Equations f^k = d_Y^{k-1} h^k + h^{k+1} d_X^k for k in the support of X.
  std::vector<int> eq_degrees;
  std::map<int, std::size_t> eq_offset;
  std::size_t rows = 0;
  for (int k = x.lo(); k <= x.hi(); ++k) {
    eq_offset[k] = rows;
    rows += y.dim(k) * x.dim(k);
    eq_degrees.push_back(k);
  }
  std::vector<Matrix> cols;
  for (int k = x.lo(); k <= x.hi(); ++k) {
    if (y.dim(k - 1) == 0) continue;
    for (const Matrix& h : hom_module(x.term(k), y.term(k - 1))) {
      Matrix col(rows, 1, f);
      auto put = [&](int deg, const Matrix& m) {
        if (!eq_offset.count(deg)) return;
        const std::size_t off = eq_offset[deg];
        for (std::size_t r = 0; r < m.rows(); ++r) {
          for (std::size_t c = 0; c < m.cols(); ++c) col(off + r * m.cols() + c, 0) += m(r, c);
        }
      };
      put(k, y.d(k - 1) * h);
      put(k - 1, h * x.d(k - 1));
      cols.push_back(std::move(col));
    }
  }
  Matrix rhs(rows, 1, f);
  for (int k : eq_degrees) {
    const Matrix m = fm.at(k);
    const std::size_t off = eq_offset[k];
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) rhs(off + r * m.cols() + c, 0) = m(r, c);
    }
  }
  if (rhs.is_zero()) return true;
  if (cols.empty()) return false;
  return solve(hstack(cols, rows, f), rhs).has_value();
}

// ---------------------------------------------------------------- perfect


PerfectComplex::PerfectComplex(AlgebraPtr a, int lo, std::vector<std::vector<std::size_t>> vertices,
                               std::vector<Matrix> diffs, std::optional<Groups> groups) {
  if (!a) throw InvalidInput("perfect complex without an algebra");
  for (const auto& vs : vertices) {
    for (auto v : vs) {
      if (v >= a->idempotent_count()) throw InvalidInput("perfect complex summand index out of range");
    }
  }
  std::size_t first = 0;
  std::size_t last = vertices.size();
  while (first < last && vertices[first].empty()) ++first;
  while (last > first && vertices[last - 1].empty()) --last;
  if (!vertices.empty() && diffs.size() + 1 != vertices.size()) {
    throw InvalidInput("perfect complex needs one differential between consecutive terms");
  }
  if (first == last) {
    complex_ = BoundedComplex(a);
    init_groups(std::move(groups));
    return;
  }
  std::vector<FDModule> terms;
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t i = first; i < last; ++i) {
    terms.push_back(projective_sum(a, vertices[i]));
    std::vector<std::size_t> b;
    for (auto v : vertices[i]) b.push_back(a->projective_basis(v).cols());
    blocks.push_back(std::move(b));
    vertices_.push_back(vertices[i]);
  }
  std::vector<Matrix> ds(diffs.begin() + static_cast<long>(first), diffs.begin() + static_cast<long>(last - 1));
  complex_ = BoundedComplex(a, lo + static_cast<int>(first), std::move(terms), std::move(ds), std::move(blocks));
  init_groups(std::move(groups));
}

PerfectComplex PerfectComplex::from_elements(AlgebraPtr a, int lo, std::vector<std::vector<std::size_t>> vertices,
                                             const std::vector<std::vector<std::vector<Matrix>>>& elements,
                                             std::optional<Groups> groups) {
  if (!vertices.empty() && elements.size() + 1 != vertices.size()) {
    throw InvalidInput("from_elements: one element table per differential");
  }
  std::vector<Matrix> diffs;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& src = vertices[i];
    const auto& tgt = vertices[i + 1];
    std::size_t rows = 0;
    std::size_t cols = 0;
    for (auto v : tgt) rows += a->projective_basis(v).cols();
    for (auto v : src) cols += a->projective_basis(v).cols();
    Matrix d(rows, cols, a->field());
    if (elements[i].size() != tgt.size()) throw InvalidInput("from_elements: wrong number of target rows");
    std::size_t ro = 0;
    for (std::size_t t = 0; t < tgt.size(); ++t) {
      if (elements[i][t].size() != src.size()) throw InvalidInput("from_elements: wrong number of source columns");
      std::size_t co = 0;
      for (std::size_t s = 0; s < src.size(); ++s) {
        const Matrix& r = elements[i][t][s];
        if (r.rows() != a->dim() || r.cols() != 1) throw InvalidInput("from_elements: element is not an algebra vector");
        const Matrix ideal = a->multiply(a->multiply(a->idempotent(src[s]), r), a->idempotent(tgt[t]));
        if (ideal != r) throw InvalidInput("from_elements: element does not lie in e_s A e_t");
        d.set_block(ro, co, projective_map(a, src[s], tgt[t], r));
        co += a->projective_basis(src[s]).cols();
      }
      ro += a->projective_basis(tgt[t]).cols();
    }
    diffs.push_back(std::move(d));
  }
  return PerfectComplex(std::move(a), lo, std::move(vertices), std::move(diffs), std::move(groups));
}

PerfectComplex PerfectComplex::stalk(AlgebraPtr a, std::vector<std::size_t> vertices, int degree) {
  return PerfectComplex(std::move(a), degree, {std::move(vertices)}, {});
}

PerfectComplex PerfectComplex::regular(AlgebraPtr a, int degree) {
  std::vector<std::size_t> vs(a->idempotent_count());
  std::iota(vs.begin(), vs.end(), std::size_t{0});
  return stalk(std::move(a), std::move(vs), degree);
}

PerfectComplex PerfectComplex::zero(AlgebraPtr a) { return PerfectComplex(std::move(a), 0, {}, {}); }

std::vector<std::size_t> PerfectComplex::vertices(int k) const {
  if (is_zero() || k < lo() || k > hi()) return {};
  return vertices_[static_cast<std::size_t>(k - lo())];
}

std::size_t PerfectComplex::offset(int k, std::size_t s) const {
  const auto vs = vertices(k);
  std::size_t off = 0;
  for (std::size_t j = 0; j < s; ++j) off += algebra()->projective_basis(vs[j]).cols();
  return off;
}

Matrix PerfectComplex::component(int k, std::size_t t, std::size_t s) const {
  const auto src = vertices(k);
  const auto tgt = vertices(k + 1);
  const AlgebraPtr& a = algebra();
  const Matrix blk = complex_.d(k).block(offset(k + 1, t), offset(k, s), a->projective_basis(tgt.at(t)).cols(),
                                         a->projective_basis(src.at(s)).cols());
  return projective_map_element(a, src[s], tgt[t], blk);
}

std::size_t PerfectComplex::summand_count() const {
  std::size_t n = 0;
  for (const auto& vs : vertices_) n += vs.size();
  return n;
}

void PerfectComplex::init_groups(std::optional<Groups> groups) {
  std::vector<Summand> all;
  for (int k = lo(); k <= hi() && !is_zero(); ++k) {
    for (std::size_t s = 0; s < vertices(k).size(); ++s) all.push_back({k, s});
  }
  std::map<Summand, std::size_t> id;
  for (std::size_t i = 0; i < all.size(); ++i) id[all[i]] = i;

  // Links between summands with a nonzero differential component.
  std::vector<std::pair<std::size_t, std::size_t>> links;
  for (int k = lo(); k < hi() && !is_zero(); ++k) {
    const Matrix d = complex_.d(k);
    const auto src = vertices(k);
    const auto tgt = vertices(k + 1);
    for (std::size_t s = 0; s < src.size(); ++s) {
      for (std::size_t t = 0; t < tgt.size(); ++t) {
        const Matrix blk = d.block(offset(k + 1, t), offset(k, s), algebra()->projective_basis(tgt[t]).cols(),
                                   algebra()->projective_basis(src[s]).cols());
        if (!blk.is_zero()) links.emplace_back(id[{k, s}], id[{k + 1, t}]);
      }
    }
  }

  if (groups) {
    std::vector<int> owner(all.size(), -1);
    for (std::size_t g = 0; g < groups->size(); ++g) {
      for (const auto& s : (*groups)[g]) {
        auto it = id.find(s);
        if (it == id.end()) throw InvalidInput("declared group names a summand that does not exist");
        if (owner[it->second] != -1) throw InvalidInput("declared groups overlap");
        owner[it->second] = static_cast<int>(g);
      }
    }
    for (auto o : owner) {
      if (o == -1) throw InvalidInput("declared groups do not cover every summand");
    }
    for (const auto& [u, v] : links) {
      if (owner[u] != owner[v]) throw InvalidInput("declared groups are not subcomplexes: differential crosses groups");
    }
    groups_ = std::move(*groups);
    return;
  }
  std::vector<std::size_t> parent(all.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [u, v] : links) parent[find(u)] = find(v);
  std::map<std::size_t, std::size_t> root_to_group;
  groups_.clear();
  for (std::size_t i = 0; i < all.size(); ++i) {
    const std::size_t r = find(i);
    auto it = root_to_group.find(r);
    if (it == root_to_group.end()) {
      it = root_to_group.emplace(r, groups_.size()).first;
      groups_.emplace_back();
    }
    groups_[it->second].push_back(all[i]);
  }
}

PerfectComplex shift(const PerfectComplex& e, int n) {
  if (e.is_zero()) return e;
  std::vector<std::vector<std::size_t>> vs;
  std::vector<Matrix> ds;
  const BoundedComplex c = shift(e.complex(), n);
  for (int k = c.lo(); k <= c.hi(); ++k) {
    vs.push_back(e.vertices(k + n));
    if (k < c.hi()) ds.push_back(c.d(k));
  }
  PerfectComplex::Groups groups = e.groups();
  for (auto& g : groups) {
    for (auto& s : g) s.degree -= n;
  }
  return PerfectComplex(e.algebra(), c.lo(), std::move(vs), std::move(ds), std::move(groups));
}

PerfectComplex direct_sum(const std::vector<PerfectComplex>& parts, const AlgebraPtr& a) {
  std::vector<BoundedComplex> cs;
  for (const auto& p : parts) cs.push_back(p.complex());
  const BoundedComplex sum = direct_sum(cs, a);
  if (sum.is_zero()) return PerfectComplex::zero(a);
  std::vector<std::vector<std::size_t>> vs;
  std::vector<Matrix> ds;
  for (int k = sum.lo(); k <= sum.hi(); ++k) {
    std::vector<std::size_t> v;
    for (const auto& p : parts) {
      const auto pv = p.vertices(k);
      v.insert(v.end(), pv.begin(), pv.end());
    }
    vs.push_back(std::move(v));
    if (k < sum.hi()) ds.push_back(sum.d(k));
  }
  PerfectComplex::Groups groups;
  std::map<int, std::size_t> seen;
  for (const auto& p : parts) {
    for (auto g : p.groups()) {
      for (auto& s : g) s.index += seen[s.degree];
      groups.push_back(std::move(g));
    }
    for (int k = p.lo(); k <= p.hi() && !p.is_zero(); ++k) seen[k] += p.vertices(k).size();
  }
  return PerfectComplex(a, sum.lo(), std::move(vs), std::move(ds), std::move(groups));
}

PerfectComplex shifted_copies(const PerfectComplex& e, const std::vector<std::pair<int, std::size_t>>& shifts) {
  std::vector<PerfectComplex> parts;
  for (const auto& [k, copies] : shifts) {
    const PerfectComplex s = shift(e, k);
    for (std::size_t j = 0; j < copies; ++j) parts.push_back(s);
  }
  return direct_sum(parts, e.algebra());
}

PerfectComplex perfect_cone(const PerfectComplex& source, const PerfectComplex& target, const ChainMap& f) {
  const Cone c = cone(f);
  if (c.complex.is_zero()) return PerfectComplex::zero(source.algebra());
  std::vector<std::vector<std::size_t>> vs;
  std::vector<Matrix> ds;
  for (int k = c.complex.lo(); k <= c.complex.hi(); ++k) {
    auto v = source.vertices(k + 1);
    const auto t = target.vertices(k);
    v.insert(v.end(), t.begin(), t.end());
    vs.push_back(std::move(v));
    if (k < c.complex.hi()) ds.push_back(c.complex.d(k));
  }
  return PerfectComplex(source.algebra(), c.complex.lo(), std::move(vs), std::move(ds));
}

PerfectSummand group_summand(const PerfectComplex& e, const std::vector<std::size_t>& group_indices) {
  const AlgebraPtr& a = e.algebra();
  const Field f = e.field();
  std::set<PerfectComplex::Summand> chosen;
  for (auto g : group_indices) {
    if (g >= e.groups().size()) throw InvalidInput("group index out of range");
    for (const auto& s : e.groups()[g]) chosen.insert(s);
  }
  if (e.is_zero() || chosen.empty()) {
    const PerfectComplex z = PerfectComplex::zero(a);
    return {z, ChainMap::zero(z.complex(), e.complex()), ChainMap::zero(e.complex(), z.complex())};
  }
  std::vector<std::vector<std::size_t>> vs;
  std::vector<std::vector<std::size_t>> coords;
  for (int k = e.lo(); k <= e.hi(); ++k) {
    std::vector<std::size_t> v;
    std::vector<std::size_t> c;
    const auto all = e.vertices(k);
    for (std::size_t s = 0; s < all.size(); ++s) {
      if (!chosen.count({k, s})) continue;
      v.push_back(all[s]);
      const std::size_t off = e.offset(k, s);
      for (std::size_t j = 0; j < a->projective_basis(all[s]).cols(); ++j) c.push_back(off + j);
    }
    vs.push_back(std::move(v));
    coords.push_back(std::move(c));
  }
  std::vector<Matrix> ds;
  for (int k = e.lo(); k < e.hi(); ++k) {
    const std::size_t i = static_cast<std::size_t>(k - e.lo());
    ds.push_back(e.complex().d(k).select_rows(coords[i + 1]).select_columns(coords[i]));
  }
  PerfectComplex sub(a, e.lo(), vs, ds);
  std::map<int, Matrix> inc;
  std::map<int, Matrix> proj;
  for (int k = e.lo(); k <= e.hi(); ++k) {
    const auto& c = coords[static_cast<std::size_t>(k - e.lo())];
    Matrix m = coordinate_inclusion(e.complex().dim(k), c, f);
    proj.emplace(k, m.transpose());
    inc.emplace(k, std::move(m));
  }
  ChainMap inclusion = ChainMap::unchecked(sub.complex(), e.complex(), std::move(inc));
  ChainMap projection = ChainMap::unchecked(e.complex(), sub.complex(), std::move(proj));
  return {std::move(sub), std::move(inclusion), std::move(projection)};
}

ChainMap group_projection(const PerfectComplex& e, const std::vector<std::size_t>& group_indices) {
  const PerfectSummand s = group_summand(e, group_indices);
  return compose(s.inclusion, s.projection);
}

}  // namespace aisle
