#include "aisle/equivalence.hpp"

#include <memory>
#include <string>

#include "aisle/fixtures.hpp"

namespace aisle {

namespace {

Matrix unit_vector(std::size_t n, std::size_t i, Field f) {
  Matrix v(n, 1, f);
  v(i, 0) = f.one();
  return v;
}

// Off-diagonal Peirce pieces form the radical when every diagonal piece is
// spanned by its idempotent and that span is a nilpotent ideal. Lets module
// computations over S run in any characteristic.
std::optional<Matrix> triangular_radical(const FDAlgebra& s, const std::vector<std::pair<std::size_t, std::size_t>>& pieces,
                                         std::size_t groups) {
  std::vector<std::size_t> diagonal(groups, 0);
  std::vector<std::size_t> off;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].first == pieces[i].second) {
      ++diagonal[pieces[i].first];
    } else {
      off.push_back(i);
    }
  }
  for (std::size_t c : diagonal) {
    if (c != 1) return std::nullopt;
  }
  Matrix rad(s.dim(), off.size(), s.field());
  for (std::size_t c = 0; c < off.size(); ++c) rad(off[c], c) = s.field().one();
  const Matrix all = Matrix::identity(s.dim(), s.field());
  if (rank(hstack(rad, product_space(s, all, rad))) != rad.cols()) return std::nullopt;
  if (rank(hstack(rad, product_space(s, rad, all))) != rad.cols()) return std::nullopt;
  Matrix power = rad;
  for (std::size_t step = 0; power.cols() > 0; ++step) {
    if (step > s.dim()) return std::nullopt;
    power = column_space_basis(product_space(s, rad, power));
  }
  return rad;
}

ChainMap on_generator(const PerfectComplex& e, const ChainMap& f) {
  return ChainMap::unchecked(e.complex(), e.complex(), f.components());
}

std::optional<PerfectComplex> perfect_model(const BoundedComplex& c, std::size_t max_len) {
  try {
    if (auto p = as_perfect(c)) return p;
    return resolve_complex(c, max_len).complex;
  } catch (const NonTermination&) {
    return std::nullopt;
  } catch (const UnsupportedField&) {
    return std::nullopt;
  }
}

std::size_t lookup(const std::map<int, std::size_t>& dims, int k) {
  const auto it = dims.find(k);
  return it == dims.end() ? 0 : it->second;
}

std::size_t binomial(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

EndomorphismRing::EndomorphismRing(PerfectComplex e)
    : e_(std::move(e)), hom_(e_, e_.complex()), h0_(hom_.cohomology(0)) {
  if (e_.is_zero()) throw InvalidInput("endomorphism ring of the zero complex");
  const Field f = e_.field();
  const std::size_t n = h0_.dim;
  const std::size_t g = e_.groups().size();
  auto coords = [&](const ChainMap& m) { return h0_.class_coordinates(hom_.encode(m, 0)); };

  std::vector<ChainMap> proj;
  for (std::size_t a = 0; a < g; ++a) proj.push_back(group_projection(e_, {a}));
  std::vector<ChainMap> reps;
  for (std::size_t i = 0; i < n; ++i) reps.push_back(on_generator(e_, hom_.chain_map(0, h0_.representatives.col(i))));

  for (std::size_t a = 0; a < g; ++a) {
    if (coords(proj[a]).is_zero()) throw InvalidInput("group " + std::to_string(a) + " of the generator is acyclic");
    lifts_.push_back(proj[a]);
    pieces_.emplace_back(a, a);
  }
  for (std::size_t to = 0; to < g; ++to) {
    for (std::size_t from = 0; from < g; ++from) {
      std::vector<ChainMap> pure;
      Matrix cols(n, 0, f);
      if (to == from) cols = coords(proj[to]);
      for (const ChainMap& r : reps) {
        pure.push_back(compose(proj[to], compose(r, proj[from])));
        cols = hstack(cols, coords(pure.back()));
      }
      const std::size_t skip = to == from ? 1 : 0;
      for (std::size_t p : rref(cols).pivots) {
        if (p < skip) continue;
        lifts_.push_back(pure[p - skip]);
        pieces_.emplace_back(from, to);
      }
    }
  }
  if (lifts_.size() != n) throw VerificationFailure("Peirce pieces of End(E) do not add up to its dimension");

  Matrix lift_coords(n, 0, f);
  for (const ChainMap& l : lifts_) lift_coords = hstack(lift_coords, coords(l));
  const auto inv = inverse(lift_coords);
  if (!inv) throw VerificationFailure("Peirce-adapted lifts are dependent in H^0 End(E)");
  to_basis_ = *inv;

  std::vector<Matrix> left(n, Matrix(n, n, f));
  strict_ = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // Peirce-pure lifts compose to zero unless the pieces chain.
      if (pieces_[i].second != pieces_[j].first) continue;
      const ChainMap prod = compose(lifts_[j], lifts_[i]);
      const Matrix c = class_of(prod);
      left[i].set_block(0, j, c);
      if (!strict_) continue;
      ChainMap sum = ChainMap::zero(e_.complex(), e_.complex());
      for (std::size_t k = 0; k < n; ++k) {
        if (!c(k, 0).is_zero()) sum = sum + lifts_[k].scaled(c(k, 0));
      }
      strict_ = sum == prod;
    }
  }

  std::vector<std::string> labels;
  std::vector<std::size_t> counter(g * g, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [from, to] = pieces_[i];
    if (i < g) {
      labels.push_back("e" + std::to_string(from));
    } else {
      labels.push_back("h" + std::to_string(from) + "_" + std::to_string(to) + "_" +
                       std::to_string(counter[from * g + to]++));
    }
  }
  Matrix unit(n, 1, f);
  std::vector<Matrix> idempotents;
  for (std::size_t a = 0; a < g; ++a) {
    unit(a, 0) = f.one();
    idempotents.push_back(unit_vector(n, a, f));
  }
  FDAlgebra s(f, std::move(labels), std::move(left), std::move(unit), std::move(idempotents));
  if (auto rad = triangular_radical(s, pieces_, g)) {
    std::vector<std::size_t> gens(n);
    for (std::size_t i = 0; i < n; ++i) gens[i] = i;
    s = s.with_presentation(std::move(gens), std::move(rad), std::nullopt);
  }
  s_ = std::make_shared<const FDAlgebra>(std::move(s));
}

std::size_t EndomorphismRing::piece_dim(std::size_t from, std::size_t to) const {
  std::size_t c = 0;
  for (const auto& p : pieces_) c += p == std::make_pair(from, to) ? 1 : 0;
  return c;
}

Matrix EndomorphismRing::class_of(const ChainMap& f) const {
  return to_basis_ * h0_.class_coordinates(hom_.encode(f, 0));
}

Matrix regular_endomorphism_isomorphism(const EndomorphismRing& ring) {
  const PerfectComplex& e = ring.generator();
  const AlgebraPtr& a = e.algebra();
  const std::size_t v = a->idempotent_count();
  std::vector<std::size_t> expected(v);
  for (std::size_t i = 0; i < v; ++i) expected[i] = i;
  if (e.lo() != 0 || e.hi() != 0 || e.vertices(0) != expected) {
    throw InvalidInput("generator is not the regular module in degree 0");
  }
  const Field f = a->field();
  Matrix phi(ring.dim(), a->dim(), f);
  for (std::size_t b = 0; b < a->dim(); ++b) {
    Matrix m(e.complex().dim(0), e.complex().dim(0), f);
    for (std::size_t i = 0; i < v; ++i) {
      for (std::size_t j = 0; j < v; ++j) {
        const Matrix r = a->multiply(a->idempotent(i), a->multiply(a->basis_vector(b), a->idempotent(j)));
        if (r.is_zero()) continue;
        m.set_block(e.offset(0, j), e.offset(0, i), projective_map(a, i, j, r));
      }
    }
    phi.set_block(0, b, ring.class_of(ChainMap(e.complex(), e.complex(), {{0, m}})));
  }
  if (!is_algebra_isomorphism(*a, *ring.algebra(), phi)) {
    throw VerificationFailure("right multiplication A -> End(A) is not an algebra isomorphism");
  }
  return phi;
}

std::optional<Matrix> kronecker_isomorphism(const AlgebraPtr& kronecker, const AlgebraPtr& s) {
  if (s->dim() != 4 || s->idempotent_count() != 2 || kronecker->dim() != 4 || s->field() != kronecker->field()) {
    return std::nullopt;
  }
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t j = 1 - i;
    const Matrix piece = column_space_basis(s->left_by(s->idempotent(j)) * s->right_by(s->idempotent(i)));
    if (piece.cols() != 2) continue;
    Matrix phi(4, 4, s->field());
    phi.set_block(0, 0, s->idempotent(i));
    phi.set_block(0, 1, s->idempotent(j));
    phi.set_block(0, 2, piece);
    if (is_algebra_isomorphism(*kronecker, *s, phi)) return phi;
  }
  return std::nullopt;
}

BoundedComplex real_functor_image(const EndomorphismRing& ring, const BoundedComplex& m) {
  if (!ring.strict()) throw VerificationFailure("lift table is not strict; F(M) would not be an S-module");
  const AlgebraPtr& s = ring.algebra();
  const HomComplex h(ring.generator(), m);
  if (h.lo() > h.hi()) return BoundedComplex(s);
  std::vector<FDModule> terms;
  std::vector<Matrix> diffs;
  for (int n = h.lo(); n <= h.hi(); ++n) {
    const std::size_t dim = h.dim(n);
    std::vector<Matrix> action(s->dim(), Matrix(dim, dim, s->field()));
    for (std::size_t c = 0; c < dim; ++c) {
      const auto comps = h.components(n, unit_vector(dim, c, s->field()));
      for (std::size_t i = 0; i < s->dim(); ++i) {
        std::map<int, Matrix> pre;
        for (const auto& [p, phi] : comps) pre.emplace(p, phi * ring.lift(i).at(p));
        action[i].set_block(0, c, h.encode(n, pre));
      }
    }
    terms.push_back(FDModule(s, dim, std::move(action)));
    if (n < h.hi()) diffs.push_back(h.linear().diff(n));
  }
  return BoundedComplex(s, h.lo(), std::move(terms), std::move(diffs));
}

ChainMap real_functor_map(const EndomorphismRing& ring, const ChainMap& g) {
  const HomComplex from(ring.generator(), g.source());
  const HomComplex to(ring.generator(), g.target());
  const BoundedComplex fs = real_functor_image(ring, g.source());
  const BoundedComplex ft = real_functor_image(ring, g.target());
  std::map<int, Matrix> comps;
  for (int n = std::max(from.lo(), to.lo()); n <= std::min(from.hi(), to.hi()); ++n) {
    if (from.dim(n) == 0 || to.dim(n) == 0) continue;
    comps.emplace(n, postcompose(from, to, g, n));
  }
  return ChainMap(fs, ft, std::move(comps));
}

std::vector<HomDimRow> compare_hom_dims(const EndomorphismRing& ring, const BoundedComplex& m,
                                        const BoundedComplex& n, int k_lo, int k_hi, std::size_t max_len) {
  std::optional<std::map<int, std::size_t>> source;
  std::optional<std::map<int, std::size_t>> target;
  if (auto pm = perfect_model(m, max_len)) source = derived_hom_dims(*pm, n);
  const BoundedComplex fn = real_functor_image(ring, n);
  if (auto pfm = perfect_model(real_functor_image(ring, m), max_len)) target = derived_hom_dims(*pfm, fn);
  std::vector<HomDimRow> rows;
  for (int k = k_lo; k <= k_hi; ++k) {
    HomDimRow row;
    row.k = k;
    if (source) row.source = lookup(*source, -k);
    if (target) row.target = lookup(*target, -k);
    rows.push_back(row);
  }
  return rows;
}

HeartRow heart_comparison(const EndomorphismRing& ring, const BoundedComplex& m, const TruncationOptions& opts) {
  HeartRow row;
  row.heart_side = lookup(derived_hom_dims(ring.generator(), heart_h0(ring.generator(), m, opts)), 0);
  row.functor_side = lookup(cohomology_dims(real_functor_image(ring, m)), 0);
  return row;
}

bool EquivalenceReport::all_equal() const {
  for (const auto& r : rows) {
    if (r.dims.computed() && !r.dims.equal()) return false;
  }
  for (const auto& h : heart) {
    if (!h.equal()) return false;
  }
  return true;
}

bool EquivalenceReport::any_not_computed() const {
  for (const auto& r : rows) {
    if (!r.dims.computed()) return true;
  }
  return false;
}

EquivalenceReport equivalence_report(const EndomorphismRing& ring,
                                     const std::vector<std::pair<BoundedComplex, BoundedComplex>>& pairs, int k_lo,
                                     int k_hi, const std::vector<BoundedComplex>& heart_samples,
                                     const TruncationOptions& opts) {
  EquivalenceReport report;
  report.ring_dim = ring.dim();
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (const HomDimRow& r : compare_hom_dims(ring, pairs[p].first, pairs[p].second, k_lo, k_hi)) {
      report.rows.push_back({p, r});
    }
  }
  for (const BoundedComplex& m : heart_samples) report.heart.push_back(heart_comparison(ring, m, opts));
  return report;
}

bool BeilinsonReport::ok() const {
  if (algebra_dim != expected_dim || !regular_is_tilting) return false;
  for (const auto& e : table) {
    if (e.paths != e.binomial || !e.twists_agree) return false;
  }
  if (tilt) {
    const auto& t = *tilt;
    if (!(t.compact && t.exceptional && t.generates && t.ring_is_kronecker && t.beilinson_is_kronecker &&
          t.hom_rows_equal && t.ring_dim == 4 && t.hom_pattern == std::vector<std::size_t>{1, 2, 0, 1})) {
      return false;
    }
  }
  return true;
}

BeilinsonReport beilinson_pipeline(std::size_t d, int twist_lo, int twist_hi, Field field) {
  if (d > 3) throw InvalidInput("Beilinson pipeline supports d <= 3");
  BeilinsonReport report;
  report.d = d;
  const AlgebraPtr a = beilinson_algebra(d, field);
  report.algebra_dim = a->dim();
  for (std::size_t i = 0; i <= d; ++i) {
    for (std::size_t j = 0; j <= d; ++j) {
      BeilinsonEntry e;
      e.from = i;
      e.to = j;
      e.paths = path_count(*a, i, j);
      e.binomial = j >= i ? binomial(j - i + d, d) : 0;
      for (int t = twist_lo; t <= twist_hi; ++t) {
        e.twists_agree = e.twists_agree && graded_hom_dim(d, static_cast<long>(i) + t, static_cast<long>(j) + t) == e.paths;
      }
      report.expected_dim += e.binomial;
      report.table.push_back(e);
    }
  }

  const PerfectComplex regular = PerfectComplex::regular(a, 0);
  const auto cert = standard_generation_certificate(regular);
  bool tilting = is_compact_presentation(regular) && is_exceptional(regular).exceptional && cert &&
                 verify_generation(regular, *cert);
  if (tilting) {
    try {
      regular_endomorphism_isomorphism(EndomorphismRing(regular));
    } catch (const VerificationFailure&) {
      tilting = false;
    }
  }
  report.regular_is_tilting = tilting;

  if (d == 1) {
    KroneckerTiltSuite suite;
    const AlgebraPtr kron = kronecker_algebra(field);
    const PerfectComplex t = kronecker_tilt(kron);
    suite.compact = is_compact_presentation(t);
    suite.exceptional = is_exceptional(t).exceptional;
    suite.generates = verify_generation(t, kronecker_tilt_certificate(t));
    const EndomorphismRing ring(t);
    suite.ring_dim = ring.dim();
    suite.hom_pattern = {ring.piece_dim(0, 0), ring.piece_dim(0, 1), ring.piece_dim(1, 0), ring.piece_dim(1, 1)};
    suite.ring_is_kronecker = kronecker_isomorphism(kron, ring.algebra()).has_value();
    suite.beilinson_is_kronecker = kronecker_isomorphism(kron, a).has_value();
    std::vector<BoundedComplex> samples;
    for (std::size_t v = 0; v < 2; ++v) {
      samples.push_back(BoundedComplex::stalk(projective(kron, v), 0));
      samples.push_back(BoundedComplex::stalk(simple(kron, v), 0));
    }
    suite.hom_rows_equal = true;
    for (const auto& m : samples) {
      for (const auto& n : samples) {
        for (const HomDimRow& r : compare_hom_dims(ring, m, n, -2, 2)) suite.hom_rows_equal = suite.hom_rows_equal && r.equal();
      }
    }
    report.tilt = suite;
  }
  return report;
}

}  // namespace aisle
