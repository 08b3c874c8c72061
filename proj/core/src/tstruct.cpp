#include "aisle/tstruct.hpp"

#include <algorithm>
#include <climits>
#include <string>

#include "aisle/hom_complex.hpp"
#include "aisle/linalg.hpp"

namespace aisle {

namespace {

bool same_complex(const BoundedComplex& x, const BoundedComplex& y) {
  if (x.is_zero() || y.is_zero()) return x.is_zero() && y.is_zero();
  if (x.lo() != y.lo() || x.hi() != y.hi()) return false;
  for (int k = x.lo(); k <= x.hi(); ++k) {
    if (x.dim(k) != y.dim(k) || x.d(k) != y.d(k)) return false;
  }
  return true;
}

std::size_t checked_ref(std::size_t ref, std::size_t step) {
  if (ref >= step) throw CertificateError(step, "refers to step " + std::to_string(ref) + " which is not earlier");
  return ref;
}

template <typename F>
auto at_step(std::size_t step, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const CertificateError&) {
    throw;
  } catch (const Error& e) {
    throw CertificateError(step, e.what());
  }
}

/// Image of a strict idempotent as a subcomplex.
BoundedComplex idempotent_image(const ChainMap& e, std::size_t step) {
  const ChainMap sq = compose(e, e);
  if (!(sq == e)) {
    if (is_null_homotopic(sq - e)) {
      throw CertificateError(step, "idempotent holds only up to homotopy; supply a strict idempotent");
    }
    throw CertificateError(step, "endomorphism is not idempotent up to homotopy");
  }
  std::map<int, Matrix> gens;
  for (const auto& [k, m] : e.components()) gens.emplace(k, m);
  return generated_subcomplex(e.source(), gens).complex;
}

bool is_regular_stalk(const BoundedComplex& c) {
  const auto h = cohomology_dims(c);
  const AlgebraPtr& a = c.algebra();
  if (h.size() != 1 || h.begin()->first != 0 || h.begin()->second != a->dim()) return false;
  // A module of dimension dim A generated by one element is free of rank one.
  return find_cyclic_generator(cohomology_module(c, 0)).has_value();
}

struct Classes {
  std::vector<int> shifts;
  std::vector<ChainMap> maps;  // E[shift] -> target
};

/// Basis of Hom_D(E[k], B) for every k >= 0.
Classes nonnegative_classes(const PerfectComplex& e, const BoundedComplex& b) {
  Classes out;
  if (b.is_zero() || e.is_zero()) return out;
  const HomComplex h(e, b);
  for (int n = std::min(0, h.hi()); n >= h.lo(); --n) {
    const Cohomology c = h.cohomology(n);
    for (std::size_t j = 0; j < c.dim; ++j) {
      out.shifts.push_back(-n);
      out.maps.push_back(h.chain_map(n, c.representatives.col(j)));
    }
  }
  return out;
}

bool positive_self_ext_vanishes(const PerfectComplex& e) {
  for (const auto& [k, d] : derived_hom_dims(e, e.complex())) {
    if (k < 0 && d > 0) return false;
  }
  return true;
}

}  // namespace

AisleStep AisleStep::take(int shift) {
  AisleStep s;
  s.kind = Kind::TakeGenerator;
  s.shift = shift;
  return s;
}

AisleStep AisleStep::sum(std::vector<std::size_t> parts) {
  AisleStep s;
  s.kind = Kind::FiniteSum;
  s.parts = std::move(parts);
  return s;
}

AisleStep AisleStep::extension(std::size_t sub, std::size_t quotient, std::map<int, Matrix> gluing) {
  AisleStep s;
  s.kind = Kind::Extension;
  s.sub = sub;
  s.quotient = quotient;
  s.gluing = std::move(gluing);
  return s;
}

std::vector<BoundedComplex> replay(const AisleCertificate& cert) {
  const AlgebraPtr& a = cert.generator.algebra();
  std::vector<BoundedComplex> objects;
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const AisleStep& s = cert.steps[i];
    objects.push_back(at_step(i, [&]() -> BoundedComplex {
      switch (s.kind) {
        case AisleStep::Kind::TakeGenerator:
          if (s.shift < 0) throw CertificateError(i, "aisle generators need a shift >= 0");
          return shift(cert.generator.complex(), s.shift);
        case AisleStep::Kind::FiniteSum: {
          std::vector<BoundedComplex> parts;
          for (std::size_t p : s.parts) parts.push_back(objects[checked_ref(p, i)]);
          return direct_sum(parts, a);
        }
        case AisleStep::Kind::Extension: {
          const BoundedComplex& x = objects[checked_ref(s.sub, i)];
          const BoundedComplex& z = objects[checked_ref(s.quotient, i)];
          return cone(ChainMap(shift(z, -1), x, s.gluing)).complex;
        }
      }
      throw CertificateError(i, "unknown step");
    }));
  }
  return objects;
}

ThickStep ThickStep::take(int shift) {
  ThickStep s;
  s.kind = Kind::TakeGenerator;
  s.shift = shift;
  return s;
}

ThickStep ThickStep::sum(std::vector<std::size_t> parts) {
  ThickStep s;
  s.kind = Kind::FiniteSum;
  s.parts = std::move(parts);
  return s;
}

ThickStep ThickStep::cone_of(std::size_t source, std::size_t target, std::map<int, Matrix> map) {
  ThickStep s;
  s.kind = Kind::ConeOf;
  s.source = source;
  s.target = target;
  s.map = std::move(map);
  return s;
}

ThickStep ThickStep::summand(std::size_t of, std::map<int, Matrix> idempotent) {
  ThickStep s;
  s.kind = Kind::SummandVia;
  s.source = of;
  s.map = std::move(idempotent);
  return s;
}

std::vector<BoundedComplex> replay(const ThickCertificate& cert) {
  const AlgebraPtr& a = cert.generator.algebra();
  std::vector<BoundedComplex> objects;
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const ThickStep& s = cert.steps[i];
    objects.push_back(at_step(i, [&]() -> BoundedComplex {
      switch (s.kind) {
        case ThickStep::Kind::TakeGenerator:
          return shift(cert.generator.complex(), s.shift);
        case ThickStep::Kind::FiniteSum: {
          std::vector<BoundedComplex> parts;
          for (std::size_t p : s.parts) parts.push_back(objects[checked_ref(p, i)]);
          return direct_sum(parts, a);
        }
        case ThickStep::Kind::ConeOf: {
          const BoundedComplex& x = objects[checked_ref(s.source, i)];
          const BoundedComplex& y = objects[checked_ref(s.target, i)];
          return cone(ChainMap(x, y, s.map)).complex;
        }
        case ThickStep::Kind::SummandVia: {
          const BoundedComplex& x = objects[checked_ref(s.source, i)];
          return idempotent_image(ChainMap(x, x, s.map), i);
        }
      }
      throw CertificateError(i, "unknown step");
    }));
  }
  return objects;
}

bool verify_generation(const PerfectComplex& e, const ThickCertificate& cert) {
  if (e.algebra() != cert.generator.algebra()) throw Mismatch("certificate is over a different algebra");
  if (!same_complex(e.complex(), cert.generator.complex())) {
    throw InvalidInput("certificate refers to a different generator");
  }
  if (cert.steps.empty()) throw CertificateError(0, "empty certificate");
  const std::vector<BoundedComplex> objects = replay(cert);
  return is_regular_stalk(objects.back());
}

int perp_bound(const ThickCertificate& cert) {
  std::vector<int> beta;
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const ThickStep& s = cert.steps[i];
    switch (s.kind) {
      case ThickStep::Kind::TakeGenerator:
        beta.push_back(1 + s.shift);
        break;
      case ThickStep::Kind::FiniteSum: {
        int b = INT_MAX;
        for (std::size_t p : s.parts) b = std::min(b, beta[checked_ref(p, i)]);
        beta.push_back(b);
        break;
      }
      case ThickStep::Kind::ConeOf: {
        const int x = beta[checked_ref(s.source, i)];
        const int y = beta[checked_ref(s.target, i)];
        beta.push_back(std::min(x == INT_MAX ? INT_MAX : x + 1, y));
        break;
      }
      case ThickStep::Kind::SummandVia:
        beta.push_back(beta[checked_ref(s.source, i)]);
        break;
    }
  }
  if (beta.empty() || beta.back() == INT_MAX) throw InvalidInput("certificate does not use the generator");
  return beta.back();
}

ThickCertificate shift_generator(const ThickCertificate& cert, int n) {
  ThickCertificate out{shift(cert.generator, n), cert.steps};
  // E[k] = (E[n])[k - n].
  for (ThickStep& s : out.steps) {
    if (s.kind == ThickStep::Kind::TakeGenerator) s.shift -= n;
  }
  return out;
}

std::optional<ThickCertificate> standard_generation_certificate(const PerfectComplex& e) {
  if (e.is_zero() || e.lo() != e.hi()) return std::nullopt;
  const AlgebraPtr& a = e.algebra();
  const int s = e.lo();
  const std::vector<std::size_t> vs = e.vertices(s);
  // One summand per vertex, in vertex order.
  std::vector<std::size_t> chosen;
  for (std::size_t v = 0; v < a->idempotent_count(); ++v) {
    auto it = std::find(vs.begin(), vs.end(), v);
    if (it == vs.end()) return std::nullopt;
    chosen.push_back(static_cast<std::size_t>(it - vs.begin()));
  }
  const std::size_t n = e.complex().dim(s);
  Matrix p(n, n, e.field());
  for (std::size_t idx : chosen) {
    const std::size_t off = e.offset(s, idx);
    for (std::size_t j = 0; j < e.complex().blocks(s)[idx]; ++j) p(off + j, off + j) = e.field().one();
  }
  ThickCertificate cert{e, {ThickStep::take(s), ThickStep::summand(0, {{0, p}})}};
  return cert;
}

TruncationResult truncate(const PerfectComplex& e, const BoundedComplex& m, const TruncationOptions& opts) {
  if (e.is_zero()) throw InvalidInput("truncation needs a nonzero generator");
  if (e.algebra() != m.algebra()) throw Mismatch("generator and target are over different algebras");
  const AlgebraPtr& a = m.algebra();

  std::optional<int> beta;
  {
    std::optional<ThickCertificate> gen = opts.generation;
    if (!gen) gen = standard_generation_certificate(e);
    if (gen && positive_self_ext_vanishes(e)) {
      if (!verify_generation(e, *gen)) throw InvalidInput("generation certificate does not reach A");
      beta = perp_bound(*gen);
    }
  }

  AisleCertificate cert{e, {AisleStep::sum({})}};
  std::size_t current = 0;
  BoundedComplex n_part(a);
  ChainMap nu = ChainMap::zero(n_part, m);
  std::size_t iterations = 0;
  bool closed = false;

  for (;;) {
    const Cone b = cone(nu);
    // The unreduced cone carries all of N; bound it too so that elimination
    // itself stays within budget.
    if (b.complex.total_dim() > 4 * opts.max_dim) {
      throw TruncationDiverged(iterations, "truncation cone exceeded dimension " + std::to_string(4 * opts.max_dim) +
                                               " after " + std::to_string(iterations) + " iterations", b.complex);
    }
    const Reduction red = cancel_contractible(b.complex);
    if (iterations > 0 && red.reduced.total_dim() > opts.max_dim) {
      throw TruncationDiverged(iterations, "truncation iterate exceeded dimension " + std::to_string(opts.max_dim) +
                                               " after " + std::to_string(iterations) + " iterations", red.reduced);
    }
    const Classes cls = nonnegative_classes(e, red.reduced);
    if (cls.maps.empty()) break;
    // Every class of M has been coned once; what is left dies in the telescope
    // if it cannot reach degrees >= β.
    const int min_k = *std::min_element(cls.shifts.begin(), cls.shifts.end());
    if (beta && iterations >= 1 && e.hi() - min_k < *beta) {
      closed = true;
      break;
    }
    if (iterations == opts.max_iter) {
      throw TruncationDiverged(iterations, "truncation did not stabilise after " + std::to_string(iterations) +
                                               " iterations", red.reduced);
    }

    std::vector<BoundedComplex> sources;
    for (const ChainMap& f : cls.maps) sources.push_back(f.source());
    const BoundedComplex s = direct_sum(sources, a);
    std::map<int, Matrix> phi_red;
    for (int k = s.lo(); k <= s.hi(); ++k) {
      Matrix col(red.reduced.dim(k), s.dim(k), a->field());
      std::size_t off = 0;
      for (const ChainMap& f : cls.maps) {
        const std::size_t w = f.source().dim(k);
        if (w > 0) col.set_block(0, off, f.at(k));
        off += w;
      }
      phi_red.emplace(k, std::move(col));
    }
    const ChainMap phi = compose(red.from_reduced, ChainMap(s, red.reduced, std::move(phi_red)));

    // φ = (h, ψ) into cone(ν)^k = N^{k+1} ⊕ M^k; glue N' = cone(S[-1] -> N).
    std::map<int, Matrix> glue;
    std::map<int, Matrix> psi;
    for (int k = s.lo(); k <= s.hi(); ++k) {
      const Matrix pk = phi.at(k);
      const std::size_t nd = n_part.dim(k + 1);
      if (nd > 0) glue.emplace(k + 1, pk.block(0, 0, nd, s.dim(k)));
      if (m.dim(k) > 0) psi.emplace(k, pk.block(nd, 0, m.dim(k), s.dim(k)));
    }
    const ChainMap g(shift(s, -1), n_part, glue);
    const BoundedComplex next = cone(g).complex;
    std::map<int, Matrix> nu_next;
    for (int k = next.lo(); k <= next.hi() && !next.is_zero(); ++k) {
      Matrix row(m.dim(k), next.dim(k), a->field());
      if (m.dim(k) > 0) {
        if (s.dim(k) > 0) row.set_block(0, 0, -psi.at(k));
        if (n_part.dim(k) > 0) row.set_block(0, s.dim(k), nu.at(k));
      }
      nu_next.emplace(k, std::move(row));
    }

    std::vector<std::size_t> takes;
    for (int k : cls.shifts) {
      takes.push_back(cert.steps.size());
      cert.steps.push_back(AisleStep::take(k));
    }
    cert.steps.push_back(AisleStep::sum(takes));
    const std::size_t sum_step = cert.steps.size() - 1;
    cert.steps.push_back(AisleStep::extension(current, sum_step, glue));
    current = cert.steps.size() - 1;

    nu = ChainMap(next, m, std::move(nu_next));
    n_part = next;
    ++iterations;
  }

  const Cone b = cone(nu);
  ChainMap to_b = b.inclusion;
  if (closed) {
    const Truncation t = soft_tau_geq(b.complex, *beta);
    to_b = compose(t.map, to_b);
  }
  const Reduction red = cancel_contractible(to_b.target());
  const ChainMap u = compose(red.to_reduced, to_b);
  const BoundedComplex& coaisle = red.reduced;

  // Orthogonality over the full window of shifts.
  const int k_max = coaisle.is_zero() ? -1 : e.hi() - coaisle.lo();
  if (!nonnegative_classes(e, coaisle).maps.empty()) {
    throw VerificationFailure("co-aisle part is not right orthogonal to the generator");
  }

  const Cone c = cone(u);
  const BoundedComplex aisle = shift(c.complex, -1);
  const ChainMap back = shift(c.projection, -1);
  std::map<int, Matrix> to_m;
  for (const auto& [k, f] : back.components()) to_m.emplace(k, -f);
  ChainMap to_input(aisle, m, std::move(to_m));

  TruncationResult out{m, aisle, coaisle, to_input, u, c.inclusion, iterations, 0, k_max, cert, std::nullopt};
  if (closed) out.tail_bound = beta;
  return out;
}

BoundedComplex tau_leq(const PerfectComplex& e, int n, const BoundedComplex& m, const TruncationOptions& opts) {
  TruncationOptions o = opts;
  if (o.generation) o.generation = shift_generator(*o.generation, -n);
  return truncate(shift(e, -n), m, o).aisle;
}

BoundedComplex tau_geq(const PerfectComplex& e, int n, const BoundedComplex& m, const TruncationOptions& opts) {
  TruncationOptions o = opts;
  if (o.generation) o.generation = shift_generator(*o.generation, 1 - n);
  return truncate(shift(e, 1 - n), m, o).coaisle;
}

BoundedComplex heart_h0(const PerfectComplex& e, const BoundedComplex& m, const TruncationOptions& opts) {
  return tau_geq(e, 0, tau_leq(e, 0, m, opts), opts);
}

ExceptionalReport is_exceptional(const PerfectComplex& e) {
  ExceptionalReport out;
  if (e.is_zero()) return out;
  const HomComplex h(e, e.complex());
  for (int n = h.lo(); n <= h.hi(); ++n) {
    if (n == 0) continue;
    const Cohomology c = h.cohomology(n);
    for (std::size_t j = 0; j < c.dim; ++j) {
      // A degree-n cycle is a map E[-n] -> E, i.e. a class in Hom(E, E[n]).
      out.witnesses.push_back({n, h.chain_map(n, c.representatives.col(j))});
    }
  }
  out.exceptional = out.witnesses.empty();
  return out;
}

bool is_compact_presentation(const PerfectComplex& e) {
  const BoundedComplex& c = e.complex();
  if (c.is_zero()) return true;
  for (int k = c.lo(); k <= c.hi(); ++k) {
    std::size_t expect = 0;
    for (std::size_t v : e.vertices(k)) expect += projective(e.algebra(), v).dim();
    if (expect != c.dim(k)) return false;
  }
  return true;
}

bool is_compact_presentation(const BoundedComplex& c) { return as_perfect(c).has_value(); }

std::optional<PerfectComplex> as_perfect(const BoundedComplex& c) {
  const AlgebraPtr& a = c.algebra();
  if (c.is_zero()) return PerfectComplex::zero(a);
  std::vector<std::vector<std::size_t>> vertices;
  std::vector<Matrix> isos;
  std::vector<Matrix> inverses;
  for (int k = c.lo(); k <= c.hi(); ++k) {
    const ProjectiveCover pc = projective_cover(c.term(k));
    if (pc.module.dim() != c.dim(k)) return std::nullopt;
    auto inv = inverse(pc.map);
    if (!inv) return std::nullopt;
    vertices.push_back(pc.vertices);
    isos.push_back(pc.map);
    inverses.push_back(*inv);
  }
  std::vector<Matrix> diffs;
  for (int k = c.lo(); k < c.hi(); ++k) {
    diffs.push_back(inverses[k + 1 - c.lo()] * c.d(k) * isos[k - c.lo()]);
  }
  return PerfectComplex(a, c.lo(), std::move(vertices), std::move(diffs));
}

Window window_membership(const PerfectComplex& e, const BoundedComplex& m, const TruncationOptions& opts) {
  const auto dims = derived_hom_dims(e, m);
  if (dims.empty()) return {0, 0};
  const Window w{dims.begin()->first, dims.rbegin()->first + 1};
  TruncationOptions o = opts;
  if (o.generation) o.generation = shift_generator(*o.generation, w.a);
  if (!is_acyclic(truncate(shift(e, w.a), m, o).coaisle)) {
    throw VerificationFailure("object is not in the aisle at the lower end of its window");
  }
  return w;
}

}  // namespace aisle
