#include "aisle/hocolim.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <string>

#include "aisle/error.hpp"

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

/// Joint support of a list of complexes; {0, -1} when all are zero.
std::pair<int, int> support(const std::vector<BoundedComplex>& cs) {
  int lo = 0;
  int hi = -1;
  bool any = false;
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    lo = any ? std::min(lo, c.lo()) : c.lo();
    hi = any ? std::max(hi, c.hi()) : c.hi();
    any = true;
  }
  return {lo, hi};
}

std::size_t offset_in_sum(const std::vector<BoundedComplex>& parts, std::size_t index, int k) {
  std::size_t off = 0;
  for (std::size_t i = 0; i < index; ++i) off += parts[i].dim(k);
  return off;
}

}  // namespace

DirectedSystem::DirectedSystem(AlgebraPtr a, std::vector<BoundedComplex> objects,
                               std::map<std::pair<std::size_t, std::size_t>, ChainMap> maps)
    : algebra_(std::move(a)), objects_(std::move(objects)) {
  if (!algebra_) throw InvalidInput("directed system without an algebra");
  if (objects_.empty()) throw InvalidInput("directed system needs at least one object");
  for (const auto& o : objects_) {
    if (o.algebra() != algebra_) throw Mismatch("directed system object over a different algebra");
  }
  for (auto& [key, f] : maps) {
    const auto [s, t] = key;
    if (s >= objects_.size() || t >= objects_.size()) throw InvalidInput("transition map index out of range");
    if (s == t) throw InvalidInput("transition maps are only given for s < t");
    if (maps.count({t, s})) throw InvalidInput("order relation has a cycle between " + std::to_string(s) + " and " + std::to_string(t));
    if (!same_complex(f.source(), objects_[s]) || !same_complex(f.target(), objects_[t])) {
      throw InvalidInput("transition map (" + std::to_string(s) + ", " + std::to_string(t) + ") has the wrong ends");
    }
    // Revalidate against the stored objects.
    maps_.emplace(key, ChainMap(objects_[s], objects_[t], f.components()));
  }
  for (const auto& [st, f] : maps_) {
    for (const auto& [tu, g] : maps_) {
      if (tu.first != st.second) continue;
      const std::string triple =
          "(" + std::to_string(st.first) + ", " + std::to_string(st.second) + ", " + std::to_string(tu.second) + ")";
      auto it = maps_.find({st.first, tu.second});
      if (it == maps_.end()) throw InvalidInput("order is not transitive at " + triple);
      if (!(compose(g, f) == it->second)) throw InvalidInput("transition maps are not functorial at " + triple);
    }
  }
}

DirectedSystem DirectedSystem::sequence(AlgebraPtr a, std::vector<BoundedComplex> objects, std::vector<ChainMap> steps) {
  if (objects.empty() || steps.size() + 1 != objects.size()) {
    throw InvalidInput("sequence needs one step between consecutive objects");
  }
  std::map<std::pair<std::size_t, std::size_t>, ChainMap> maps;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const ChainMap step(objects[i], objects[i + 1], steps[i].components());
    maps.emplace(std::make_pair(i, i + 1), step);
    for (std::size_t s = 0; s < i; ++s) maps.emplace(std::make_pair(s, i + 1), compose(step, maps.at({s, i})));
  }
  DirectedSystem sys(std::move(a), std::move(objects), std::move(maps));
  sys.sequence_ = true;
  return sys;
}

ChainMap DirectedSystem::map(std::size_t s, std::size_t t) const {
  if (s == t) return ChainMap::identity(objects_.at(s));
  auto it = maps_.find({s, t});
  if (it == maps_.end()) throw InvalidInput("no transition map from " + std::to_string(s) + " to " + std::to_string(t));
  return it->second;
}

std::vector<std::vector<std::size_t>> DirectedSystem::chains(std::size_t r) const {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::function<void()> extend = [&]() {
    if (cur.size() == r + 1) {
      out.push_back(cur);
      return;
    }
    for (std::size_t t = 0; t < objects_.size(); ++t) {
      if (!cur.empty() && !less(cur.back(), t)) continue;
      cur.push_back(t);
      extend();
      cur.pop_back();
    }
  };
  extend();
  return out;
}

Colimit colimit(const DirectedSystem& sys) {
  const AlgebraPtr& a = sys.algebra();
  const Field f = a->field();
  std::vector<BoundedComplex> parts;
  for (std::size_t s = 0; s < sys.size(); ++s) parts.push_back(sys.object(s));
  const BoundedComplex sum = direct_sum(parts, a);
  std::map<int, Matrix> relations;
  for (int k = sum.lo(); k <= sum.hi() && !sum.is_zero(); ++k) {
    std::vector<Matrix> cols;
    for (std::size_t s = 0; s < sys.size(); ++s) {
      for (std::size_t t = 0; t < sys.size(); ++t) {
        if (!sys.less(s, t) || parts[s].dim(k) == 0) continue;
        Matrix m(sum.dim(k), parts[s].dim(k), f);
        m.set_block(offset_in_sum(parts, s, k), 0, Matrix::identity(parts[s].dim(k), f));
        m.set_block(offset_in_sum(parts, t, k), 0, -sys.map(s, t).at(k));
        cols.push_back(std::move(m));
      }
    }
    if (!cols.empty()) relations.emplace(k, hstack(cols, sum.dim(k), f));
  }
  const QuotientComplex q = quotient_complex(sum, relations);
  Colimit out{q.complex, {}};
  for (std::size_t s = 0; s < sys.size(); ++s) {
    std::map<int, Matrix> leg;
    for (int k = parts[s].lo(); k <= parts[s].hi() && !parts[s].is_zero(); ++k) {
      Matrix emb(sum.dim(k), parts[s].dim(k), f);
      emb.set_block(offset_in_sum(parts, s, k), 0, Matrix::identity(parts[s].dim(k), f));
      leg.emplace(k, q.projection.at(k) * emb);
    }
    out.legs.push_back(ChainMap(parts[s], q.complex, std::move(leg)));
  }
  return out;
}

Hocolim hocolim_sequence(const DirectedSystem& sys) {
  if (!sys.is_sequence()) throw InvalidInput("hocolim_sequence needs a sequence");
  const AlgebraPtr& a = sys.algebra();
  const Field f = a->field();
  const std::size_t n = sys.size() - 1;
  std::vector<BoundedComplex> all;
  for (std::size_t i = 0; i <= n; ++i) all.push_back(sys.object(i));
  const std::vector<BoundedComplex> head(all.begin(), all.begin() + static_cast<long>(n));
  const BoundedComplex w = direct_sum(head, a);
  const BoundedComplex v = direct_sum(all, a);
  std::map<int, Matrix> comps;
  for (int k = w.lo(); k <= w.hi() && !w.is_zero(); ++k) {
    Matrix m(v.dim(k), w.dim(k), f);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t col = offset_in_sum(head, i, k);
      m.set_block(offset_in_sum(all, i, k), col, Matrix::identity(all[i].dim(k), f));
      m.set_block(offset_in_sum(all, i + 1, k), col, -sys.map(i, i + 1).at(k));
    }
    comps.emplace(k, std::move(m));
  }
  const Cone c = cone(ChainMap(w, v, std::move(comps)));
  const Colimit colim = colimit(sys);
  std::map<int, Matrix> to;
  for (int k = c.complex.lo(); k <= c.complex.hi() && !c.complex.is_zero(); ++k) {
    Matrix m(colim.complex.dim(k), c.complex.dim(k), f);
    for (std::size_t i = 0; i <= n; ++i) {
      if (all[i].dim(k) == 0) continue;
      m.set_block(0, w.dim(k + 1) + offset_in_sum(all, i, k), colim.legs[i].at(k));
    }
    to.emplace(k, std::move(m));
  }
  Hocolim out{c.complex, ChainMap(c.complex, colim.complex, std::move(to))};
  out.quasi_iso = is_quasi_iso(out.to_colimit);
  return out;
}

Hocolim hocolim_bicomplex(const DirectedSystem& sys) {
  const AlgebraPtr& a = sys.algebra();
  const Field f = a->field();
  std::vector<std::vector<std::vector<std::size_t>>> chains;
  for (std::size_t r = 0;; ++r) {
    auto c = sys.chains(r);
    if (c.empty()) break;
    chains.push_back(std::move(c));
  }
  const int depth = static_cast<int>(chains.size()) - 1;
  std::vector<BoundedComplex> objs;
  for (std::size_t s = 0; s < sys.size(); ++s) objs.push_back(sys.object(s));
  const auto [lo_g, hi_g] = support(objs);
  const Colimit colim = colimit(sys);
  if (lo_g > hi_g) {
    BoundedComplex z(a);
    return {z, ChainMap::zero(z, colim.complex), true};
  }

  struct Piece {
    std::size_t r;
    std::size_t chain;
    std::size_t offset;
    std::size_t dim;
  };
  std::map<std::vector<std::size_t>, std::size_t> chain_index;
  for (const auto& level : chains) {
    for (std::size_t j = 0; j < level.size(); ++j) chain_index[level[j]] = j;
  }
  const int lo = lo_g - depth;
  const int hi = hi_g;
  std::vector<std::vector<Piece>> pieces;
  std::vector<FDModule> terms;
  for (int n = lo; n <= hi; ++n) {
    std::vector<Piece> ps;
    std::vector<FDModule> ms;
    std::size_t off = 0;
    for (std::size_t r = 0; r < chains.size(); ++r) {
      for (std::size_t j = 0; j < chains[r].size(); ++j) {
        const BoundedComplex& g = objs[chains[r][j][0]];
        const int deg = n + static_cast<int>(r);
        ps.push_back({r, j, off, g.dim(deg)});
        off += g.dim(deg);
        ms.push_back(g.term(deg));
      }
    }
    pieces.push_back(std::move(ps));
    terms.push_back(direct_sum(ms, a));
  }
  auto find_piece = [&](int n, std::size_t r, std::size_t j) -> const Piece& {
    for (const Piece& p : pieces[static_cast<std::size_t>(n - lo)]) {
      if (p.r == r && p.chain == j) return p;
    }
    throw VerificationFailure("bicomplex bookkeeping lost a chain");
  };
  std::vector<Matrix> diffs;
  for (int n = lo; n < hi; ++n) {
    Matrix d(terms[static_cast<std::size_t>(n + 1 - lo)].dim(), terms[static_cast<std::size_t>(n - lo)].dim(), f);
    for (const Piece& p : pieces[static_cast<std::size_t>(n - lo)]) {
      if (p.dim == 0) continue;
      const auto& chain = chains[p.r][p.chain];
      const BoundedComplex& g = objs[chain[0]];
      const int deg = n + static_cast<int>(p.r);
      // Vertical part: (-1)^k d_G with horizontal degree k = -r.
      const Piece& same = find_piece(n + 1, p.r, p.chain);
      if (same.dim > 0) d.set_block(same.offset, p.offset, (p.r % 2 == 0 ? g.d(deg) : -g.d(deg)));
      if (p.r == 0) continue;
      // Face 0 applies μ_{s_0 s_1}; face i >= 1 drops s_i with sign (-1)^i.
      {
        std::vector<std::size_t> face(chain.begin() + 1, chain.end());
        const Piece& q = find_piece(n + 1, p.r - 1, chain_index.at(face));
        d.set_block(q.offset, p.offset, sys.map(chain[0], chain[1]).at(deg));
      }
      for (std::size_t i = 1; i <= p.r; ++i) {
        std::vector<std::size_t> face = chain;
        face.erase(face.begin() + static_cast<long>(i));
        const Piece& q = find_piece(n + 1, p.r - 1, chain_index.at(face));
        Matrix id = Matrix::identity(p.dim, f);
        if (i % 2 == 1) id = -id;
        d.set_block(q.offset, p.offset, id + d.block(q.offset, p.offset, p.dim, p.dim));
      }
    }
    diffs.push_back(std::move(d));
  }
  const BoundedComplex tot(a, lo, std::move(terms), std::move(diffs));
  std::map<int, Matrix> to;
  for (int n = tot.lo(); n <= tot.hi() && !tot.is_zero(); ++n) {
    Matrix m(colim.complex.dim(n), tot.dim(n), f);
    for (const Piece& p : pieces[static_cast<std::size_t>(n - lo)]) {
      if (p.r != 0 || p.dim == 0) continue;
      m.set_block(0, p.offset, colim.legs[chains[0][p.chain][0]].at(n));
    }
    to.emplace(n, std::move(m));
  }
  Hocolim out{tot, ChainMap(tot, colim.complex, std::move(to))};
  out.quasi_iso = is_quasi_iso(out.to_colimit);
  return out;
}

}  // namespace aisle
