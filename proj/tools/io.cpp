#include "io.hpp"

#include <fstream>
#include <sstream>

#include "aisle/fixtures.hpp"

namespace aisle::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where + ": missing key '" + key + "'");
  return j.at(key);
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where + ": expected a string");
  return j.get<std::string>();
}

long long as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where + ": expected an integer");
  return j.get<long long>();
}

std::size_t as_index(const json& j, const std::string& where) {
  const long long v = as_int(j, where);
  if (v < 0) fail(where + ": expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

Scalar scalar_from_json(const json& j, Field f, const std::string& where) {
  if (j.is_string()) return f.parse_scalar(j.get<std::string>());
  if (j.is_number_integer()) return f.from_int(j.get<long long>());
  fail(where + ": scalars are strings such as \"3/2\" or integers");
}

// Shape read off the data; an empty array is 0 x 0.
Matrix matrix_any(const json& j, Field f, const std::string& where) {
  if (!j.is_array()) fail(where + ": expected a matrix");
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : (j[0].is_array() ? j[0].size() : 0);
  return matrix_from_json(j, f, rows, cols);
}

Matrix vector_from_json(const json& j, Field f, std::size_t n, const std::string& where) {
  if (!j.is_array() || j.size() != n) fail(where + ": expected a vector of length " + std::to_string(n));
  Matrix v(n, 1, f);
  for (std::size_t i = 0; i < n; ++i) v(i, 0) = scalar_from_json(j[i], f, where);
  return v;
}

json vector_json(const Matrix& v) {
  json out = json::array();
  for (std::size_t i = 0; i < v.rows(); ++i) out.push_back(v(i, 0).to_string());
  return out;
}

std::map<int, Matrix> components_any(const json& j, Field f, const std::string& where) {
  if (!j.is_object()) fail(where + ": expected an object degree -> matrix");
  std::map<int, Matrix> out;
  for (const auto& [k, m] : j.items()) {
    int deg = 0;
    try {
      std::size_t used = 0;
      deg = std::stoi(k, &used);
      if (used != k.size()) throw std::invalid_argument(k);
    } catch (const std::logic_error&) {
      fail(where + ": degree key '" + k + "' is not an integer");
    }
    out.emplace(deg, matrix_any(m, f, where + "[" + k + "]"));
  }
  return out;
}

AlgebraPtr parse_algebra(const json& j, Field f, const std::string& where) {
  if (j.contains("builtin")) {
    const std::string b = as_string(j.at("builtin"), where + ".builtin");
    if (b == "field") return field_algebra(f);
    if (b == "dual_numbers") return dual_numbers(f);
    if (b == "kronecker") return kronecker_algebra(f);
    if (b == "beilinson") return beilinson_algebra(as_index(require(j, "d", where), where + ".d"), f);
    if (b == "matrix") return matrix_algebra(as_index(require(j, "n", where), where + ".n"), f);
    fail(where + ": unknown builtin algebra '" + b + "'");
  }
  if (j.contains("quiver")) {
    const json& qj = j.at("quiver");
    Quiver q;
    for (const json& v : require(qj, "vertices", where)) q.vertices.push_back(as_string(v, where + ".vertices"));
    auto vertex = [&](const json& v) {
      const auto idx = q.vertex_index(as_string(v, where + ".arrows"));
      if (!idx) fail(where + ": unknown vertex " + v.dump());
      return *idx;
    };
    for (const json& a : require(qj, "arrows", where)) {
      q.arrows.push_back({as_string(require(a, "label", where), where + ".label"), vertex(require(a, "source", where)),
                          vertex(require(a, "target", where))});
    }
    q.validate();
    std::vector<Relation> relations;
    if (j.contains("relations")) {
      for (const json& rj : j.at("relations")) {
        Relation r;
        for (const json& term : rj) {
          Path p;
          for (const json& label : require(term, "path", where)) {
            const auto idx = q.arrow_index(as_string(label, where + ".path"));
            if (!idx) fail(where + ": unknown arrow " + label.dump());
            p.arrows.push_back(*idx);
          }
          if (p.arrows.empty()) fail(where + ": relation paths must be non-trivial");
          p.source = q.arrows[p.arrows.front()].source;
          p.target = q.arrows[p.arrows.back()].target;
          r.terms.emplace_back(scalar_from_json(require(term, "coefficient", where), f, where), p);
        }
        relations.push_back(std::move(r));
      }
    }
    return build_bound_quiver_algebra(q, relations, as_index(require(j, "length_bound", where), where), f);
  }
  if (j.contains("structure")) {
    const json& s = j.at("structure");
    std::vector<std::string> labels;
    for (const json& l : require(s, "labels", where)) labels.push_back(as_string(l, where + ".labels"));
    const std::size_t n = labels.size();
    std::vector<Matrix> left;
    const json& lj = require(s, "left", where);
    if (!lj.is_array() || lj.size() != n) fail(where + ": need one left multiplication matrix per basis element");
    for (const json& m : lj) left.push_back(matrix_from_json(m, f, n, n));
    std::vector<Matrix> idempotents;
    for (const json& e : require(s, "idempotents", where)) idempotents.push_back(vector_from_json(e, f, n, where));
    return std::make_shared<const FDAlgebra>(f, std::move(labels), std::move(left),
                                             vector_from_json(require(s, "unit", where), f, n, where),
                                             std::move(idempotents));
  }
  fail(where + ": an algebra is given by 'builtin', 'quiver' or 'structure'");
}

}  // namespace

json to_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string());
    out.push_back(std::move(row));
  }
  return out;
}

Matrix matrix_from_json(const json& j, Field f, std::size_t rows, std::size_t cols) {
  const std::string shape = std::to_string(rows) + " x " + std::to_string(cols);
  if (!j.is_array() || j.size() != rows) fail("expected a " + shape + " matrix, got " + j.dump());
  Matrix m(rows, cols, f);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) fail("expected a " + shape + " matrix, bad row " + std::to_string(r));
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = scalar_from_json(j[r][c], f, "matrix entry");
  }
  return m;
}

json to_json(const FDAlgebra& a) {
  json left = json::array();
  for (std::size_t i = 0; i < a.dim(); ++i) left.push_back(to_json(a.left(i)));
  json idem = json::array();
  for (std::size_t i = 0; i < a.idempotent_count(); ++i) idem.push_back(vector_json(a.idempotent(i)));
  return {{"structure", {{"labels", a.labels()}, {"left", left}, {"unit", vector_json(a.unit())}, {"idempotents", idem}}}};
}

json to_json(const FDModule& m) {
  json action = json::array();
  for (std::size_t i = 0; i < m.algebra()->dim(); ++i) action.push_back(to_json(m.act(i)));
  return {{"dim", m.dim()}, {"action", action}};
}

json to_json(const BoundedComplex& c) {
  json terms = json::array();
  json diffs = json::array();
  json blocks = json::array();
  for (int k = c.lo(); k <= c.hi() && !c.is_zero(); ++k) {
    terms.push_back(to_json(c.term(k)));
    blocks.push_back(c.blocks(k));
    if (k < c.hi()) diffs.push_back(to_json(c.d(k)));
  }
  return {{"lo", c.lo()}, {"terms", terms}, {"differentials", diffs}, {"blocks", blocks}};
}

json to_json(const PerfectComplex& e) {
  json vertices = json::array();
  json diffs = json::array();
  for (int k = e.lo(); k <= e.hi() && !e.is_zero(); ++k) {
    vertices.push_back(e.vertices(k));
    if (k < e.hi()) diffs.push_back(to_json(e.complex().d(k)));
  }
  json groups = json::array();
  for (const auto& g : e.groups()) {
    json gj = json::array();
    for (const auto& s : g) gj.push_back({s.degree, s.index});
    groups.push_back(std::move(gj));
  }
  return {{"lo", e.lo()}, {"vertices", vertices}, {"differentials", diffs}, {"groups", groups}};
}

json to_json(const ChainMap& f) {
  json out = json::object();
  for (const auto& [k, m] : f.components()) {
    if (m.rows() == 0 || m.is_zero()) continue;
    out[std::to_string(k)] = to_json(m);
  }
  return out;
}

namespace {
json components_json(const std::map<int, Matrix>& comps) {
  json out = json::object();
  for (const auto& [k, m] : comps) {
    if (m.rows() == 0 || m.is_zero()) continue;
    out[std::to_string(k)] = to_json(m);
  }
  return out;
}
}  // namespace

json to_json(const ThickCertificate& c, const std::string& generator) {
  json steps = json::array();
  for (const ThickStep& s : c.steps) {
    switch (s.kind) {
      case ThickStep::Kind::TakeGenerator:
        steps.push_back({{"op", "take"}, {"shift", s.shift}});
        break;
      case ThickStep::Kind::FiniteSum:
        steps.push_back({{"op", "sum"}, {"parts", s.parts}});
        break;
      case ThickStep::Kind::ConeOf:
        steps.push_back({{"op", "cone"}, {"source", s.source}, {"target", s.target}, {"map", components_json(s.map)}});
        break;
      case ThickStep::Kind::SummandVia:
        steps.push_back({{"op", "summand"}, {"of", s.source}, {"idempotent", components_json(s.map)}});
        break;
    }
  }
  return {{"generator", generator}, {"steps", steps}};
}

json to_json(const AisleCertificate& c) {
  json steps = json::array();
  for (const AisleStep& s : c.steps) {
    switch (s.kind) {
      case AisleStep::Kind::TakeGenerator:
        steps.push_back({{"op", "take"}, {"shift", s.shift}});
        break;
      case AisleStep::Kind::FiniteSum:
        steps.push_back({{"op", "sum"}, {"parts", s.parts}});
        break;
      case AisleStep::Kind::Extension:
        steps.push_back(
            {{"op", "extension"}, {"sub", s.sub}, {"quotient", s.quotient}, {"gluing", components_json(s.gluing)}});
        break;
    }
  }
  return {{"steps", steps}};
}

json dims_json(const std::map<int, std::size_t>& dims) {
  json out = json::object();
  for (const auto& [k, d] : dims) out[std::to_string(k)] = d;
  return out;
}

const BoundedComplex& Document::complex(const std::string& name) const {
  if (auto it = complexes.find(name); it != complexes.end()) return it->second;
  if (auto it = perfect.find(name); it != perfect.end()) return it->second.complex();
  fail("no complex named '" + name + "'");
}

const PerfectComplex& Document::perfect_complex(const std::string& name) const {
  if (auto it = perfect.find(name); it != perfect.end()) return it->second;
  if (complexes.count(name)) fail("complex '" + name + "' is not given by projectives");
  fail("no complex named '" + name + "'");
}

const ThickCertificate& Document::certificate(const std::string& name) const {
  if (auto it = certificates.find(name); it != certificates.end()) return it->second;
  fail("no certificate named '" + name + "'");
}

const DirectedSystem& Document::system(const std::string& name) const {
  if (auto it = systems.find(name); it != systems.end()) return it->second;
  fail("no system named '" + name + "'");
}

namespace {

AlgebraPtr algebra_ref(const Document& d, const json& j, const std::string& where) {
  const std::string name = as_string(require(j, "algebra", where), where + ".algebra");
  const auto it = d.algebras.find(name);
  if (it == d.algebras.end()) fail(where + ": no algebra named '" + name + "'");
  return it->second;
}

FDModule parse_module(const Document& d, const json& j, const AlgebraPtr& fallback, const std::string& where) {
  if (j.is_string()) {
    const auto it = d.modules.find(j.get<std::string>());
    if (it == d.modules.end()) fail(where + ": no module named " + j.dump());
    return it->second;
  }
  const AlgebraPtr a = j.contains("algebra") ? algebra_ref(d, j, where) : fallback;
  if (!a) fail(where + ": module without an algebra");
  if (j.contains("projective")) {
    std::vector<std::size_t> vs;
    for (const json& v : j.at("projective")) vs.push_back(as_index(v, where + ".projective"));
    return projective_sum(a, vs);
  }
  if (j.contains("simple")) return simple(a, as_index(j.at("simple"), where + ".simple"));
  const std::size_t dim = as_index(require(j, "dim", where), where + ".dim");
  const json& act = require(j, "action", where);
  if (!act.is_array() || act.size() != a->dim()) fail(where + ": need one action matrix per algebra basis element");
  std::vector<Matrix> action;
  for (const json& m : act) action.push_back(matrix_from_json(m, a->field(), dim, dim));
  return FDModule(a, dim, std::move(action));
}

void parse_complex(Document& d, const std::string& name, const json& j) {
  const std::string where = "complexes." + name;
  const AlgebraPtr a = algebra_ref(d, j, where);
  if (j.contains("builtin")) {
    const std::string b = as_string(j.at("builtin"), where + ".builtin");
    const int degree = j.contains("degree") ? static_cast<int>(as_int(j.at("degree"), where)) : 0;
    if (b == "regular") {
      d.perfect.emplace(name, PerfectComplex::regular(a, degree));
    } else if (b == "kronecker_tilt") {
      d.perfect.emplace(name, shift(kronecker_tilt(a), -degree));
    } else if (b == "regular_plus_shift") {
      d.perfect.emplace(name, shift(regular_plus_shift(a), -degree));
    } else {
      fail(where + ": unknown builtin complex '" + b + "'");
    }
    return;
  }
  const int lo = static_cast<int>(as_int(require(j, "lo", where), where + ".lo"));
  const json& dj = require(j, "differentials", where);
  if (j.contains("vertices")) {
    std::vector<std::vector<std::size_t>> vertices;
    for (const json& vj : j.at("vertices")) {
      std::vector<std::size_t> row;
      for (const json& v : vj) row.push_back(as_index(v, where + ".vertices"));
      vertices.push_back(std::move(row));
    }
    if (!dj.is_array() || dj.size() + 1 != std::max<std::size_t>(vertices.size(), 1)) {
      fail(where + ": need one differential between consecutive degrees");
    }
    auto term_dim = [&](std::size_t k) {
      std::size_t n = 0;
      for (std::size_t v : vertices[k]) n += projective(a, v).dim();
      return n;
    };
    std::vector<Matrix> diffs;
    for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
      diffs.push_back(matrix_from_json(dj[k], a->field(), term_dim(k + 1), term_dim(k)));
    }
    std::optional<PerfectComplex::Groups> groups;
    if (j.contains("groups")) {
      groups.emplace();
      for (const json& gj : j.at("groups")) {
        std::vector<PerfectComplex::Summand> g;
        for (const json& s : gj) {
          if (!s.is_array() || s.size() != 2) fail(where + ": group members are [degree, index]");
          g.push_back({static_cast<int>(as_int(s[0], where)), as_index(s[1], where)});
        }
        groups->push_back(std::move(g));
      }
    }
    d.perfect.emplace(name, PerfectComplex(a, lo, std::move(vertices), std::move(diffs), std::move(groups)));
    return;
  }
  std::vector<FDModule> terms;
  for (const json& t : require(j, "terms", where)) terms.push_back(parse_module(d, t, a, where + ".terms"));
  if (terms.empty()) {
    d.complexes.emplace(name, BoundedComplex(a));
    return;
  }
  if (!dj.is_array() || dj.size() + 1 != terms.size()) fail(where + ": need one differential between consecutive degrees");
  std::vector<Matrix> diffs;
  for (std::size_t k = 0; k + 1 < terms.size(); ++k) {
    diffs.push_back(matrix_from_json(dj[k], a->field(), terms[k + 1].dim(), terms[k].dim()));
  }
  std::vector<std::vector<std::size_t>> blocks;
  if (j.contains("blocks")) {
    for (const json& bj : j.at("blocks")) {
      std::vector<std::size_t> row;
      for (const json& b : bj) row.push_back(as_index(b, where + ".blocks"));
      blocks.push_back(std::move(row));
    }
  }
  d.complexes.emplace(name, BoundedComplex(a, lo, std::move(terms), std::move(diffs), std::move(blocks)));
}

ThickCertificate parse_certificate(const Document& d, const std::string& name, const json& j) {
  const std::string where = "certificates." + name;
  const PerfectComplex& e = d.perfect_complex(as_string(require(j, "generator", where), where + ".generator"));
  if (j.contains("builtin")) {
    const std::string b = as_string(j.at("builtin"), where + ".builtin");
    if (b == "kronecker_tilt") return kronecker_tilt_certificate(e);
    if (b == "standard") {
      auto c = standard_generation_certificate(e);
      if (!c) fail(where + ": no standard certificate for this generator");
      return *c;
    }
    fail(where + ": unknown builtin certificate '" + b + "'");
  }
  ThickCertificate cert{e, {}};
  const Field f = e.field();
  std::size_t i = 0;
  for (const json& s : require(j, "steps", where)) {
    const std::string sw = where + ".steps[" + std::to_string(i++) + "]";
    const std::string op = as_string(require(s, "op", sw), sw + ".op");
    if (op == "take") {
      cert.steps.push_back(ThickStep::take(static_cast<int>(as_int(require(s, "shift", sw), sw))));
    } else if (op == "sum") {
      std::vector<std::size_t> parts;
      for (const json& p : require(s, "parts", sw)) parts.push_back(as_index(p, sw + ".parts"));
      cert.steps.push_back(ThickStep::sum(std::move(parts)));
    } else if (op == "cone") {
      cert.steps.push_back(ThickStep::cone_of(as_index(require(s, "source", sw), sw), as_index(require(s, "target", sw), sw),
                                              components_any(require(s, "map", sw), f, sw + ".map")));
    } else if (op == "summand") {
      cert.steps.push_back(ThickStep::summand(as_index(require(s, "of", sw), sw),
                                              components_any(require(s, "idempotent", sw), f, sw + ".idempotent")));
    } else {
      fail(sw + ": unknown op '" + op + "'");
    }
  }
  return cert;
}

ChainMap parse_map(const json& j, const BoundedComplex& s, const BoundedComplex& t, const std::string& where) {
  std::map<int, Matrix> comps;
  for (const auto& [k, m] : components_any(require(j, "components", where), s.field(), where)) {
    if (m.rows() != t.dim(k) || m.cols() != s.dim(k)) {
      fail(where + ": component in degree " + std::to_string(k) + " has the wrong shape");
    }
    comps.emplace(k, m);
  }
  return ChainMap(s, t, std::move(comps));
}

DirectedSystem parse_system(const Document& d, const std::string& name, const json& j) {
  const std::string where = "systems." + name;
  const AlgebraPtr a = algebra_ref(d, j, where);
  std::vector<BoundedComplex> objects;
  for (const json& o : require(j, "objects", where)) objects.push_back(d.complex(as_string(o, where + ".objects")));
  if (j.contains("steps")) {
    std::vector<ChainMap> steps;
    std::size_t i = 0;
    for (const json& s : j.at("steps")) {
      if (i + 1 >= objects.size()) fail(where + ": more steps than consecutive objects");
      steps.push_back(parse_map(s, objects[i], objects[i + 1], where + ".steps[" + std::to_string(i) + "]"));
      ++i;
    }
    return DirectedSystem::sequence(a, std::move(objects), std::move(steps));
  }
  std::map<std::pair<std::size_t, std::size_t>, ChainMap> maps;
  for (const json& m : require(j, "maps", where)) {
    const std::size_t from = as_index(require(m, "from", where), where);
    const std::size_t to = as_index(require(m, "to", where), where);
    if (from >= objects.size() || to >= objects.size()) fail(where + ": map index out of range");
    maps.emplace(std::make_pair(from, to), parse_map(m, objects[from], objects[to], where + ".maps"));
  }
  return DirectedSystem(a, std::move(objects), std::move(maps));
}

}  // namespace

Document parse_document(const json& j, std::optional<Field> field_override) {
  if (!j.is_object()) fail("document must be a JSON object");
  if (j.contains("schema_version") && as_int(j.at("schema_version"), "schema_version") != kSchemaVersion) {
    fail("unsupported schema_version " + j.at("schema_version").dump());
  }
  Document d;
  if (field_override) {
    d.field = *field_override;
  } else if (j.contains("field")) {
    d.field = Field::parse(as_string(j.at("field"), "field"));
  }
  auto section = [&](const char* key) -> const json& {
    static const json empty = json::object();
    if (!j.contains(key)) return empty;
    if (!j.at(key).is_object()) fail(std::string(key) + " must be an object keyed by name");
    return j.at(key);
  };
  for (const auto& [name, aj] : section("algebras").items()) d.algebras.emplace(name, parse_algebra(aj, d.field, "algebras." + name));
  for (const auto& [name, mj] : section("modules").items()) {
    d.modules.emplace(name, parse_module(d, mj, nullptr, "modules." + name));
  }
  // Complexes never refer to each other, so key order is irrelevant.
  for (const auto& [name, cj] : section("complexes").items()) parse_complex(d, name, cj);
  for (const auto& [name, cj] : section("certificates").items()) d.certificates.emplace(name, parse_certificate(d, name, cj));
  for (const auto& [name, sj] : section("systems").items()) d.systems.emplace(name, parse_system(d, name, sj));
  return d;
}

Document load_document(const std::string& path, std::optional<Field> field_override) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail(path + ": " + e.what());
  }
  return parse_document(j, field_override);
}

}  // namespace aisle::io
