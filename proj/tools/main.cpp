#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "aisle/equivalence.hpp"
#include "aisle/fixtures.hpp"
#include "aisle/sampling.hpp"
#include "io.hpp"

#ifndef AISLE_VERSION
#define AISLE_VERSION "0.0.0"
#endif

namespace {

using namespace aisle;
using io::json;

enum Exit : int { kOk = 0, kFalse = 1, kInputError = 2, kNotComputed = 3, kInternal = 4 };

struct Session {
  std::string field;
  std::uint64_t seed = 1;
  std::size_t max_iter = 64;
  std::string out;
  bool summary = false;

  std::optional<Field> field_override() const {
    if (field.empty()) return std::nullopt;
    return Field::parse(field);
  }
};

const char* status_name(int code) {
  switch (code) {
    case kOk: return "ok";
    case kFalse: return "verified-false";
    case kInputError: return "input-error";
    case kNotComputed: return "not-computed";
    default: return "internal-error";
  }
}

void emit(const Session& s, const json& report) {
  const std::string text = report.dump(2) + "\n";
  if (s.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream(s.out) << text;
  }
}

// Runs a command body that fills `report`; library errors become exit codes
// and an "error" entry, so a report is written in every case.
int run(const Session& s, const std::string& command, const std::string& tag, const std::function<int(json&, Field&)>& body) {
  json report = {{"schema_version", io::kSchemaVersion}, {"tool", "aisle"},   {"version", AISLE_VERSION},
                 {"command", command},                    {"tag", tag},        {"seed", s.seed},
                 {"max_iter", s.max_iter}};
  Field field;
  int code = kOk;
  auto error = [&](int c, const std::string& kind, const std::string& what) {
    code = c;
    report["error"] = {{"kind", kind}, {"message", what}};
  };
  try {
    if (auto f = s.field_override()) field = *f;
    code = body(report, field);
  } catch (const CertificateError& e) {
    error(kInputError, "certificate", e.what());
    report["error"]["step"] = e.step();
  } catch (const io::ParseError& e) {
    error(kInputError, "parse", e.what());
  } catch (const InvalidInput& e) {
    error(kInputError, "invalid-input", e.what());
  } catch (const Mismatch& e) {
    error(kInputError, "mismatch", e.what());
  } catch (const NonTermination& e) {
    error(kNotComputed, "non-termination", e.what());
    report["error"]["iterations"] = e.iterations();
  } catch (const UnsupportedField& e) {
    error(kNotComputed, "unsupported-field", e.what());
  } catch (const std::exception& e) {
    error(kInternal, "internal", e.what());
  }
  report["field"] = field.name();
  report["status"] = status_name(code);
  report["exit_code"] = code;
  emit(s, report);
  if (s.summary) {
    std::cerr << command << ": " << status_name(code);
    if (report.contains("error")) std::cerr << " (" << report["error"]["message"].get<std::string>() << ")";
    std::cerr << "\n";
  }
  return code;
}

bool is_regular_in_degree_zero(const PerfectComplex& e) {
  const AlgebraPtr& a = e.algebra();
  if (e.is_zero() || e.lo() != 0 || e.hi() != 0) return false;
  std::vector<std::size_t> v(a->idempotent_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  return e.vertices(0) == v;
}

json complex_report(const BoundedComplex& c) {
  return {{"complex", io::to_json(c)}, {"cohomology", io::dims_json(cohomology_dims(c))}};
}

json ring_report(const EndomorphismRing& ring) {
  const std::size_t g = ring.generator().groups().size();
  json pattern = json::array();
  for (std::size_t from = 0; from < g; ++from) {
    json row = json::array();
    for (std::size_t to = 0; to < g; ++to) row.push_back(ring.piece_dim(from, to));
    pattern.push_back(std::move(row));
  }
  return {{"dim", ring.dim()},
          {"strict", ring.strict()},
          {"hom_pattern", pattern},
          {"product", "s * t = t o s"},
          {"algebra", io::to_json(*ring.algebra())}};
}

int cmd_truncate(const Session& s, const std::string& input, const std::string& gen, const std::string& target, int n,
                 const std::string& cert, json& report, Field& field) {
  const io::Document doc = io::load_document(input, s.field_override());
  field = doc.field;
  const PerfectComplex e = doc.perfect_complex(gen);
  const BoundedComplex& m = doc.complex(target);
  TruncationOptions opts;
  opts.max_iter = s.max_iter;
  if (!cert.empty()) opts.generation = shift_generator(doc.certificate(cert), -n);
  report["generator"] = {{"name", gen}, {"shift", -n}, {"complex", io::to_json(e)}};
  report["input"] = complex_report(m);
  const TruncationResult r = [&] {
    try {
      return truncate(shift(e, -n), m, opts);
    } catch (const TruncationDiverged& d) {
      report["partial"] = complex_report(d.partial());
      throw;
    }
  }();
  report["aisle"] = complex_report(r.aisle);
  report["coaisle"] = complex_report(r.coaisle);
  report["triangle"] = {{"to_input", io::to_json(r.to_input)},
                        {"to_coaisle", io::to_json(r.to_coaisle)},
                        {"connecting", io::to_json(r.connecting)}};
  report["iterations"] = r.iterations;
  report["orthogonality_window"] = {r.window_lo, r.window_hi};
  report["tail_bound"] = r.tail_bound ? json(*r.tail_bound) : json(nullptr);
  report["certificate"] = io::to_json(r.certificate);
  if (is_regular_in_degree_zero(e)) {
    const auto expected = cohomology_dims(soft_tau_geq(m, n + 1).complex);
    const bool match = expected == cohomology_dims(r.coaisle);
    report["cross_check"] = {{"oracle", "soft truncation above degree " + std::to_string(n)},
                             {"expected", io::dims_json(expected)},
                             {"match", match}};
    if (!match) return kFalse;
  }
  return kOk;
}

int cmd_tilt_verify(const Session& s, const std::string& input, const std::string& gen, const std::string& cert,
                    json& report, Field& field) {
  const io::Document doc = io::load_document(input, s.field_override());
  field = doc.field;
  const PerfectComplex& e = doc.perfect_complex(gen);
  report["generator"] = {{"name", gen}, {"complex", io::to_json(e)}};
  const bool compact = is_compact_presentation(e);
  const ExceptionalReport ex = is_exceptional(e);
  json witnesses = json::array();
  for (const auto& w : ex.witnesses) witnesses.push_back({{"j", w.j}, {"map", io::to_json(w.map)}});
  std::optional<ThickCertificate> c;
  if (!cert.empty()) {
    c = doc.certificate(cert);
  } else {
    c = standard_generation_certificate(e);
  }
  report["certificate"] = c ? io::to_json(*c, gen) : json(nullptr);
  const bool generates = c && verify_generation(e, *c);
  report["verdicts"] = {{"compact", compact},
                        {"exceptional", ex.exceptional},
                        {"generates", generates},
                        {"tilting", compact && ex.exceptional && generates}};
  report["witnesses"] = witnesses;
  if (c) report["perp_bound"] = perp_bound(*c);
  if (!(compact && ex.exceptional && generates)) return kFalse;
  report["endomorphism_ring"] = ring_report(EndomorphismRing(e));
  return kOk;
}

int cmd_equiv(const Session& s, const std::string& input, const std::string& gen, const std::string& cert,
              std::size_t samples, std::size_t heart_samples, int k_lo, int k_hi, bool perfect_sources, json& report,
              Field& field) {
  const io::Document doc = io::load_document(input, s.field_override());
  field = doc.field;
  const PerfectComplex& e = doc.perfect_complex(gen);
  const AlgebraPtr& a = e.algebra();
  const EndomorphismRing ring(e);
  report["direction"] = "F = Hom(E, -): D^b(A) -> D^b(S)";
  report["generator"] = {{"name", gen}, {"complex", io::to_json(e)}};
  report["ring"] = ring_report(ring);
  report["k_range"] = {k_lo, k_hi};
  Sampler sampler(s.seed);
  bool unequal = false;
  bool missing = false;
  json pairs = json::array();
  for (std::size_t i = 0; i < samples; ++i) {
    const BoundedComplex m =
        perfect_sources ? sampler.perfect(a, -1, 1 + sampler.below(3)).complex() : sampler.complex(a, -1, 1 + sampler.below(3));
    const BoundedComplex n = sampler.complex(a, -1, 1 + sampler.below(3));
    json rows = json::array();
    for (const HomDimRow& r : compare_hom_dims(ring, m, n, k_lo, k_hi)) {
      const json src = r.source ? json(*r.source) : json("not computed");
      const json tgt = r.target ? json(*r.target) : json("not computed");
      rows.push_back({{"k", r.k}, {"source", src}, {"target", tgt}, {"equal", r.equal()}});
      unequal = unequal || (r.computed() && !r.equal());
      missing = missing || !r.computed();
    }
    pairs.push_back({{"index", i},
                     {"M", io::dims_json(cohomology_dims(m))},
                     {"N", io::dims_json(cohomology_dims(n))},
                     {"rows", rows}});
  }
  report["pairs"] = pairs;
  TruncationOptions opts;
  opts.max_iter = s.max_iter;
  if (!cert.empty()) opts.generation = doc.certificate(cert);
  json heart = json::array();
  for (std::size_t i = 0; i < heart_samples; ++i) {
    const BoundedComplex m = sampler.complex(a, -1, 1 + sampler.below(3));
    try {
      const HeartRow h = heart_comparison(ring, m, opts);
      heart.push_back({{"index", i},
                       {"heart_side", h.heart_side},
                       {"functor_side", h.functor_side},
                       {"equal", h.equal()}});
      unequal = unequal || !h.equal();
    } catch (const NonTermination& err) {
      heart.push_back({{"index", i}, {"heart_side", "not computed"}, {"functor_side", "not computed"},
                       {"equal", false}, {"reason", err.what()}});
      missing = true;
    }
  }
  report["heart"] = heart;
  report["verdict"] = {{"all_equal", !unequal && !missing}, {"any_unequal", unequal}, {"any_not_computed", missing}};
  if (unequal) return kFalse;
  return missing ? kNotComputed : kOk;
}

int cmd_beilinson(std::size_t d, int t_lo, int t_hi, json& report, Field& field) {
  const BeilinsonReport r = beilinson_pipeline(d, t_lo, t_hi, field);
  json table = json::array();
  for (const auto& e : r.table) {
    table.push_back({{"from", e.from},
                     {"to", e.to},
                     {"paths", e.paths},
                     {"binomial", e.binomial},
                     {"twists_agree", e.twists_agree}});
  }
  report["d"] = d;
  report["twist_range"] = {t_lo, t_hi};
  report["algebra_dim"] = r.algebra_dim;
  report["expected_dim"] = r.expected_dim;
  report["table"] = table;
  report["regular_is_tilting"] = r.regular_is_tilting;
  if (r.tilt) {
    const auto& t = *r.tilt;
    report["kronecker_tilt"] = {{"compact", t.compact},
                                {"exceptional", t.exceptional},
                                {"generates", t.generates},
                                {"ring_dim", t.ring_dim},
                                {"hom_pattern", t.hom_pattern},
                                {"ring_is_kronecker", t.ring_is_kronecker},
                                {"beilinson_is_kronecker", t.beilinson_is_kronecker},
                                {"hom_rows_equal", t.hom_rows_equal}};
  }
  report["ok"] = r.ok();
  return r.ok() ? kOk : kFalse;
}

int cmd_hocolim_check(const Session& s, const std::string& input, const std::string& name, json& report, Field& field) {
  const io::Document doc = io::load_document(input, s.field_override());
  field = doc.field;
  const DirectedSystem& sys = doc.system(name);
  const Colimit c = colimit(sys);
  report["system"] = {{"name", name}, {"objects", sys.size()}, {"sequence", sys.is_sequence()}};
  report["colimit"] = {{"cohomology", io::dims_json(cohomology_dims(c.complex))}};
  bool ok = true;
  auto record = [&](const char* key, const Hocolim& h) {
    report[key] = {{"cohomology", io::dims_json(cohomology_dims(h.complex))}, {"quasi_iso", h.quasi_iso}};
    ok = ok && h.quasi_iso;
  };
  if (sys.is_sequence()) record("telescope", hocolim_sequence(sys));
  record("bicomplex", hocolim_bicomplex(sys));
  return ok ? kOk : kFalse;
}

// Shipped fixtures, written from the library so they stay in sync with it.
int cmd_export_fixtures(const std::string& dir, json& report, Field& field) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const json kx2_quiver = {{"quiver", {{"vertices", {"v"}}, {"arrows", {{{"label", "x"}, {"source", "v"}, {"target", "v"}}}}}},
                           {"relations", {{{{"coefficient", "1"}, {"path", {"x", "x"}}}}}},
                           {"length_bound", 2}};
  const json kron_quiver = {
      {"quiver",
       {{"vertices", {"v0", "v1"}},
        {"arrows", {{{"label", "a"}, {"source", "v0"}, {"target", "v1"}}, {{"label", "b"}, {"source", "v0"}, {"target", "v1"}}}}}},
      {"length_bound", 2}};
  auto doc_header = [&] { return json{{"schema_version", io::kSchemaVersion}, {"field", field.name()}}; };
  std::vector<std::string> written;
  auto write = [&](const std::string& file, const json& j) {
    std::ofstream(fs::path(dir) / file) << j.dump(2) << "\n";
    written.push_back(file);
  };

  {
    const AlgebraPtr k = field_algebra(field);
    json j = doc_header();
    j["algebras"] = {{"K", {{"builtin", "field"}}}};
    j["complexes"] = {{"A", io::to_json(PerfectComplex::regular(k))},
                      {"M", {{"lo", 0}, {"terms", {{{"projective", {0}}}}}, {"differentials", json::array()}}}};
    j["complexes"]["A"]["algebra"] = "K";
    j["complexes"]["M"]["algebra"] = "K";
    write("field-K.json", j);
  }
  {
    const AlgebraPtr a = dual_numbers(field);
    Sampler sampler(7);
    json j = doc_header();
    j["algebras"] = {{"kx2", kx2_quiver}};
    j["complexes"] = {{"A", io::to_json(PerfectComplex::regular(a))},
                      {"M", io::to_json(sampler.complex(a, -1, 3))},
                      {"P", io::to_json(sampler.perfect(a, -1, 3))},
                      {"AA1", io::to_json(regular_plus_shift(a))}};
    for (auto& [name, c] : j["complexes"].items()) c["algebra"] = "kx2";
    write("kx2.json", j);
  }
  {
    const AlgebraPtr a = kronecker_algebra(field);
    const PerfectComplex t = kronecker_tilt(a);
    const PerfectComplex reg = PerfectComplex::regular(a);
    json j = doc_header();
    j["algebras"] = {{"kronecker", kron_quiver}};
    j["complexes"] = {{"T", io::to_json(t)},
                      {"A", io::to_json(reg)},
                      {"AA1", io::to_json(regular_plus_shift(a))},
                      {"M", io::to_json(Sampler(8).complex(a, -1, 3))}};
    for (auto& [name, c] : j["complexes"].items()) c["algebra"] = "kronecker";
    j["certificates"] = {{"tilt", io::to_json(kronecker_tilt_certificate(t), "T")},
                         {"regular", io::to_json(*standard_generation_certificate(reg), "A")}};
    write("kronecker-tilt.json", j);
  }
  {
    const AlgebraPtr a = kronecker_algebra(field);
    const DirectedSystem sys = Sampler(9).sequence(a, 3);
    json j = doc_header();
    j["algebras"] = {{"kronecker", {{"builtin", "kronecker"}}}};
    json objects = json::array();
    json steps = json::array();
    for (std::size_t i = 0; i < sys.size(); ++i) {
      const std::string name = "G" + std::to_string(i);
      j["complexes"][name] = io::to_json(sys.object(i));
      j["complexes"][name]["algebra"] = "kronecker";
      objects.push_back(name);
      if (i + 1 < sys.size()) steps.push_back({{"components", io::to_json(sys.map(i, i + 1))}});
    }
    j["systems"]["chain"] = {{"algebra", "kronecker"}, {"objects", objects}, {"steps", steps}};
    j["complexes"]["P0"] = {{"algebra", "kronecker"}, {"lo", 0}, {"terms", {{{"projective", {0}}}}}, {"differentials", json::array()}};
    j["complexes"]["P1"] = {{"algebra", "kronecker"}, {"lo", 0}, {"terms", {{{"projective", {1}}}}}, {"differentials", json::array()}};
    const BoundedComplex p0 = BoundedComplex::stalk(projective(a, 0), 0);
    const BoundedComplex p1 = BoundedComplex::stalk(projective(a, 1), 0);
    const ChainMap along_a(p1, p0, {{0, projective_map(a, 1, 0, a->basis_vector(2))}});
    const ChainMap along_b(p1, p0, {{0, projective_map(a, 1, 0, a->basis_vector(3))}});
    j["systems"]["pushout"] = {{"algebra", "kronecker"},
                               {"objects", {"P1", "P0", "P0"}},
                               {"maps",
                                {{{"from", 0}, {"to", 1}, {"components", io::to_json(along_a)}},
                                 {{"from", 0}, {"to", 2}, {"components", io::to_json(along_b)}}}}};
    write("hocolim-chain.json", j);
  }
  {
    json j = doc_header();
    j["algebras"] = {{"K", {{"builtin", "field"}}}};
    j["complexes"]["G"] = {{"algebra", "K"}, {"lo", 0}, {"terms", {{{"projective", {0}}}}}, {"differentials", json::array()}};
    const json id = {{"0", {{"1"}}}};
    const json twice = {{"0", {{"2"}}}};
    j["systems"]["broken"] = {{"algebra", "K"},
                              {"objects", {"G", "G", "G"}},
                              {"maps",
                               {{{"from", 0}, {"to", 1}, {"components", id}},
                                {{"from", 1}, {"to", 2}, {"components", id}},
                                {{"from", 0}, {"to", 2}, {"components", twice}}}}};
    write("hocolim-broken.json", j);
  }
  report["written"] = written;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aisle: t-structures from compact generators, tilting checks and derived equivalences"};
  app.require_subcommand(1);
  app.fallthrough();
  Session s;
  app.add_option("--field", s.field, "Ground field: Q or F_p (overrides the input document)");
  app.add_option("--seed", s.seed, "Seed for sampled suites")->capture_default_str();
  app.add_option("--max-iter", s.max_iter, "Truncation iteration budget")->capture_default_str();
  app.add_option("--out", s.out, "Write the JSON report here instead of stdout");
  app.add_flag("--summary", s.summary, "Print a one-line summary to stderr");

  std::string input, gen, target, cert, system_name, dir = "fixtures";
  int n = 0, k_lo = -3, k_hi = 3, t_lo = -2, t_hi = 2;
  std::size_t samples = 20, heart_samples = 5, d = 1;
  bool perfect_sources = false;

  auto* tr = app.add_subcommand("truncate", "Truncation triangle N -> M -> B for the aisle generated by E[-n]");
  tr->add_option("input", input, "Input document")->required();
  tr->add_option("-e,--generator", gen, "Perfect complex E")->required();
  tr->add_option("-m,--target", target, "Complex M")->required();
  tr->add_option("-n", n, "Truncation degree")->capture_default_str();
  tr->add_option("-c,--certificate", cert, "Generation certificate for E");

  auto* tv = app.add_subcommand("tilt-verify", "Compactness, exceptionality and certificate replay for E");
  tv->add_option("input", input, "Input document")->required();
  tv->add_option("-e,--generator", gen, "Perfect complex E")->required();
  tv->add_option("-c,--certificate", cert, "Generation certificate (default: standard certificate if any)");

  auto* eq = app.add_subcommand("equiv", "Compare Hom dimensions across F = Hom(E, -)");
  eq->add_option("input", input, "Input document")->required();
  eq->add_option("-e,--generator", gen, "Perfect complex E")->required();
  eq->add_option("-c,--certificate", cert, "Generation certificate for the heart truncations");
  eq->add_option("--samples", samples, "Number of sampled (M, N) pairs")->capture_default_str();
  eq->add_option("--heart-samples", heart_samples, "Number of heart comparison samples")->capture_default_str();
  eq->add_option("--k-lo", k_lo, "Lowest shift k in Hom(M, N[k])")->capture_default_str();
  eq->add_option("--k-hi", k_hi, "Highest shift k")->capture_default_str();
  eq->add_flag("--perfect-sources", perfect_sources, "Draw M from complexes of projectives");

  auto* be = app.add_subcommand("beilinson", "Beilinson algebra tables and the d = 1 tilt suite");
  be->add_option("-d", d, "Dimension of projective space (0..3)")->capture_default_str();
  be->add_option("--twist-lo", t_lo)->capture_default_str();
  be->add_option("--twist-hi", t_hi)->capture_default_str();

  auto* hc = app.add_subcommand("hocolim-check", "Homotopy colimit versus colimit of a directed system");
  hc->add_option("input", input, "Input document")->required();
  hc->add_option("-s,--system", system_name, "System name")->required();

  auto* ex = app.add_subcommand("export-fixtures", "Write the shipped fixture documents");
  ex->add_option("--dir", dir, "Target directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  if (*tr) {
    return run(s, "truncate", "t-structure-from-compact-generator", [&](json& r, Field& f) {
      return cmd_truncate(s, input, gen, target, n, cert, r, f);
    });
  }
  if (*tv) {
    return run(s, "tilt-verify", "tilting-object", [&](json& r, Field& f) { return cmd_tilt_verify(s, input, gen, cert, r, f); });
  }
  if (*eq) {
    return run(s, "equiv", "derived-equivalence", [&](json& r, Field& f) {
      return cmd_equiv(s, input, gen, cert, samples, heart_samples, k_lo, k_hi, perfect_sources, r, f);
    });
  }
  if (*be) {
    return run(s, "beilinson", "beilinson-equivalence", [&](json& r, Field& f) { return cmd_beilinson(d, t_lo, t_hi, r, f); });
  }
  if (*hc) {
    return run(s, "hocolim-check", "homotopy-colimit", [&](json& r, Field& f) { return cmd_hocolim_check(s, input, system_name, r, f); });
  }
  return run(s, "export-fixtures", "fixtures", [&](json& r, Field& f) { return cmd_export_fixtures(dir, r, f); });
}
