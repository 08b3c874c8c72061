#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "aisle/equivalence.hpp"
#include "aisle/fixtures.hpp"
#include "aisle/sampling.hpp"
#include "io.hpp"

using namespace aisle;
using io::json;
namespace fs = std::filesystem;

namespace {

const Field Q = Field::rationals();

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("aisle_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string fixture(const std::string& name) { return std::string(AISLE_FIXTURES) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int code = -1;
  json report;
  std::string text;
};

CliRun cli(const std::string& args, const std::string& tag) {
  const fs::path out = scratch() / (tag + ".json");
  const std::string cmd = std::string(AISLE_CLI) + " --out " + out.string() + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.text = slurp(out);
  r.report = json::parse(r.text);
  return r;
}

bool same_complex(const BoundedComplex& x, const BoundedComplex& y) {
  if (x.lo() != y.lo() || x.hi() != y.hi()) return false;
  for (int k = x.lo(); k <= x.hi() && !x.is_zero(); ++k) {
    if (x.d(k) != y.d(k) || x.blocks(k) != y.blocks(k)) return false;
    for (std::size_t i = 0; i < x.algebra()->dim(); ++i) {
      if (x.term(k).act(i) != y.term(k).act(i)) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Io, MatricesAreExact) {
  const Matrix m = io::matrix_from_json(json::parse(R"([["3/2", "-1/3"], [4, "0"]])"), Q, 2, 2);
  EXPECT_EQ(m(0, 0), Q.parse_scalar("3/2"));
  EXPECT_EQ(m(1, 0), Q.from_int(4));
  EXPECT_EQ(io::to_json(m), json::parse(R"([["3/2", "-1/3"], ["4", "0"]])"));
  EXPECT_THROW(io::matrix_from_json(json::parse(R"([[1.5]])"), Q, 1, 1), io::ParseError);
  EXPECT_THROW(io::matrix_from_json(json::parse(R"([["1", "2"]])"), Q, 2, 1), io::ParseError);
  EXPECT_THROW(io::matrix_from_json(json::parse(R"([["1/0"]])"), Q, 1, 1), InvalidInput);
}

TEST(Io, ComplexesRoundTrip) {
  const AlgebraPtr a = kronecker_algebra(Q);
  Sampler s(61);
  for (int trial = 0; trial < 5; ++trial) {
    const BoundedComplex c = s.complex(a, -1, 3);
    json doc = {{"algebras", {{"K2", {{"builtin", "kronecker"}}}}}, {"complexes", {{"C", io::to_json(c)}}}};
    doc["complexes"]["C"]["algebra"] = "K2";
    const io::Document d = io::parse_document(doc);
    EXPECT_TRUE(same_complex(d.complex("C"), c));
  }
}

TEST(Io, PerfectComplexesAndCertificatesRoundTrip) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const PerfectComplex t = kronecker_tilt(a);
  json doc = {{"algebras", {{"K2", {{"builtin", "kronecker"}}}}},
              {"complexes", {{"T", io::to_json(t)}}},
              {"certificates", {{"c", io::to_json(kronecker_tilt_certificate(t), "T")}}}};
  doc["complexes"]["T"]["algebra"] = "K2";
  const io::Document d = io::parse_document(doc);
  const PerfectComplex& back = d.perfect_complex("T");
  EXPECT_TRUE(same_complex(back.complex(), t.complex()));
  EXPECT_EQ(back.groups(), t.groups());
  EXPECT_TRUE(verify_generation(back, d.certificate("c")));
  EXPECT_EQ(perp_bound(d.certificate("c")), 0);
}

TEST(Io, AlgebraStructureRoundTrip) {
  const EndomorphismRing ring(kronecker_tilt(kronecker_algebra(Q)));
  json doc = {{"algebras", {{"S", io::to_json(*ring.algebra())}}}};
  const io::Document d = io::parse_document(doc);
  const AlgebraPtr& s = d.algebras.at("S");
  EXPECT_TRUE(is_algebra_isomorphism(*ring.algebra(), *s, Matrix::identity(4, Q)));
}

TEST(Io, QuiverAlgebrasMatchBuiltins) {
  const io::Document d = io::load_document(fixture("kx2.json"));
  EXPECT_TRUE(is_algebra_isomorphism(*dual_numbers(Q), *d.algebras.at("kx2"), Matrix::identity(2, Q)));
  const io::Document k = io::load_document(fixture("kronecker-tilt.json"));
  EXPECT_TRUE(is_algebra_isomorphism(*kronecker_algebra(Q), *k.algebras.at("kronecker"), Matrix::identity(4, Q)));
}

TEST(Io, SchemaErrors) {
  EXPECT_THROW(io::parse_document(json::parse(R"({"schema_version": 2})")), io::ParseError);
  EXPECT_THROW(io::parse_document(json::parse(R"({"algebras": {"X": {"builtin": "nope"}}})")), io::ParseError);
  EXPECT_THROW(io::parse_document(json::parse(R"({"complexes": {"C": {"algebra": "missing", "lo": 0}}})")),
               io::ParseError);
  const io::Document d = io::parse_document(json::parse(R"({"algebras": {"K": {"builtin": "field"}}})"));
  EXPECT_THROW(d.complex("C"), io::ParseError);
  EXPECT_THROW(io::load_document("/nonexistent/file.json"), io::ParseError);
}

TEST(Cli, ShippedFixturesAreCurrent) {
  const fs::path dir = scratch() / "fixtures";
  const CliRun r = cli("export-fixtures --dir " + dir.string(), "export");
  ASSERT_EQ(r.code, 0);
  for (const auto& name : r.report["written"]) {
    EXPECT_EQ(slurp(dir / name.get<std::string>()), slurp(fixture(name.get<std::string>()))) << name;
  }
}

TEST(Cli, TruncateFieldRegular) {
  const CliRun r = cli("truncate " + fixture("field-K.json") + " -e A -m M", "trunc_k");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.report["coaisle"]["cohomology"].empty());
  EXPECT_EQ(r.report["schema_version"], 1);
  EXPECT_EQ(r.report["field"], "Q");
  EXPECT_TRUE(r.report["cross_check"]["match"].get<bool>());
}

TEST(Cli, TruncateDualNumbersMatchesSoftTruncation) {
  for (int n : {-1, 0, 1}) {
    const CliRun r = cli("truncate " + fixture("kx2.json") + " -e A -m M -n " + std::to_string(n), "trunc_kx2");
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.report["cross_check"]["match"].get<bool>());
    EXPECT_EQ(r.report["coaisle"]["cohomology"], r.report["cross_check"]["expected"]);
  }
}

TEST(Cli, ZeroIterationBudgetIsNotComputed) {
  const CliRun r = cli("--max-iter 0 truncate " + fixture("kx2.json") + " -e A -m M", "trunc_zero");
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.report["error"]["kind"], "non-termination");
  EXPECT_TRUE(r.report.contains("partial"));
}

TEST(Cli, TiltVerify) {
  const CliRun regular = cli("tilt-verify " + fixture("kronecker-tilt.json") + " -e A", "tv_a");
  EXPECT_EQ(regular.code, 0);
  EXPECT_TRUE(regular.report["verdicts"]["tilting"].get<bool>());

  const CliRun shifted = cli("tilt-verify " + fixture("kx2.json") + " -e AA1", "tv_aa1");
  EXPECT_EQ(shifted.code, 1);
  EXPECT_FALSE(shifted.report["verdicts"]["exceptional"].get<bool>());
  ASSERT_FALSE(shifted.report["witnesses"].empty());
  std::set<int> js;
  for (const auto& w : shifted.report["witnesses"]) js.insert(w["j"].get<int>());
  EXPECT_EQ(js, (std::set<int>{-1, 1}));

  const CliRun tilt = cli("tilt-verify " + fixture("kronecker-tilt.json") + " -e T -c tilt", "tv_t");
  EXPECT_EQ(tilt.code, 0);
  EXPECT_EQ(tilt.report["endomorphism_ring"]["dim"], 4);
  EXPECT_EQ(tilt.report["endomorphism_ring"]["hom_pattern"], json::parse("[[1, 2], [0, 1]]"));
}

TEST(Cli, MalformedCertificateReportsStep) {
  json doc = json::parse(slurp(fixture("kronecker-tilt.json")));
  doc["certificates"]["tilt"]["steps"][3]["parts"] = {2, 9};
  const fs::path p = scratch() / "bad-cert.json";
  std::ofstream(p) << doc.dump();
  const CliRun r = cli("tilt-verify " + p.string() + " -e T -c tilt", "tv_bad");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.report["error"]["kind"], "certificate");
  EXPECT_EQ(r.report["error"]["step"], 3);
}

TEST(Cli, EquivOnTiltingAndNonTilting) {
  const CliRun a = cli("equiv " + fixture("kronecker-tilt.json") + " -e A --samples 4 --heart-samples 2", "eq_a");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.report["direction"], "F = Hom(E, -): D^b(A) -> D^b(S)");
  const CliRun t = cli("equiv " + fixture("kronecker-tilt.json") + " -e T -c tilt --samples 4 --heart-samples 2", "eq_t");
  EXPECT_EQ(t.code, 0);
  EXPECT_TRUE(t.report["verdict"]["all_equal"].get<bool>());
  const CliRun bad = cli("equiv " + fixture("kronecker-tilt.json") + " -e AA1 --samples 3 --heart-samples 0", "eq_bad");
  EXPECT_EQ(bad.code, 1);
  EXPECT_TRUE(bad.report["verdict"]["any_unequal"].get<bool>());
}

TEST(Cli, EquivWithoutFiniteResolutionsIsNotComputed) {
  const CliRun r = cli("equiv " + fixture("kx2.json") + " -e A --samples 3 --heart-samples 0", "eq_kx2");
  EXPECT_EQ(r.code, 3);
  const CliRun p = cli("equiv " + fixture("kx2.json") + " -e A --samples 3 --heart-samples 0 --perfect-sources", "eq_kx2p");
  EXPECT_EQ(p.code, 0);
}

TEST(Cli, ReportsAreDeterministic) {
  const std::string args = "equiv " + fixture("kronecker-tilt.json") + " -e T -c tilt --samples 3 --heart-samples 1";
  const CliRun x = cli("--seed 5 " + args, "det1");
  const CliRun y = cli("--seed 5 " + args, "det2");
  const CliRun z = cli("--seed 6 " + args, "det3");
  EXPECT_EQ(x.text, y.text);
  EXPECT_NE(x.text, z.text);
  EXPECT_EQ(x.report["seed"], 5);
}

TEST(Cli, Beilinson) {
  const std::vector<int> dims = {1, 4, 15};
  for (int d = 0; d <= 2; ++d) {
    const CliRun r = cli("beilinson -d " + std::to_string(d), "beil");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.report["algebra_dim"], dims[d]);
  }
  const CliRun f = cli("--field F_7 beilinson -d 1", "beil_p");
  EXPECT_EQ(f.code, 0);
  EXPECT_EQ(f.report["field"], "F_7");
  EXPECT_EQ(cli("beilinson -d 4", "beil_bad").code, 2);
}

TEST(Cli, HocolimCheck) {
  EXPECT_EQ(cli("hocolim-check " + fixture("hocolim-chain.json") + " -s chain", "hc1").code, 0);
  EXPECT_EQ(cli("hocolim-check " + fixture("hocolim-chain.json") + " -s pushout", "hc2").code, 0);
  const CliRun broken = cli("hocolim-check " + fixture("hocolim-broken.json") + " -s broken", "hc3");
  EXPECT_EQ(broken.code, 2);
  EXPECT_NE(broken.report["error"]["message"].get<std::string>().find("(0, 1, 2)"), std::string::npos);
}

TEST(Cli, ParseErrorsHaveTheirOwnCode) {
  EXPECT_EQ(cli("truncate /nonexistent.json -e A -m M", "missing").code, 2);
  EXPECT_EQ(cli("truncate " + fixture("kx2.json") + " -e M -m A", "not_perfect").code, 2);
  EXPECT_EQ(cli("--field F_4 beilinson -d 1", "bad_field").code, 2);
}
