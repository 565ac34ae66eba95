#include <doctest.h>

#include "rigidity/errors.hpp"
#include "rigidity/experiment.hpp"
#include "support.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rigidity;
using testing_support::config_path;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("rigidity-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void put(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

std::string small_experiment(const std::string& extra = "") {
  return "name = small\ntable = " + config_path("three-disks.cfg") +
         "\nprecision = 256\n\n[orbits]\nwords = 12, 13, 1213\n\n[horseshoe]\nblock = 12\n"
         "connector = 13\nn_max = 14\nfits = period, trace\n" +
         extra;
}

}  // namespace

TEST_CASE("shift configs") {
  SftConfig g = load_sft(config_path("golden.cfg"));
  CHECK(g.name == "golden");
  CHECK(g.system.size() == 2);
  CHECK(g.system.adjacency(1, 1) == 0);
  CHECK(g.system.has_roof());
  CHECK(g.system.roof(1, 0) == doctest::Approx(1.5));
  CHECK_FALSE(g.gamma.has_value());

  SftConfig e = load_sft(config_path("e-proof.cfg"));
  REQUIRE(e.gamma.has_value());
  CHECK(*e.gamma == 0.5);
  REQUIRE(e.measures.count("mu") == 1);
  REQUIRE(e.measures.count("rho") == 1);
  CHECK(e.measures.at("mu").P(0, 0) == doctest::Approx(0.97));
  CHECK(e.measures.at("rho").P(1, 1) == doctest::Approx(0.97));

  Matrix64 r = load_roof(config_path("golden-roof.cfg"), 2);
  CHECK(r(1, 0) == 2.0);
  CHECK_THROWS_AS(load_roof(config_path("golden-roof.cfg"), 3), Error);
}

TEST_CASE("malformed shift configs are rejected") {
  fs::path dir = scratch("sft");
  put(dir / "ragged.cfg", "[shift]\nrow = 1, 1\nrow = 1\n");
  put(dir / "none.cfg", "name = x\n");
  put(dir / "badmeasure.cfg", "[shift]\nrow = 1, 0\nrow = 1, 1\n[measure]\nname = m\nrow = 0.5, 0.5\nrow = 0.5, 0.5\n");
  for (const char* f : {"ragged.cfg", "none.cfg", "badmeasure.cfg"}) {
    CAPTURE(f);
    try {
      load_sft((dir / f).string());
      FAIL("expected a validation error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::validation);
    }
  }
}

TEST_CASE("fit lists") {
  auto f = parse_fit_list("period, trace,series:P=3");
  REQUIRE(f.size() == 3);
  CHECK(f[0].model == "period");
  CHECK(f[1].model == "trace");
  CHECK(f[2].model == "series");
  CHECK(f[2].order == 3);
  CHECK_THROWS_AS(parse_fit_list("cubic"), Error);
  CHECK_THROWS_AS(parse_fit_list("series:P=0"), Error);
}

TEST_CASE("experiment config") {
  ExperimentConfig c = load_experiment(config_path("flagship.cfg"));
  CHECK(c.name == "flagship");
  CHECK(fs::path(c.table_path).filename() == "three-disks.cfg");
  CHECK(c.words.size() == 5);
  CHECK(c.block.str() == "12");
  CHECK(c.connector.str() == "13");
  CHECK(c.n_max == 30);
  CHECK(c.fits.size() == 3);
  CHECK(c.has_suspension());
  CHECK(c.c_mu == doctest::Approx(0.3));
  CHECK(c.c_top == doctest::Approx(1.2));
  CHECK(c.region == FlexRegion::II);
  CHECK_NOTHROW(validate_experiment(c));
}

TEST_CASE("validation fails fast") {
  fs::path dir = scratch("validate");
  auto kind_of = [&](const std::string& text) {
    put(dir / "x.cfg", text);
    try {
      validate_experiment(load_experiment((dir / "x.cfg").string()));
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::internal;
  };
  std::string base = small_experiment();
  CHECK(kind_of(base) == ErrorKind::internal);  // valid
  std::string deep = base;
  deep.replace(deep.find("n_max = 14"), 10, "n_max = 200");
  CHECK(kind_of(deep) == ErrorKind::validation);
  std::string shallow = base;
  shallow.replace(shallow.find("n_max = 14"), 10, "n_max = 5");
  CHECK(kind_of(shallow) == ErrorKind::validation);
  std::string low = base;
  low.replace(low.find("precision = 256"), 15, "precision = 32");
  CHECK(kind_of(low) == ErrorKind::validation);
  std::string badword = base;
  badword.replace(badword.find("12, 13, 1213"), 12, "11");
  CHECK(kind_of(badword) == ErrorKind::validation);
  CHECK(kind_of("name = x\ntable = missing.cfg\n[horseshoe]\nblock = 12\nconnector = 13\n") ==
        ErrorKind::validation);
}

TEST_CASE("text report rendering") {
  Document d;
  d["name"] = "x";
  d["value"] = 0.1;
  d["list"] = {1, 2, 3};
  Document sub;
  sub["a"] = 1;
  d["part"] = sub;
  Document items = Document::array();
  items.push_back({{"k", "p"}});
  items.push_back({{"k", "q"}});
  d["item"] = items;
  CHECK(render_text(d) ==
        "name = x\nvalue = 0.1\nlist = 1, 2, 3\n\n[part]\na = 1\n\n[item]\nk = p\n\n[item]\nk = q\n");
  CHECK(render_csv({"a", "b"}, {{"1", "2"}}) == "a,b\n1,2\n");
  CHECK(double_string(0.1) == "0.1");
  CHECK(std::stod(double_string(1.0 / 3)) == 1.0 / 3);
  PrecisionScope scope(256);
  CHECK(real_string(Real(1) / 3).size() >= 77);
}

TEST_CASE("pipeline is deterministic and writes a manifest") {
  fs::path dir = scratch("pipeline");
  put(dir / "small.cfg", small_experiment("\n[suspension]\nsft = " + config_path("golden.cfg") +
                                          "\ntarget = 0.3, 1.2\nregion = II\n"));
  ExperimentConfig c = load_experiment((dir / "small.cfg").string());
  PipelineResult a = run_pipeline(c, (dir / "a").string());
  PipelineResult b = run_pipeline(c, (dir / "b").string());
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  for (const char* f : {"orbits.csv", "horseshoe.csv", "MANIFEST", "summary.txt", "fits.txt",
                        "trace_residuals.dat"}) {
    CAPTURE(f);
    CHECK(fs::exists(dir / "a" / f));
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  std::string man = slurp(dir / "a" / "MANIFEST");
  CHECK(man.rfind("pipeline small\nstatus complete\n", 0) == 0);
  CHECK(man.find("stage suspension complete") != std::string::npos);
  CHECK(man.find("file horseshoe.csv") != std::string::npos);
  CHECK(a.summary["verdict"] == "MME=SRB obstructed");
}

TEST_CASE("failed stage skips the rest") {
  fs::path dir = scratch("failing");
  put(dir / "f.cfg", small_experiment("\n[suspension]\nsft = " + config_path("golden.cfg") +
                                      "\ntarget = 0.9, 1.2\n"));
  ExperimentConfig c = load_experiment((dir / "f.cfg").string());
  PipelineResult r = run_pipeline(c, (dir / "out").string());
  CHECK(r.exit_code == 4);
  CHECK(r.stages.back().name == "suspension");
  CHECK(r.stages.back().status == "failed");
  std::string man = slurp(dir / "out" / "MANIFEST");
  CHECK(man.find("status incomplete") != std::string::npos);
  CHECK(man.find("stage suspension failed infeasible") != std::string::npos);

  put(dir / "g.cfg", small_experiment().replace(small_experiment().find("n_max = 14"), 10, "n_max = 99"));
  PipelineResult v = run_pipeline(load_experiment((dir / "g.cfg").string()), (dir / "out2").string());
  CHECK(v.exit_code == 2);
  CHECK(v.stages.front().status == "failed");
  for (std::size_t i = 1; i < v.stages.size(); ++i) CHECK(v.stages[i].status == "skipped");
}
