#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "localdep/cli.hpp"

using namespace localdep;
using namespace localdep::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "localdep");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const char* name) { return std::string(LOCALDEP_FIXTURES) + "/" + name; }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("localdep_test_" + name)).string();
}

}  // namespace

TEST_CASE("CSV ingestion") {
  SUBCASE("header detected") {
    std::istringstream in("x,y\n1,2\n3,4\n");
    const PairedSample s = parse_sample_csv(in);
    CHECK(s.size() == 2);
    CHECK(s.ys()[1] == 4);
  }
  SUBCASE("no header, CRLF, blank lines") {
    std::istringstream in("1.5, -2e3\r\n\r\n3,4\r\n");
    const PairedSample s = parse_sample_csv(in);
    CHECK(s.xs()[0] == 1.5);
    CHECK(s.ys()[0] == -2000);
  }
  SUBCASE("bad row reports its line") {
    std::istringstream in("x,y\n1,2\n3,abc\n");
    CHECK_THROWS_WITH_AS(parse_sample_csv(in), "line 3: expected two numeric comma-separated columns",
                         DataError);
  }
  SUBCASE("three columns rejected") {
    std::istringstream in("1,2\n3,4,5\n");
    CHECK_THROWS_AS(parse_sample_csv(in), DataError);
  }
  SUBCASE("non-finite rejected with line") {
    std::istringstream in("1,2\nnan,4\n");
    CHECK_THROWS_WITH_AS(parse_sample_csv(in), "line 2: non-finite value", DataError);
  }
  SUBCASE("single row") {
    std::istringstream in("x,y\n1,2\n");
    CHECK_THROWS_WITH_AS(parse_sample_csv(in), "insufficient data", DataError);
  }
}

TEST_CASE("compute on the bundled monotone fixture") {
  const auto o = run_args({"compute", "--input", fixture("monotone3.csv"), "--estimators", "xi"});
  REQUIRE(o.code == kOk);
  const auto doc = nlohmann::json::parse(o.out);
  CHECK(doc.at("results").at(0).at("estimator") == "xi");
  CHECK(doc.at("results").at(0).at("value").get<double>() == 0.25);
  CHECK(doc.at("version") == kVersion);

  // Top-level key order is stable.
  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  CHECK(o.out.find("\"config\"") < o.out.find("\"results\""));
  CHECK(o.out.find("\"results\"") < o.out.find("\"version\""));
}

TEST_CASE("exit codes") {
  CHECK(run_args({"compute", "--input", fixture("one_row.csv"), "--estimators", "xi"}).code == kData);
  const auto one = run_args({"compute", "--input", fixture("one_row.csv"), "--estimators", "xi"});
  CHECK(one.err.find("insufficient data") != std::string::npos);

  const auto eps0 = run_args({"compute", "--input", fixture("monotone3.csv"), "--estimators",
                              "zeta_eps", "--eps", "0"});
  CHECK(eps0.code == kPrecondition);
  CHECK(eps0.err.find("ε must be positive") != std::string::npos);

  CHECK(run_args({"compute", "--estimators", "xi"}).code == kUsage);
  CHECK(run_args({"compute", "--input", fixture("monotone3.csv"), "--gen", "independent",
                  "--estimators", "xi"}).code == kUsage);
  CHECK(run_args({"compute", "--input", fixture("monotone3.csv"), "--estimators", "nope"}).code ==
        kUsage);
  CHECK(run_args({"frobnicate"}).code == kUsage);
  CHECK(run_args({"compute", "--input", "/nonexistent/file.csv", "--estimators", "xi"}).code == kData);
  CHECK(run_args({"compute", "--input", fixture("constant_y.csv"), "--estimators", "xi"}).code ==
        kPrecondition);
}

TEST_CASE("compute runs every estimator on generated data") {
  const auto o = run_args({"compute", "--gen", "gaussian_copula", "--rho", "0.5", "--n", "400",
                           "--seed", "3", "--estimators",
                           "adjacent_l1,zeta_eps,zeta_limit,xi,xi_large,eta2_knn,eta2_binned,r2,"
                           "delta_mean,xi_bruteforce",
                           "--eps", "0.05,0.1", "--delta", "0.02"});
  REQUIRE(o.code == kOk);
  const auto results = nlohmann::json::parse(o.out).at("results");
  CHECK(results.size() == 11);
  double xi = 0;
  double xi_large = 0;
  double brute = 0;
  for (const auto& r : results) {
    if (r.at("estimator") == "xi") xi = r.at("value");
    if (r.at("estimator") == "xi_large") xi_large = r.at("value");
    if (r.at("estimator") == "xi_bruteforce") brute = r.at("value");
  }
  CHECK(xi == xi_large);
  CHECK(xi == brute);
}

TEST_CASE("reports reproduce from their embedded config") {
  const std::string path = temp_path("report.json");
  const auto first = run_args({"compute", "--gen", "independent", "--n", "300", "--seed", "11",
                               "--estimators", "xi,zeta_limit,eta2_binned", "--out", path});
  REQUIRE(first.code == kOk);
  const auto again = run_args({"compute", "--config", path});
  REQUIRE(again.code == kOk);
  std::ifstream in(path);
  const auto a = nlohmann::json::parse(in).at("results");
  const auto b = nlohmann::json::parse(again.out).at("results");
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].at("value").get<double>() == b[i].at("value").get<double>());
  }
  std::remove(path.c_str());
}

TEST_CASE("sweep is deterministic across thread counts and rows fail independently") {
  RunConfig cfg;
  cfg.command = Command::sweep;
  cfg.rho_grid = {0.0, 0.5, 1.5, 1.0};
  cfg.n = 2000;
  cfg.reps = 4;
  cfg.seed = 99;
  cfg.estimators = {"xi", "eta2_binned", "zeta_limit"};
  cfg.threads = 1;
  const SweepTable one = cmd_sweep(cfg);
  cfg.threads = 8;
  const SweepTable eight = cmd_sweep(cfg);
  REQUIRE(one.rows.size() == 12);
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    CHECK(one.rows[i].ok == eight.rows[i].ok);
    CHECK(one.rows[i].mean == eight.rows[i].mean);
    CHECK(one.rows[i].sd == eight.rows[i].sd);
  }
  // ρ = 1.5 fails, its neighbors do not.
  CHECK_FALSE(one.rows[6].ok);
  CHECK(one.rows[6].message.find("rho") != std::string::npos);
  CHECK(one.rows[3].ok);
  CHECK(one.rows[9].ok);
  CHECK(*one.rows[9].mean == 1998.0 / 2001.0);
  CHECK(one.rows[9].reference == 1.0);
  CHECK(*one.rows[9].sd == 0.0);
}

TEST_CASE("sd present iff replicates > 1") {
  RunConfig cfg;
  cfg.command = Command::sweep;
  cfg.rho_grid = {0.3};
  cfg.n = 500;
  cfg.reps = 1;
  const SweepTable t = cmd_sweep(cfg);
  for (const auto& r : t.rows) {
    CHECK(r.mean);
    CHECK_FALSE(r.sd);
  }
}

TEST_CASE("sweep CSV round-trips at 17 significant digits") {
  RunConfig cfg;
  cfg.command = Command::sweep;
  cfg.rho_grid = {0.1, 0.7, 2.0};
  cfg.n = 800;
  cfg.reps = 3;
  cfg.seed = 5;
  const SweepTable t = cmd_sweep(cfg);
  std::stringstream ss;
  write_sweep_csv(ss, t);
  const SweepTable back = parse_sweep_csv(ss);
  REQUIRE(back.rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(back.rows[i].estimator == t.rows[i].estimator);
    CHECK(back.rows[i].parameter_value == t.rows[i].parameter_value);
    CHECK(back.rows[i].mean == t.rows[i].mean);
    CHECK(back.rows[i].sd == t.rows[i].sd);
    CHECK(back.rows[i].reference == t.rows[i].reference);
    CHECK(back.rows[i].ok == t.rows[i].ok);
    CHECK(back.rows[i].message == t.rows[i].message);
  }
}

TEST_CASE("converge: functional identity shrinks toward 0") {
  RunConfig cfg;
  cfg.command = Command::converge;
  GeneratorSpec spec;
  spec.family = Family::functional;
  spec.f = Function::identity;
  cfg.gen = spec;
  cfg.n_grid = {100, 1000, 10000};
  cfg.seed = 4;
  const SweepTable t = cmd_converge(cfg);
  REQUIRE(t.rows.size() == 3);
  CHECK(*t.rows[0].mean > *t.rows[1].mean);
  CHECK(*t.rows[1].mean > *t.rows[2].mean);
  CHECK(*t.rows[2].mean <= 0.01);
  CHECK(t.rows[2].reference == 0.0);

  // Same master seed, same table.
  const SweepTable again = cmd_converge(cfg);
  for (std::size_t i = 0; i < t.rows.size(); ++i) CHECK(t.rows[i].mean == again.rows[i].mean);
}

TEST_CASE("converge: independent epsilon grid near 1/4") {
  RunConfig cfg;
  cfg.command = Command::converge;
  GeneratorSpec spec;
  spec.family = Family::independent;
  cfg.gen = spec;
  cfg.eps = {0.2, 0.1, 0.05};
  cfg.n = 10'000;
  cfg.seed = 8;
  const SweepTable t = cmd_converge(cfg);
  for (const auto& r : t.rows) {
    CHECK(r.ok);
    CHECK(std::abs(*r.mean - 0.25) < 0.02);
  }
}

TEST_CASE("converge rows fail independently") {
  RunConfig cfg;
  cfg.command = Command::converge;
  GeneratorSpec spec;
  spec.family = Family::independent;
  cfg.gen = spec;
  cfg.eps = {1e-9, 0.1};
  cfg.n = 50;
  const SweepTable t = cmd_converge(cfg);
  CHECK_FALSE(t.rows[0].ok);
  CHECK(t.rows[0].message == "ε below sample resolution");
  CHECK(t.rows[1].ok);
}

TEST_CASE("bench guard and determinism") {
  const auto refused = run_args({"bench", "--n-grid", "6000", "--estimators", "xi_bruteforce"});
  CHECK(refused.code == kPrecondition);
  CHECK(refused.err.find("quadratic oracle refused") != std::string::npos);

  RunConfig cfg;
  cfg.command = Command::bench;
  cfg.n_grid = {1000, 10000};
  cfg.estimators = {"xi_large", "xi"};
  cfg.seed = 1;
  const BenchTable a = cmd_bench(cfg);
  const BenchTable b = cmd_bench(cfg);
  REQUIRE(a.rows.size() == 4);
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].value == b.rows[i].value);
  CHECK(a.scaling_ratio.has_value());
}

TEST_CASE("selftest passes") {
  std::ostringstream os;
  CHECK(cmd_selftest(os));
  CHECK(os.str().find("[FAIL]") == std::string::npos);
}

TEST_CASE("CSV output formats") {
  const auto o = run_args({"compute", "--input", fixture("monotone3.csv"), "--estimators", "xi,r2",
                           "--format", "csv"});
  REQUIRE(o.code == kOk);
  CHECK(o.out.rfind("estimator,value,n,seed,params,warnings\n", 0) == 0);
  CHECK(o.out.find("xi,0.25,3,0,") != std::string::npos);
}
