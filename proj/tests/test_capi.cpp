// Exercises the shared library through geodr.h only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>
#include <vector>

#include "geodr/geodr.h"

namespace {

const char* const kConfig =
    "[problem]\ntype = rosenbrock\n[solver]\nmethod = pacc_dr\nalpha = 0.5\nx0 = 1 2\n";

struct Config {
  geodr_config* p = nullptr;
  ~Config() { geodr_config_free(p); }
};

struct Result {
  geodr_result* p = nullptr;
  ~Result() { geodr_result_free(p); }
};

}  // namespace

TEST_CASE("version and null handling") {
  CHECK(std::string(geodr_version()).size() > 0);
  CHECK(geodr_config_parse(nullptr, nullptr, nullptr) == GEODR_E_INVALID_ARGUMENT);
  CHECK(std::string(geodr_last_error()).size() > 0);
  CHECK(geodr_run(nullptr, nullptr) == GEODR_E_INVALID_ARGUMENT);
  geodr_config_free(nullptr);
  geodr_result_free(nullptr);
  geodr_table_free(nullptr);
}

TEST_CASE("parse, run and read back a trace") {
  Config cfg;
  REQUIRE(geodr_config_parse(kConfig, ".", &cfg.p) == GEODR_OK);
  CHECK(std::string(geodr_config_output_format(cfg.p)) == "csv");
  Result res;
  REQUIRE(geodr_run(cfg.p, &res.p) == GEODR_OK);

  geodr_summary s{};
  REQUIRE(geodr_result_summary(res.p, &s) == GEODR_OK);
  CHECK(std::string(s.label) == "p-AccDR");
  CHECK(s.status == GEODR_RUN_CONVERGED);
  CHECK(s.iterations == geodr_result_record_count(res.p));
  CHECK(s.stop_metric < 1e-14);

  geodr_record r{};
  REQUIRE(geodr_result_record(res.p, 0, &r) == GEODR_OK);
  CHECK(r.iter == 1);
  CHECK(r.min_residual <= r.residual);
  CHECK(geodr_result_record(res.p, s.iterations, &r) == GEODR_E_RANGE);

  size_t len = 0;
  CHECK(geodr_result_solution(res.p, nullptr, 0, &len) == GEODR_OK);
  REQUIRE(len == 2);
  std::vector<double> u(len);
  REQUIRE(geodr_result_solution(res.p, u.data(), u.size(), &len) == GEODR_OK);
  CHECK(u[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(u[1] == doctest::Approx(4.0).epsilon(1e-9));

  const std::string csv = geodr_result_render(res.p, "csv");
  CHECK(csv.find("iter,stop_metric,residual,min_residual,objective,elapsed_ms") != std::string::npos);
  const std::string json = geodr_result_render(res.p, "json");
  CHECK(json.find("\"records\"") != std::string::npos);
  CHECK(geodr_result_render(res.p, "xml") == nullptr);
}

TEST_CASE("validation errors carry field names") {
  Config cfg;
  const char* bad = "[problem]\ntype = rosenbrock\n[solver]\nmethod = inertial_dr\nalpha = 0.5\ntheta = 0.9\nx1 = 1 3\n";
  CHECK(geodr_config_parse(bad, ".", &cfg.p) == GEODR_E_VALIDATION);
  CHECK(cfg.p == nullptr);
  CHECK(std::string(geodr_last_error()).find("solver.theta") != std::string::npos);
  CHECK(geodr_config_parse("[solver\n", ".", &cfg.p) == GEODR_E_PARSE);
  CHECK(geodr_config_load("/nonexistent/x.cfg", &cfg.p) == GEODR_E_IO);
}

TEST_CASE("set_output and write") {
  Config cfg;
  REQUIRE(geodr_config_parse(kConfig, ".", &cfg.p) == GEODR_OK);
  CHECK(geodr_config_set_output(cfg.p, "yaml", nullptr) == GEODR_E_INVALID_ARGUMENT);
  const std::string path = std::string(GEODR_TEST_TMP) + "/capi_trace.json";
  REQUIRE(geodr_config_set_output(cfg.p, "json", path.c_str()) == GEODR_OK);
  CHECK(std::string(geodr_config_output_path(cfg.p)) == path);
  Result res;
  REQUIRE(geodr_run(cfg.p, &res.p) == GEODR_OK);
  REQUIRE(geodr_result_write(res.p, nullptr, path.c_str()) == GEODR_OK);
  std::FILE* f = std::fopen(path.c_str(), "r");
  REQUIRE(f != nullptr);
  char head[2] = {};
  CHECK(std::fread(head, 1, 1, f) == 1);
  CHECK(head[0] == '{');
  std::fclose(f);
  std::remove(path.c_str());
  CHECK(geodr_result_write(res.p, nullptr, "/nonexistent/dir/t.csv") == GEODR_E_IO);
}

TEST_CASE("oracle compare") {
  Config cfg;
  REQUIRE(geodr_config_parse(kConfig, ".", &cfg.p) == GEODR_OK);
  geodr_oracle_report rep{};
  REQUIRE(geodr_oracle_compare(cfg.p, &rep) == GEODR_OK);
  CHECK(rep.verdict == GEODR_VERDICT_PASS);
  CHECK(rep.point_checked == 1);
  CHECK(rep.point_distance <= 1e-6);
}

TEST_CASE("reproduce table1") {
  geodr_table* t = nullptr;
  REQUIRE(geodr_reproduce("table1", GEODR_TEST_DATA, nullptr, nullptr, &t) == GEODR_OK);
  CHECK(geodr_table_row_count(t) == 3);
  geodr_table_row row{};
  REQUIRE(geodr_table_get_row(t, 0, &row) == GEODR_OK);
  CHECK(std::string(row.label) == "DR");
  CHECK(row.reference == 67);
  CHECK(row.converged == 1);
  CHECK(geodr_table_get_row(t, 3, &row) == GEODR_E_RANGE);
  CHECK(std::string(geodr_table_render(t)).find("p-AccDR") != std::string::npos);
  geodr_table_free(t);
  CHECK(geodr_reproduce("table9", GEODR_TEST_DATA, nullptr, nullptr, &t) == GEODR_E_INVALID_ARGUMENT);
}
