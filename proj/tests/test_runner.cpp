#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ldg/runner.hpp"

using namespace ldg;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string write_temp_config(const std::string& body) {
  std::string path = "runner_test_config.txt";
  std::ofstream out(path);
  out << body;
  return path;
}

RunConfig small_config(const std::string& out_dir) {
  RunConfig c;
  c.preset = "porous1d";
  c.mesh = 20;
  c.t_final = 0.02;
  c.output_dir = out_dir;
  return c;
}

}  // namespace

TEST_CASE("config files parse and overrides apply") {
  auto path = write_temp_config(
      "preset = porous1d\n"
      "# a comment\n"
      "mesh = 40\n"
      "limiter = off\n"
      "alpha = 0.25\n");
  RunConfig c = parse_config_file(path);
  CHECK(c.preset == "porous1d");
  CHECK(c.mesh.value() == 40);
  CHECK_FALSE(c.limiter);
  CHECK(c.alpha.value() == doctest::Approx(0.25));

  apply_override(c, "degree=3");
  CHECK(c.degree.value() == 3);
  apply_override(c, "limiter=on");
  CHECK(c.limiter);
  apply_override(c, "flux=left_q_right_p");
  CHECK(c.flux == FluxChoice::LeftQRightP);
  std::remove(path.c_str());
}

TEST_CASE("unknown keys and bad values are rejected") {
  RunConfig c;
  c.preset = "porous1d";
  CHECK_THROWS_AS(apply_override(c, "meshes=40"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "degree=two"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "nonsense"), ConfigError);
  auto path = write_temp_config("preset = porous1d\nwhatever = 1\n");
  CHECK_THROWS_AS(parse_config_file(path), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("manifest round-trips the configuration") {
  RunConfig c = small_config("x");
  c.degree = 1;
  std::string m = manifest_text(c);
  CHECK(m.find("preset=porous1d") != std::string::npos);
  CHECK(m.find("mesh=20") != std::string::npos);
  CHECK(m.find("degree=1") != std::string::npos);
}

TEST_CASE("identical runs are byte-identical and compare to zero") {
  RunConfig a = small_config("runner_test_a");
  RunConfig b = small_config("runner_test_b");
  auto ra = run(a);
  auto rb = run(b);
  REQUIRE(ra.status == RunStatus::Ok);
  REQUIRE(rb.status == RunStatus::Ok);
  CHECK(slurp("runner_test_a/steps.csv") == slurp("runner_test_b/steps.csv"));
  CHECK(slurp("runner_test_a/final_state.csv") ==
        slurp("runner_test_b/final_state.csv"));

  auto rep = compare_runs("runner_test_a", "runner_test_b");
  CHECK(rep.max_delta() == 0.0);
  CHECK(rep.final_state_delta == 0.0);
  CHECK(rep.rows_a == rep.rows_b);
  CHECK_FALSE(rep.format().empty());
}

TEST_CASE("comparing runs on different grids is refused") {
  RunConfig a = small_config("runner_test_a2");
  RunConfig b = small_config("runner_test_b2");
  b.mesh = 40;
  run(a);
  run(b);
  CHECK_THROWS_AS(compare_runs("runner_test_a2", "runner_test_b2"),
                  ConfigError);
}

TEST_CASE("a run reports sane diagnostics") {
  RunConfig c = small_config("runner_test_diag");
  auto r = run(c);
  REQUIRE(r.status == RunStatus::Ok);
  REQUIRE(r.records.size() >= 2);
  CHECK(r.records.front().time == 0.0);
  CHECK(r.records.back().time == doctest::Approx(0.02));
  CHECK(r.min_u_run >= 1e-10 - 1e-12);
  // entropy decays monotonically on this preset
  for (size_t i = 1; i < r.records.size(); ++i)
    CHECK(r.records[i].entropy <= r.records[i - 1].entropy + 1e-12);
  // mass is conserved
  double m0 = r.records.front().mass;
  for (const auto& rec : r.records)
    CHECK(std::abs(rec.mass - m0) < 1e-12);
  std::string status = slurp("runner_test_diag/status.txt");
  CHECK(status.find("status=ok") != std::string::npos);
}

TEST_CASE("unknown preset fails fast") {
  RunConfig c;
  c.preset = "not_a_preset";
  CHECK_THROWS_AS(run(c), ConfigError);
}
