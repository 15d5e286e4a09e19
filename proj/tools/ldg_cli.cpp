#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ldg/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitBreakdown = 4;

std::vector<int> parse_meshes(const std::string& csv) {
  std::vector<int> out;
  size_t pos = 0;
  while (pos <= csv.size()) {
    size_t comma = csv.find(',', pos);
    std::string tok = csv.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!tok.empty()) out.push_back(std::stoi(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw ldg::ConfigError("empty mesh list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-stable implicit LDG solver for degenerate diffusion"};
  app.require_subcommand(1);

  std::string config_path, meshes_csv, dir_a, dir_b;
  std::vector<std::string> overrides;

  auto* run_cmd = app.add_subcommand("run", "Execute one configured run");
  run_cmd->add_option("--config", config_path, "key=value config file")
      ->required();
  run_cmd->add_option("--override", overrides, "key=value overrides");

  auto* table_cmd =
      app.add_subcommand("table", "Convergence study over a mesh sequence");
  table_cmd->add_option("--config", config_path, "key=value config file")
      ->required();
  table_cmd->add_option("--meshes", meshes_csv, "comma-separated mesh sizes")
      ->required();

  auto* compare_cmd =
      app.add_subcommand("compare", "Column-wise diff of two run directories");
  compare_cmd->add_option("dirA", dir_a)->required();
  compare_cmd->add_option("dirB", dir_b)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      ldg::RunConfig cfg = ldg::parse_config_file(config_path);
      for (const auto& o : overrides) ldg::apply_override(cfg, o);
      ldg::RunResult res = ldg::run(cfg);
      std::printf("steps: %zu  final time: %.6g\n", res.records.size() - 1,
                  res.records.back().time);
      if (res.errors)
        std::printf("errors: linf=%.6e l1=%.6e l2=%.6e\n", res.errors->linf,
                    res.errors->l1, res.errors->l2);
      if (res.status == ldg::RunStatus::Breakdown) {
        std::printf("BREAKDOWN: %s\n", res.detail.c_str());
        return kExitBreakdown;
      }
      if (res.status == ldg::RunStatus::SolverFailure) {
        std::fprintf(stderr, "solver failure: %s\n", res.detail.c_str());
        return kExitSolver;
      }
      std::printf("ok\n");
      return 0;
    }
    if (table_cmd->parsed()) {
      ldg::RunConfig cfg = ldg::parse_config_file(config_path);
      auto rows = ldg::run_table(cfg, parse_meshes(meshes_csv));
      std::printf("%8s %12s %8s %12s %8s %12s\n", "M", "Linf", "order", "L1",
                  "order", "min_u");
      for (const auto& r : rows)
        std::printf("%8d %12.4e %8.2f %12.4e %8.2f %12.4e\n", r.elements,
                    r.linf, r.linf_order, r.l1, r.l1_order, r.min_u);
      return 0;
    }
    // compare
    ldg::CompareReport rep = ldg::compare_runs(dir_a, dir_b);
    std::printf("%s", rep.format().c_str());
    return 0;
  } catch (const ldg::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  }
}
