#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "lab/config.hpp"
#include "lab/csv.hpp"
#include "lab/experiments.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kSkipped = 3, kNumerical = 4 };

void report_issues(const std::vector<lab::PointIssue>& issues) {
  for (const auto& i : issues)
    std::cerr << (i.kind == lab::IssueKind::Stability ? "skipped " : "failed ") << i.point << ": " << i.message << '\n';
}

int cmd_list() {
  for (const auto& id : lab::experiment_ids()) std::cout << id << '\n';
  return kOk;
}

int cmd_validate(const std::string& path) {
  const auto cfg = lab::load_config(path);
  const auto issues = lab::screen_points(cfg);
  report_issues(issues);
  std::cout << path << ": " << cfg.experiment << " ok";
  if (!issues.empty()) std::cout << " (" << issues.size() << " points violate stability and would be skipped)";
  std::cout << '\n';
  return kOk;
}

int cmd_run(const std::string& path, const std::string& out_dir, std::optional<int> jobs,
            std::optional<std::uint64_t> seed) {
  const auto cfg = lab::load_config(path);
  const auto result = lab::run_experiment(cfg, {jobs, seed});
  report_issues(result.issues);
  for (const auto& f : lab::write_result(result, out_dir, cfg.output)) std::cout << f << '\n';
  return result.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subcycle-lab: subcycled operator-splitting experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment config and write CSV tables");
  std::string run_config, out_dir = "results";
  std::optional<int> jobs;
  std::optional<std::uint64_t> seed;
  run->add_option("config", run_config, "YAML config")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory")->capture_default_str();
  run->add_option("--jobs", jobs, "worker threads (overrides the config)")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "random seed (overrides the config)");

  auto* list = app.add_subcommand("list", "list experiment ids");

  auto* validate = app.add_subcommand("validate", "check a config and report points that violate stability");
  std::string validate_config;
  validate->add_option("config", validate_config, "YAML config")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*list) return cmd_list();
    if (*validate) return cmd_validate(validate_config);
    return cmd_run(run_config, out_dir, jobs, seed);
  } catch (const subcycle::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const subcycle::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
