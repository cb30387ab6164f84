#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "hartree/audit.hpp"
#include "hartree/config.hpp"
#include "hartree/experiments.hpp"
#include "hartree/parallel.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfigError = 2;

struct Overrides {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("config", o.config_path, "Configuration file")->required();
  sub->add_option("--out", o.out, "Output directory (overrides output.dir)");
  sub->add_option("--seed", o.seed, "Seed for random initial data (overrides initial.seed)");
  sub->add_option("--threads", o.threads, "Worker threads (overrides run.threads)")
      ->check(CLI::PositiveNumber);
}

hartree::ExperimentConfig resolve(const Overrides& o) {
  auto cfg = hartree::load_config(o.config_path);
  if (o.out) cfg.output_dir = *o.out;
  if (o.seed) cfg.initial.seed = *o.seed;
  if (o.threads) cfg.threads = *o.threads;
  cfg.validate();
  hartree::set_thread_count(cfg.threads);
  return cfg;
}

int simulate(const hartree::ExperimentConfig& cfg) {
  const auto result = hartree::run_growth_experiment(cfg, cfg.output_dir);
  fmt::print("rows: {}\nstatus: {}\n", result.reports.size(), result.completed ? "ok" : result.status);
  return result.completed ? kExitPass : kExitFailure;
}

int nsweep(const hartree::ExperimentConfig& cfg) {
  const auto result = hartree::run_nsweep(cfg, cfg.output_dir);
  for (const auto& r : result.rows) fmt::print("N={} rel_increment={}\n", r.N, r.rel_increment);
  for (const auto& f : result.failures) fmt::print("failure N={}: {}\n", f.N, f.error);
  if (result.slope) fmt::print("slope: {}\n", *result.slope);
  return result.failures.empty() ? kExitPass : kExitFailure;
}

int equivalence(const hartree::ExperimentConfig& cfg) {
  const auto result = hartree::run_equivalence_sweep(cfg, cfg.output_dir);
  for (const auto& r : result.rows) fmt::print("N={} equiv_ratio={}\n", r.N, r.ratio);
  for (const auto& f : result.failures) fmt::print("failure N={}: {}\n", f.N, f.error);
  if (result.slope) fmt::print("slope: {}\n", *result.slope);
  return result.failures.empty() ? kExitPass : kExitFailure;
}

int audit(const hartree::ExperimentConfig& cfg) {
  const auto report = hartree::run_verification_suite(cfg);
  const std::string text = report.to_text();
  std::filesystem::create_directories(cfg.output_dir);
  const auto path = std::filesystem::path(cfg.output_dir) / "audit.txt";
  std::ofstream file(path);
  if (!file) throw hartree::Error(fmt::format("cannot write '{}'", path.string()));
  file << text;
  std::cout << text;
  return report.pass() ? kExitPass : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hartree equation simulator and modified-energy laboratory"};
  app.require_subcommand(1);

  Overrides o;
  auto* sim = app.add_subcommand("simulate", "Evolve and write growth.csv");
  auto* sweep = app.add_subcommand("nsweep", "E2 increment over the measurement window per N");
  auto* equiv = app.add_subcommand("equivalence", "|E2 - E1| / E1 at t = 0 per N");
  auto* aud = app.add_subcommand("audit", "Run the verification suite");
  for (auto* sub : {sim, sweep, equiv, aud}) add_common(sub, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfigError;
  }

  hartree::ExperimentConfig cfg;
  try {
    cfg = resolve(o);
  } catch (const hartree::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    if (*sim) return simulate(cfg);
    if (*sweep) return nsweep(cfg);
    if (*equiv) return equivalence(cfg);
    return audit(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
