#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hartree/config.hpp"
#include "hartree/observables.hpp"

namespace hartree {

inline constexpr const char* kGrowthHeader = "t,mass,energy,hs_norm,e1,e2,lambda4";
inline constexpr const char* kNSweepHeader = "N,e2_t0,e2_t1,rel_increment";
inline constexpr const char* kEquivalenceHeader = "N,equiv_ratio";

struct GrowthResult {
  std::vector<EnergyReport> reports;
  bool completed = true;
  std::string status;  // "ok" or the blow-up message
  double last_good_time = 0.0;
};

/// Evolves the configured data and records one report per observation.
/// With `out`, writes growth.csv (rows streamed as produced) and a
/// status.txt sidecar.
GrowthResult run_growth_experiment(const ExperimentConfig& cfg,
                                   const std::optional<std::filesystem::path>& out = {});

struct SweepFailure {
  double N = 0.0;
  std::string error;
};

struct NSweepRow {
  double N = 0.0;
  double e2_t0 = 0.0;
  double e2_t1 = 0.0;
  double rel_increment = 0.0;
  bool beta0_clamped = false;
};

struct NSweepResult {
  std::vector<NSweepRow> rows;  // sorted by N
  std::vector<SweepFailure> failures;
  std::optional<double> slope;  // least-squares log-log slope over positive increments
};

/// For every N: regenerate theta and beta0, evolve over [0, delta_meas] and
/// record |E2(delta) - E2(0)| / |E2(0)|. Failures at one N are isolated.
/// With `out`, writes nsweep.csv and nsweep_status.txt.
NSweepResult run_nsweep(const ExperimentConfig& cfg,
                        const std::optional<std::filesystem::path>& out = {});

struct EquivalenceRow {
  double N = 0.0;
  double ratio = 0.0;  // |E2 - E1| / E1 at t = 0
  bool beta0_clamped = false;
};

struct EquivalenceResult {
  std::vector<EquivalenceRow> rows;
  std::vector<SweepFailure> failures;
  std::optional<double> slope;
};

/// Static measurement of |lambda4| / E1 per N. With `out`, writes
/// equivalence.csv and equivalence_status.txt.
EquivalenceResult run_equivalence_sweep(const ExperimentConfig& cfg,
                                        const std::optional<std::filesystem::path>& out = {});

/// Least-squares slope of log y against log x over the entries with
/// x, y > 0; empty when fewer than two such entries exist.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// v[i+1] <= v[i] (1 + slack) for every consecutive pair.
bool nonincreasing_with_slack(const std::vector<double>& values, double slack);

std::string format_csv_row(const EnergyReport& r);

}  // namespace hartree
