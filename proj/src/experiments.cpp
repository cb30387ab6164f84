#include "hartree/experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "hartree/dynamics.hpp"
#include "hartree/initial_data.hpp"
#include "hartree/parallel.hpp"

namespace hartree {

namespace {

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw Error(fmt::format("cannot write '{}'", (dir / name).string()));
  return out;
}

void write_failures(std::ofstream& status, const std::vector<SweepFailure>& failures) {
  status << "failures: " << failures.size() << '\n';
  for (const auto& f : failures) status << fmt::format("failure.N={}: {}\n", f.N, f.error);
}

/// Field reached from `f` after integrating over [0, horizon].
SpectralField advance(const SpectralField& f, const Potential& V, double dt, double horizon) {
  StepperConfig cfg{dt, horizon, 1 << 30};
  Diagnostics diag;
  diag.modified_energies = false;
  SpectralField last = f;
  evolve(f, V, cfg, diag, [&](const EnergyReport&, const SpectralField& g) { last = g; });
  return last;
}

}  // namespace

std::string format_csv_row(const EnergyReport& r) {
  return fmt::format("{},{},{},{},{},{},{}", r.t, r.mass, r.energy, r.hs_norm, r.e1, r.e2,
                     r.lambda4);
}

GrowthResult run_growth_experiment(const ExperimentConfig& cfg,
                                   const std::optional<std::filesystem::path>& out) {
  cfg.validate();
  const TorusGrid grid = cfg.grid();
  const Potential V = cfg.potential();
  const SpectralField f0 = initial_data(cfg.initial, grid, cfg.theta);

  std::ofstream csv;
  if (out) {
    csv = open_output(*out, "growth.csv");
    csv << kGrowthHeader << '\n';
  }

  GrowthResult result;
  try {
    result.reports = evolve(f0, V, cfg.stepper, cfg.diagnostics(),
                            [&](const EnergyReport& r, const SpectralField&) {
                              if (csv.is_open()) csv << format_csv_row(r) << '\n' << std::flush;
                              result.last_good_time = r.t;
                            });
    result.status = "ok";
  } catch (const BlowUp& e) {
    result.completed = false;
    result.status = e.what();
    result.last_good_time = e.last_good_time();
  }

  if (out) {
    auto status = open_output(*out, "status.txt");
    status << "status: " << (result.completed ? "ok" : "blowup") << '\n';
    if (!result.completed) status << "message: " << result.status << '\n';
    status << "last_good_time: " << result.last_good_time << '\n';
    status << "reports: " << result.reports.size() << '\n';
  }
  return result;
}

NSweepResult run_nsweep(const ExperimentConfig& cfg,
                        const std::optional<std::filesystem::path>& out) {
  cfg.validate();
  const TorusGrid grid = cfg.grid();
  const Potential V = cfg.potential();
  const SpectralField f0 = initial_data(cfg.initial, grid, cfg.theta);

  std::vector<double> thresholds = cfg.n_sweep;
  std::sort(thresholds.begin(), thresholds.end());

  struct Member {
    std::optional<NSweepRow> row;
    std::string error;
  };
  const auto members = parallel_map<Member>(thresholds.size(), [&](std::size_t i) {
    Member m;
    const double N = thresholds[i];
    try {
      const Diagnostics diag = cfg.diagnostics_at(N);
      const M4Params p = diag.m4_params(V);
      const SpectralField f1 = advance(f0, V, cfg.stepper.dt, cfg.delta_meas);
      NSweepRow row{N, E2(f0, p, cfg.max_active), E2(f1, p, cfg.max_active), 0.0,
                    diag.resonance.clamped};
      row.rel_increment = std::abs(row.e2_t1 - row.e2_t0) / std::abs(row.e2_t0);
      m.row = row;
    } catch (const Error& e) {
      m.error = e.what();
    }
    return m;
  });

  NSweepResult result;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].row)
      result.rows.push_back(*members[i].row);
    else
      result.failures.push_back({thresholds[i], members[i].error});
  }
  std::vector<double> xs, ys;
  for (const auto& r : result.rows) {
    xs.push_back(r.N);
    ys.push_back(r.rel_increment);
  }
  result.slope = loglog_slope(xs, ys);

  if (out) {
    auto csv = open_output(*out, "nsweep.csv");
    csv << kNSweepHeader << '\n';
    for (const auto& r : result.rows)
      csv << fmt::format("{},{},{},{}\n", r.N, r.e2_t0, r.e2_t1, r.rel_increment);
    auto status = open_output(*out, "nsweep_status.txt");
    status << "delta_meas: " << cfg.delta_meas << '\n';
    status << "slope: " << (result.slope ? fmt::format("{}", *result.slope) : "undefined") << '\n';
    for (const auto& r : result.rows)
      if (r.beta0_clamped) status << fmt::format("beta0_clamped.N={}: true\n", r.N);
    write_failures(status, result.failures);
  }
  return result;
}

EquivalenceResult run_equivalence_sweep(const ExperimentConfig& cfg,
                                        const std::optional<std::filesystem::path>& out) {
  cfg.validate();
  const TorusGrid grid = cfg.grid();
  const Potential V = cfg.potential();
  const SpectralField f0 = initial_data(cfg.initial, grid, cfg.theta);

  std::vector<double> thresholds = cfg.n_sweep;
  std::sort(thresholds.begin(), thresholds.end());

  struct Member {
    std::optional<EquivalenceRow> row;
    std::string error;
  };
  const auto members = parallel_map<Member>(thresholds.size(), [&](std::size_t i) {
    Member m;
    const double N = thresholds[i];
    try {
      const Diagnostics diag = cfg.diagnostics_at(N);
      const double e1 = E1(f0, diag.theta);
      const double correction = lambda4(diag.m4_params(V), f0, cfg.max_active);
      m.row = EquivalenceRow{N, std::abs(correction) / e1, diag.resonance.clamped};
    } catch (const Error& e) {
      m.error = e.what();
    }
    return m;
  });

  EquivalenceResult result;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].row)
      result.rows.push_back(*members[i].row);
    else
      result.failures.push_back({thresholds[i], members[i].error});
  }
  std::vector<double> xs, ys;
  for (const auto& r : result.rows) {
    xs.push_back(r.N);
    ys.push_back(r.ratio);
  }
  result.slope = loglog_slope(xs, ys);

  if (out) {
    auto csv = open_output(*out, "equivalence.csv");
    csv << kEquivalenceHeader << '\n';
    for (const auto& r : result.rows) csv << fmt::format("{},{}\n", r.N, r.ratio);
    auto status = open_output(*out, "equivalence_status.txt");
    status << "slope: " << (result.slope ? fmt::format("{}", *result.slope) : "undefined") << '\n';
    for (const auto& r : result.rows)
      if (r.beta0_clamped) status << fmt::format("beta0_clamped.N={}: true\n", r.N);
    write_failures(status, result.failures);
  }
  return result;
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  if (lx.size() < 2) return std::nullopt;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

bool nonincreasing_with_slack(const std::vector<double>& values, double slack) {
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[i - 1] * (1.0 + slack)) return false;
  return true;
}

}  // namespace hartree
