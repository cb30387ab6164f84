// Acceptance suite: one PASS/FAIL line per primary criterion.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "hartree/audit.hpp"
#include "hartree/config.hpp"
#include "hartree/dynamics.hpp"
#include "hartree/experiments.hpp"
#include "hartree/initial_data.hpp"
#include "hartree/iop.hpp"
#include "hartree/modified_energy.hpp"
#include "hartree/observables.hpp"
#include "oracles.hpp"

using namespace hartree;

namespace {

// Pinned tolerances.
constexpr double kOrbitTolerance = 1e-9;
constexpr double kOrbitSeconds = 10.0;
constexpr double kMassDriftTolerance = 1e-11;
constexpr double kEnergyRatioLow = 3.0;
constexpr double kEnergyRatioHigh = 5.0;
constexpr double kConservationSeconds = 30.0;
constexpr double kGamma4Seconds = 10.0;
constexpr double kLambda4Tolerance = 1e-12;
constexpr double kDE1Tolerance = 1e-6;
constexpr double kFdStep = 1e-4;
constexpr double kCancellationTolerance = 1e-4;
constexpr double kCancellationSeconds = 60.0;
constexpr double kEnvelopeFactor = 4.0;
constexpr double kTrendSlack = 0.05;
constexpr double kEquivalenceHalving = 0.5;
constexpr double kSlopeCeiling = -0.5;
constexpr double kDmvtFactor = 2.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Outcome exact_orbit() {
  const auto start = std::chrono::steady_clock::now();
  const TorusGrid grid(16);
  const auto V = Potential::delta();
  const Complex alpha = 1.0;
  const Mode n0{1, 0};
  const double dt = 1e-3;
  SpectralField f = plane_wave_reference(alpha, n0, V, 0.0, grid);
  double worst = 0.0;
  for (int k = 1; k <= 1000; ++k) {
    f = strang_step(f, V, dt);
    worst = std::max(worst, l2_distance(f, plane_wave_reference(alpha, n0, V, k * dt, grid)));
  }
  const double elapsed = seconds_since(start);
  return {worst < kOrbitTolerance && elapsed < kOrbitSeconds,
          fmt::format("max L2 error {:.3e} (< {:.0e}), {:.2f} s (< {} s)", worst, kOrbitTolerance,
                      elapsed, kOrbitSeconds)};
}

Outcome conservation() {
  const auto start = std::chrono::steady_clock::now();
  const auto cfg = parse_config("grid.K = 16\npotential.preset = gaussian\n");
  const auto V = cfg.potential();
  const auto f0 = initial_data(cfg.initial, cfg.grid(), cfg.theta);
  const double m0 = mass(f0);

  SpectralField f = f0;
  double mass_drift = 0.0;
  for (int k = 0; k < 1000; ++k) {
    f = strang_step(f, V, 1e-3);
    mass_drift = std::max(mass_drift, std::abs(mass(f) - m0) / m0);
  }
  const double e0 = energy(f0, V);
  const double drift_coarse = std::abs(energy(f, V) - e0);
  SpectralField g = f0;
  for (int k = 0; k < 2000; ++k) g = strang_step(g, V, 5e-4);
  const double drift_fine = std::abs(energy(g, V) - e0);
  const double ratio = drift_coarse / drift_fine;
  const double elapsed = seconds_since(start);
  return {mass_drift < kMassDriftTolerance && ratio >= kEnergyRatioLow && ratio <= kEnergyRatioHigh &&
              elapsed < kConservationSeconds,
          fmt::format("mass drift {:.3e} (< {:.0e}), energy drift ratio {:.3f} (in [{}, {}]), {:.2f} s",
                      mass_drift, kMassDriftTolerance, ratio, kEnergyRatioLow, kEnergyRatioHigh,
                      elapsed)};
}

Outcome gamma4() {
  const auto start = std::chrono::steady_clock::now();
  const TorusGrid g(8);
  std::size_t checked = 0, violations = 0;
  for (const Mode n1 : g.retained_modes())
    for (const Mode n2 : g.retained_modes())
      for (const Mode n3 : g.retained_modes()) {
        const Mode n4 = -(n1 + n2 + n3);
        if (!g.retained(n4)) continue;
        ++checked;
        const long lhs = norm_sq(n1) - norm_sq(n2) + norm_sq(n3) - norm_sq(n4);
        if (lhs != 2 * dot(n1 + n2, n1 + n4)) ++violations;
      }
  Gamma4AuditReport report;
  std::string error;
  try {
    report = gamma4_identity_audit(8);
  } catch (const Error& e) {
    error = e.what();
  }
  const double elapsed = seconds_since(start);
  return {error.empty() && violations == 0 && report.violations == 0 && report.checked == checked &&
              elapsed < kGamma4Seconds,
          fmt::format("{} quadruplets, {} violations (library {} / {}), {:.2f} s {}", checked,
                      violations, report.violations, report.checked, elapsed, error)};
}

Outcome m4_correctness() {
  M4Params p;
  p.theta = {2.0, 1.5};
  p.resonance = ResonanceParams::from_rule(Beta0Rule::torus, 2.0);
  const oracle::Params op{p.theta.N, p.theta.s, p.resonance.beta0, p.c};
  const TorusGrid g(8);

  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = random_gaussian_field(g, 2.0, 1000 + seed);
    worst = std::max(worst, rel(lambda4(p, f), oracle::lambda4(f, p.potential, op)));
  }

  std::size_t resonant = 0, nonzero = 0;
  for (const Mode n1 : g.retained_modes())
    for (const Mode n2 : g.retained_modes())
      for (const Mode n3 : g.retained_modes()) {
        const Mode n4 = -(n1 + n2 + n3);
        if (!g.retained(n4) || oracle::nonresonant(n1 + n2, n1 + n4, op.beta0)) continue;
        ++resonant;
        if (m4(Quadruplet(n1, n2, n3, n4), p) != 0.0) ++nonzero;
      }
  return {worst < kLambda4Tolerance && nonzero == 0 && resonant > 0,
          fmt::format("lambda4 max rel error {:.3e} (< {:.0e}) on 20 fields; {} resonant, {} nonzero",
                      worst, kLambda4Tolerance, resonant, nonzero)};
}

Outcome de1_formula() {
  M4Params p;
  p.theta = {2.0, 1.5};
  p.resonance = ResonanceParams::from_rule(Beta0Rule::torus, 2.0);
  const auto f = random_smooth(TorusGrid(8), 1.0, 3.5, 5);
  const double direct = dE1_dt_direct(f, p);
  const double fd = flow_derivative(f, p.potential, kFdStep,
                                    [&](const SpectralField& g) { return E1(g, p.theta); });
  const double err = rel(direct, fd);
  return {err < kDE1Tolerance, fmt::format("direct {:.10e}, FD {:.10e}, rel error {:.3e} (< {:.0e})",
                                           direct, fd, err, kDE1Tolerance)};
}

Outcome cancellation() {
  const auto start = std::chrono::steady_clock::now();
  M4Params p;
  p.theta = {1.0, 1.5};
  p.resonance.beta0 = 0.5;
  const auto f = random_gaussian_field(TorusGrid(4), 1.0, 7);
  const auto terms = dE2_dt_terms(f, p);
  const double fd = flow_derivative(f, p.potential, kFdStep,
                                    [&](const SpectralField& g) { return E2(g, p); });
  const double err = rel(terms.I + terms.II, fd);
  const double elapsed = seconds_since(start);
  return {err < kCancellationTolerance && elapsed < kCancellationSeconds,
          fmt::format("I {:.6e}, II {:.6e}, FD {:.6e}, rel error {:.3e} (< {:.0e}), {:.2f} s",
                      terms.I, terms.II, fd, err, kCancellationTolerance, elapsed)};
}

Outcome envelope() {
  M4Params base;
  const auto rows = m4_bound_audit(16, base, {2.0, 4.0, 8.0});
  double lo = INFINITY, hi = 0.0;
  bool finite = true;
  std::string values;
  for (const auto& r : rows) {
    finite = finite && std::isfinite(r.c_sup) && r.c_sup > 0.0;
    lo = std::min(lo, r.c_sup);
    hi = std::max(hi, r.c_sup);
    values += fmt::format(" N={}:{:.4f}", r.N, r.c_sup);
  }
  return {finite && hi / lo <= kEnvelopeFactor,
          fmt::format("C_sup{}, spread {:.3f} (<= {})", values, hi / lo, kEnvelopeFactor)};
}

std::string list(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += fmt::format("{}{:.3e}", out.empty() ? "" : ", ", x);
  return out;
}

Outcome equivalence_trend() {
  const auto result = run_equivalence_sweep(parse_config("grid.K = 16\n"));
  std::vector<double> ratios;
  for (const auto& r : result.rows) ratios.push_back(r.ratio);
  const bool complete = result.failures.empty() && ratios.size() == 4;
  const bool trend = complete && nonincreasing_with_slack(ratios, kTrendSlack) &&
                     ratios.back() <= kEquivalenceHalving * ratios.front();
  return {trend, fmt::format("N=4,8,16,32 ratios [{}]", list(ratios))};
}

Outcome iteration_trend() {
  const auto result = run_nsweep(parse_config("grid.K = 16\n"));
  std::vector<double> increments;
  for (const auto& r : result.rows) increments.push_back(r.rel_increment);
  const bool complete = result.failures.empty() && increments.size() == 4;
  const bool trend = complete && nonincreasing_with_slack(increments, kTrendSlack) && result.slope &&
                     *result.slope <= kSlopeCeiling;
  return {trend, fmt::format("N=4,8,16,32 increments [{}], slope {} (<= {})", list(increments),
                             result.slope ? fmt::format("{:.3f}", *result.slope) : "undefined",
                             kSlopeCeiling)};
}

Outcome dmvt() {
  bool ok = true;
  std::string detail;
  for (double s : {1.5, 2.0}) {
    const auto a = dmvt_sweep({8.0, s}, kDmvtSamples, 77);
    const auto b = dmvt_sweep({16.0, s}, kDmvtSamples, 78);
    const double spread = std::max(a.max_ratio, b.max_ratio) / std::min(a.max_ratio, b.max_ratio);
    ok = ok && std::isfinite(a.max_ratio) && std::isfinite(b.max_ratio) && a.max_ratio > 0.0 &&
         b.max_ratio > 0.0 && spread <= kDmvtFactor;
    detail += fmt::format("s={}: C(8)={:.4f} C(16)={:.4f} spread {:.3f}; ", s, a.max_ratio,
                          b.max_ratio, spread);
  }
  return {ok, detail + fmt::format("{} samples, spread <= {}", kDmvtSamples, kDmvtFactor)};
}

Outcome two_sided() {
  const ThetaParams p{8.0, 1.5};
  const double upper = std::pow(2.0, p.s / 2.0) * std::pow(p.N, p.s);
  std::size_t violations = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = random_gaussian_field(TorusGrid(32), 1.0 + 0.03 * seed, 500 + seed);
    const double root = std::sqrt(E1(f, p));
    const double hs = sobolev_norm(f, p.s);
    if (!(root <= hs)) ++violations;
    if (!(hs <= upper * root)) ++violations;
  }
  return {violations == 0, fmt::format("100 fields, {} violations", violations)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact-orbit regression", exact_orbit},
      {"conservation", conservation},
      {"Gamma4 identity", gamma4},
      {"M4 correctness", m4_correctness},
      {"dE1/dt formula", de1_formula},
      {"cancellation dE2/dt = I + II", cancellation},
      {"multiplier envelope", envelope},
      {"equivalence trend", equivalence_trend},
      {"iteration trend", iteration_trend},
      {"DMVT sweep", dmvt},
      {"theta two-sided bound", two_sided},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    if (!o.pass) ++failures;
    fmt::print("{} criterion {}: {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
               o.detail);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
