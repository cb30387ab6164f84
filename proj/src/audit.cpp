#include "hartree/audit.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "hartree/dynamics.hpp"
#include "hartree/initial_data.hpp"
#include "hartree/iop.hpp"
#include "hartree/modified_energy.hpp"
#include "hartree/observables.hpp"
#include "hartree/parallel.hpp"

namespace hartree {

void AuditEntry::set(const std::string& key, double value) {
  values.emplace_back(key, fmt::format("{}", value));
}
void AuditEntry::set(const std::string& key, const std::string& value) {
  values.emplace_back(key, value);
}

bool AuditReport::pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const AuditEntry& e) { return e.pass; });
}

const AuditEntry* AuditReport::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

std::string AuditReport::to_text() const {
  std::ostringstream out;
  for (const auto& e : entries) {
    out << "audit." << e.name << ".status: " << (e.pass ? "pass" : "fail") << '\n';
    for (const auto& [k, v] : e.values) out << "audit." << e.name << '.' << k << ": " << v << '\n';
  }
  out << "overall: " << (pass() ? "pass" : "fail") << '\n';
  return out.str();
}

double lambda4_reference(const M4Params& p, const SpectralField& f) {
  const auto& grid = f.grid();
  PairwiseSum<Complex> sum;
  for (const Mode m1 : grid.retained_modes())
    for (const Mode m2 : grid.retained_modes())
      for (const Mode m3 : grid.retained_modes()) {
        const Mode m4_index = m1 - m2 + m3;
        if (!grid.retained(m4_index)) continue;
        const double weight = m4(Quadruplet(m1, -m2, m3, -m4_index), p);
        if (weight == 0.0) continue;
        sum.add(weight * f[m1] * std::conj(f[m2]) * f[m3] * std::conj(f[m4_index]));
      }
  return sum.total().real();
}

double flow_derivative(const SpectralField& f, const Potential& V, double h,
                       const std::function<double(const SpectralField&)>& functional) {
  const double forward = functional(strang_step(f, V, h));
  const double backward = functional(strang_step(f, V, -h));
  return (forward - backward) / (2.0 * h);
}

SpectralField random_gaussian_field(const TorusGrid& grid, double decay, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralField f(grid);
  for (const Mode n : grid.retained_modes()) {
    const double weight = std::pow(1.0 + static_cast<double>(norm_sq(n)), -0.5 * decay);
    const double re = gauss(rng);
    const double im = gauss(rng);
    f.at(n) = weight * Complex(re, im);
  }
  return f;
}

namespace {

double relative_error(double value, double reference) {
  const double scale = std::abs(reference);
  if (scale == 0.0) return std::abs(value);
  return std::abs(value - reference) / scale;
}

AuditEntry gamma4_identity() {
  AuditEntry e{"gamma4_identity", false, {}};
  e.set("K", 8.0);
  try {
    const auto report = gamma4_identity_audit(8);
    e.set("checked", static_cast<double>(report.checked));
    e.set("violations", static_cast<double>(report.violations));
    e.pass = report.violations == 0 && report.checked > 0;
  } catch (const Error& err) {
    e.set("error", err.what());
  }
  return e;
}

AuditEntry m4_resonant_zero(const M4Params& base) {
  AuditEntry e{"m4_resonant_zero", false, {}};
  M4Params p = base;
  p.theta.N = 2.0;
  p.resonance = ResonanceParams::from_rule(Beta0Rule::torus, p.theta.N, base.resonance.c_beta);
  const TorusGrid grid(8);
  std::size_t resonant = 0, nonzero_on_resonant = 0, degenerate = 0, nonzero_numerator = 0;
  for (const Mode n1 : grid.retained_modes())
    for (const Mode n2 : grid.retained_modes())
      for (const Mode n3 : grid.retained_modes()) {
        const Mode n4 = -(n1 + n2 + n3);
        if (!grid.retained(n4)) continue;
        const Quadruplet q(n1, n2, n3, n4);
        if (classify_quadruplet(q, p.resonance) == Resonance::Resonant) {
          ++resonant;
          if (m4(q, p) != 0.0) ++nonzero_on_resonant;
        }
        if (is_zero(q.n12()) || is_zero(q.n14())) {
          ++degenerate;
          const double numerator = alternating_sum(theta_sq(n1, p.theta), theta_sq(n2, p.theta),
                                                   theta_sq(n3, p.theta), theta_sq(n4, p.theta));
          if (numerator != 0.0) ++nonzero_numerator;
        }
      }
  e.set("K", 8.0);
  e.set("N", p.theta.N);
  e.set("resonant_checked", static_cast<double>(resonant));
  e.set("nonzero_m4_on_resonant", static_cast<double>(nonzero_on_resonant));
  e.set("degenerate_checked", static_cast<double>(degenerate));
  e.set("nonzero_numerator_on_degenerate", static_cast<double>(nonzero_numerator));
  e.pass = nonzero_on_resonant == 0 && nonzero_numerator == 0 && resonant > 0;
  return e;
}

AuditEntry lambda4_oracle(const M4Params& base, std::uint64_t seed) {
  AuditEntry e{"lambda4_oracle", false, {}};
  M4Params p = base;
  p.theta.N = 2.0;
  p.resonance = ResonanceParams::from_rule(Beta0Rule::torus, p.theta.N, base.resonance.c_beta);
  const TorusGrid grid(8);
  double worst = 0.0;
  try {
    for (int i = 0; i < 20; ++i) {
      const SpectralField f = random_gaussian_field(grid, p.theta.s + 2.0, seed + 101 * i);
      worst = std::max(worst, relative_error(lambda4(p, f), lambda4_reference(p, f)));
    }
    e.pass = worst < kLambda4OracleTolerance;
  } catch (const Error& err) {
    e.set("error", err.what());
  }
  e.set("fields", 20.0);
  e.set("max_relative_error", worst);
  e.set("tolerance", kLambda4OracleTolerance);
  return e;
}

AuditEntry de1_finite_difference(const M4Params& base, double c_scale, std::uint64_t seed) {
  AuditEntry e{"de1_finite_difference", false, {}};
  M4Params p = base;
  p.c = base.c * c_scale;
  p.theta.N = 2.0;
  p.resonance = ResonanceParams::from_rule(Beta0Rule::torus, p.theta.N, base.resonance.c_beta);
  const TorusGrid grid(8);
  const SpectralField f = random_smooth(grid, 1.0, p.theta.s + 2.0, seed);
  try {
    const double direct = dE1_dt_direct(f, p);
    const double fd = flow_derivative(f, p.potential, kFiniteDifferenceStep,
                                      [&](const SpectralField& g) { return E1(g, p.theta); });
    const double err = relative_error(direct, fd);
    e.set("direct", direct);
    e.set("finite_difference", fd);
    e.set("relative_error", err);
    e.pass = err < kDE1FiniteDifferenceTolerance;
  } catch (const Error& err) {
    e.set("error", err.what());
  }
  e.set("K", 8.0);
  e.set("c_formula", p.c);
  e.set("dt", kFiniteDifferenceStep);
  e.set("tolerance", kDE1FiniteDifferenceTolerance);
  return e;
}

AuditEntry cancellation(const M4Params& base, std::uint64_t seed) {
  AuditEntry e{"de2_cancellation", false, {}};
  M4Params p = base;
  p.theta.N = 1.0;
  // The torus rule would give beta0 = 1 at N = 1 and empty Omega_nr.
  p.resonance.beta0 = 0.5;
  p.resonance.clamped = false;
  const TorusGrid grid(4);
  const SpectralField f = random_gaussian_field(grid, p.theta.s + 2.0, seed);
  try {
    const DE2Terms terms = dE2_dt_terms(f, p);
    const double fd2 = flow_derivative(f, p.potential, kFiniteDifferenceStep,
                                       [&](const SpectralField& g) { return E2(g, p); });
    const double fd1 = flow_derivative(f, p.potential, kFiniteDifferenceStep,
                                       [&](const SpectralField& g) { return E1(g, p.theta); });
    const double err = relative_error(terms.I + terms.II, fd2);
    e.set("I", terms.I);
    e.set("II", terms.II);
    e.set("finite_difference_e2", fd2);
    e.set("finite_difference_e1", fd1);
    e.set("e1_minus_I", fd1 - terms.I);
    e.set("nonresonant_flux", dE1_dt_split(f, p).nonresonant);
    e.set("relative_error", err);
    e.pass = err < kCancellationTolerance;
  } catch (const Error& err) {
    e.set("error", err.what());
  }
  e.set("K", 4.0);
  e.set("N", p.theta.N);
  e.set("beta0", p.resonance.beta0);
  e.set("dt", kFiniteDifferenceStep);
  e.set("tolerance", kCancellationTolerance);
  return e;
}

AuditEntry m4_envelope(const M4Params& base) {
  AuditEntry e{"m4_envelope", false, {}};
  const std::vector<double> thresholds{2.0, 4.0, 8.0};
  try {
    const auto rows = m4_bound_audit(16, base, thresholds);
    double lo = INFINITY, hi = 0.0;
    bool finite = true;
    for (const auto& r : rows) {
      e.set(fmt::format("c_sup.N={}", r.N), r.c_sup);
      e.set(fmt::format("beta0.N={}", r.N), r.beta0);
      finite = finite && std::isfinite(r.c_sup) && r.c_sup > 0.0;
      lo = std::min(lo, r.c_sup);
      hi = std::max(hi, r.c_sup);
    }
    e.set("spread", hi / lo);
    e.pass = finite && hi / lo <= kEnvelopeStabilityFactor;
  } catch (const Error& err) {
    e.set("error", err.what());
  }
  e.set("K", 16.0);
  e.set("tolerance_spread", kEnvelopeStabilityFactor);
  return e;
}

AuditEntry dmvt(std::uint64_t seed) {
  AuditEntry e{"dmvt", false, {}};
  bool ok = true;
  for (const double s : {1.5, 2.0}) {
    double lo = INFINITY, hi = 0.0;
    for (const double N : {8.0, 16.0}) {
      const auto sweep = dmvt_sweep({N, s}, kDmvtSamples, seed + static_cast<std::uint64_t>(N));
      e.set(fmt::format("c_dmvt.s={}.N={}", s, N), sweep.max_ratio);
      ok = ok && std::isfinite(sweep.max_ratio) && sweep.max_ratio > 0.0;
      lo = std::min(lo, sweep.max_ratio);
      hi = std::max(hi, sweep.max_ratio);
    }
    e.set(fmt::format("spread.s={}", s), hi / lo);
    ok = ok && hi / lo <= kDmvtStabilityFactor;
  }
  e.set("samples", static_cast<double>(kDmvtSamples));
  e.set("tolerance_spread", kDmvtStabilityFactor);
  e.pass = ok;
  return e;
}

AuditEntry two_sided_bound(const ThetaParams& theta, int K, std::uint64_t seed) {
  AuditEntry e{"theta_two_sided_bound", false, {}};
  const TorusGrid grid(K);
  std::size_t violations = 0;
  double worst_lower = 0.0, worst_upper = 0.0;
  const double upper_constant = std::pow(2.0, theta.s / 2.0) * std::pow(theta.N, theta.s);
  for (int i = 0; i < 100; ++i) {
    const double decay = theta.s + 1.0 + 0.05 * i;
    const SpectralField f = random_gaussian_field(grid, decay, seed + 7 * i);
    const double root_e1 = std::sqrt(E1(f, theta));
    const double hs = sobolev_norm(f, theta.s);
    if (!(root_e1 <= hs)) ++violations;
    if (!(hs <= upper_constant * root_e1)) ++violations;
    worst_lower = std::max(worst_lower, root_e1 / hs);
    worst_upper = std::max(worst_upper, hs / (upper_constant * root_e1));
  }
  e.set("fields", 100.0);
  e.set("violations", static_cast<double>(violations));
  e.set("max_lower_ratio", worst_lower);
  e.set("max_upper_ratio", worst_upper);
  e.pass = violations == 0;
  return e;
}

}  // namespace

AuditReport run_verification_suite(const ExperimentConfig& cfg) {
  cfg.validate();
  M4Params base;
  base.theta = cfg.theta;
  base.resonance = cfg.resonance_at(cfg.theta.N);
  base.potential = cfg.potential();
  base.c = kEnergyFluxConstant;
  base.denominator_sign = cfg.audit_denominator_sign;
  const std::uint64_t seed = cfg.initial.seed;

  AuditReport report;
  report.entries.push_back(gamma4_identity());
  report.entries.push_back(m4_resonant_zero(base));
  report.entries.push_back(lambda4_oracle(base, seed));
  report.entries.push_back(de1_finite_difference(base, cfg.audit_c_scale, seed));
  report.entries.push_back(cancellation(base, seed));
  report.entries.push_back(m4_envelope(base));
  report.entries.push_back(dmvt(seed));
  report.entries.push_back(two_sided_bound(cfg.theta, std::min(cfg.K, 16), seed));
  for (auto& entry : report.entries) {
    entry.set("c", base.c);
    if (base.denominator_sign != 1.0) entry.set("denominator_sign", base.denominator_sign);
  }
  return report;
}

}  // namespace hartree
