#include "hartree/dynamics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "hartree/iop.hpp"
#include "hartree/transform.hpp"

namespace hartree {

void StepperConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(fmt::format("stepper.dt must be positive, got {}", dt));
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    throw Error(fmt::format("stepper.t_end must be nonnegative, got {}", t_end));
  if (observer_stride < 1)
    throw Error(fmt::format("stepper.stride must be >= 1, got {}", observer_stride));
}

SpectralField linear_step(const SpectralField& f, double tau) {
  SpectralField out(f.grid());
  for (const Mode n : f.grid().retained_modes()) {
    const double phase = -static_cast<double>(norm_sq(n)) * tau;
    out.at(n) = f[n] * Complex(std::cos(phase), std::sin(phase));
  }
  return out;
}

namespace {

double l2_norm(const SpectralField& f) { return std::sqrt(mass(f)); }

/// P (W v) for a real potential field W sampled on the dealiasing grid.
SpectralField apply_projected(const RealField& W, const SpectralField& v) {
  PhysicalField samples = synthesize(v, W.L);
  for (std::size_t j = 0; j < samples.values.size(); ++j) samples.values[j] *= W.values[j];
  return analyze(samples, v.grid());
}

/// exp(-i tau P W P) u by Taylor series, split into substeps so that each
/// substep has tau max|W| <= 1/2.
SpectralField propagate(const RealField& W, const SpectralField& u, double tau) {
  double w_max = 0.0;
  for (const double w : W.values) w_max = std::max(w_max, std::abs(w));
  const int substeps = std::max(1, static_cast<int>(std::ceil(2.0 * std::abs(tau) * w_max)));
  const double h = tau / substeps;

  SpectralField acc = u;
  for (int step = 0; step < substeps; ++step) {
    SpectralField term = acc;
    const double scale = l2_norm(acc);
    for (int k = 1; k <= 64; ++k) {
      term = apply_projected(W, term);
      term *= Complex(0.0, -h / k);
      acc += term;
      if (l2_norm(term) <= 1e-18 * scale) break;
    }
  }
  return acc;
}

constexpr int kMaxFixedPointIterations = 100;

}  // namespace

SpectralField nonlinear_step(const SpectralField& f, const Potential& V, double tau) {
  if (V.is_zero() || tau == 0.0) return f;
  const double scale = std::max(l2_norm(f), 1e-300);

  const RealField W0 = convolve_potential(V, f).field;
  SpectralField next = propagate(W0, f, tau);
  for (int it = 0; it < kMaxFixedPointIterations; ++it) {
    RealField W = convolve_potential(V, next).field;
    for (std::size_t j = 0; j < W.values.size(); ++j) W.values[j] = 0.5 * (W0.values[j] + W.values[j]);
    SpectralField candidate = propagate(W, f, tau);
    const double change = l2_distance(candidate, next);
    next = std::move(candidate);
    if (change <= 1e-15 * scale) return next;
  }
  throw Error(fmt::format("nonlinear_step: fixed-point iteration did not converge for tau={}", tau));
}

SpectralField strang_step(const SpectralField& f, const Potential& V, double dt) {
  return linear_step(nonlinear_step(linear_step(f, 0.5 * dt), V, dt), 0.5 * dt);
}

EnergyReport make_report(double t, const SpectralField& f, const Potential& V,
                         const Diagnostics& diag) {
  EnergyReport r;
  r.t = t;
  r.mass = mass(f);
  r.energy = energy(f, V);
  r.hs_norm = sobolev_norm(f, diag.theta.s);
  r.e1 = E1(f, diag.theta);
  r.lambda4 = diag.modified_energies ? lambda4(diag.m4_params(V), f, diag.max_active) : 0.0;
  r.e2 = r.e1 + r.lambda4;
  return r;
}

std::vector<EnergyReport> evolve(SpectralField f, const Potential& V, const StepperConfig& cfg,
                                 const Diagnostics& diag, const ReportObserver& observer) {
  cfg.validate();
  std::vector<EnergyReport> reports;
  const auto record = [&](double t) {
    reports.push_back(make_report(t, f, V, diag));
    if (observer) observer(reports.back(), f);
  };

  const long steps = cfg.t_end == 0.0 ? 0 : static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  double t = 0.0;
  if (!f.all_finite() || f.max_abs() > 1e12) throw BlowUp("initial data is not finite", t);
  record(t);
  for (long k = 1; k <= steps; ++k) {
    const double h = k == steps ? cfg.t_end - cfg.dt * static_cast<double>(steps - 1) : cfg.dt;
    SpectralField next(f.grid());
    try {
      next = strang_step(f, V, h);
    } catch (const Error& e) {
      throw BlowUp(fmt::format("step {} after t = {} failed: {}", k, t, e.what()), t);
    }
    if (!next.all_finite() || next.max_abs() > 1e12)
      throw BlowUp(fmt::format("blow-up detected in step {} after t = {}", k, t), t);
    f = std::move(next);
    t = k == steps ? cfg.t_end : cfg.dt * static_cast<double>(k);
    if (k % cfg.observer_stride == 0 || k == steps) record(t);
  }
  return reports;
}

SpectralField plane_wave_reference(Complex alpha, Mode n0, const Potential& V, double t,
                                   const TorusGrid& grid) {
  if (!grid.retained(n0))
    throw Error(fmt::format("plane wave mode ({}, {}) is not retained on the K={} grid", n0.x, n0.y,
                            grid.size()));
  const double phase = -(V({0, 0}) * std::norm(alpha) + static_cast<double>(norm_sq(n0))) * t;
  SpectralField out(grid);
  out.at(n0) = alpha * Complex(std::cos(phase), std::sin(phase));
  return out;
}

}  // namespace hartree
