#pragma once

#include <functional>
#include <vector>

#include "hartree/grid.hpp"
#include "hartree/modified_energy.hpp"
#include "hartree/observables.hpp"
#include "hartree/potential.hpp"

namespace hartree {

struct StepperConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  int observer_stride = 1;

  /// dt > 0, t_end >= 0 and stride >= 1. A zero horizon yields a single
  /// report at t = 0.
  void validate() const;
};

/// Exact free flow: u^(n) -> e^{-i |n|^2 tau} u^(n).
SpectralField linear_step(const SpectralField& f, double tau);

/// Flow of the pure nonlinear part i u_t = P(V * |u|^2) u over time tau, with
/// P the projection onto the retained modes. The step solves
/// u1 = exp(-i tau P W P) u0 with W = (W(u0) + W(u1)) / 2 by fixed-point
/// iteration. The propagator is unitary on the retained modes, so mass is
/// conserved; the rule is symmetric and coincides with the pointwise phase
/// e^{-i tau V * |u|^2} whenever |u| is invariant (plane waves, V^ == 0).
SpectralField nonlinear_step(const SpectralField& f, const Potential& V, double tau);

/// linear_step(dt/2) o nonlinear_step(dt) o linear_step(dt/2).
SpectralField strang_step(const SpectralField& f, const Potential& V, double dt);

/// Raised by evolve when the field is non-finite, exceeds 1e12 or a step fails.
class BlowUp : public Error {
 public:
  BlowUp(const std::string& what, double last_good_time)
      : Error(what), last_good_time_(last_good_time) {}
  double last_good_time() const { return last_good_time_; }

 private:
  double last_good_time_;
};

/// Parameters of the modified energies sampled along a run.
struct Diagnostics {
  ThetaParams theta;
  ResonanceParams resonance;
  double c = kEnergyFluxConstant;
  std::size_t max_active = kQuadrilinearBudget;
  /// When false, lambda4 is not evaluated and e2 = e1.
  bool modified_energies = true;

  M4Params m4_params(const Potential& V) const { return {theta, resonance, V, c, 1.0}; }
};

EnergyReport make_report(double t, const SpectralField& f, const Potential& V,
                         const Diagnostics& diag);

/// Called with every report as soon as it is produced.
using ReportObserver = std::function<void(const EnergyReport&, const SpectralField&)>;

/// Advances f by Strang steps up to cfg.t_end. A report is taken at t = 0,
/// every cfg.observer_stride steps and at the final time. The last step is
/// shortened when t_end is not a multiple of dt.
std::vector<EnergyReport> evolve(SpectralField f, const Potential& V, const StepperConfig& cfg,
                                 const Diagnostics& diag, const ReportObserver& observer = {});

/// Exact solution alpha e^{-i V^(0)|alpha|^2 t} e^{i(<n0,x> - |n0|^2 t)}.
SpectralField plane_wave_reference(Complex alpha, Mode n0, const Potential& V, double t,
                                   const TorusGrid& grid);

}  // namespace hartree
