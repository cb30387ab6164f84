#pragma once

#include "hartree/grid.hpp"
#include "hartree/potential.hpp"
#include "hartree/transform.hpp"

namespace hartree {

/// One time sample of the diagnostics tracked along a run.
struct EnergyReport {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double hs_norm = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;  // e1 + lambda4
  double lambda4 = 0.0;
};

/// (sum_n |f^(n)|^2 <n>^{2s})^{1/2} with <n> = (1 + |n|^2)^{1/2}.
double sobolev_norm(const SpectralField& f, double s);

/// sum_n |f^(n)|^2, i.e. the mean of |u|^2 over the torus.
double mass(const SpectralField& f);

/// Side length of the dealiasing grid used for |u|^2 and cubic products.
inline int dealiased_size(const TorusGrid& grid) { return 2 * grid.size(); }

/// Result of a dealiased potential convolution.
struct PotentialField {
  RealField field;
  /// max |Im| / max |Re| of the discarded imaginary residue.
  double imag_residue = 0.0;
};

/// V * |u|^2 sampled on the 2K x 2K grid. |u|^2 is formed there exactly,
/// multiplied by V^ in frequency and synthesized back. The imaginary residue
/// is rounding noise and is dropped; it is checked against 1e-10 and an
/// Error is raised if exceeded.
PotentialField convolve_potential(const Potential& V, const SpectralField& f);

/// 1/2 sum_n |n|^2 |f^(n)|^2.
double kinetic_energy(const SpectralField& f);

/// 1/4 mean_x (V * |u|^2) |u|^2, evaluated exactly on the dealiased grid.
double potential_energy(const SpectralField& f, const Potential& V);

double energy(const SpectralField& f, const Potential& V);

}  // namespace hartree
