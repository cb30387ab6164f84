#pragma once

#include <string>
#include <vector>

#include "hartree/grid.hpp"

namespace hartree {

enum class PotentialPreset { delta, gaussian, constant };

std::string to_string(PotentialPreset preset);
PotentialPreset parse_potential_preset(const std::string& name);

/// Fourier multiplier V^(n) of an even, nonnegative, integrable convolution
/// kernel V. The multiplier is defined on all of Z^2 by its preset formula,
/// so dealiased products and shifted multiplier arguments never fall off a
/// table.
class Potential {
 public:
  /// V = delta: V^ == 1 (cubic NLS).
  static Potential delta();
  /// Periodized Gaussian: V^(n) = exp(-|n|^2 / sigma^2), sigma > 0.
  static Potential gaussian(double sigma);
  /// V^(n) = c [n = 0], c >= 0.
  static Potential constant(double c);

  double operator()(Mode n) const;

  PotentialPreset preset() const { return preset_; }
  double parameter() const { return parameter_; }
  /// True when V^ vanishes identically.
  bool is_zero() const { return preset_ == PotentialPreset::constant && parameter_ == 0.0; }

  /// V^ on every mode of the grid box, in SpectralField layout.
  std::vector<double> tabulate(const TorusGrid& grid) const;

 private:
  Potential(PotentialPreset preset, double parameter) : preset_(preset), parameter_(parameter) {}

  PotentialPreset preset_;
  double parameter_;
};

/// `parameter` is sigma for gaussian, c for constant, ignored for delta.
Potential make_potential(PotentialPreset preset, double parameter = 0.0);

}  // namespace hartree
