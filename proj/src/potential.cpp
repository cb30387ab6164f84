#include "hartree/potential.hpp"

#include <fmt/format.h>

#include <cmath>

namespace hartree {

std::string to_string(PotentialPreset preset) {
  switch (preset) {
    case PotentialPreset::delta:
      return "delta";
    case PotentialPreset::gaussian:
      return "gaussian";
    case PotentialPreset::constant:
      return "constant";
  }
  return "unknown";
}

PotentialPreset parse_potential_preset(const std::string& name) {
  if (name == "delta") return PotentialPreset::delta;
  if (name == "gaussian") return PotentialPreset::gaussian;
  if (name == "constant") return PotentialPreset::constant;
  throw Error(fmt::format("unknown potential preset '{}'", name));
}

Potential Potential::delta() { return {PotentialPreset::delta, 1.0}; }

Potential Potential::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(fmt::format("gaussian potential needs sigma > 0, got {}", sigma));
  return {PotentialPreset::gaussian, sigma};
}

Potential Potential::constant(double c) {
  if (!(c >= 0.0) || !std::isfinite(c))
    throw Error(fmt::format("constant potential needs c >= 0, got {}", c));
  return {PotentialPreset::constant, c};
}

double Potential::operator()(Mode n) const {
  switch (preset_) {
    case PotentialPreset::delta:
      return 1.0;
    case PotentialPreset::gaussian:
      return std::exp(-static_cast<double>(norm_sq(n)) / (parameter_ * parameter_));
    case PotentialPreset::constant:
      return hartree::is_zero(n) ? parameter_ : 0.0;
  }
  return 0.0;
}

std::vector<double> Potential::tabulate(const TorusGrid& grid) const {
  std::vector<double> out(grid.box_size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(grid.mode_at(i));
  return out;
}

Potential make_potential(PotentialPreset preset, double parameter) {
  switch (preset) {
    case PotentialPreset::delta:
      return Potential::delta();
    case PotentialPreset::gaussian:
      return Potential::gaussian(parameter);
    case PotentialPreset::constant:
      return Potential::constant(parameter);
  }
  throw Error("unknown potential preset");
}

}  // namespace hartree
