#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hartree/dynamics.hpp"
#include "hartree/grid.hpp"
#include "hartree/iop.hpp"
#include "hartree/modified_energy.hpp"
#include "hartree/potential.hpp"

namespace hartree {

/// Invalid or unparsable configuration. `field()` names the offending key
/// and `line()` is 1-based (0 when the problem is not tied to a line).
class ConfigError : public Error {
 public:
  ConfigError(std::string field, int line, const std::string& message);
  const std::string& field() const { return field_; }
  int line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  std::string field_;
  int line_;
  std::string message_;
};

enum class InitialKind { plane_wave, random_smooth, gaussian_bump };

std::string to_string(InitialKind kind);

struct InitialDataSpec {
  InitialKind kind = InitialKind::random_smooth;
  // plane_wave
  Complex alpha{1.0, 0.0};
  Mode n0{1, 0};
  // random_smooth: u^(n) = amplitude <n>^{-decay} e^{i phi(n)}
  double amplitude = 1.0;
  double decay = 0.0;  // 0 selects the default s + 2
  std::uint64_t seed = 1;
  // gaussian_bump: u^(n) = amplitude exp(-width^2 |n|^2 / 2) (-1)^{n_x + n_y}
  double width = 0.5;
};

struct ExperimentConfig {
  int K = 0;
  ThetaParams theta;
  Beta0Rule rule = Beta0Rule::torus;
  double c_beta = 1.0;
  double alpha = 0.5;
  PotentialPreset preset = PotentialPreset::delta;
  double sigma = 4.0;   // gaussian width in frequency
  double c_const = 1.0; // constant preset value
  InitialDataSpec initial;
  StepperConfig stepper{1e-3, 1.0, 10};
  double delta_meas = 0.1;
  std::vector<double> n_sweep{4, 8, 16, 32};
  std::string output_dir = "out";
  std::size_t max_active = kQuadrilinearBudget;
  int threads = 1;
  // Mutation hooks for the verification suite's sensitivity checks.
  double audit_c_scale = 1.0;
  double audit_denominator_sign = 1.0;

  TorusGrid grid() const { return TorusGrid(K); }
  Potential potential() const;
  /// beta0 generated from the rule at threshold `N`.
  ResonanceParams resonance_at(double N) const;
  Diagnostics diagnostics_at(double N) const;
  Diagnostics diagnostics() const { return diagnostics_at(theta.N); }

  /// Checks every invariant; throws ConfigError naming the field.
  void validate() const;
};

/// Parses the flat `key = value` format. '#' starts a comment. grid.K is
/// required; every other key has a default (see README).
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Every key accepted by parse_config, in documentation order.
const std::vector<std::string>& config_keys();

}  // namespace hartree
