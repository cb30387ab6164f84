#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hartree/config.hpp"

namespace hartree {

struct AuditEntry {
  std::string name;
  bool pass = false;
  std::vector<std::pair<std::string, std::string>> values;  // measured values and tolerances

  void set(const std::string& key, double value);
  void set(const std::string& key, const std::string& value);
};

struct AuditReport {
  std::vector<AuditEntry> entries;

  bool pass() const;
  const AuditEntry* find(const std::string& name) const;
  /// `audit.<name>.<key>: value` lines, ending with `overall: pass|fail`.
  std::string to_text() const;
};

// Fixed tolerances of the verification suite.
inline constexpr double kLambda4OracleTolerance = 1e-12;
inline constexpr double kDE1FiniteDifferenceTolerance = 1e-6;
inline constexpr double kCancellationTolerance = 1e-4;
inline constexpr double kFiniteDifferenceStep = 1e-4;
inline constexpr double kEnvelopeStabilityFactor = 4.0;
inline constexpr double kDmvtStabilityFactor = 2.0;
inline constexpr std::size_t kDmvtSamples = 10000;

/// Runs every audit; failures are collected, never short-circuited.
AuditReport run_verification_suite(const ExperimentConfig& cfg);

/// Brute-force lambda4: loops over every retained (m1, m2, m3), forms the
/// quadruplet (m1, -m2, m3, -m4) and calls m4() on it.
double lambda4_reference(const M4Params& p, const SpectralField& f);

/// Centered difference (F(S_h f) - F(S_{-h} f)) / 2h along Strang steps S.
double flow_derivative(const SpectralField& f, const Potential& V, double h,
                       const std::function<double(const SpectralField&)>& functional);

/// Complex Gaussian coefficients weighted by <n>^{-decay}.
SpectralField random_gaussian_field(const TorusGrid& grid, double decay, std::uint64_t seed);

}  // namespace hartree
