#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "hartree/grid.hpp"
#include "hartree/iop.hpp"
#include "hartree/potential.hpp"

namespace hartree {

// ---------------------------------------------------------------------------
// Resonance threshold beta0

enum class Beta0Rule { torus, plane };

std::string to_string(Beta0Rule rule);
Beta0Rule parse_beta0_rule(const std::string& name);

struct Beta0 {
  double value = 1.0;
  bool clamped = false;  // the raw rule value fell outside (0, 1]
};

/// torus: c_beta / N; plane: c_beta / N^alpha with alpha in [1/2, 3/4].
/// The result is clamped into (0, 1] and the clamp is reported.
Beta0 beta0_for(Beta0Rule rule, double N, double c_beta, double alpha);

struct ResonanceParams {
  double beta0 = 0.125;
  Beta0Rule rule = Beta0Rule::torus;
  double c_beta = 1.0;
  double alpha = 0.5;
  bool clamped = false;

  /// beta0 generated from the rule at threshold N.
  static ResonanceParams from_rule(Beta0Rule rule, double N, double c_beta = 1.0,
                                   double alpha = 0.5);
  void validate() const;
  /// beta0 >= 1 leaves the non-resonant set empty.
  bool degenerate() const { return beta0 >= 1.0; }
};

// ---------------------------------------------------------------------------
// Quadruplets on Gamma_4

/// (n1, n2, n3, n4) with n1 + n2 + n3 + n4 = 0.
class Quadruplet {
 public:
  /// Throws Error when the modes do not sum to zero.
  Quadruplet(Mode n1, Mode n2, Mode n3, Mode n4);

  Mode operator[](std::size_t j) const { return n_[j]; }
  Mode n12() const { return n_[0] + n_[1]; }
  Mode n14() const { return n_[0] + n_[3]; }

 private:
  std::array<Mode, 4> n_;
};

enum class Resonance { NonResonant, Resonant };

/// NonResonant iff n12, n14 != 0 and |cos angle(n12, n14)| > beta0.
bool is_nonresonant(Mode n12, Mode n14, double beta0);
Resonance classify_quadruplet(const Quadruplet& q, const ResonanceParams& r);

struct Gamma4AuditReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
};

/// Checks |n1|^2 - |n2|^2 + |n3|^2 - |n4|^2 == 2 n12 . n14 in integer
/// arithmetic over every zero-sum quadruplet of retained modes (K <= 16).
/// Throws Error on any violation.
Gamma4AuditReport gamma4_identity_audit(int K);

// ---------------------------------------------------------------------------
// Multipliers

/// Constant c in dE1/dt = i c sum (theta^2 alternating) V^(n3 + n4) u u* u u*
/// under the coefficient normalization u = sum_n u^(n) e^{i<n,x>}: c = 1/2.
inline constexpr double kEnergyFluxConstant = 0.5;

struct M4Params {
  ThetaParams theta;
  ResonanceParams resonance;
  Potential potential = Potential::delta();
  double c = kEnergyFluxConstant;
  /// Multiplies the M4 denominator. Always +1 outside mutation testing of
  /// the verification suite.
  double denominator_sign = 1.0;

  void validate() const;
};

/// t1 - t2 + t3 - t4, grouped as (t1 - t4) + (t3 - t2) so that it is exactly
/// zero whenever n12 = 0 or n14 = 0.
inline double alternating_sum(double t1, double t2, double t3, double t4) {
  return (t1 - t4) + (t3 - t2);
}

/// 0 on resonant quadruplets; otherwise
/// c (theta(n1)^2 - theta(n2)^2 + theta(n3)^2 - theta(n4)^2) V^(n3 + n4)
///   / (|n1|^2 - |n2|^2 + |n3|^2 - |n4|^2).
double m4(const Quadruplet& q, const M4Params& p);

/// Four-term combination
/// M4(n123, n4, n5, n6) V^(n12) - M4(n1, n234, n5, n6) V^(n23)
///   + M4(n1, n2, n345, n6) V^(n34) - M4(n1, n2, n3, n456) V^(n45).
/// Throws Error unless the six modes sum to zero.
double m6(const std::array<Mode, 6>& n, const M4Params& p);

// ---------------------------------------------------------------------------
// Multilinear sums

/// Raised when a multilinear sum would exceed its active-mode budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

inline constexpr std::size_t kQuadrilinearBudget = 1024;
inline constexpr std::size_t kSextilinearBudget = 25;

/// Number of retained modes carrying a nonzero coefficient.
std::size_t active_mode_count(const SpectralField& f);

/// The complex value of the lambda4 sum, imaginary residue included.
Complex lambda4_sum(const M4Params& p, const SpectralField& f,
                    std::size_t max_active = kQuadrilinearBudget);

/// lambda4(M4; u) = sum over m1 - m2 + m3 - m4 = 0 of
/// M4(m1, -m2, m3, -m4) u^(m1) conj(u^(m2)) u^(m3) conj(u^(m4)).
/// The real part is returned; the imaginary part is rounding noise.
double lambda4(const M4Params& p, const SpectralField& f,
               std::size_t max_active = kQuadrilinearBudget);

/// E2 = E1 + lambda4.
double E2(const SpectralField& f, const M4Params& p, std::size_t max_active = kQuadrilinearBudget);

struct EnergyFlux {
  double resonant = 0.0;     // quadruplets outside Omega_nr
  double nonresonant = 0.0;  // quadruplets in Omega_nr
  double total() const { return resonant + nonresonant; }
};

/// dE1/dt from the quadrilinear formula, split along Omega_r / Omega_nr.
EnergyFlux dE1_dt_split(const SpectralField& f, const M4Params& p,
                        std::size_t max_active = kQuadrilinearBudget);

inline double dE1_dt_direct(const SpectralField& f, const M4Params& p,
                            std::size_t max_active = kQuadrilinearBudget) {
  return dE1_dt_split(f, p, max_active).total();
}

struct DE2Terms {
  double I = 0.0;   // resonant quadrilinear remainder
  double II = 0.0;  // sextilinear term against M6
};

/// dE2/dt = I + II along the Galerkin-truncated flow. II keeps an M6 term
/// only when its contracted frequency is a retained mode, matching the
/// truncation of the simulated dynamics.
DE2Terms dE2_dt_terms(const SpectralField& f, const M4Params& p,
                      std::size_t max_active = kSextilinearBudget);

// ---------------------------------------------------------------------------
// Multiplier envelope audit

struct M4BoundRow {
  double N = 0.0;
  double beta0 = 0.0;
  bool beta0_clamped = false;
  double c_sup = 0.0;  // sup of |M4| beta0 (N1*)^2 / (theta(N1*) theta(N2*))
  std::size_t nonresonant = 0;
};

/// Smallest power of two >= |n| (1 for n = 0).
long dyadic_scale(Mode n);

/// Enumerates Gamma_4 over the retained modes of a K <= 16 grid, once per
/// threshold in `thresholds`, with beta0 regenerated from base.resonance's
/// rule for each N.
std::vector<M4BoundRow> m4_bound_audit(int K, const M4Params& base,
                                       const std::vector<double>& thresholds);

}  // namespace hartree
