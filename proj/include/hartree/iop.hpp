#pragma once

#include <array>
#include <cstdint>

#include "hartree/grid.hpp"

namespace hartree {

/// Frequency threshold N > 1 and Sobolev index s > 1 of the multiplier theta.
struct ThetaParams {
  double N = 8.0;
  double s = 1.5;

  /// Throws Error when N <= 1 or s <= 1.
  void validate() const;
};

/// theta at radius r >= 0: 1 below N, (r / N)^s above.
double theta_radial(double r, const ThetaParams& p);
inline double theta(Mode n, const ThetaParams& p) { return theta_radial(norm(n), p); }
double theta_sq(Mode n, const ThetaParams& p);

/// Upside-down I operator: (D f)^(n) = theta(n) f^(n).
SpectralField apply_D(const SpectralField& f, const ThetaParams& p);

/// ||D f||_{L^2}^2 = sum_n theta(n)^2 |f^(n)|^2.
double E1(const SpectralField& f, const ThetaParams& p);

using Vec2 = std::array<double, 2>;

/// Second difference of theta^2 at x with offsets eta and mu, divided by
/// |eta| |mu| theta(x)^2 / |x|^2 (the Hessian envelope of theta^2 on its
/// smooth branch). Requires |x| >= 2N and |eta|, |mu| <= |x| / 8; throws
/// Error otherwise. Returns 0 when eta or mu vanishes.
double dmvt_check(const ThetaParams& p, Vec2 x, Vec2 eta, Vec2 mu);

struct DmvtSweepResult {
  double max_ratio = 0.0;
  std::size_t samples = 0;
};

/// Largest dmvt_check ratio over `samples` random admissible triples with
/// 2N <= |x| <= 8N.
DmvtSweepResult dmvt_sweep(const ThetaParams& p, std::size_t samples, std::uint64_t seed);

}  // namespace hartree
