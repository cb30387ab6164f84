#include "hartree/iop.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <random>

namespace hartree {

void ThetaParams::validate() const {
  if (!(N > 1.0) || !std::isfinite(N)) throw Error(fmt::format("theta.N must exceed 1, got {}", N));
  if (!(s > 1.0) || !std::isfinite(s)) throw Error(fmt::format("theta.s must exceed 1, got {}", s));
}

double theta_radial(double r, const ThetaParams& p) {
  return r <= p.N ? 1.0 : std::pow(r / p.N, p.s);
}

double theta_sq(Mode n, const ThetaParams& p) {
  const double r2 = static_cast<double>(norm_sq(n));
  return r2 <= p.N * p.N ? 1.0 : std::pow(r2 / (p.N * p.N), p.s);
}

SpectralField apply_D(const SpectralField& f, const ThetaParams& p) {
  SpectralField out(f.grid());
  for (const Mode n : f.grid().retained_modes()) out.at(n) = theta(n, p) * f[n];
  return out;
}

double E1(const SpectralField& f, const ThetaParams& p) {
  double acc = 0.0;
  for (const Mode n : f.grid().retained_modes()) acc += theta_sq(n, p) * std::norm(f[n]);
  return acc;
}

namespace {

double length(Vec2 v) { return std::hypot(v[0], v[1]); }
Vec2 add(Vec2 a, Vec2 b) { return {a[0] + b[0], a[1] + b[1]}; }

double theta_sq_at(Vec2 v, const ThetaParams& p) {
  const double t = theta_radial(length(v), p);
  return t * t;
}

}  // namespace

double dmvt_check(const ThetaParams& p, Vec2 x, Vec2 eta, Vec2 mu) {
  const double rx = length(x);
  if (rx < 2.0 * p.N)
    throw Error(fmt::format("dmvt_check: |x| = {} below 2N = {}", rx, 2.0 * p.N));
  if (length(eta) > rx / 8.0 || length(mu) > rx / 8.0)
    throw Error("dmvt_check: offsets must satisfy |eta|, |mu| <= |x| / 8");
  const double scale = length(eta) * length(mu);
  if (scale == 0.0) return 0.0;

  const double second_difference = theta_sq_at(add(add(x, eta), mu), p) -
                                   theta_sq_at(add(x, eta), p) - theta_sq_at(add(x, mu), p) +
                                   theta_sq_at(x, p);
  const double envelope = scale * theta_sq_at(x, p) / (rx * rx);
  return std::abs(second_difference) / envelope;
}

DmvtSweepResult dmvt_sweep(const ThetaParams& p, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto point_in_disc = [&](double radius) -> Vec2 {
    const double r = radius * std::sqrt(unit(rng));
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    return {r * std::cos(phi), r * std::sin(phi)};
  };

  DmvtSweepResult out;
  for (std::size_t i = 0; i < samples; ++i) {
    const double r = p.N * (2.0 + 6.0 * unit(rng));
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    const Vec2 x{r * std::cos(phi), r * std::sin(phi)};
    const Vec2 eta = point_in_disc(r / 8.0);
    const Vec2 mu = point_in_disc(r / 8.0);
    out.max_ratio = std::max(out.max_ratio, dmvt_check(p, x, eta, mu));
    ++out.samples;
  }
  return out;
}

}  // namespace hartree
