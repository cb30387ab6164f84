#include "hartree/initial_data.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <random>

namespace hartree {

SpectralField random_smooth(const TorusGrid& grid, double amplitude, double decay,
                            std::uint64_t seed) {
  SpectralField f(grid);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (const Mode n : grid.retained_modes()) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(n.x), static_cast<std::uint32_t>(n.y)};
    std::mt19937_64 rng(seq);
    const double phi = angle(rng);
    const double magnitude =
        amplitude * std::pow(1.0 + static_cast<double>(norm_sq(n)), -0.5 * decay);
    f.at(n) = std::polar(magnitude, phi);
  }
  return f;
}

SpectralField initial_data(const InitialDataSpec& spec, const TorusGrid& grid,
                           const ThetaParams& theta) {
  switch (spec.kind) {
    case InitialKind::plane_wave: {
      if (!grid.retained(spec.n0))
        throw Error(fmt::format("plane wave mode ({}, {}) is not retained on the K={} grid",
                                spec.n0.x, spec.n0.y, grid.size()));
      SpectralField f(grid);
      f.at(spec.n0) = spec.alpha;
      return f;
    }
    case InitialKind::random_smooth: {
      const double decay = spec.decay > 0.0 ? spec.decay : theta.s + 2.0;
      if (!(decay > theta.s + 1.0))
        throw Error(fmt::format("random_smooth decay {} must exceed s + 1 = {}", decay, theta.s + 1.0));
      return random_smooth(grid, spec.amplitude, decay, spec.seed);
    }
    case InitialKind::gaussian_bump: {
      SpectralField f(grid);
      for (const Mode n : grid.retained_modes()) {
        const double sign = ((n.x + n.y) % 2 == 0) ? 1.0 : -1.0;
        f.at(n) = spec.amplitude * sign *
                  std::exp(-0.5 * spec.width * spec.width * static_cast<double>(norm_sq(n)));
      }
      return f;
    }
  }
  throw Error("unknown initial data kind");
}

}  // namespace hartree
