#pragma once

#include <cstdint>

#include "hartree/config.hpp"

namespace hartree {

/// Initial field for a spec. random_smooth draws one phase per mode from a
/// generator seeded by (seed, n), so a field on a doubled grid extends the
/// field on the smaller one and repeated calls are identical.
SpectralField initial_data(const InitialDataSpec& spec, const TorusGrid& grid,
                           const ThetaParams& theta);

/// u^(n) = amplitude <n>^{-decay} e^{i phi(n)}.
SpectralField random_smooth(const TorusGrid& grid, double amplitude, double decay,
                            std::uint64_t seed);

}  // namespace hartree
