#pragma once

#include <vector>

#include "hartree/grid.hpp"

namespace hartree {

/// Samples on the L x L collocation grid x_j = 2 pi j / L, row-major in (j_x, j_y).
struct PhysicalField {
  int L = 0;
  std::vector<Complex> values;

  Complex operator()(int jx, int jy) const {
    return values[static_cast<std::size_t>(jx) * L + jy];
  }
};

/// Real-valued samples on an L x L collocation grid.
struct RealField {
  int L = 0;
  std::vector<double> values;
};

/// u(x_j) = sum_n f^(n) e^{i<n,x_j>} on the grid's own K x K points.
PhysicalField synthesize(const SpectralField& f);

/// Same sum evaluated on a finer L x L grid (L >= K, power of two). This is
/// zero-padded synthesis; products of padded fields are alias-free up to
/// degree L / K.
PhysicalField synthesize(const SpectralField& f, int L);

/// Discrete inverse of synthesize: coefficients (1/L^2) sum_j u_j e^{-i<n,x_j>}
/// for the retained modes of `grid`. L may exceed K, in which case the modes
/// outside the box are dropped. Throws Error if L < K or L is not a power of two.
SpectralField analyze(const PhysicalField& u, const TorusGrid& grid);

namespace detail {

/// Unnormalized in-place 2D DFT on an L x L array; `sign` is the exponent
/// sign (-1 forward, +1 backward). Plans are cached per L and shared
/// across threads.
void fft2d(std::vector<Complex>& data, int L, int sign);

/// Index of mode component k in FFT layout of length L.
inline int wrap(int k, int L) { return k >= 0 ? k : k + L; }
/// Signed frequency of FFT slot j in a length-L transform.
inline int unwrap(int j, int L) { return j < L / 2 ? j : j - L; }

}  // namespace detail

}  // namespace hartree
