#include "hartree/observables.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace hartree {

double sobolev_norm(const SpectralField& f, double s) {
  double acc = 0.0;
  for (const Mode n : f.grid().retained_modes()) {
    const double weight = std::pow(1.0 + static_cast<double>(norm_sq(n)), s);
    acc += std::norm(f[n]) * weight;
  }
  return std::sqrt(acc);
}

double mass(const SpectralField& f) {
  double acc = 0.0;
  for (const Mode n : f.grid().retained_modes()) acc += std::norm(f[n]);
  return acc;
}

PotentialField convolve_potential(const Potential& V, const SpectralField& f) {
  const int L = dealiased_size(f.grid());
  PhysicalField u = synthesize(f, L);
  std::vector<Complex> work(u.values.size());
  for (std::size_t j = 0; j < work.size(); ++j) work[j] = std::norm(u.values[j]);

  detail::fft2d(work, L, -1);
  const double scale = 1.0 / (static_cast<double>(L) * L);
  for (int jx = 0; jx < L; ++jx)
    for (int jy = 0; jy < L; ++jy) {
      const Mode k{detail::unwrap(jx, L), detail::unwrap(jy, L)};
      work[static_cast<std::size_t>(jx) * L + jy] *= V(k) * scale;
    }
  detail::fft2d(work, L, +1);

  PotentialField out;
  out.field.L = L;
  out.field.values.resize(work.size());
  double max_re = 0.0;
  double max_im = 0.0;
  for (std::size_t j = 0; j < work.size(); ++j) {
    out.field.values[j] = work[j].real();
    max_re = std::max(max_re, std::abs(work[j].real()));
    max_im = std::max(max_im, std::abs(work[j].imag()));
  }
  out.imag_residue = max_re > 0.0 ? max_im / max_re : max_im;
  if (out.imag_residue > 1e-10)
    throw Error(fmt::format("convolve_potential: imaginary residue {} exceeds 1e-10",
                            out.imag_residue));
  return out;
}

double kinetic_energy(const SpectralField& f) {
  double acc = 0.0;
  for (const Mode n : f.grid().retained_modes())
    acc += static_cast<double>(norm_sq(n)) * std::norm(f[n]);
  return 0.5 * acc;
}

double potential_energy(const SpectralField& f, const Potential& V) {
  if (V.is_zero()) return 0.0;
  const auto W = convolve_potential(V, f);
  const PhysicalField u = synthesize(f, W.field.L);
  double acc = 0.0;
  for (std::size_t j = 0; j < u.values.size(); ++j)
    acc += W.field.values[j] * std::norm(u.values[j]);
  return 0.25 * acc / static_cast<double>(u.values.size());
}

double energy(const SpectralField& f, const Potential& V) {
  return kinetic_energy(f) + potential_energy(f, V);
}

}  // namespace hartree
