#include "hartree/grid.hpp"

#include <fmt/format.h>

namespace hartree {

namespace {

bool is_power_of_two(int k) { return k > 0 && (k & (k - 1)) == 0; }

std::vector<Mode> enumerate_retained(int K) {
  std::vector<Mode> out;
  out.reserve(static_cast<std::size_t>(K - 1) * (K - 1));
  for (int x = -K / 2 + 1; x < K / 2; ++x)
    for (int y = -K / 2 + 1; y < K / 2; ++y) out.push_back({x, y});
  return out;
}

}  // namespace

TorusGrid::TorusGrid(int K) : K_(K) {
  if (K < 4 || !is_power_of_two(K))
    throw Error(fmt::format("grid size K must be a power of two >= 4, got {}", K));
  retained_ = std::make_shared<const std::vector<Mode>>(enumerate_retained(K));
}

TorusGrid make_grid(int K) { return TorusGrid(K); }

SpectralField::SpectralField(TorusGrid grid)
    : grid_(std::move(grid)), coeffs_(grid_.box_size(), Complex{}) {}

Complex& SpectralField::at(Mode n) {
  if (!grid_.retained(n))
    throw Error(fmt::format("mode ({}, {}) is not retained on the K={} grid", n.x, n.y,
                            grid_.size()));
  return coeffs_[grid_.index(n)];
}

void SpectralField::enforce_nyquist() {
  const int h = grid_.half();
  for (int k = -h; k < h; ++k) {
    coeffs_[grid_.index({-h, k})] = 0.0;
    coeffs_[grid_.index({k, -h})] = 0.0;
  }
}

bool SpectralField::all_finite() const {
  for (const auto& c : coeffs_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

void require_same_grid(const SpectralField& f, const SpectralField& g) {
  if (!(f.grid() == g.grid()))
    throw Error(fmt::format("grid mismatch: K={} vs K={}", f.grid().size(), g.grid().size()));
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(Complex scale) {
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(Complex scale, SpectralField a) { return a *= scale; }

double l2_distance(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g);
  double acc = 0.0;
  auto a = f.data();
  auto b = g.data();
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
  return std::sqrt(acc);
}

}  // namespace hartree
