#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hartree {

using Complex = std::complex<double>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A lattice frequency n = (x, y) in Z^2.
struct Mode {
  int x = 0;
  int y = 0;

  friend constexpr Mode operator+(Mode a, Mode b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Mode operator-(Mode a, Mode b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Mode operator-(Mode a) { return {-a.x, -a.y}; }
  friend constexpr bool operator==(Mode a, Mode b) = default;
};

constexpr long dot(Mode a, Mode b) {
  return static_cast<long>(a.x) * b.x + static_cast<long>(a.y) * b.y;
}
constexpr long norm_sq(Mode a) { return dot(a, a); }
inline double norm(Mode a) { return std::sqrt(static_cast<double>(norm_sq(a))); }
constexpr bool is_zero(Mode a) { return a.x == 0 && a.y == 0; }

/// K x K Fourier box {-K/2, ..., K/2 - 1}^2. Coefficients on the -K/2 rows
/// and columns are held at zero, so the retained set is symmetric under
/// n -> -n and has (K-1)^2 members.
class TorusGrid {
 public:
  /// Throws Error unless K >= 4 is a power of two.
  explicit TorusGrid(int K);

  int size() const { return K_; }
  int half() const { return K_ / 2; }
  std::size_t box_size() const { return static_cast<std::size_t>(K_) * K_; }

  bool in_box(Mode n) const {
    return n.x >= -half() && n.x < half() && n.y >= -half() && n.y < half();
  }
  /// Inside the box and off the Nyquist rows.
  bool retained(Mode n) const {
    return n.x > -half() && n.x < half() && n.y > -half() && n.y < half();
  }
  std::size_t index(Mode n) const {
    return static_cast<std::size_t>(n.x + half()) * K_ + static_cast<std::size_t>(n.y + half());
  }
  Mode mode_at(std::size_t idx) const {
    return {static_cast<int>(idx / K_) - half(), static_cast<int>(idx % K_) - half()};
  }

  const std::vector<Mode>& retained_modes() const { return *retained_; }
  std::size_t retained_count() const { return retained_->size(); }
  /// Largest |n| over the retained set.
  double max_radius() const { return std::sqrt(2.0) * (half() - 1); }

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) { return a.K_ == b.K_; }

 private:
  int K_;
  std::shared_ptr<const std::vector<Mode>> retained_;
};

TorusGrid make_grid(int K);

/// Fourier coefficients u^(n) of u(x) = sum_n u^(n) e^{i<n,x>} over the box of
/// a TorusGrid, stored row-major in (n_x, n_y). Nyquist entries stay zero.
class SpectralField {
 public:
  explicit SpectralField(TorusGrid grid);

  const TorusGrid& grid() const { return grid_; }

  /// Coefficient at n; zero for any n outside the retained set.
  Complex operator[](Mode n) const {
    return grid_.retained(n) ? coeffs_[grid_.index(n)] : Complex{};
  }
  /// Mutable access; throws Error when n is not retained.
  Complex& at(Mode n);

  std::span<const Complex> data() const { return coeffs_; }
  std::span<Complex> data() { return coeffs_; }

  /// Zeroes the Nyquist rows and columns.
  void enforce_nyquist();
  bool all_finite() const;
  double max_abs() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(Complex scale);

 private:
  TorusGrid grid_;
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(Complex scale, SpectralField a);

/// (sum_n |f^(n) - g^(n)|^2)^{1/2}.
double l2_distance(const SpectralField& f, const SpectralField& g);

void require_same_grid(const SpectralField& f, const SpectralField& g);

}  // namespace hartree
