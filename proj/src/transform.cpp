#include "hartree/transform.hpp"

#include <fftw3.h>
#include <fmt/format.h>

#include <map>
#include <mutex>

namespace hartree {

namespace detail {

namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [L, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  fftw_plan get(int L, int sign) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(L);
    if (it == plans_.end()) {
      std::vector<Complex> scratch(static_cast<std::size_t>(L) * L);
      auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
      const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
      PlanPair p;
      p.forward = fftw_plan_dft_2d(L, L, buf, buf, FFTW_FORWARD, flags);
      p.backward = fftw_plan_dft_2d(L, L, buf, buf, FFTW_BACKWARD, flags);
      it = plans_.emplace(L, p).first;
    }
    return sign < 0 ? it->second.forward : it->second.backward;
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

void fft2d(std::vector<Complex>& data, int L, int sign) {
  if (data.size() != static_cast<std::size_t>(L) * L)
    throw Error(fmt::format("fft2d: buffer of {} values does not match L={}", data.size(), L));
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  // fftw_execute_dft is thread-safe; only planning is serialized.
  fftw_execute_dft(plan_cache().get(L, sign), buf, buf);
}

}  // namespace detail

namespace {

bool is_power_of_two(int k) { return k > 0 && (k & (k - 1)) == 0; }

}  // namespace

PhysicalField synthesize(const SpectralField& f) { return synthesize(f, f.grid().size()); }

PhysicalField synthesize(const SpectralField& f, int L) {
  const auto& grid = f.grid();
  if (L < grid.size() || !is_power_of_two(L))
    throw Error(fmt::format("synthesis grid L={} must be a power of two >= K={}", L, grid.size()));
  PhysicalField out{L, std::vector<Complex>(static_cast<std::size_t>(L) * L)};
  for (const Mode n : grid.retained_modes()) {
    const auto slot = static_cast<std::size_t>(detail::wrap(n.x, L)) * L + detail::wrap(n.y, L);
    out.values[slot] = f[n];
  }
  detail::fft2d(out.values, L, +1);
  return out;
}

SpectralField analyze(const PhysicalField& u, const TorusGrid& grid) {
  const int L = u.L;
  if (L < grid.size() || !is_power_of_two(L) ||
      u.values.size() != static_cast<std::size_t>(L) * L)
    throw Error(fmt::format("analyze: {} samples on L={} do not fit the K={} grid", u.values.size(),
                            L, grid.size()));
  std::vector<Complex> work = u.values;
  detail::fft2d(work, L, -1);
  const double scale = 1.0 / (static_cast<double>(L) * L);
  SpectralField f(grid);
  for (const Mode n : grid.retained_modes()) {
    const auto slot = static_cast<std::size_t>(detail::wrap(n.x, L)) * L + detail::wrap(n.y, L);
    f.at(n) = work[slot] * scale;
  }
  return f;
}

}  // namespace hartree
