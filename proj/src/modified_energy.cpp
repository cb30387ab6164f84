#include "hartree/modified_energy.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "hartree/parallel.hpp"

namespace hartree {

std::string to_string(Beta0Rule rule) { return rule == Beta0Rule::torus ? "torus" : "plane"; }

Beta0Rule parse_beta0_rule(const std::string& name) {
  if (name == "torus") return Beta0Rule::torus;
  if (name == "plane") return Beta0Rule::plane;
  throw Error(fmt::format("unknown resonance rule '{}'", name));
}

Beta0 beta0_for(Beta0Rule rule, double N, double c_beta, double alpha) {
  if (!(N > 1.0)) throw Error(fmt::format("beta0_for: N must exceed 1, got {}", N));
  if (!(c_beta > 0.0)) throw Error(fmt::format("beta0_for: c_beta must be positive, got {}", c_beta));
  double raw = c_beta / N;
  if (rule == Beta0Rule::plane) {
    if (!(alpha >= 0.5 && alpha <= 0.75))
      throw Error(fmt::format("resonance.alpha = {} outside [1/2, 3/4]", alpha));
    raw = c_beta / std::pow(N, alpha);
  }
  if (raw > 1.0) return {1.0, true};
  return {raw, false};
}

ResonanceParams ResonanceParams::from_rule(Beta0Rule rule, double N, double c_beta, double alpha) {
  const Beta0 b = beta0_for(rule, N, c_beta, alpha);
  return {b.value, rule, c_beta, alpha, b.clamped};
}

void ResonanceParams::validate() const {
  if (!(beta0 > 0.0 && beta0 <= 1.0))
    throw Error(fmt::format("resonance.beta0 = {} outside (0, 1]", beta0));
  if (!(c_beta > 0.0)) throw Error(fmt::format("resonance.c_beta = {} must be positive", c_beta));
  if (rule == Beta0Rule::plane && !(alpha >= 0.5 && alpha <= 0.75))
    throw Error(fmt::format("resonance.alpha = {} outside [1/2, 3/4]", alpha));
}

void M4Params::validate() const {
  theta.validate();
  resonance.validate();
  if (c == 0.0 || !std::isfinite(c)) throw Error("M4 constant c must be finite and nonzero");
}

Quadruplet::Quadruplet(Mode n1, Mode n2, Mode n3, Mode n4) : n_{n1, n2, n3, n4} {
  if (!is_zero(n1 + n2 + n3 + n4))
    throw Error(fmt::format("quadruplet ({},{}) ({},{}) ({},{}) ({},{}) does not sum to zero", n1.x,
                            n1.y, n2.x, n2.y, n3.x, n3.y, n4.x, n4.y));
}

bool is_nonresonant(Mode n12, Mode n14, double beta0) {
  if (is_zero(n12) || is_zero(n14)) return false;
  const double cosine =
      std::abs(static_cast<double>(dot(n12, n14))) / (norm(n12) * norm(n14));
  return cosine > beta0;
}

Resonance classify_quadruplet(const Quadruplet& q, const ResonanceParams& r) {
  return is_nonresonant(q.n12(), q.n14(), r.beta0) ? Resonance::NonResonant : Resonance::Resonant;
}

Gamma4AuditReport gamma4_identity_audit(int K) {
  const TorusGrid grid(K);
  if (K > 16) throw Error(fmt::format("gamma4_identity_audit: K={} exceeds 16", K));
  Gamma4AuditReport report;
  const auto& modes = grid.retained_modes();
  for (const Mode n1 : modes)
    for (const Mode n2 : modes)
      for (const Mode n3 : modes) {
        const Mode n4 = -(n1 + n2 + n3);
        if (!grid.retained(n4)) continue;
        ++report.checked;
        const long lhs = norm_sq(n1) - norm_sq(n2) + norm_sq(n3) - norm_sq(n4);
        const long rhs = 2 * dot(n1 + n2, n1 + n4);
        if (lhs != rhs) ++report.violations;
      }
  if (report.violations > 0)
    throw Error(fmt::format("Gamma4 identity violated on {} of {} quadruplets", report.violations,
                            report.checked));
  return report;
}

double m4(const Quadruplet& q, const M4Params& p) {
  if (classify_quadruplet(q, p.resonance) == Resonance::Resonant) return 0.0;
  const double numerator = alternating_sum(theta_sq(q[0], p.theta), theta_sq(q[1], p.theta),
                                           theta_sq(q[2], p.theta), theta_sq(q[3], p.theta));
  if (numerator == 0.0) return 0.0;
  const long phase = norm_sq(q[0]) - norm_sq(q[1]) + norm_sq(q[2]) - norm_sq(q[3]);
  return p.c * numerator * p.potential(q[2] + q[3]) /
         (p.denominator_sign * static_cast<double>(phase));
}

double m6(const std::array<Mode, 6>& n, const M4Params& p) {
  Mode total{};
  for (const Mode m : n) total = total + m;
  if (!is_zero(total)) throw Error("m6: modes do not sum to zero");
  const auto& V = p.potential;
  return m4(Quadruplet(n[0] + n[1] + n[2], n[3], n[4], n[5]), p) * V(n[0] + n[1]) -
         m4(Quadruplet(n[0], n[1] + n[2] + n[3], n[4], n[5]), p) * V(n[1] + n[2]) +
         m4(Quadruplet(n[0], n[1], n[2] + n[3] + n[4], n[5]), p) * V(n[2] + n[3]) -
         m4(Quadruplet(n[0], n[1], n[2], n[3] + n[4] + n[5]), p) * V(n[3] + n[4]);
}

namespace {

/// Retained modes carrying nonzero coefficients, with a box lookup.
struct ActiveSet {
  const TorusGrid* grid = nullptr;
  std::vector<Mode> modes;
  std::vector<Complex> coeffs;
  std::vector<double> theta_sq;
  std::vector<int> lookup;  // box index -> active index or -1

  ActiveSet(const SpectralField& f, const ThetaParams& theta) : grid(&f.grid()) {
    lookup.assign(grid->box_size(), -1);
    for (const Mode n : grid->retained_modes()) {
      const Complex c = f[n];
      if (c == Complex{}) continue;
      lookup[grid->index(n)] = static_cast<int>(modes.size());
      modes.push_back(n);
      coeffs.push_back(c);
      theta_sq.push_back(hartree::theta_sq(n, theta));
    }
  }

  int find(Mode n) const { return grid->retained(n) ? lookup[grid->index(n)] : -1; }
  std::size_t size() const { return modes.size(); }
};

void check_budget(const ActiveSet& set, std::size_t max_active, const char* what) {
  if (set.size() > max_active)
    throw BudgetExceeded(fmt::format("{}: {} active modes exceed the budget of {}", what,
                                     set.size(), max_active));
}

bool all_below_threshold(const ActiveSet& set) {
  return std::all_of(set.theta_sq.begin(), set.theta_sq.end(), [](double t) { return t == 1.0; });
}

/// Sum over (m1, m2, m3) with m4 = m1 - m2 + m3 of
/// weight(a, b, numerator) u(m1) conj(u(m2)) u(m3) conj(u(m4)) V^(a),
/// where a = n12 = m1 - m2, b = n14 = m1 - m4 and numerator is the
/// theta^2-alternating sum. Terms with vanishing numerator are skipped.
template <typename Weight>
Complex quadrilinear_sum(const ActiveSet& set, const Potential& V, Weight&& weight) {
  const std::size_t n = set.size();
  return parallel_pairwise_sum<Complex>(n, [&](std::size_t i1) {
    PairwiseSum<Complex> sum;
    const Mode m1 = set.modes[i1];
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      const Mode m2 = set.modes[i2];
      const Mode a = m1 - m2;
      const double va = V(a);
      if (va == 0.0) continue;
      const Complex u12 = set.coeffs[i1] * std::conj(set.coeffs[i2]);
      for (std::size_t i3 = 0; i3 < n; ++i3) {
        const Mode m3 = set.modes[i3];
        const int i4 = set.find(m3 + a);
        if (i4 < 0) continue;
        const double numerator = alternating_sum(set.theta_sq[i1], set.theta_sq[i2],
                                                 set.theta_sq[i3], set.theta_sq[i4]);
        if (numerator == 0.0) continue;
        const Mode b = m2 - m3;
        const double w = weight(a, b, numerator);
        if (w == 0.0) continue;
        sum.add(w * va * u12 * set.coeffs[i3] * std::conj(set.coeffs[i4]));
      }
    }
    return sum.total();
  });
}

}  // namespace

std::size_t active_mode_count(const SpectralField& f) {
  std::size_t count = 0;
  for (const Mode n : f.grid().retained_modes())
    if (f[n] != Complex{}) ++count;
  return count;
}

Complex lambda4_sum(const M4Params& p, const SpectralField& f, std::size_t max_active) {
  const ActiveSet set(f, p.theta);
  check_budget(set, max_active, "lambda4");
  if (p.resonance.degenerate() || all_below_threshold(set)) return {};
  const double beta0 = p.resonance.beta0;
  const double scale = p.c / p.denominator_sign;
  return quadrilinear_sum(set, p.potential, [&](Mode a, Mode b, double numerator) {
    if (!is_nonresonant(a, b, beta0)) return 0.0;
    return scale * numerator / (2.0 * static_cast<double>(dot(a, b)));
  });
}

double lambda4(const M4Params& p, const SpectralField& f, std::size_t max_active) {
  return lambda4_sum(p, f, max_active).real();
}

double E2(const SpectralField& f, const M4Params& p, std::size_t max_active) {
  return E1(f, p.theta) + lambda4(p, f, max_active);
}

EnergyFlux dE1_dt_split(const SpectralField& f, const M4Params& p, std::size_t max_active) {
  const ActiveSet set(f, p.theta);
  check_budget(set, max_active, "dE1_dt");
  if (all_below_threshold(set)) return {};
  const double beta0 = p.resonance.beta0;
  // dE1/dt = Re(i c S) = -c Im S.
  const Complex resonant = quadrilinear_sum(set, p.potential, [&](Mode a, Mode b, double numerator) {
    return is_nonresonant(a, b, beta0) ? 0.0 : numerator;
  });
  const Complex nonresonant =
      quadrilinear_sum(set, p.potential, [&](Mode a, Mode b, double numerator) {
        return is_nonresonant(a, b, beta0) ? numerator : 0.0;
      });
  return {-p.c * resonant.imag(), -p.c * nonresonant.imag()};
}

DE2Terms dE2_dt_terms(const SpectralField& f, const M4Params& p, std::size_t max_active) {
  const ActiveSet set(f, p.theta);
  check_budget(set, max_active, "dE2_dt_terms");
  DE2Terms out;
  out.I = dE1_dt_split(f, p, max_active).resonant;

  const TorusGrid& grid = f.grid();
  const Potential& V = p.potential;
  const std::size_t n = set.size();
  // Coefficient indices p1..p6 with p1 - p2 + p3 - p4 + p5 - p6 = 0 map to
  // frequencies (p1, -p2, p3, -p4, p5, -p6). Each M6 term differentiates
  // one factor of lambda4, whose index must itself be retained.
  const Complex total = parallel_pairwise_sum<Complex>(n, [&](std::size_t i1) {
    PairwiseSum<Complex> sum;
    const Mode p1 = set.modes[i1];
    for (std::size_t i2 = 0; i2 < n; ++i2)
      for (std::size_t i3 = 0; i3 < n; ++i3)
        for (std::size_t i4 = 0; i4 < n; ++i4)
          for (std::size_t i5 = 0; i5 < n; ++i5) {
            const Mode p2 = set.modes[i2], p3 = set.modes[i3], p4 = set.modes[i4],
                       p5 = set.modes[i5];
            const Mode p6 = p1 - p2 + p3 - p4 + p5;
            const int i6 = set.find(p6);
            if (i6 < 0) continue;
            const Mode n1 = p1, n2 = -p2, n3 = p3, n4 = -p4, n5 = p5, n6 = -p6;
            double weight = 0.0;
            if (grid.retained(p1 - p2 + p3))
              weight += m4(Quadruplet(n1 + n2 + n3, n4, n5, n6), p) * V(n1 + n2);
            if (grid.retained(p2 - p3 + p4))
              weight -= m4(Quadruplet(n1, n2 + n3 + n4, n5, n6), p) * V(n2 + n3);
            if (grid.retained(p3 - p4 + p5))
              weight += m4(Quadruplet(n1, n2, n3 + n4 + n5, n6), p) * V(n3 + n4);
            if (grid.retained(p4 - p5 + p6))
              weight -= m4(Quadruplet(n1, n2, n3, n4 + n5 + n6), p) * V(n4 + n5);
            if (weight == 0.0) continue;
            sum.add(weight * set.coeffs[i1] * std::conj(set.coeffs[i2]) * set.coeffs[i3] *
                    std::conj(set.coeffs[i4]) * set.coeffs[i5] * std::conj(set.coeffs[i6]));
          }
    return sum.total();
  });
  // II = Re(-i sum M6 P) = Im(sum M6 P).
  out.II = total.imag();
  return out;
}

long dyadic_scale(Mode n) {
  const long r2 = norm_sq(n);
  long scale = 1;
  while (scale * scale < r2) scale *= 2;
  return scale;
}

std::vector<M4BoundRow> m4_bound_audit(int K, const M4Params& base,
                                       const std::vector<double>& thresholds) {
  const TorusGrid grid(K);
  if (K > 16) throw Error(fmt::format("m4_bound_audit: K={} exceeds 16", K));
  const auto& modes = grid.retained_modes();

  std::vector<M4BoundRow> rows;
  for (const double N : thresholds) {
    M4Params p = base;
    p.theta.N = N;
    p.resonance = ResonanceParams::from_rule(base.resonance.rule, N, base.resonance.c_beta,
                                             base.resonance.alpha);
    M4BoundRow row{N, p.resonance.beta0, p.resonance.clamped, 0.0, 0};

    struct Partial {
      double sup = 0.0;
      std::size_t count = 0;
    };
    const auto partials = parallel_map<Partial>(modes.size(), [&](std::size_t i1) {
      Partial local;
      const Mode n1 = modes[i1];
      for (const Mode n2 : modes)
        for (const Mode n3 : modes) {
          const Mode n4 = -(n1 + n2 + n3);
          if (!grid.retained(n4)) continue;
          const Quadruplet q(n1, n2, n3, n4);
          if (classify_quadruplet(q, p.resonance) == Resonance::Resonant) continue;
          ++local.count;
          std::array<long, 4> dyadic{dyadic_scale(n1), dyadic_scale(n2), dyadic_scale(n3),
                                     dyadic_scale(n4)};
          std::sort(dyadic.begin(), dyadic.end(), std::greater<>());
          const double top = static_cast<double>(dyadic[0]);
          const double envelope = theta_radial(top, p.theta) *
                                  theta_radial(static_cast<double>(dyadic[1]), p.theta) /
                                  (p.resonance.beta0 * top * top);
          local.sup = std::max(local.sup, std::abs(m4(q, p)) / envelope);
        }
      return local;
    });
    double c_sup = 0.0;
    std::size_t count = 0;
    for (const auto& part : partials) {
      c_sup = std::max(c_sup, part.sup);
      count += part.count;
    }
    row.c_sup = c_sup;
    row.nonresonant = count;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hartree
