#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hartree/audit.hpp"
#include "hartree/dynamics.hpp"
#include "hartree/modified_energy.hpp"
#include "hartree/parallel.hpp"
#include "oracles.hpp"

using namespace hartree;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

M4Params params(double N, double s, double beta0, double c = kEnergyFluxConstant,
                Potential V = Potential::delta()) {
  M4Params p;
  p.theta = {N, s};
  p.resonance.beta0 = beta0;
  p.potential = V;
  p.c = c;
  return p;
}

oracle::Params oracle_params(const M4Params& p) {
  return {p.theta.N, p.theta.s, p.resonance.beta0, p.c};
}

SpectralField two_mode(int K, Mode a, Complex ca, Mode b, Complex cb) {
  SpectralField f{TorusGrid(K)};
  f.at(a) = ca;
  f.at(b) = cb;
  return f;
}

}  // namespace

TEST_CASE("beta0_for") {
  CHECK(beta0_for(Beta0Rule::torus, 16, 1.0, 0.5).value == doctest::Approx(1.0 / 16));
  CHECK(beta0_for(Beta0Rule::plane, 16, 1.0, 0.5).value == doctest::Approx(0.25));
  CHECK(beta0_for(Beta0Rule::plane, 16, 2.0, 0.75).value == doctest::Approx(0.25));
  CHECK_THROWS_AS(beta0_for(Beta0Rule::plane, 16, 1.0, 0.9), Error);
  CHECK_THROWS_AS(beta0_for(Beta0Rule::plane, 16, 1.0, 0.4), Error);
  CHECK_THROWS_AS(beta0_for(Beta0Rule::torus, 1.0, 1.0, 0.5), Error);
  CHECK_THROWS_AS(beta0_for(Beta0Rule::torus, 4.0, 0.0, 0.5), Error);

  const auto clamped = beta0_for(Beta0Rule::torus, 2.0, 4.0, 0.5);
  CHECK(clamped.value == 1.0);
  CHECK(clamped.clamped);
  CHECK_FALSE(beta0_for(Beta0Rule::torus, 8.0, 1.0, 0.5).clamped);
  CHECK(ResonanceParams::from_rule(Beta0Rule::torus, 2.0, 4.0).degenerate());
}

TEST_CASE("Quadruplet and classification") {
  CHECK_THROWS_AS(Quadruplet({1, 0}, {0, 0}, {0, 0}, {0, 0}), Error);
  const ResonanceParams r{0.01};
  const Quadruplet orthogonal({1, 0}, {0, 1}, {-1, 0}, {0, -1});
  CHECK(orthogonal.n12() == Mode{1, 1});
  CHECK(orthogonal.n14() == Mode{1, -1});
  CHECK(classify_quadruplet(orthogonal, r) == Resonance::Resonant);

  const Quadruplet parallel({2, 0}, {-1, 0}, {0, 0}, {-1, 0});
  CHECK(classify_quadruplet(parallel, ResonanceParams{0.999}) == Resonance::NonResonant);
  CHECK(classify_quadruplet(parallel, ResonanceParams{1.0}) == Resonance::Resonant);

  const Quadruplet degenerate({1, 0}, {-1, 0}, {2, 0}, {-2, 0});
  CHECK(classify_quadruplet(degenerate, r) == Resonance::Resonant);
}

TEST_CASE("Gamma4 identity") {
  const auto lhs = [](const Quadruplet& q) {
    return norm_sq(q[0]) - norm_sq(q[1]) + norm_sq(q[2]) - norm_sq(q[3]);
  };
  const Quadruplet a({1, 0}, {0, 1}, {-1, 0}, {0, -1});
  CHECK(lhs(a) == 0);
  CHECK(2 * dot(a.n12(), a.n14()) == 0);
  const Quadruplet b({2, 0}, {-1, 0}, {0, 0}, {-1, 0});
  CHECK(lhs(b) == 2);
  CHECK(2 * dot(b.n12(), b.n14()) == 2);

  for (int K : {4, 8}) {
    const TorusGrid g(K);
    std::size_t count = 0;
    for (const Mode n1 : g.retained_modes())
      for (const Mode n2 : g.retained_modes())
        for (const Mode n3 : g.retained_modes())
          if (g.retained(-(n1 + n2 + n3))) ++count;
    const auto report = gamma4_identity_audit(K);
    CHECK(report.checked == count);
    CHECK(report.violations == 0);
  }
  CHECK_THROWS_AS(gamma4_identity_audit(32), Error);
}

TEST_CASE("m4") {
  const auto p = params(1.0, 1.0, 0.5, 1.0);
  CHECK(m4(Quadruplet({2, 0}, {-1, 0}, {0, 0}, {-1, 0}), p) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(m4(Quadruplet({1, 0}, {0, 1}, {-1, 0}, {0, -1}), p) == 0.0);

  const auto high = params(10.0, 2.0, 0.01, 1.0);
  CHECK(m4(Quadruplet({2, 0}, {-1, 0}, {0, 0}, {-1, 0}), high) == 0.0);

  SUBCASE("exhaustive against the oracle formula, pair-swap symmetry, zero on resonant") {
    const TorusGrid g(8);
    for (const auto& q : {params(2.0, 1.5, 0.5), params(1.5, 2.0, 0.125, 0.5, Potential::gaussian(2.0))})
      for (const Mode n1 : g.retained_modes())
        for (const Mode n2 : g.retained_modes())
          for (const Mode n3 : g.retained_modes()) {
            const Mode n4 = -(n1 + n2 + n3);
            if (!g.retained(n4)) continue;
            const Quadruplet quad(n1, n2, n3, n4);
            const double value = m4(quad, q);
            const double expected =
                static_cast<double>(oracle::m4(n1, n2, n3, n4, q.potential, oracle_params(q)));
            REQUIRE(std::abs(value - expected) <= 1e-13 * std::max(1.0, std::abs(expected)));
            REQUIRE(value == m4(Quadruplet(n3, n4, n1, n2), q));
            if (classify_quadruplet(quad, q.resonance) == Resonance::Resonant) REQUIRE(value == 0.0);
          }
  }
  SUBCASE("mis-signed denominator flips the sign") {
    auto q = p;
    q.denominator_sign = -1.0;
    CHECK(m4(Quadruplet({2, 0}, {-1, 0}, {0, 0}, {-1, 0}), q) == doctest::Approx(-1.5));
  }
}

TEST_CASE("m6") {
  const auto p = params(1.0, 1.0, 0.5, 1.0);
  // Four-term sum by hand: 0 - 1 + 3/2 - 3/2.
  const std::array<Mode, 6> n{Mode{2, 0}, Mode{-1, 0}, Mode{0, 0},
                              Mode{0, 1}, Mode{0, -1}, Mode{-1, 0}};
  CHECK(m4(Quadruplet({2, 0}, {-1, 1}, {0, -1}, {-1, 0}), p) == doctest::Approx(1.0));
  CHECK(m6(n, p) == doctest::Approx(-1.0).epsilon(1e-15));

  auto zero_v = p;
  zero_v.potential = Potential::constant(0.0);
  CHECK(m6(n, zero_v) == 0.0);

  const auto high = params(20.0, 2.0, 0.1);
  CHECK(m6(n, high) == 0.0);
  CHECK_THROWS_AS(m6({Mode{1, 0}, Mode{}, Mode{}, Mode{}, Mode{}, Mode{}}, p), Error);
}

TEST_CASE("lambda4") {
  SUBCASE("single mode") {
    SpectralField f{TorusGrid(8)};
    f.at({3, 2}) = Complex(1.0, 2.0);
    CHECK(lambda4(params(1.5, 1.5, 0.25), f) == 0.0);
    CHECK(E2(f, params(1.5, 1.5, 0.25)) == E1(f, {1.5, 1.5}));
  }
  SUBCASE("below the cutoff") {
    const auto f = random_gaussian_field(TorusGrid(8), 2.0, 3);
    const auto p = params(6.0, 1.5, 0.1);
    CHECK(lambda4(p, f) == 0.0);
    CHECK(E2(f, p) == doctest::Approx(mass(f)).epsilon(1e-14));
  }
  SUBCASE("two-mode field against the oracle") {
    const auto p = params(1.0, 1.5, 0.5, 1.0);
    const auto f = two_mode(8, {1, 0}, Complex(0.8, 0.3), {2, 1}, Complex(-0.4, 0.9));
    CHECK(rel(lambda4(p, f), oracle::lambda4(f, p.potential, oracle_params(p))) < 1e-12);
  }
  SUBCASE("random fields against the oracle") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto V = seed % 2 ? Potential::gaussian(2.5) : Potential::delta();
      const auto p = params(2.0, 1.5, 0.5, kEnergyFluxConstant, V);
      const auto f = random_gaussian_field(TorusGrid(8), 2.0, seed);
      const double value = lambda4(p, f);
      CHECK(value != 0.0);
      CHECK(rel(value, oracle::lambda4(f, V, oracle_params(p))) < 1e-12);
      const Complex z = lambda4_sum(p, f);
      CHECK(std::abs(z.imag()) / (std::abs(z.real()) + 1e-300) < 1e-10);
    }
  }
  SUBCASE("degenerate beta0") {
    const auto f = random_gaussian_field(TorusGrid(8), 2.0, 9);
    CHECK(lambda4(params(2.0, 1.5, 1.0), f) == 0.0);
  }
  SUBCASE("budget is enforced") {
    const auto f = random_gaussian_field(TorusGrid(16), 2.0, 9);
    CHECK_THROWS_AS(lambda4(params(2.0, 1.5, 0.5), f, 100), BudgetExceeded);
    CHECK(active_mode_count(f) == 225);
  }
  SUBCASE("independent of thread count") {
    const auto f = random_gaussian_field(TorusGrid(16), 2.0, 10);
    const auto p = params(3.0, 1.5, 0.25);
    set_thread_count(1);
    const double one = lambda4(p, f);
    set_thread_count(4);
    const double four = lambda4(p, f);
    set_thread_count(1);
    CHECK(one == four);
  }
}

TEST_CASE("dE1/dt") {
  SUBCASE("plane wave and low-frequency data") {
    SpectralField pw{TorusGrid(8)};
    pw.at({3, 1}) = 1.0;
    CHECK(dE1_dt_direct(pw, params(1.5, 1.5, 0.5)) == 0.0);
    const auto low = random_gaussian_field(TorusGrid(8), 2.0, 1);
    CHECK(dE1_dt_direct(low, params(6.0, 1.5, 0.2)) == 0.0);
  }
  SUBCASE("matches the derivative along the Galerkin oracle flow") {
    for (const auto& V : {Potential::delta(), Potential::gaussian(2.0)}) {
      const auto p = params(2.0, 1.5, 0.5, kEnergyFluxConstant, V);
      const auto e1 = [&](const SpectralField& g) { return oracle::e1(g, oracle_params(p)); };
      const auto f = random_gaussian_field(TorusGrid(8), 3.5, 21);
      CHECK(rel(dE1_dt_direct(f, p), oracle::flow_fd(f, V, 1e-4, e1)) < 1e-6);

      // Rough data: the plain FD is off by O(h^2 |n|^4), so extrapolate.
      const auto rough = random_gaussian_field(TorusGrid(8), 2.5, 21);
      const double fd_h = oracle::flow_fd(rough, V, 1e-4, e1);
      const double fd_half = oracle::flow_fd(rough, V, 5e-5, e1);
      CHECK(rel(dE1_dt_direct(rough, p), (4.0 * fd_half - fd_h) / 3.0) < 1e-6);
    }
  }
  SUBCASE("two-mode data has no energy transfer at t = 0") {
    const auto p = params(1.0, 1.5, 0.5);
    const auto f = two_mode(8, {1, 0}, 1.0, {2, 3}, Complex(0.5, 0.5));
    CHECK(std::abs(dE1_dt_direct(f, p)) < 1e-15);
  }
  SUBCASE("wrong constant is detected") {
    const auto f = random_gaussian_field(TorusGrid(8), 3.5, 21);
    const auto good = params(2.0, 1.5, 0.5);
    const auto bad = params(2.0, 1.5, 0.5, 2.0 * kEnergyFluxConstant);
    const double fd = flow_derivative(f, good.potential, 1e-4,
                                      [&](const SpectralField& g) { return E1(g, good.theta); });
    CHECK(rel(dE1_dt_direct(f, good), fd) < 1e-6);
    CHECK(rel(dE1_dt_direct(f, bad), fd) > 0.5);
  }
}

TEST_CASE("dE2/dt = I + II") {
  SUBCASE("below the cutoff") {
    SpectralField f{TorusGrid(4)};
    f.at({1, 0}) = 1.0;
    f.at({0, 1}) = Complex(0.0, 0.5);
    const auto t = dE2_dt_terms(f, params(4.0, 1.5, 0.5));
    CHECK(t.I == 0.0);
    CHECK(t.II == 0.0);
  }
  SUBCASE("plane wave") {
    SpectralField f{TorusGrid(4)};
    f.at({1, 1}) = Complex(0.6, 0.8);
    const auto t = dE2_dt_terms(f, params(1.0, 1.5, 0.5));
    CHECK(std::abs(t.I + t.II) < 1e-10);
  }
  SUBCASE("cancellation against the oracle flow") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto p = params(1.0, 1.5, 0.5);
      const auto f = random_gaussian_field(TorusGrid(4), 1.0, seed);
      const auto op = oracle_params(p);
      const double fd2 = oracle::flow_fd(f, p.potential, 1e-4, [&](const SpectralField& g) {
        return oracle::e1(g, op) + oracle::lambda4(g, p.potential, op);
      });
      const double fd1 = oracle::flow_fd(f, p.potential, 1e-4,
                                         [&](const SpectralField& g) { return oracle::e1(g, op); });
      const auto t = dE2_dt_terms(f, p);
      CHECK(rel(t.I + t.II, fd2) < 1e-4);
      // E1 alone differs from I by the full nonresonant flux.
      const auto split = dE1_dt_split(f, p);
      CHECK(std::abs(split.nonresonant) > 1e-3 * std::abs(fd1));
      CHECK(rel(fd1 - t.I, split.nonresonant) < 1e-4);
    }
  }
  SUBCASE("mis-signed denominator breaks the cancellation") {
    auto p = params(1.0, 1.5, 0.5);
    p.denominator_sign = -1.0;
    const auto f = random_gaussian_field(TorusGrid(4), 1.0, 1);
    const double fd2 = flow_derivative(f, p.potential, 1e-4,
                                       [&](const SpectralField& g) { return E2(g, p); });
    const auto t = dE2_dt_terms(f, p);
    CHECK(rel(t.I + t.II, fd2) > 1e-2);
  }
  SUBCASE("budget") {
    const auto f = random_gaussian_field(TorusGrid(8), 2.0, 1);
    CHECK_THROWS_AS(dE2_dt_terms(f, params(1.0, 1.5, 0.5)), BudgetExceeded);
  }
}

TEST_CASE("dyadic_scale") {
  CHECK(dyadic_scale({0, 0}) == 1);
  CHECK(dyadic_scale({1, 0}) == 1);
  CHECK(dyadic_scale({1, 1}) == 2);
  CHECK(dyadic_scale({2, 0}) == 2);
  CHECK(dyadic_scale({3, 0}) == 4);
  CHECK(dyadic_scale({5, 5}) == 8);
}

TEST_CASE("m4_bound_audit") {
  M4Params base;
  base.theta = {2.0, 1.5};
  const auto rows = m4_bound_audit(8, base, {2.0, 4.0});
  REQUIRE(rows.size() == 2);

  // Oracle: same envelope from the independent multiplier formula.
  const TorusGrid g(8);
  for (const auto& row : rows) {
    const oracle::Params op{row.N, 1.5, row.beta0, kEnergyFluxConstant};
    const auto dyadic = [](Mode n) {
      long d = 1;
      while (d * d < norm_sq(n)) d *= 2;
      return static_cast<double>(d);
    };
    const auto theta_of = [&](double r) { return r <= op.N ? 1.0 : std::pow(r / op.N, op.s); };
    double sup = 0.0;
    for (const Mode n1 : g.retained_modes())
      for (const Mode n2 : g.retained_modes())
        for (const Mode n3 : g.retained_modes()) {
          const Mode n4 = -(n1 + n2 + n3);
          if (!g.retained(n4)) continue;
          const double m = std::abs(static_cast<double>(oracle::m4(n1, n2, n3, n4, Potential::delta(), op)));
          if (m == 0.0) continue;
          std::array<double, 4> d{dyadic(n1), dyadic(n2), dyadic(n3), dyadic(n4)};
          std::sort(d.rbegin(), d.rend());
          sup = std::max(sup, m * op.beta0 * d[0] * d[0] / (theta_of(d[0]) * theta_of(d[1])));
        }
    CHECK(std::isfinite(row.c_sup));
    CHECK(row.c_sup > 0.0);
    CHECK(rel(row.c_sup, sup) < 1e-12);
  }
  const double ratio = rows[0].c_sup / rows[1].c_sup;
  CHECK(ratio >= 0.25);
  CHECK(ratio <= 4.0);
  CHECK_THROWS_AS(m4_bound_audit(32, base, {2.0}), Error);
}
