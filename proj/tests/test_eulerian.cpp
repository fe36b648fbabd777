#include <doctest.h>

#include <cmath>
#include <numbers>

#include "novikov/error.hpp"
#include "novikov/eulerian.hpp"
#include "novikov/integrator.hpp"
#include "novikov/lagrangian.hpp"
#include "support.hpp"

using namespace novikov;

namespace {

// u = 0, v = pi on labels [lo, hi): a single collapsed point in x.
LagrangianState plateau_state(std::size_t n, std::size_t lo, std::size_t hi) {
  LagrangianState s;
  s.dy = 0.1;
  s.y0 = -0.05 * static_cast<double>(n - 1);
  s.u.resize(n);
  s.v.assign(n, 0.0);
  s.xi.assign(n, 1.0);
  s.x.resize(n);
  auto flat = [&](std::size_t i) { return i >= lo && i < hi; };
  for (std::size_t i = 0; i < n; ++i) {
    s.x[i] = i == 0 ? s.y0 : s.x[i - 1] + (flat(i) && flat(i - 1) ? 0.0 : s.dy);
    if (flat(i)) s.v[i] = std::numbers::pi;
    s.u[i] = flat(i) ? 0.0 : 0.1 * std::exp(-s.x[i] * s.x[i]);
  }
  return s;
}

TrajectoryLog short_run(const InitialDatum& d, double half_width, std::size_t n, double t_end,
                        double dt, std::size_t stride, double edge_tol = 1e-12) {
  GridSpec g = symmetric_grid(half_width, n);
  g.edge_tol = edge_tol;
  StepperConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.snapshot_stride = stride;
  c.tol.tol_E = 1e-3;
  c.tol.tol_F = 1e-3;
  return integrate(build_initial_state(d, g), c);
}

}  // namespace

TEST_SUITE("eulerian") {
  TEST_CASE("projection at T = 0 returns the datum") {
    const InitialDatum d = InitialDatum::gaussian(1.0, 1.5, 0.3);
    const LagrangianState s = build_initial_state(d, 12.0, 1024);
    const EulerianSnapshot p = project(s);
    REQUIRE(p.x.size() == s.size());
    CHECK(p.plateaus.empty());
    for (std::size_t i = 0; i < p.x.size(); ++i) {
      CHECK(p.u[i] == doctest::Approx(d.value(p.x[i])).epsilon(1e-12).scale(1.0));
      REQUIRE(p.ux_mask[i] == 1);
      CHECK(p.ux[i] == doctest::Approx(d.slope(p.x[i])).epsilon(1e-12).scale(1.0));
    }
  }

  TEST_CASE("a collapsed run of labels becomes one masked plateau") {
    const LagrangianState s = plateau_state(101, 40, 50);
    const EulerianSnapshot p = project(s);
    REQUIRE(p.plateaus.size() == 1);
    const PlateauInterval& pl = p.plateaus.front();
    CHECK(p.ux_mask[pl.point] == 0);
    CHECK(std::isnan(p.ux[pl.point]));
    CHECK(p.u[pl.point] == 0.0);
    for (std::size_t k = 1; k < p.x.size(); ++k) CHECK(p.x[k] > p.x[k - 1]);
  }

  TEST_CASE("a plateau with varying u is a consistency failure") {
    LagrangianState s = plateau_state(101, 40, 50);
    s.u[45] = 0.5;
    try {
      project(s);
      FAIL("expected consistency_failure");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::consistency_failure);
    }
  }

  TEST_CASE("sampling is linear and zero outside") {
    EulerianSnapshot p;
    p.x = {0.0, 1.0, 2.0};
    p.u = {1.0, 3.0, 1.0};
    CHECK(sample(p, 0.5) == 2.0);
    CHECK(sample(p, 1.5) == 2.0);
    CHECK(sample(p, -1.0) == 0.0);
    CHECK(sample(p, 3.0) == 0.0);
  }

  TEST_CASE("measures of the zero state vanish") {
    const LagrangianState s = build_initial_state(InitialDatum::zero(), 10.0, 256);
    const MeasureReport m = measure_mu(s, -5.0, 5.0);
    CHECK(m.mu_mass == 0.0);
    CHECK(m.mu_ac == 0.0);
    CHECK(m.mu_sing == 0.0);
    CHECK(m.nu_mass == 0.0);
  }

  TEST_CASE("smooth state: mu is absolutely continuous and nu carries F") {
    const LagrangianState s = build_initial_state(InitialDatum::gaussian(), 12.0, 4096);
    const MeasureReport m = measure_mu(s, -1.0, 2.0);
    CHECK(m.mu_sing == 0.0);
    CHECK(m.mu_mass == doctest::Approx(m.mu_ac).epsilon(1e-4));
    // int_{-1}^{2} (2 x e^{-x^2})^4 dx by a fine midpoint rule.
    double ref = 0.0;
    const int k = 200000;
    for (int j = 0; j < k; ++j) {
      const double x = -1.0 + 3.0 * (j + 0.5) / k;
      ref += std::pow(2.0 * x * std::exp(-x * x), 4) * 3.0 / k;
    }
    CHECK(m.mu_mass == doctest::Approx(ref).epsilon(1e-4));
    const MeasureReport all = measure_mu(s, -1e9, 1e9);
    CHECK(all.nu_mass == doctest::Approx(energy_F(s)).epsilon(1e-5));
  }

  TEST_CASE("breaking detection") {
    const LagrangianState s = build_initial_state(InitialDatum::gaussian(), 12.0, 512);
    CHECK(detect_breaking(s, 1e-8).empty());
    const LagrangianState p = plateau_state(101, 40, 50);
    const auto runs = detect_breaking(p, 1e-8);
    REQUIRE(runs.size() == 1);
    CHECK(runs[0].first == 40);
    CHECK(runs[0].last == 49);
    CHECK(runs[0].min_abs_u == 0.0);
  }

  TEST_CASE("bump test function derivatives") {
    const BumpTestFunction phi{0.3, -0.2, 0.5, 1.5};
    const double h = 1e-6;
    for (double t : {0.1, 0.35, 0.6})
      for (double x : {-1.0, 0.0, 0.9}) {
        CHECK(phi.dt(t, x) == doctest::Approx((phi.value(t + h, x) - phi.value(t - h, x)) / (2 * h)).epsilon(1e-6));
        CHECK(phi.dx(t, x) == doctest::Approx((phi.value(t, x + h) - phi.value(t, x - h)) / (2 * h)).epsilon(1e-6));
      }
    CHECK(phi.value(2.0, 0.0) == 0.0);
  }

  TEST_CASE("weak residuals vanish on the zero solution") {
    const TrajectoryLog log = short_run(InitialDatum::zero(), 10.0, 256, 1.0, 1e-2, 1);
    const BumpTestFunction phi{0.5, 0.0, 0.4, 2.0};
    CHECK(weak_form_residual(log, phi) == 0.0);
    CHECK(measure_balance_residual(log, phi) == 0.0);
  }

  TEST_CASE("weak residuals converge for smooth data") {
    const BumpTestFunction phi{0.25, 0.3, 0.25, 2.0};
    auto residuals = [&](std::size_t n, double dt, std::size_t stride) {
      const TrajectoryLog log = short_run(InitialDatum::gaussian(), 12.0, n, 0.5, dt, stride);
      return std::pair{weak_form_residual(log, phi), measure_balance_residual(log, phi)};
    };
    const auto a = residuals(512, 4e-3, 1);
    const auto b = residuals(1024, 2e-3, 1);
    CHECK(a.first / b.first >= 3.0);
    CHECK(a.second / b.second >= 3.0);
  }

  TEST_CASE("weak residuals converge with a test function alive at t = 0") {
    // phi(0, .) != 0 here, so the sign of the initial-data terms is exercised.
    const BumpTestFunction phi{0.1, -0.8, 0.3, 1.5};
    auto residuals = [&](std::size_t n, double dt) {
      const TrajectoryLog log = short_run(InitialDatum::gaussian(), 12.0, n, 0.5, dt, 1);
      return std::pair{weak_form_residual(log, phi), measure_balance_residual(log, phi)};
    };
    const auto a = residuals(1024, 2e-3);
    const auto b = residuals(2048, 1e-3);
    CHECK(a.first < 1e-5);
    CHECK(a.second < 1e-5);
    CHECK(a.first / b.first >= 3.0);
    CHECK(a.second / b.second >= 3.0);
  }

  TEST_CASE("weak residual needs the test function inside the run") {
    const TrajectoryLog log = short_run(InitialDatum::gaussian(), 12.0, 256, 0.2, 1e-2, 1);
    try {
      weak_form_residual(log, BumpTestFunction{0.2, 0.0, 0.5, 1.0});
      FAIL("expected out_of_window");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::out_of_window);
    }
  }

  TEST_CASE("Hoelder quotient") {
    EulerianSnapshot zero;
    zero.x = {0.0, 1.0, 2.0, 3.0};
    zero.u = {0.0, 0.0, 0.0, 0.0};
    CHECK(holder_quotient(zero) == 0.0);

    GridSpec g;
    g.x_lo = -20.0;
    g.x_hi = 20.0;
    g.n = 2048;
    g.edge_tol = 1e-8;
    const EulerianSnapshot p = project(build_initial_state(InitialDatum::peakon(1.0), g));
    // Morrey: |u(x) - u(y)| <= |u_x|_{L^4} |x - y|^{3/4}, and int u_x^4 = 1/2 for the peakon.
    const double q = holder_quotient(p);
    CHECK(q > 0.5);
    CHECK(q <= std::pow(0.5, 0.25) * 1.001);
  }
}
