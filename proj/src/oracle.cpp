#include "novikov/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "novikov/error.hpp"
#include "novikov/parallel.hpp"

namespace novikov {

double peakon_value(const PeakonSpec& spec, double t, double x) {
  return static_cast<double>(spec.sign) * std::sqrt(spec.c) *
         std::exp(-std::abs(x - spec.c * t - spec.x0));
}

NonlocalFields direct_convolution_fields(const LagrangianState& state, FieldQuadrature rule) {
  const std::size_t n = state.size();
  const double h = state.dy;
  std::vector<double> a(n), f1(n), f2(n), w(n, h);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = std::sin(0.5 * state.v[j]);
    const double c = std::cos(0.5 * state.v[j]);
    const double u = state.u[j];
    a[j] = state.xi[j] * std::pow(c, 4);
    f1[j] = (1.5 * u * s * s * c * c + u * u * u * std::pow(c, 4)) * state.xi[j];
    f2[j] = 2.0 * state.xi[j] * std::pow(s, 3) * c;
  }
  if (n > 0) w.front() = w.back() = 0.5 * h;

  // Central differences, one-sided at the ends.
  auto slope = [&](const std::vector<double>& f, std::size_t i) {
    if (n < 2) return 0.0;
    if (i == 0) return (f[1] - f[0]) / h;
    if (i + 1 == n) return (f[n - 1] - f[n - 2]) / h;
    return (f[i + 1] - f[i - 1]) / (2.0 * h);
  };

  std::vector<double> dist(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    double step = 0.5 * h * (a[j - 1] + a[j]);
    if (rule == FieldQuadrature::corrected)
      step = std::max(step - h * h / 12.0 * (slope(a, j) - slope(a, j - 1)), 0.0);
    dist[j] = dist[j - 1] + step;
  }

  NonlocalFields out;
  out.p1.assign(n, 0.0);
  out.dx_p1.assign(n, 0.0);
  out.p2.assign(n, 0.0);
  out.dx_p2.assign(n, 0.0);
  parallel_for(
      n,
      [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
          double s1 = 0.0, d1 = 0.0, s2 = 0.0, d2 = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            const double k = w[j] * std::exp(-std::abs(dist[i] - dist[j]));
            s1 += k * f1[j];
            s2 += k * f2[j];
            // The sign of Ybar - Y jumps at j = i; an end label only sees the
            // one-sided limit from its single cell.
            if (j > i || (j == i && i == 0 && n > 1)) {
              d1 += k * f1[j];
              d2 += k * f2[j];
            } else if (j < i || (j == i && i + 1 == n && n > 1)) {
              d1 -= k * f1[j];
              d2 -= k * f2[j];
            }
          }
          if (rule == FieldQuadrature::corrected && n >= 3) {
            const double c6 = h * h / 6.0;
            s1 -= c6 * a[i] * f1[i];
            s2 -= c6 * a[i] * f2[i];
            d1 += c6 * slope(f1, i);
            d2 += c6 * slope(f2, i);
          }
          out.p1[i] = 0.5 * s1;
          out.dx_p1[i] = 0.5 * d1;
          out.p2[i] = 0.125 * s2;
          out.dx_p2[i] = 0.125 * d2;
        }
      },
      64);
  return out;
}

namespace {

struct ReferenceRhs {
  std::vector<double> table;  // trapezoid weight times exp(-k h)
  std::size_t m;
  double h;

  ReferenceRhs(std::size_t m_, double h_) : table(m_), m(m_), h(h_) {
    for (std::size_t k = 0; k < m; ++k) table[k] = std::exp(-static_cast<double>(k) * h);
  }

  std::vector<double> slope(const std::vector<double>& u) const {
    std::vector<double> ux(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double left = i > 0 ? u[i - 1] : 0.0;
      const double right = i + 1 < m ? u[i + 1] : 0.0;
      ux[i] = (right - left) / (2.0 * h);
    }
    return ux;
  }

  std::vector<double> operator()(const std::vector<double>& u) const {
    const std::vector<double> ux = slope(u);
    std::vector<double> g1(m), g2(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double wj = (j == 0 || j + 1 == m) ? 0.5 * h : h;
      g1[j] = wj * (1.5 * u[j] * ux[j] * ux[j] + u[j] * u[j] * u[j]);
      g2[j] = wj * ux[j] * ux[j] * ux[j];
    }
    std::vector<double> rate(m);
    parallel_for(
        m,
        [&](std::size_t b, std::size_t e) {
          for (std::size_t i = b; i < e; ++i) {
            double l1 = 0.0, r1 = 0.0, l2 = 0.0, r2 = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
              const double k = table[i - j];
              l1 += k * g1[j];
              l2 += k * g2[j];
            }
            for (std::size_t j = i + 1; j < m; ++j) {
              const double k = table[j - i];
              r1 += k * g1[j];
              r2 += k * g2[j];
            }
            const double dx_p1 = 0.5 * (r1 - l1);
            const double p2 = 0.25 * (l2 + r2 + g2[i]);
            rate[i] = -u[i] * u[i] * ux[i] - dx_p1 - p2;
          }
        },
        64);
    return rate;
  }
};

}  // namespace

EulerianSnapshot reference_solve(const InitialDatum& datum, const ReferenceConfig& config) {
  if (config.M < 16) throw Error(ErrorCode::invalid_argument, "reference grid needs >= 16 points");
  if (!(config.x_hi > config.x_lo)) throw Error(ErrorCode::invalid_argument, "empty x window");
  if (!(config.dt > 0.0)) throw Error(ErrorCode::config, "dt must be positive");
  const std::size_t m = config.M;
  const double h = (config.x_hi - config.x_lo) / static_cast<double>(m - 1);
  std::vector<double> x(m), u(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = config.x_lo + static_cast<double>(i) * h;
    u[i] = datum.value(x[i]);
  }
  const ReferenceRhs rhs(m, h);
  auto max_abs = [](const std::vector<double>& a) {
    double r = 0.0;
    for (double z : a) r = std::max(r, std::abs(z));
    return r;
  };
  const double ux0 = max_abs(rhs.slope(u));
  const double cap = ux0 > 0.0 ? config.blowup_factor * ux0 : INFINITY;

  double t = 0.0;
  const std::size_t steps =
      config.t_end > 0.0 ? static_cast<std::size_t>(std::ceil(config.t_end / config.dt - 1e-9)) : 0;
  std::vector<double> tmp(m);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double dt = k == steps ? config.t_end - t : config.dt;
    const std::vector<double> k1 = rhs(u);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
    const std::vector<double> k2 = rhs(tmp);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
    const std::vector<double> k3 = rhs(tmp);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = u[i] + dt * k3[i];
    const std::vector<double> k4 = rhs(tmp);
    for (std::size_t i = 0; i < m; ++i) u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    t = k == steps ? config.t_end : t + dt;
    const double uxm = max_abs(rhs.slope(u));
    if (!(uxm <= cap)) {
      std::ostringstream msg;
      msg << "max|u_x| = " << uxm << " exceeds the blow-up cap " << cap << " at t = " << t
          << "; the reference solver is valid before breaking only";
      throw Error(ErrorCode::pre_breaking_only, msg.str());
    }
  }
  EulerianSnapshot snap;
  snap.t = t;
  snap.x = x;
  snap.u = u;
  snap.ux = rhs.slope(u);
  snap.ux_mask.assign(m, 1);
  return snap;
}

EnergyPair quadrature_energies(const InitialDatum& datum, double x_lo, double x_hi, std::size_t n) {
  if (!(x_hi > x_lo)) throw Error(ErrorCode::invalid_argument, "empty x window");
  std::vector<double> cuts{x_lo};
  for (double k : datum.kinks())
    if (x_lo < k && k < x_hi) cuts.push_back(k);
  cuts.push_back(x_hi);
  std::sort(cuts.begin(), cuts.end());

  const double nudge = 1e-13 * (x_hi - x_lo);
  EnergyPair total;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p], b = cuts[p + 1];
    // Kinks are evaluated from inside the piece.
    auto point = [&](double x) {
      const double xe = std::clamp(x, a + nudge, b - nudge);
      const double u = datum.value(xe), d = datum.slope(xe);
      return EnergyPair{u * u + d * d, u * u * u * u + 2.0 * u * u * d * d - d * d * d * d / 3.0};
    };
    const std::size_t base = std::max<std::size_t>(
        8, static_cast<std::size_t>(std::ceil(8.0 * static_cast<double>(n) * (b - a) / (x_hi - x_lo))));
    EnergyPair level[3];
    for (int l = 0; l < 3; ++l) {
      const std::size_t panels = base << l;
      const double hp = (b - a) / static_cast<double>(panels);
      EnergyPair s;
      for (std::size_t k = 0; k <= panels; ++k) {
        const double wk = (k == 0 || k == panels) ? 0.5 : 1.0;
        const EnergyPair q = point(a + static_cast<double>(k) * hp);
        s.E += wk * q.E;
        s.F += wk * q.F;
      }
      level[l] = {s.E * hp, s.F * hp};
    }
    auto romberg = [](double t0, double t1, double t2) {
      const double r0 = (4.0 * t1 - t0) / 3.0, r1 = (4.0 * t2 - t1) / 3.0;
      return (16.0 * r1 - r0) / 15.0;
    };
    total.E += romberg(level[0].E, level[1].E, level[2].E);
    total.F += romberg(level[0].F, level[1].F, level[2].F);
  }
  return total;
}

}  // namespace novikov
