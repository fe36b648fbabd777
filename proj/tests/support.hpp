#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "novikov/state.hpp"

namespace novikov::testing {

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// max |a - b| / max |b|, or max |a - b| when b vanishes.
inline double rel_linf(const std::vector<double>& a, const std::vector<double>& b) {
  const double scale = max_abs(b);
  return max_diff(a, b) / (scale > 0.0 ? scale : 1.0);
}

/// Random admissible state on n labels: smooth bumps for u, v in (-pi, pi]
/// with some labels pushed near pi, xi in [0.5, 2], x = cumulative xi cos^4(v/2).
inline LagrangianState random_state(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  LagrangianState s;
  s.dy = 20.0 / static_cast<double>(n - 1);
  s.y0 = -10.0;
  s.u.resize(n);
  s.v.resize(n);
  s.xi.resize(n);
  s.x.resize(n);

  auto bumps = [&](int count, double amp) {
    std::vector<double> c(count), w(count), a(count);
    for (int k = 0; k < count; ++k) {
      c[k] = -6.0 + 12.0 * unit(rng);
      w[k] = 0.5 + 2.0 * unit(rng);
      a[k] = amp * (2.0 * unit(rng) - 1.0);
    }
    return [c, w, a](double y) {
      double f = 0.0;
      for (std::size_t k = 0; k < c.size(); ++k) f += a[k] * std::exp(-std::pow((y - c[k]) / w[k], 2));
      return f;
    };
  };
  const auto fu = bumps(4, 1.5);
  const auto fv = bumps(3, 2.5);
  const auto fx = bumps(3, 0.6);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = s.Y(i);
    s.u[i] = fu(y);
    s.v[i] = std::clamp(fv(y), -3.14, 3.14);
    s.xi[i] = std::exp(std::clamp(fx(y), -0.69, 0.69));
  }
  s.x[0] = -10.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double a0 = s.xi[i - 1] * std::pow(std::cos(0.5 * s.v[i - 1]), 4);
    const double a1 = s.xi[i] * std::pow(std::cos(0.5 * s.v[i]), 4);
    s.x[i] = s.x[i - 1] + 0.5 * s.dy * (a0 + a1);
  }
  return s;
}

}  // namespace novikov::testing
