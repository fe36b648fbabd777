#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace novikov::detail {

struct LabelGrid {
  double start = 0.0;
  double step = 1.0;
};

/// n uniform labels covering [0, span]. With kink labels, the first and last
/// kink land on cell midpoints; the step grows just enough that the grid still
/// covers [0, span] after the shift.
inline LabelGrid uniform_labels(double span, std::size_t n, const std::vector<double>& kinks) {
  LabelGrid g;
  g.step = span / static_cast<double>(n - 1);
  if (kinks.empty()) return g;
  const double step_min = span / static_cast<double>(n - 2);
  g.step = step_min;
  if (kinks.size() >= 2) {
    const double q = std::floor((kinks.back() - kinks.front()) / step_min);
    if (q >= 1.0) g.step = (kinks.back() - kinks.front()) / q;
  }
  const double j = std::floor(kinks.front() / g.step - 0.5);
  g.start = kinks.front() - (j + 0.5) * g.step;
  return g;
}

}  // namespace novikov::detail
