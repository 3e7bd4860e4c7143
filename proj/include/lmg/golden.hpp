#pragma once

#include <cmath>
#include <utility>

namespace lmg {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
};

// Golden-section search for a minimum of f on [a, b]; stops once the bracket
// is narrower than `tolerance`. Returns the best point evaluated.
template <typename F>
ScalarMinimum golden_section_minimize(F&& f, double a, double b, double tolerance, int max_iterations = 200) {
  if (b < a) std::swap(a, b);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  ScalarMinimum best = fc <= fd ? ScalarMinimum{c, fc} : ScalarMinimum{d, fd};

  for (int it = 0; it < max_iterations && (b - a) > tolerance; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      if (fc < best.value) best = {c, fc};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      if (fd < best.value) best = {d, fd};
    }
  }
  return best;
}

}  // namespace lmg
