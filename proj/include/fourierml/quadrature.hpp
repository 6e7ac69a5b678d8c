#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace fourierml {

// Composite Simpson on [a, b] with n even panels (n+1 evaluations).
inline double simpson_rule(const std::function<double(double)>& f, double a, double b,
                           std::int64_t n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("simpson_rule: n must be even, >= 2");
  const double h = (b - a) / static_cast<double>(n);
  double acc = f(a) + f(b);
  double odd = 0.0, even = 0.0;
  for (std::int64_t j = 1; j < n; ++j) {
    const double x = a + h * static_cast<double>(j);
    if (j % 2 == 1) odd += f(x);
    else even += f(x);
  }
  acc += 4.0 * odd + 2.0 * even;
  return acc * h / 3.0;
}

namespace detail {

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson with absolute tolerance.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double abs_tol, int max_depth = 28) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

}  // namespace fourierml
