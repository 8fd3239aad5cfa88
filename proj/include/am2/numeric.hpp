#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace am2::numeric {

/// Bisection for a sign change of f on [lo, hi]. Stops when the bracket is
/// below abs_tol + rel_tol * |hi|, or when the midpoint no longer moves.
template <class F>
double bisect(F&& f, double lo, double hi, double abs_tol = 1e-12,
              double rel_tol = 1e-12, int max_iter = 400) {
  double f_lo = f(lo);
  if (f_lo == 0.0) return lo;
  for (int it = 0; it < max_iter; ++it) {
    if (hi - lo <= abs_tol + rel_tol * std::abs(hi)) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Golden-section search for the maximum of a unimodal f on [a, b].
template <class F>
double golden_max(F&& f, double a, double b, double rel_tol = 1e-12) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 500; ++it) {
    if (b - a <= rel_tol * (std::abs(a) + std::abs(b))) break;
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Fourth-order central difference, falling back to a second-order one-sided
/// stencil when x is too close to the left end of a [0, inf) domain.
template <class F>
double derivative(F&& f, double x, double scale) {
  const double h = 1e-3 * std::max(std::abs(x), 1e-3 * scale);
  if (x - 2.0 * h >= 0.0) {
    return (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) /
           (12.0 * h);
  }
  const double hf = std::max(h, 1e-9 * scale);
  return (-3.0 * f(x) + 4.0 * f(x + hf) - f(x + 2.0 * hf)) / (2.0 * hf);
}

/// n points log-spaced over [lo, hi], lo > 0.
inline std::vector<double> logspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = std::exp(a + t * (b - a));
  }
  return out;
}

/// Chebyshev (first kind) nodes mapped into the open interval (lo, hi),
/// returned in increasing order.
inline std::vector<double> chebyshev_nodes(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double theta =
        std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(n);
    out[j] = lo + 0.5 * (hi - lo) * (1.0 - std::cos(theta));
  }
  return out;
}

/// |a - b| <= tol * max(1, |a|, |b|); infinite operands are never close to
/// finite ones.
inline bool nearly_equal(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace am2::numeric
