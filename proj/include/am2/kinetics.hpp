#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "am2/ext_real.hpp"
#include "am2/numeric.hpp"

namespace am2 {

/// mu(S) = m S / (K + S)
struct Monod {
  double m;  // 1/d
  double K;  // half-saturation
};

/// mu(S) = m S / (K + S + S^2 / KI)
struct Haldane {
  double m;   // 1/d
  double K;   // mmol/L
  double KI;  // inhibition constant, mmol/L
};

/// User-supplied increasing growth law with finite supremum `sup`.
struct GenericMonotone {
  std::function<double(double)> fn;
  double sup;
  double scale = 1.0;  // characteristic concentration, sets grids and steps
};

/// User-supplied unimodal growth law vanishing at 0 and +inf.
struct GenericHaldaneShaped {
  std::function<double(double)> fn;
  double scale = 1.0;
};

struct Peak {
  double S;   // maximizer
  double mu;  // maximum value
};

/// A growth kinetics mu(S). Immutable after construction; for generic
/// Haldane-shaped laws the maximizer is located once in the constructor.
class GrowthLaw {
 public:
  using Kind = std::variant<Monod, Haldane, GenericMonotone, GenericHaldaneShaped>;

  GrowthLaw(Monod k) : kind_(k) {
    if (!(k.m > 0.0) || !(k.K > 0.0)) {
      throw std::invalid_argument("Monod: m and K must be positive");
    }
  }

  GrowthLaw(Haldane k) : kind_(k) {
    if (!(k.m > 0.0) || !(k.K > 0.0) || !(k.KI > 0.0)) {
      throw std::invalid_argument("Haldane: m, K and KI must be positive");
    }
    const double s = std::sqrt(k.K * k.KI);
    peak_ = Peak{s, k.m / (1.0 + 2.0 * std::sqrt(k.K / k.KI))};
  }

  GrowthLaw(GenericMonotone k) : kind_(std::move(k)) {
    const auto& g = std::get<GenericMonotone>(kind_);
    if (!g.fn) throw std::invalid_argument("GenericMonotone: empty callable");
    if (!(g.sup > 0.0) || !std::isfinite(g.sup)) {
      throw std::invalid_argument("GenericMonotone: supremum must be positive and finite");
    }
    if (!(g.scale > 0.0)) throw std::invalid_argument("GenericMonotone: scale must be positive");
  }

  GrowthLaw(GenericHaldaneShaped k) : kind_(std::move(k)) {
    const auto& g = std::get<GenericHaldaneShaped>(kind_);
    if (!g.fn) throw std::invalid_argument("GenericHaldaneShaped: empty callable");
    if (!(g.scale > 0.0)) throw std::invalid_argument("GenericHaldaneShaped: scale must be positive");
    peak_ = locate_peak(g.fn, g.scale);
  }

  const Kind& kind() const { return kind_; }

  bool is_monotone() const {
    return std::holds_alternative<Monod>(kind_) || std::holds_alternative<GenericMonotone>(kind_);
  }
  bool is_haldane_shaped() const { return !is_monotone(); }
  bool is_closed_form() const {
    return std::holds_alternative<Monod>(kind_) || std::holds_alternative<Haldane>(kind_);
  }

  /// Characteristic concentration used for grids and finite-difference steps.
  double scale() const {
    return std::visit(
        [](const auto& k) -> double {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, Monod>) return k.K;
          else if constexpr (std::is_same_v<T, Haldane>) return std::sqrt(k.K * k.KI);
          else return k.scale;
        },
        kind_);
  }

  /// mu(S) without domain checks; S must be >= 0.
  double value(double S) const {
    return std::visit(
        [S](const auto& k) -> double {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, Monod>) {
            return k.m * S / (k.K + S);
          } else if constexpr (std::is_same_v<T, Haldane>) {
            if (std::isinf(S)) return 0.0;
            return k.m * S / (k.K + S + S * S / k.KI);
          } else {
            return k.fn(S);
          }
        },
        kind_);
  }

  double operator()(double S) const { return value(S); }

  /// mu'(S): closed form for Monod/Haldane, 5-point stencil otherwise.
  double derivative(double S) const {
    return std::visit(
        [this, S](const auto& k) -> double {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, Monod>) {
            const double d = k.K + S;
            return k.m * k.K / (d * d);
          } else if constexpr (std::is_same_v<T, Haldane>) {
            const double d = k.K + S + S * S / k.KI;
            return k.m * (k.K - S * S / k.KI) / (d * d);
          } else {
            return numeric::derivative([this](double x) { return value(x); }, S, k.scale);
          }
        },
        kind_);
  }

  /// sup of mu on [0, inf) for monotone laws.
  double supremum() const {
    if (const auto* m = std::get_if<Monod>(&kind_)) return m->m;
    if (const auto* g = std::get_if<GenericMonotone>(&kind_)) return g->sup;
    return peak_->mu;
  }

  /// Maximizer and maximum; only for Haldane-shaped laws.
  const std::optional<Peak>& cached_peak() const { return peak_; }

 private:
  static Peak locate_peak(const std::function<double(double)>& fn, double scale) {
    const auto grid = numeric::logspace(1e-6 * scale, 1e6 * scale, 2401);
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (fn(grid[i]) > fn(grid[best])) best = i;
    }
    if (best == 0 || best + 1 == grid.size()) {
      throw std::invalid_argument(
          "GenericHaldaneShaped: maximizer not interior to the sampling window");
    }
    const double lo = grid[best - 1], hi = grid[best + 1];
    double s = numeric::golden_max(fn, lo, hi, 1e-12);
    // Golden section on mu itself is limited to ~sqrt(eps) in S; polish on
    // the derivative, whose root is well conditioned.
    auto dmu = [&](double x) { return numeric::derivative(fn, x, scale); };
    if (dmu(lo) > 0.0 && dmu(hi) < 0.0) {
      s = numeric::bisect(dmu, lo, hi, 0.0, 1e-15);
    }
    return Peak{s, fn(s)};
  }

  Kind kind_;
  std::optional<Peak> peak_;
};

inline void require_nonnegative(double x, const char* what) {
  if (std::isnan(x) || x < 0.0) {
    throw std::domain_error(std::string(what) + " must be >= 0");
  }
}

/// mu(S) for S >= 0.
inline double eval(const GrowthLaw& law, double S) {
  require_nonnegative(S, "concentration");
  return law.value(S);
}

/// Maximizer and peak value of a Haldane-shaped law.
inline Peak peak(const GrowthLaw& law) {
  if (!law.is_haldane_shaped()) {
    throw std::logic_error("peak: growth law is monotone, it has no interior maximum");
  }
  return *law.cached_peak();
}

/// Unique S with mu(S) = v for a monotone law, or +inf when v >= sup mu.
inline ExtReal inv_monotone(const GrowthLaw& law, double v) {
  require_nonnegative(v, "rate");
  if (!law.is_monotone()) {
    throw std::logic_error("inv_monotone: growth law is not monotone");
  }
  if (v >= law.supremum()) return ExtReal::infinity();
  if (v == 0.0) return ExtReal(0.0);
  if (const auto* m = std::get_if<Monod>(&law.kind())) {
    return ExtReal(v * m->K / (m->m - v));
  }
  double hi = law.scale();
  while (law.value(hi) < v) {
    hi *= 2.0;
    if (hi > 1e300) return ExtReal::infinity();
  }
  const double s = numeric::bisect([&](double x) { return law.value(x) - v; }, 0.0, hi);
  return ExtReal(s);
}

struct HaldaneRoots {
  ExtReal low;
  ExtReal high;
  /// Relative condition number of the inversion, max over both roots:
  /// v / (S |mu'(S)|). Infinite at the peak, where the split is ill posed.
  double condition = 0.0;
};

/// The two solutions low <= high of mu(S) = v for a Haldane-shaped law.
/// v above the peak gives (+inf, +inf); v at the peak gives the maximizer twice.
inline HaldaneRoots inv_haldane(const GrowthLaw& law, double v) {
  require_nonnegative(v, "rate");
  if (!law.is_haldane_shaped()) {
    throw std::logic_error("inv_haldane: growth law is not Haldane-shaped");
  }
  const Peak pk = *law.cached_peak();
  const double inf = std::numeric_limits<double>::infinity();
  if (v > pk.mu) return {ExtReal::infinity(), ExtReal::infinity(), inf};
  if (v == pk.mu) return {ExtReal(pk.S), ExtReal(pk.S), inf};
  if (v == 0.0) return {ExtReal(0.0), ExtReal::infinity(), 1.0};

  double low = 0.0, high = 0.0;
  if (const auto* h = std::get_if<Haldane>(&law.kind())) {
    // v S^2/KI + (v - m) S + v K = 0; roots multiply to K KI.
    const double b = (h->m - v) * h->KI;
    const double disc = b * b - 4.0 * v * v * h->K * h->KI;
    high = (b + std::sqrt(std::max(disc, 0.0))) / (2.0 * v);
    low = h->K * h->KI / high;
  } else {
    auto g = [&](double x) { return law.value(x) - v; };
    low = numeric::bisect(g, 0.0, pk.S);
    double hi = 2.0 * pk.S;
    while (law.value(hi) > v) {
      hi *= 2.0;
      if (hi > 1e300) break;
    }
    high = numeric::bisect(g, pk.S, hi);
  }
  const double c_low = v / (low * std::abs(law.derivative(low)));
  const double c_high = v / (high * std::abs(law.derivative(high)));
  return {ExtReal(low), ExtReal(high), std::max(c_low, c_high)};
}

struct HypothesisReport {
  bool pass = true;
  std::vector<std::string> violations;
  /// Grid neighbours bracketing the sampled maximizer (Haldane-shaped only).
  std::optional<std::pair<double, double>> maximizer_bracket;
};

/// Samples mu and mu' on a log grid over [1e-6, 1e6] x scale and reports
/// violations of the qualitative growth-law assumptions.
inline HypothesisReport check_hypotheses(const GrowthLaw& law, std::size_t grid_size) {
  if (grid_size < 100) throw std::invalid_argument("check_hypotheses: grid_size must be >= 100");
  HypothesisReport rep;
  auto fail = [&rep](std::string msg) {
    rep.pass = false;
    rep.violations.push_back(std::move(msg));
  };

  const double scale = law.scale();
  const double mu0 = law.value(0.0);
  if (!(std::abs(mu0) <= 1e-12)) fail("μ(0)≠0");

  const auto grid = numeric::logspace(1e-6 * scale, 1e6 * scale, grid_size);
  std::vector<double> mu(grid.size()), dmu(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    mu[i] = law.value(grid[i]);
    dmu[i] = law.derivative(grid[i]);
    if (!std::isfinite(mu[i]) || mu[i] < 0.0) {
      fail("μ negative or non-finite at S=" + std::to_string(grid[i]));
      return rep;
    }
  }

  if (law.is_monotone()) {
    const double sup = law.supremum();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double tiny = 1e-14 * sup / grid[i];
      if (dmu[i] < -tiny || (i > 0 && mu[i] < mu[i - 1] - 1e-15 * sup)) {
        fail("μ not increasing near S=" + std::to_string(grid[i]));
        break;
      }
    }
    for (double m : mu) {
      if (m > sup * (1.0 + 1e-12)) {
        fail("μ exceeds its stated supremum");
        break;
      }
    }
    if (std::abs(mu.back() - sup) > 1e-3 * sup) fail("μ(+∞) does not reach the supremum");
    return rep;
  }

  // Unimodal: one sign change of mu', from + to -.
  std::size_t arg = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (mu[i] > mu[arg]) arg = i;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double tiny = 1e-14 * mu[arg] / grid[i];
    if (i < arg && dmu[i] < -tiny) {
      fail("μ decreasing before the maximizer near S=" + std::to_string(grid[i]));
      break;
    }
    if (i > arg && dmu[i] > tiny) {
      fail("μ increasing after the maximizer near S=" + std::to_string(grid[i]));
      break;
    }
  }
  if (arg == 0 || arg + 1 == grid.size()) {
    fail("no interior maximizer on the sampling window");
  } else {
    rep.maximizer_bracket = std::make_pair(grid[arg - 1], grid[arg + 1]);
  }
  if (mu.back() > 1e-2 * mu[arg]) fail("μ(+∞)≠0");
  return rep;
}

}  // namespace am2
