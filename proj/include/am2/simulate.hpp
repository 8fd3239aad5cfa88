#pragma once

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "am2/equilibria.hpp"

namespace am2 {

using Vec4 = std::array<double, 4>;

/// Right-hand side of the four-state two-step digestion model.
inline Vec4 vector_field(const ModelParams& p, const OperatingPoint& pt, const State& x) {
  const double D = pt.D, al = p.alpha();
  const double r1 = p.mu1().value(x.S1) * x.X1;
  const double m2 = p.mu2().value(x.S2);
  return {D * (pt.S1in - x.S1) - p.k1() * r1,
          (p.mu1().value(x.S1) - al * D) * x.X1,
          D * (pt.S2in - x.S2) + p.k2() * r1 - p.k3() * m2 * x.X2,
          (m2 - al * D) * x.X2};
}

/// Methane mass flow k4 mu2(S2) X2.
inline double methane_flow(const ModelParams& p, const State& x) {
  return p.k4() * p.mu2().value(std::max(x.S2, 0.0)) * x.X2;
}

inline double norm2(const Vec4& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
}

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntegrateOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  /// Convergence: within converge_tol (relative per component, floor 1) of
  /// an existing steady state with |f| < field_tol.
  double converge_tol = 1e-6;
  double field_tol = 1e-8;
  bool stop_on_convergence = true;
  bool record = true;  // keep every accepted step, otherwise first and last
  double min_step = 1e-14;
  double divergence_bound = 1e12;
};

enum class Terminal { Converged, MaxTime, Diverged };

inline constexpr std::string_view terminal_name(Terminal t) {
  constexpr std::array<std::string_view, 3> n{"Converged", "MaxTime", "Diverged"};
  return n[static_cast<int>(t)];
}

struct TrajectorySample {
  double t;
  State x;
  double qch4;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  Terminal terminal = Terminal::MaxTime;
  std::optional<StateLabel> converged_to;
  std::size_t steps = 0;
  std::size_t rejected = 0;

  const TrajectorySample& back() const { return samples.back(); }
};

namespace detail {

/// Adaptive Dormand-Prince 5(4) loop over an arbitrary 4-dimensional field.
/// `on_step(t, x)` is called after every accepted step and returns true to
/// stop early. Components pushed below -abs_tol by a step are reset to 0.
template <class F, class OnStep>
double integrate_dopri5(F&& field, Vec4& x, double t_max, const IntegrateOptions& opt,
                        OnStep&& on_step, std::size_t& steps, std::size_t& rejected) {
  namespace odeint = boost::numeric::odeint;
  using stepper_t = odeint::runge_kutta_dopri5<Vec4>;
  auto stepper = odeint::make_controlled<stepper_t>(opt.abs_tol, opt.rel_tol);
  auto sys = [&field](const Vec4& y, Vec4& dydt, double) { dydt = field(y); };

  // Without a cap the controller lets dt drift to the edge of the explicit
  // stability region near an attractor, leaving tolerance-level noise in f.
  auto step_cap = [&field](const Vec4& y) {
    const Vec4 fy = field(y);
    Eigen::Matrix4d J;
    for (int j = 0; j < 4; ++j) {
      Vec4 yj = y;
      const double h = 1e-7 * std::max(1.0, std::abs(y[j]));
      yj[j] += h;
      const Vec4 fj = field(yj);
      for (int i = 0; i < 4; ++i) J(i, j) = (fj[i] - fy[i]) / h;
    }
    double rho = 0.0;
    for (const auto& z : eigenvalues(J)) rho = std::max(rho, std::abs(z));
    return rho > 0.0 ? 2.0 / rho : std::numeric_limits<double>::infinity();
  };

  double t = 0.0;
  double cap = step_cap(x);
  const Vec4 f0 = field(x);
  const double fn = norm2(f0);
  double dt = fn > 0.0 ? std::min(t_max, 1e-3 * std::max(1.0, norm2(x)) / fn) : t_max;
  dt = std::max(dt, 1e-8 * t_max);
  while (t < t_max) {
    dt = std::min(dt, cap);
    if (t + dt > t_max) dt = t_max - t;
    const auto res = stepper.try_step(sys, x, t, dt);
    if (res == odeint::fail) {
      ++rejected;
      if (dt < opt.min_step * std::max(1.0, t)) {
        throw IntegrationError("step size underflow at t=" + std::to_string(t) +
                               " (dt=" + std::to_string(dt) + ")");
      }
      continue;
    }
    ++steps;
    for (double& c : x) {
      if (c < -opt.abs_tol) c = 0.0;
    }
    cap = step_cap(x);
    if (on_step(t, x)) break;
  }
  return t;
}

}  // namespace detail

/// Label of an existing steady state that x has converged to, if any.
inline std::optional<StateLabel> converged_label(const ModelParams& p, const OperatingPoint& pt,
                                                 const State& x, const IntegrateOptions& opt) {
  if (norm2(vector_field(p, pt, x)) >= opt.field_tol) return std::nullopt;
  const auto xa = x.to_array();
  for (const auto& ss : steady_states(p, pt)) {
    if (!ss.exists()) continue;
    const auto ea = ss.x.to_array();
    bool close = true;
    for (int i = 0; i < 4; ++i) {
      if (std::abs(xa[i] - ea[i]) > opt.converge_tol * std::max(1.0, std::abs(ea[i]))) {
        close = false;
        break;
      }
    }
    if (close) return ss.label;
  }
  return std::nullopt;
}

/// Integrates the model from x0 up to t_max days. Stops early on convergence
/// to one of the analytic steady states when requested.
inline Trajectory integrate(const ModelParams& p, const OperatingPoint& pt, const State& x0,
                            double t_max, const IntegrateOptions& opt = {}) {
  pt.validate();
  for (double c : x0.to_array()) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw std::invalid_argument("integrate: initial state must be finite and >= 0");
    }
  }
  if (!(t_max > 0.0)) throw std::invalid_argument("integrate: t_max must be positive");

  Trajectory tr;
  tr.samples.push_back({0.0, x0, methane_flow(p, x0)});
  if (opt.stop_on_convergence) {
    if (auto l = converged_label(p, pt, x0, opt)) {
      tr.terminal = Terminal::Converged;
      tr.converged_to = l;
      return tr;
    }
  }

  Vec4 x = x0.to_array();
  auto field = [&](const Vec4& y) { return vector_field(p, pt, State::from_array(y)); };
  TrajectorySample last{0.0, x0, 0.0};
  auto on_step = [&](double t, const Vec4& y) {
    const State s = State::from_array(y);
    last = {t, s, methane_flow(p, s)};
    if (opt.record) tr.samples.push_back(last);
    for (double c : y) {
      if (!std::isfinite(c) || std::abs(c) > opt.divergence_bound) {
        tr.terminal = Terminal::Diverged;
        return true;
      }
    }
    if (opt.stop_on_convergence) {
      if (auto l = converged_label(p, pt, s, opt)) {
        tr.terminal = Terminal::Converged;
        tr.converged_to = l;
        return true;
      }
    }
    return false;
  };
  detail::integrate_dopri5(field, x, t_max, opt, on_step, tr.steps, tr.rejected);
  if (!opt.record && last.t > 0.0) tr.samples.push_back(last);
  return tr;
}

/// Reduced coordinates (s1, x1, s2, x2) = ((k2/k1) S1, k2 X1, S2, k3 X2).
struct ReducedState {
  double s1 = 0.0, x1 = 0.0, s2 = 0.0, x2 = 0.0;
  Vec4 to_array() const { return {s1, x1, s2, x2}; }
  static ReducedState from_array(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
};

inline ReducedState reduce(const ModelParams& p, const State& x) {
  for (double c : x.to_array()) require_nonnegative(c, "state component");
  return {p.yield_ratio() * x.S1, p.k2() * x.X1, x.S2, p.k3() * x.X2};
}

inline State unreduce(const ModelParams& p, const ReducedState& r) {
  return {r.s1 / p.yield_ratio(), r.x1 / p.k2(), r.s2, r.x2 / p.k3()};
}

/// Vector field of the system with unit yield coefficients, with
/// f1(s1) = mu1((k1/k2) s1), f2 = mu2, s1in = (k2/k1) S1in, s2in = S2in.
inline Vec4 reduced_vector_field(const ModelParams& p, const OperatingPoint& pt,
                                 const ReducedState& r) {
  const double D = pt.D, al = p.alpha();
  const double s1in = p.yield_ratio() * pt.S1in;
  const double f1 = p.mu1().value(r.s1 / p.yield_ratio());
  const double f2 = p.mu2().value(r.s2);
  return {D * (s1in - r.s1) - f1 * r.x1, (f1 - al * D) * r.x1,
          D * (pt.S2in - r.s2) + f1 * r.x1 - f2 * r.x2, (f2 - al * D) * r.x2};
}

/// Integrates the reduced system to exactly t_max and returns the end state.
inline ReducedState integrate_reduced(const ModelParams& p, const OperatingPoint& pt,
                                      const ReducedState& r0, double t_max,
                                      const IntegrateOptions& opt = {}) {
  Vec4 x = r0.to_array();
  auto field = [&](const Vec4& y) {
    return reduced_vector_field(p, pt, ReducedState::from_array(y));
  };
  std::size_t steps = 0, rejected = 0;
  detail::integrate_dopri5(field, x, t_max, opt, [](double, const Vec4&) { return false; },
                           steps, rejected);
  return ReducedState::from_array(x);
}

/// Random initial state, each component log-uniform in (1e-3, 2 * scale) where
/// the scales are the influent-derived magnitudes of that component.
template <class Rng>
State random_initial_state(const ModelParams& p, const OperatingPoint& pt, Rng& rng) {
  const double total2 = pt.S2in + p.yield_ratio() * pt.S1in;
  const std::array<double, 4> scale{
      std::max(pt.S1in, 1e-2), std::max(pt.S1in / (p.k1() * p.alpha()), 1e-2),
      std::max(total2, 1e-2), std::max(total2 / (p.k3() * p.alpha()), 1e-2)};
  std::array<double, 4> v{};
  for (int i = 0; i < 4; ++i) {
    std::uniform_real_distribution<double> u(std::log(1e-3), std::log(2.0 * scale[i]));
    v[i] = std::exp(u(rng));
  }
  return State::from_array(v);
}

struct Corroboration {
  std::map<StateLabel, int> attractors;  // converged label -> count
  int unconverged = 0;
  std::uint64_t seed = 0;
};

/// Integrates from n random initial states plus any extra seeds and tallies
/// where each trajectory ends up.
inline Corroboration corroborate(const ModelParams& p, const OperatingPoint& pt, int n,
                                 std::uint64_t seed, double t_max = 1000.0,
                                 const std::vector<State>& extra = {},
                                 const IntegrateOptions& base = {}) {
  Corroboration c;
  c.seed = seed;
  std::mt19937_64 rng(seed);
  IntegrateOptions opt = base;
  opt.record = false;
  auto run = [&](const State& x0) {
    const auto tr = integrate(p, pt, x0, t_max, opt);
    if (tr.terminal == Terminal::Converged) {
      ++c.attractors[*tr.converged_to];
    } else {
      ++c.unconverged;
    }
  };
  for (int i = 0; i < n; ++i) run(random_initial_state(p, pt, rng));
  for (const auto& x0 : extra) run(x0);
  return c;
}

}  // namespace am2
