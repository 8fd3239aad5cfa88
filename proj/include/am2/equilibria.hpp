#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "am2/auxiliary.hpp"
#include "am2/numeric.hpp"
#include "am2/regions.hpp"

namespace am2 {

/// Model state (S1, X1, S2, X2).
struct State {
  double S1 = 0.0;  // g/L
  double X1 = 0.0;  // g/L
  double S2 = 0.0;  // mmol/L
  double X2 = 0.0;

  std::array<double, 4> to_array() const { return {S1, X1, S2, X2}; }
  static State from_array(const std::array<double, 4>& v) { return {v[0], v[1], v[2], v[3]}; }
};

struct SteadyState {
  StateLabel label;
  State x;  // NaN components when Absent
  Stability status = Stability::Absent;

  bool exists() const { return status != Stability::Absent; }
};

/// Band used to declare a deciding inequality an equality (non hyperbolic).
inline constexpr double kNonHyperbolicTol = 1e-9;

/// Closed-form location of a steady state, continued past its existence
/// boundary (components may be negative). Empty when the defining
/// break-even concentrations are infinite.
inline std::optional<State> steady_state_formula(const ModelParams& p, const OperatingPoint& pt,
                                                 StateLabel label) {
  const ExtReal s1s = S1_star(p, pt.D);
  const auto [s21, s22] = S2_stars(p, pt.D);
  const double ka1 = p.k1() * p.alpha(), ka3 = p.k3() * p.alpha();
  const double k = p.yield_ratio();
  auto first_population = [&]() -> std::optional<std::pair<double, double>> {
    if (s1s.is_infinite()) return std::nullopt;
    return std::make_pair(s1s.value(), (pt.S1in - s1s.value()) / ka1);
  };
  switch (label) {
    case StateLabel::E10:
      return State{pt.S1in, 0.0, pt.S2in, 0.0};
    case StateLabel::E11:
    case StateLabel::E12: {
      const ExtReal s2 = label == StateLabel::E11 ? s21 : s22;
      if (s2.is_infinite()) return std::nullopt;
      return State{pt.S1in, 0.0, s2.value(), (pt.S2in - s2.value()) / ka3};
    }
    case StateLabel::E20: {
      const auto f = first_population();
      if (!f) return std::nullopt;
      return State{f->first, f->second, pt.S2in + k * (pt.S1in - f->first), 0.0};
    }
    case StateLabel::E21:
    case StateLabel::E22: {
      const auto f = first_population();
      const ExtReal s2 = label == StateLabel::E21 ? s21 : s22;
      if (!f || s2.is_infinite()) return std::nullopt;
      const double s2in_star = pt.S2in + k * (pt.S1in - f->first);
      return State{f->first, f->second, s2.value(), (s2in_star - s2.value()) / ka3};
    }
  }
  return std::nullopt;
}

/// All six steady states with existence and stability from the closed-form
/// conditions; GAS is assigned from the region table.
inline std::array<SteadyState, 6> steady_states(const ModelParams& p, const OperatingPoint& pt) {
  const auto a = aux(p, pt);
  const double s1in = pt.S1in, s2in = pt.S2in, t = a.combined_input;
  const double s1s = a.S1star.value(), s21 = a.S2star1.value(), s22 = a.S2star2.value();
  const double h1 = a.H1.value(), h2 = a.H2.value();

  auto near = [](double x, double y) { return numeric::nearly_equal(x, y, kNonHyperbolicTol); };
  // Strict inequality, or equality within the band (the state then coincides
  // with a neighbour and is reported as non hyperbolic).
  auto above = [&](double x, double y) { return x > y || near(x, y); };

  struct Decision {
    bool exists;
    bool stable;
    bool degenerate;
  };
  const bool d_near_d2 = near(pt.D, a.D2);
  const bool s1_near = near(s1in, s1s);
  std::array<Decision, 6> dec{};
  dec[0] = {true, s1in < s1s && (s2in < s21 || s2in > s22),
            s1_near || near(s2in, s21) || near(s2in, s22)};
  dec[1] = {above(s2in, s21), s1in < s1s, near(s2in, s21) || s1_near || d_near_d2};
  dec[2] = {above(s2in, s22), false, near(s2in, s22) || s1_near || d_near_d2};
  dec[3] = {above(s1in, s1s), !(h1 <= t && t <= h2), s1_near || near(t, h1) || near(t, h2)};
  dec[4] = {above(s1in, s1s) && above(t, h1), true, near(t, h1) || s1_near || d_near_d2};
  dec[5] = {above(s1in, s1s) && above(t, h2), false, near(t, h2) || s1_near || d_near_d2};

  const auto cls = classify(p, pt);
  std::array<SteadyState, 6> out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < 6; ++i) {
    const auto label = kAllLabels[i];
    out[i].label = label;
    out[i].x = State{nan, nan, nan, nan};
    if (!dec[i].exists) continue;
    const auto x = steady_state_formula(p, pt, label);
    if (!x) continue;
    State s = *x;
    s.X1 = std::max(s.X1, 0.0);
    s.X2 = std::max(s.X2, 0.0);
    s.S1 = std::max(s.S1, 0.0);
    s.S2 = std::max(s.S2, 0.0);
    out[i].x = s;
    if (dec[i].degenerate) {
      out[i].status = Stability::NonHyperbolic;
    } else if (!dec[i].stable) {
      out[i].status = Stability::Unstable;
    } else if (cls.region && region_status_row(*cls.region)[i] == Stability::GAS) {
      out[i].status = Stability::GAS;
    } else {
      out[i].status = Stability::Stable;
    }
  }
  return out;
}

using Matrix4 = Eigen::Matrix4d;

/// Jacobian of the vector field at state x.
inline Matrix4 jacobian(const ModelParams& p, const State& x, const OperatingPoint& pt) {
  const double D = pt.D, al = p.alpha();
  const double m1 = p.mu1().value(x.S1), dm1 = p.mu1().derivative(x.S1);
  const double m2 = p.mu2().value(x.S2), dm2 = p.mu2().derivative(x.S2);
  Matrix4 J;
  // clang-format off
  J << -D - p.k1() * dm1 * x.X1, -p.k1() * m1,      0.0,                      0.0,
       dm1 * x.X1,               m1 - al * D,       0.0,                      0.0,
       p.k2() * dm1 * x.X1,      p.k2() * m1,       -D - p.k3() * dm2 * x.X2, -p.k3() * m2,
       0.0,                      0.0,               dm2 * x.X2,               m2 - al * D;
  // clang-format on
  return J;
}

inline std::array<std::complex<double>, 4> eigenvalues(const Matrix4& J) {
  Eigen::EigenSolver<Matrix4> es(J, /*computeEigenvectors=*/false);
  const auto ev = es.eigenvalues();
  return {ev(0), ev(1), ev(2), ev(3)};
}

inline double max_real_part(const Matrix4& J) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& z : eigenvalues(J)) m = std::max(m, z.real());
  return m;
}

enum class NumericVerdict { Stable, Unstable, Marginal };

inline constexpr std::string_view verdict_name(NumericVerdict v) {
  constexpr std::array<std::string_view, 3> n{"Stable", "Unstable", "Marginal"};
  return n[static_cast<int>(v)];
}

inline NumericVerdict verdict_from_spectrum(double max_re, double tol = 1e-9) {
  if (max_re < -tol) return NumericVerdict::Stable;
  if (max_re > tol) return NumericVerdict::Unstable;
  return NumericVerdict::Marginal;
}

struct OracleRow {
  StateLabel label;
  Stability analytic;
  NumericVerdict numeric;
  double max_real;
  bool agrees;
};

struct OracleReport {
  std::vector<OracleRow> rows;  // one per existing steady state
  bool near_boundary = false;   // point within 1e-6 of a boundary surface
  bool all_agree() const {
    return std::all_of(rows.begin(), rows.end(), [](const OracleRow& r) { return r.agrees; });
  }
};

/// Compares the analytic verdicts against the sign of the leading Jacobian
/// eigenvalue at each existing steady state.
inline OracleReport stability_oracle(const ModelParams& p, const OperatingPoint& pt) {
  OracleReport rep;
  rep.near_boundary = boundary_margin(p, pt) < 1e-6;
  for (const auto& ss : steady_states(p, pt)) {
    if (!ss.exists()) continue;
    const double mr = max_real_part(jacobian(p, ss.x, pt));
    const auto v = verdict_from_spectrum(mr);
    bool ok = false;
    switch (ss.status) {
      case Stability::GAS:
      case Stability::Stable: ok = v == NumericVerdict::Stable; break;
      case Stability::Unstable: ok = v == NumericVerdict::Unstable; break;
      case Stability::NonHyperbolic: ok = v == NumericVerdict::Marginal; break;
      case Stability::Absent: break;
    }
    rep.rows.push_back({ss.label, ss.status, v, mr, ok});
  }
  return rep;
}

}  // namespace am2
