#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "am2/auxiliary.hpp"
#include "am2/numeric.hpp"

namespace am2 {

enum class RegionId { I0, I1, I2, I3, I4, I5, I6, I7, I8 };
enum class GammaId { G1, G2, G3, G4, G5, G6 };
enum class Color { Red, Blue, Cyan, Yellow, Green, Pink };

inline constexpr std::array<RegionId, 9> kAllRegions{
    RegionId::I0, RegionId::I1, RegionId::I2, RegionId::I3, RegionId::I4,
    RegionId::I5, RegionId::I6, RegionId::I7, RegionId::I8};
inline constexpr std::array<GammaId, 6> kAllGammas{GammaId::G1, GammaId::G2, GammaId::G3,
                                                    GammaId::G4, GammaId::G5, GammaId::G6};

inline constexpr std::string_view region_name(RegionId r) {
  constexpr std::array<std::string_view, 9> n{"I0", "I1", "I2", "I3", "I4",
                                              "I5", "I6", "I7", "I8"};
  return n[static_cast<int>(r)];
}
inline std::optional<RegionId> region_from_name(std::string_view s) {
  for (auto r : kAllRegions) {
    if (region_name(r) == s) return r;
  }
  return std::nullopt;
}

inline constexpr std::string_view gamma_name(GammaId g) {
  constexpr std::array<std::string_view, 6> n{"G1", "G2", "G3", "G4", "G5", "G6"};
  return n[static_cast<int>(g)];
}
inline std::optional<GammaId> gamma_from_name(std::string_view s) {
  for (auto g : kAllGammas) {
    if (gamma_name(g) == s) return g;
  }
  return std::nullopt;
}

inline constexpr Color region_color(RegionId r) {
  constexpr std::array<Color, 9> c{Color::Red,   Color::Blue,  Color::Cyan,
                                   Color::Yellow, Color::Green, Color::Pink,
                                   Color::Green,  Color::Pink,  Color::Pink};
  return c[static_cast<int>(r)];
}

inline constexpr std::string_view color_name(Color c) {
  constexpr std::array<std::string_view, 6> n{"Red", "Blue", "Cyan", "Yellow", "Green", "Pink"};
  return n[static_cast<int>(c)];
}

/// Fill colour used in SVG output.
inline constexpr std::string_view color_hex(Color c) {
  constexpr std::array<std::string_view, 6> n{"#e41a1c", "#377eb8", "#00cccc",
                                              "#ffdd33", "#4daf4a", "#f4a6c8"};
  return n[static_cast<int>(c)];
}

/// Row of the existence/stability table: status of E10..E22 in a region.
/// Absent marks an empty cell.
inline constexpr std::array<Stability, 6> region_status_row(RegionId r) {
  using S = Stability;
  constexpr S A = S::Absent, G = S::GAS, St = S::Stable, U = S::Unstable;
  constexpr std::array<std::array<S, 6>, 9> rows{{
      {G, A, A, A, A, A},     // I0
      {U, G, A, A, A, A},     // I1
      {St, St, U, A, A, A},   // I2
      {U, A, A, G, A, A},     // I3
      {U, A, A, U, G, A},     // I4
      {U, A, A, St, St, U},   // I5
      {U, U, A, U, G, A},     // I6
      {U, U, A, St, St, U},   // I7
      {U, U, U, St, St, U},   // I8
  }};
  return rows[static_cast<int>(r)];
}

inline int region_state_count(RegionId r) {
  const auto row = region_status_row(r);
  return static_cast<int>(std::count_if(row.begin(), row.end(),
                                        [](Stability s) { return s != Stability::Absent; }));
}

/// Signed defining residual of a boundary surface at an operating point.
struct GammaResidual {
  double value = 0.0;   // may be +-inf
  double scale = 1.0;   // max(1, |lhs|, |rhs|)
  bool in_domain = false;
  double relative() const { return value / scale; }
};

namespace detail {
inline GammaResidual residual(double lhs, double rhs, bool in_domain) {
  GammaResidual r;
  r.value = lhs - rhs;
  r.scale = std::max({1.0, std::abs(lhs), std::isinf(rhs) ? 1.0 : std::abs(rhs)});
  r.in_domain = in_domain;
  return r;
}
}  // namespace detail

inline GammaResidual gamma_value(const ModelParams& p, const AuxValues& a, GammaId id,
                                 const OperatingPoint& pt) {
  const bool below_min = pt.D < std::min(a.D1, a.D2);
  const bool s1_ok = pt.S1in > a.S1star;
  switch (id) {
    case GammaId::G1:
      return detail::residual(pt.S1in, a.S1star.value(), pt.D < a.D1);
    case GammaId::G2:
      return detail::residual(pt.S2in, a.S2star1.value(), pt.D < a.D2);
    case GammaId::G3:
      return detail::residual(pt.S2in, a.S2star2.value(), pt.D < a.D2);
    case GammaId::G4:
      return detail::residual(a.combined_input, a.H1.value(), below_min && s1_ok);
    case GammaId::G5:
      return detail::residual(a.combined_input, a.H2.value(), below_min && s1_ok);
    case GammaId::G6:
      return detail::residual(pt.D, a.D2, true);
  }
  (void)p;
  return {};
}

/// Defining residual of surface `id`: zero exactly on the surface when
/// `in_domain` holds.
inline GammaResidual gamma_value(const ModelParams& p, GammaId id, const OperatingPoint& pt) {
  return gamma_value(p, aux(p, pt), id, pt);
}

/// Smallest relative residual over all in-domain surfaces.
inline double boundary_margin(const ModelParams& p, const OperatingPoint& pt) {
  const auto a = aux(p, pt);
  double m = std::numeric_limits<double>::infinity();
  for (auto g : kAllGammas) {
    const auto r = gamma_value(p, a, g, pt);
    if (r.in_domain) m = std::min(m, std::abs(r.relative()));
  }
  return m;
}

struct Classification {
  /// Region whose defining inequalities hold; empty only exactly on a strict
  /// boundary.
  std::optional<RegionId> region;
  /// Surfaces within the reporting band of the point.
  std::vector<GammaId> boundary;

  bool on_boundary() const { return !boundary.empty(); }
};

/// Region from the nine defining inequality systems, evaluated with the +inf
/// conventions so that D >= D1 or D > D2 still classifies.
inline std::optional<RegionId> region_of(const AuxValues& a, const OperatingPoint& pt) {
  const double s2in = pt.S2in;
  const double t = a.combined_input;
  if (pt.S1in < a.S1star) {
    if (s2in < a.S2star1) return RegionId::I0;
    if (a.S2star1 < s2in && s2in <= a.S2star2) return RegionId::I1;
    if (s2in > a.S2star2) return RegionId::I2;
    return std::nullopt;
  }
  if (pt.S1in > a.S1star) {
    if (t < a.H1) return RegionId::I3;
    if (s2in <= a.S2star1) {
      if (a.H1 < t && t <= a.H2) return RegionId::I4;
      if (t > a.H2) return RegionId::I5;
      return std::nullopt;
    }
    if (s2in > a.S2star2) return RegionId::I8;
    if (t <= a.H2) return RegionId::I6;
    return RegionId::I7;
  }
  return std::nullopt;
}

inline Classification classify(const ModelParams& p, const OperatingPoint& pt,
                               double band = 1e-12) {
  const auto a = aux(p, pt);
  Classification c;
  c.region = region_of(a, pt);
  for (auto g : kAllGammas) {
    const auto r = gamma_value(p, a, g, pt);
    if (r.in_domain && std::abs(r.value) <= band * r.scale) c.boundary.push_back(g);
  }
  return c;
}

enum class HCase { A, B, C };

inline constexpr std::string_view hcase_name(HCase h) {
  constexpr std::array<std::string_view, 3> n{"A", "B", "C"};
  return n[static_cast<int>(h)];
}

struct HExtremum {
  double D;
  double scaled_H2;  // (k1/k2) H2(D)
  bool is_min;
};

struct HCaseReport {
  HCase kind = HCase::A;
  bool degenerate = false;  // D1 == D2 within 1e-12
  double D1 = 0.0, D2 = 0.0;
  std::size_t sign_changes = 0;
  std::vector<HExtremum> extrema;  // interior extrema of H2, increasing D
  std::optional<double> scaled_H2_at_D2;  // (k1/k2) lim H2 at D2, when D2 < D1

  std::optional<HExtremum> first_min() const {
    for (const auto& e : extrema) {
      if (e.is_min) return e;
    }
    return std::nullopt;
  }
  std::optional<HExtremum> first_max() const {
    for (const auto& e : extrema) {
      if (!e.is_min) return e;
    }
    return std::nullopt;
  }
};

/// dH_i/dD by implicit differentiation of mu(S) = alpha D.
inline double H_derivative(const ModelParams& p, int i, double D) {
  const double a = p.alpha();
  const auto [s21, s22] = S2_stars(p, D);
  const double s2 = (i == 1 ? s21 : s22).value();
  const double s1 = S1_star(p, D).value();
  return a / p.mu2().derivative(s2) + p.yield_ratio() * a / p.mu1().derivative(s1);
}

/// Shape of H2 on (0, D2): monotone decreasing (A), non-monotone (B), or
/// D1 < D2 (C).
inline HCaseReport h_case(const ModelParams& p, std::size_t n_samples = 1024) {
  if (n_samples < 256) throw std::invalid_argument("h_case: n_samples must be >= 256");
  HCaseReport rep;
  rep.D1 = p.D1();
  rep.D2 = p.D2();
  if (numeric::nearly_equal(rep.D1, rep.D2, 1e-12)) {
    rep.degenerate = true;
    rep.kind = HCase::C;
    return rep;
  }
  if (rep.D1 < rep.D2) {
    rep.kind = HCase::C;
    return rep;
  }
  const double inv_k = 1.0 / p.yield_ratio();
  rep.scaled_H2_at_D2 = inv_k * (p.S2M() + p.yield_ratio() * S1_star(p, rep.D2).value());

  const auto nodes = numeric::chebyshev_nodes(0.0, rep.D2, n_samples);
  auto dH = [&](double D) { return H_derivative(p, 2, D); };
  constexpr double kMinSlope = 1e-10;
  double prev_D = 0.0, prev_d = 0.0;
  bool have_prev = false;
  for (double D : nodes) {
    const double d = dH(D);
    if (!std::isfinite(d) || std::abs(d) <= kMinSlope) continue;
    if (have_prev && (d > 0.0) != (prev_d > 0.0)) {
      ++rep.sign_changes;
      const double root = numeric::bisect(dH, prev_D, D, 0.0, 1e-14);
      rep.extrema.push_back(
          {root, inv_k * H_function(p, 2, root).value(), prev_d < 0.0 && d > 0.0});
    }
    prev_D = D;
    prev_d = d;
    have_prev = true;
  }
  rep.kind = rep.sign_changes == 0 ? HCase::A : HCase::B;
  return rep;
}

}  // namespace am2
