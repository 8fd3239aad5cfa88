#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <tuple>
#include <utility>

#include "am2/ext_real.hpp"
#include "am2/model.hpp"

namespace am2 {

enum class StateLabel { E10, E11, E12, E20, E21, E22 };

inline constexpr std::array<StateLabel, 6> kAllLabels{StateLabel::E10, StateLabel::E11,
                                                       StateLabel::E12, StateLabel::E20,
                                                       StateLabel::E21, StateLabel::E22};

inline constexpr std::string_view label_name(StateLabel l) {
  constexpr std::array<std::string_view, 6> names{"E10", "E11", "E12", "E20", "E21", "E22"};
  return names[static_cast<int>(l)];
}

inline std::optional<StateLabel> label_from_name(std::string_view s) {
  for (auto l : kAllLabels) {
    if (label_name(l) == s) return l;
  }
  return std::nullopt;
}

enum class Stability { Absent, GAS, Stable, Unstable, NonHyperbolic };

inline constexpr std::string_view stability_name(Stability s) {
  constexpr std::array<std::string_view, 5> names{"Absent", "GAS", "Stable", "Unstable",
                                                  "NonHyperbolic"};
  return names[static_cast<int>(s)];
}

inline std::optional<Stability> stability_from_name(std::string_view s) {
  for (int i = 0; i < 5; ++i) {
    const auto st = static_cast<Stability>(i);
    if (stability_name(st) == s) return st;
  }
  return std::nullopt;
}

/// Threshold functions of one operating point. Quantities that are only
/// defined on part of the operating space are empty outside it; the
/// break-even concentrations and H-functions use the +inf convention instead.
struct AuxValues {
  double D1 = 0.0;
  double D2 = 0.0;
  double S2M = 0.0;
  ExtReal S1star;    // mu1(S1*) = alpha D, +inf for D >= D1
  ExtReal S2star1;   // smaller root of mu2 = alpha D, +inf for D > D2
  ExtReal S2star2;   // larger root, +inf for D > D2
  ExtReal H1;        // S2star1 + (k2/k1) S1star
  ExtReal H2;        // S2star2 + (k2/k1) S1star
  double combined_input = 0.0;      // S2in + (k2/k1) S1in
  std::optional<double> S2inStar;   // S2in + (k2/k1)(S1in - S1*), needs S1in > S1*
  std::optional<double> X1star;     // (S1in - S1*) / (k1 alpha)
  std::optional<double> X21, X22;   // (S2in - S2star_i) / (k3 alpha)
  std::optional<double> X2star1, X2star2;  // (S2inStar - S2star_i) / (k3 alpha)
};

/// Break-even concentration of the first population at rate D.
inline ExtReal S1_star(const ModelParams& p, double D) {
  return inv_monotone(p.mu1(), p.alpha() * D);
}

/// Break-even concentrations of the second population at rate D.
inline std::pair<ExtReal, ExtReal> S2_stars(const ModelParams& p, double D) {
  const auto r = inv_haldane(p.mu2(), p.alpha() * D);
  return {r.low, r.high};
}

inline ExtReal H_function(const ModelParams& p, int i, double D) {
  const auto [s21, s22] = S2_stars(p, D);
  return (i == 1 ? s21 : s22) + p.yield_ratio() * S1_star(p, D);
}

inline AuxValues aux(const ModelParams& p, const OperatingPoint& pt) {
  pt.validate();
  AuxValues a;
  a.D1 = p.D1();
  a.D2 = p.D2();
  a.S2M = p.S2M();
  a.S1star = S1_star(p, pt.D);
  std::tie(a.S2star1, a.S2star2) = S2_stars(p, pt.D);
  const double k = p.yield_ratio();
  a.H1 = a.S2star1 + k * a.S1star;
  a.H2 = a.S2star2 + k * a.S1star;
  a.combined_input = pt.S2in + k * pt.S1in;

  const double ka1 = p.k1() * p.alpha();
  const double ka3 = p.k3() * p.alpha();
  if (pt.S1in > a.S1star) {
    const double s1 = a.S1star.value();
    a.S2inStar = pt.S2in + k * (pt.S1in - s1);
    a.X1star = (pt.S1in - s1) / ka1;
    if (a.combined_input > a.H1) a.X2star1 = (*a.S2inStar - a.S2star1.value()) / ka3;
    if (a.combined_input > a.H2) a.X2star2 = (*a.S2inStar - a.S2star2.value()) / ka3;
  }
  if (pt.S2in > a.S2star1) a.X21 = (pt.S2in - a.S2star1.value()) / ka3;
  if (pt.S2in > a.S2star2) a.X22 = (pt.S2in - a.S2star2.value()) / ka3;
  return a;
}

}  // namespace am2
