#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "am2/kinetics.hpp"

namespace am2 {

/// Biological constants of the two-step model plus its two growth laws.
///
/// k1: g S1 consumed per g X1; k2: mmol S2 produced per g X1;
/// k3: mmol S2 consumed per g X2; k4: methane yield (only scales Q_CH4);
/// alpha: fraction of biomass leaving with the flow, 0 < alpha <= 1.
class ModelParams {
 public:
  ModelParams(double k1, double k2, double k3, double k4, double alpha, GrowthLaw mu1,
              GrowthLaw mu2)
      : k1_(k1), k2_(k2), k3_(k3), k4_(k4), alpha_(alpha), mu1_(std::move(mu1)),
        mu2_(std::move(mu2)) {
    if (!(k1 > 0.0) || !(k2 > 0.0) || !(k3 > 0.0) || !(k4 > 0.0)) {
      throw std::invalid_argument("ModelParams: k1..k4 must be positive");
    }
    if (!(alpha > 0.0) || alpha > 1.0) {
      throw std::invalid_argument("ModelParams: alpha must lie in (0, 1]");
    }
    if (!mu1_.is_monotone()) throw std::invalid_argument("ModelParams: mu1 must be monotone");
    if (!mu2_.is_haldane_shaped()) {
      throw std::invalid_argument("ModelParams: mu2 must be Haldane-shaped");
    }
  }

  double k1() const { return k1_; }
  double k2() const { return k2_; }
  double k3() const { return k3_; }
  double k4() const { return k4_; }
  double alpha() const { return alpha_; }
  const GrowthLaw& mu1() const { return mu1_; }
  const GrowthLaw& mu2() const { return mu2_; }

  /// k2 / k1, the S1 -> S2 conversion factor that recurs everywhere.
  double yield_ratio() const { return k2_ / k1_; }

  /// Washout rate of the first population: sup mu1 / alpha.
  double D1() const { return mu1_.supremum() / alpha_; }
  /// Washout rate of the second population: mu2(S2M) / alpha.
  double D2() const { return mu2_.cached_peak()->mu / alpha_; }
  double S2M() const { return mu2_.cached_peak()->S; }

 private:
  double k1_, k2_, k3_, k4_, alpha_;
  GrowthLaw mu1_, mu2_;
};

/// Control parameters: dilution rate and the two influent concentrations.
struct OperatingPoint {
  double D;     // 1/d
  double S1in;  // g/L
  double S2in;  // mmol/L

  bool valid() const {
    return std::isfinite(D) && D > 0.0 && std::isfinite(S1in) && S1in >= 0.0 &&
           std::isfinite(S2in) && S2in >= 0.0;
  }
  void validate() const {
    if (!valid()) {
      throw std::invalid_argument("OperatingPoint: need D > 0, S1in >= 0, S2in >= 0");
    }
  }
};

/// Nominal parameter sets; they differ only in m1 (0.6 / 0.5 / 0.4).
enum class Preset { CaseA, CaseB, CaseC };

struct NominalValues {
  double m1, K1, m2, K2, KI, alpha, k1, k2, k3, k4;
};

inline NominalValues nominal_values(Preset p) {
  NominalValues v{0.6, 2.1, 0.95, 24.0, 55.0, 0.5, 25.0, 250.0, 268.0, 1.0};
  switch (p) {
    case Preset::CaseA: v.m1 = 0.6; break;
    case Preset::CaseB: v.m1 = 0.5; break;
    case Preset::CaseC: v.m1 = 0.4; break;
  }
  return v;
}

inline ModelParams make_params(const NominalValues& v) {
  return ModelParams(v.k1, v.k2, v.k3, v.k4, v.alpha, GrowthLaw(Monod{v.m1, v.K1}),
                     GrowthLaw(Haldane{v.m2, v.K2, v.KI}));
}

inline ModelParams preset(Preset p) { return make_params(nominal_values(p)); }

inline std::optional<Preset> preset_from_name(std::string_view name) {
  if (name == "caseA") return Preset::CaseA;
  if (name == "caseB") return Preset::CaseB;
  if (name == "caseC") return Preset::CaseC;
  return std::nullopt;
}

inline std::string_view preset_name(Preset p) {
  switch (p) {
    case Preset::CaseA: return "caseA";
    case Preset::CaseB: return "caseB";
    case Preset::CaseC: return "caseC";
  }
  return "";
}

inline constexpr std::array<Preset, 3> kAllPresets{Preset::CaseA, Preset::CaseB, Preset::CaseC};

}  // namespace am2
