#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace am2 {

/// Nonnegative extended real: a finite value >= 0 or +infinity.
///
/// Threshold functions of the model (break-even concentrations, H-functions)
/// are set to +infinity outside their domain of definition, and the region
/// inequalities are then evaluated with ordinary ordering. This type keeps
/// that convention explicit instead of passing bare doubles around.
class ExtReal {
 public:
  constexpr ExtReal() = default;

  explicit ExtReal(double v) : value_(v) {
    if (std::isnan(v) || v < 0.0) {
      throw std::domain_error("ExtReal: value must be >= 0 or +inf");
    }
  }

  static constexpr ExtReal infinity() {
    ExtReal r;
    r.value_ = std::numeric_limits<double>::infinity();
    return r;
  }

  constexpr bool is_finite() const {
    return value_ != std::numeric_limits<double>::infinity();
  }
  constexpr bool is_infinite() const { return !is_finite(); }

  /// Underlying double; +inf for the infinite sentinel.
  constexpr double value() const { return value_; }

  friend constexpr auto operator<=>(ExtReal a, ExtReal b) {
    return a.value_ <=> b.value_;
  }
  friend constexpr bool operator==(ExtReal a, ExtReal b) {
    return a.value_ == b.value_;
  }
  friend constexpr auto operator<=>(ExtReal a, double b) { return a.value_ <=> b; }
  friend constexpr bool operator==(ExtReal a, double b) { return a.value_ == b; }

  friend ExtReal operator+(ExtReal a, ExtReal b) {
    return ExtReal(a.value_ + b.value_);
  }
  /// Scaling by a nonnegative factor; 0 * inf is taken as inf (the factor is
  /// always a positive model constant in practice).
  friend ExtReal operator*(double k, ExtReal a) {
    if (k < 0.0) throw std::domain_error("ExtReal: negative scale factor");
    if (a.is_infinite()) return infinity();
    return ExtReal(k * a.value_);
  }

  friend std::ostream& operator<<(std::ostream& os, ExtReal a) {
    if (a.is_infinite()) return os << "+inf";
    return os << a.value_;
  }

 private:
  double value_ = 0.0;
};

}  // namespace am2
