#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "am2/equilibria.hpp"
#include "am2/numeric.hpp"
#include "am2/regions.hpp"

namespace am2 {

enum class EventKind { Transcritical, SaddleNode, CodimensionTwo, NoCollision };

inline constexpr std::string_view event_kind_name(EventKind k) {
  constexpr std::array<std::string_view, 4> n{"TB", "SNB", "CODIM2", "NONE"};
  return n[static_cast<int>(k)];
}
inline std::optional<EventKind> event_kind_from_name(std::string_view s) {
  for (int i = 0; i < 4; ++i) {
    const auto k = static_cast<EventKind>(i);
    if (event_kind_name(k) == s) return k;
  }
  return std::nullopt;
}

struct StatePair {
  StateLabel first;
  StateLabel second;
  bool operator==(const StatePair&) const = default;
};

inline std::string pair_name(const StatePair& p) {
  return std::string(label_name(p.first)) + "=" + std::string(label_name(p.second));
}

struct BifurcationEvent {
  double D = 0.0;
  EventKind kind = EventKind::NoCollision;
  std::vector<StatePair> pairs;  // several pairs collide at once on some surfaces
  std::vector<GammaId> gammas;   // one, or two for a codimension-two candidate
  std::optional<RegionId> before, after;
};

/// Bifurcation type and colliding states for a point lying on `gamma`.
inline BifurcationEvent classify_event(const ModelParams& p, const OperatingPoint& pt,
                                       GammaId gamma) {
  using L = StateLabel;
  const auto a = aux(p, pt);
  BifurcationEvent ev;
  ev.D = pt.D;
  ev.gammas = {gamma};
  ev.kind = EventKind::Transcritical;
  const double s2in = pt.S2in, s1in = pt.S1in;
  auto codim2 = [&]() {
    ev.kind = EventKind::CodimensionTwo;
    ev.pairs.clear();
    return ev;
  };
  switch (gamma) {
    case GammaId::G1:
      ev.pairs = {{L::E10, L::E20}};
      if (s2in == a.S2star1 || s2in == a.S2star2) return codim2();
      if (s2in > a.S2star1) ev.pairs.push_back({L::E11, L::E21});
      if (s2in > a.S2star2) ev.pairs.push_back({L::E12, L::E22});
      return ev;
    case GammaId::G2: ev.pairs = {{L::E10, L::E11}}; return ev;
    case GammaId::G3: ev.pairs = {{L::E10, L::E12}}; return ev;
    case GammaId::G4: ev.pairs = {{L::E20, L::E21}}; return ev;
    case GammaId::G5: ev.pairs = {{L::E20, L::E22}}; return ev;
    case GammaId::G6: break;
  }
  ev.kind = EventKind::SaddleNode;
  const double S2M = a.S2M;
  if (s2in == S2M) return codim2();
  if (a.D2 < a.D1) {
    const double s1_at_d2 = S1_star(p, a.D2).value();
    if (s2in < S2M) {
      const double threshold = s1_at_d2 + (S2M - s2in) / p.yield_ratio();
      if (s1in == threshold) return codim2();
      if (s1in > threshold) ev.pairs = {{L::E21, L::E22}};
    } else {
      if (s1in == s1_at_d2) return codim2();
      if (s1in > s1_at_d2) {
        ev.pairs = {{L::E11, L::E12}, {L::E21, L::E22}};
      } else {
        ev.pairs = {{L::E11, L::E12}};
      }
    }
  } else if (s2in > S2M) {
    ev.pairs = {{L::E11, L::E12}};
  }
  if (ev.pairs.empty()) ev.kind = EventKind::NoCollision;
  return ev;
}

struct BranchSample {
  double D;
  State x;
  Stability status;
};

/// Samples of one steady state along a scan; Absent stretches are left out.
struct Branch {
  StateLabel label;
  std::vector<BranchSample> samples;
};

struct ScanResult {
  std::vector<BifurcationEvent> events;  // increasing D
  std::vector<Branch> branches;          // one per label, E10..E22
  double D_min = 0.0, D_max = 0.0;
  std::size_t n = 0;
  double step() const { return (D_max - D_min) / static_cast<double>(n - 1); }
};

namespace detail {

inline double gamma_along_D(const ModelParams& p, GammaId g, double D, double S1in,
                            double S2in) {
  return gamma_value(p, g, {D, S1in, S2in}).value;
}

inline bool gamma_in_domain(const ModelParams& p, GammaId g, double D, double S1in,
                            double S2in) {
  return gamma_value(p, g, {D, S1in, S2in}).in_domain;
}

inline std::optional<RegionId> region_near(const ModelParams& p, double D, double S1in,
                                           double S2in) {
  const OperatingPoint pt{D, S1in, S2in};
  return region_of(aux(p, pt), pt);
}

}  // namespace detail

/// Scans D on a uniform grid of n points and locates every crossing of a
/// boundary surface, refined by bisection on that surface's residual.
inline ScanResult scan_D(const ModelParams& p, double S1in, double S2in, double D_min,
                         double D_max, std::size_t n = 2000) {
  if (!(D_min > 0.0) || !(D_max > D_min) || !std::isfinite(D_max)) {
    throw std::invalid_argument("scan_D: need 0 < D_min < D_max");
  }
  if (n < 100) throw std::invalid_argument("scan_D: n must be >= 100");
  OperatingPoint{D_min, S1in, S2in}.validate();

  ScanResult res;
  res.D_min = D_min;
  res.D_max = D_max;
  res.n = n;
  const double h = res.step();
  auto D_at = [&](std::size_t j) {
    return j + 1 == n ? D_max : D_min + h * static_cast<double>(j);
  };

  struct Root {
    double D;
    GammaId g;
  };
  std::vector<Root> roots;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double a = D_at(j), b = D_at(j + 1);
    for (auto g : kAllGammas) {
      const bool in_a = detail::gamma_in_domain(p, g, a, S1in, S2in);
      const bool in_b = detail::gamma_in_domain(p, g, b, S1in, S2in);
      if (!in_a && !in_b) continue;
      double lo = a, hi = b;
      if (in_a != in_b) {
        // The surface's domain ends inside this cell: keep the part where it
        // is defined, up to the last representable in-domain rate.
        double x = a, y = b;
        while (true) {
          const double m = 0.5 * (x + y);
          if (m <= x || m >= y) break;
          (detail::gamma_in_domain(p, g, m, S1in, S2in) == in_a ? x : y) = m;
        }
        if (in_a) {
          hi = x;
        } else {
          lo = y;
        }
        if (!(hi > lo)) continue;
      }
      const double fa = detail::gamma_along_D(p, g, lo, S1in, S2in);
      const double fb = detail::gamma_along_D(p, g, hi, S1in, S2in);
      double r;
      if (fa == 0.0) {
        if (lo == a && j != 0) continue;  // counted as the right end of the previous cell
        r = lo;
      } else if (fb == 0.0) {
        r = hi;
      } else if ((fa < 0.0) != (fb < 0.0)) {
        r = numeric::bisect([&](double D) { return detail::gamma_along_D(p, g, D, S1in, S2in); },
                            lo, hi, 0.0, 1e-15);
      } else {
        continue;
      }
      roots.push_back({r, g});
    }
  }
  // Crossings of the saddle-node rate where no pair of states exists are not
  // bifurcations and must not pair up with a genuine event nearby.
  std::erase_if(roots, [&](const Root& r) {
    return r.g == GammaId::G6 &&
           classify_event(p, {r.D, S1in, S2in}, r.g).kind == EventKind::NoCollision;
  });
  std::sort(roots.begin(), roots.end(), [](const Root& x, const Root& y) {
    return x.D < y.D || (x.D == y.D && x.g < y.g);
  });

  constexpr double kCoincide = 1e-6;
  for (std::size_t i = 0; i < roots.size();) {
    std::size_t k = i + 1;
    while (k < roots.size() && roots[k].D - roots[i].D < kCoincide) ++k;
    BifurcationEvent ev;
    if (k - i == 1) {
      ev = classify_event(p, {roots[i].D, S1in, S2in}, roots[i].g);
    } else {
      ev.D = roots[i].D;
      ev.kind = EventKind::CodimensionTwo;
      for (std::size_t m = i; m < k; ++m) ev.gammas.push_back(roots[m].g);
    }
    if (ev.kind != EventKind::NoCollision) res.events.push_back(ev);
    i = k;
  }

  for (std::size_t e = 0; e < res.events.size(); ++e) {
    auto& ev = res.events[e];
    double gap = 1e-6 * std::max(1.0, ev.D);
    if (e > 0) gap = std::min(gap, 0.5 * (ev.D - res.events[e - 1].D));
    if (e + 1 < res.events.size()) gap = std::min(gap, 0.5 * (res.events[e + 1].D - ev.D));
    if (ev.D - gap > 0.0) ev.before = detail::region_near(p, ev.D - gap, S1in, S2in);
    ev.after = detail::region_near(p, ev.D + gap, S1in, S2in);
  }

  for (auto l : kAllLabels) res.branches.push_back({l, {}});
  for (std::size_t j = 0; j < n; ++j) {
    const double D = D_at(j);
    const auto ss = steady_states(p, {D, S1in, S2in});
    for (int i = 0; i < 6; ++i) {
      if (ss[i].exists()) res.branches[i].samples.push_back({D, ss[i].x, ss[i].status});
    }
  }
  return res;
}

/// Named dilution rates at which a line of constant (S1in, S2in) crosses the
/// boundary surfaces.
struct DkValues {
  double D2 = 0.0;                   // saddle-node rate mu2(S2M)/alpha
  std::optional<double> D_washout;   // mu1(S1in)/alpha, first population
  std::optional<double> D_s2;        // mu2(S2in)/alpha, second population alone
  std::vector<double> H1_roots;      // S1in + (k1/k2) S2in = (k1/k2) H1(D)
  std::vector<double> H2_roots;      // same with H2, up to three roots
};

inline DkValues solve_Dk(const ModelParams& p, double S1in, double S2in) {
  OperatingPoint{1.0, S1in, S2in}.validate();
  DkValues v;
  v.D2 = p.D2();
  if (S1in > 0.0) v.D_washout = p.mu1().value(S1in) / p.alpha();
  if (S2in > 0.0) v.D_s2 = p.mu2().value(S2in) / p.alpha();

  const double inv_k = 1.0 / p.yield_ratio();
  const double lhs = S1in + inv_k * S2in;
  const double lo = 1e-6, hi = std::min(p.D1(), p.D2()) - 1e-9;
  constexpr std::size_t kNodes = 4096;
  for (int i = 1; i <= 2; ++i) {
    auto f = [&](double D) { return inv_k * H_function(p, i, D).value() - lhs; };
    auto& out = i == 1 ? v.H1_roots : v.H2_roots;
    double prev_D = lo, prev_f = f(lo);
    for (std::size_t j = 1; j < kNodes; ++j) {
      const double D = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(kNodes - 1);
      const double fd = f(D);
      if (prev_f == 0.0) {
        out.push_back(prev_D);
      } else if (fd != 0.0 && (prev_f < 0.0) != (fd < 0.0)) {
        out.push_back(numeric::bisect(f, prev_D, D, 1e-10, 0.0));
      }
      prev_D = D;
      prev_f = fd;
    }
    if (prev_f == 0.0) out.push_back(prev_D);
  }
  return v;
}

}  // namespace am2
