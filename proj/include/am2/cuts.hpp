#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "am2/regions.hpp"

namespace am2 {

enum class Plane { S1S2, DS1 };

inline constexpr std::string_view plane_name(Plane p) {
  return p == Plane::S1S2 ? "s1s2" : "ds1";
}
inline std::optional<Plane> plane_from_name(std::string_view s) {
  if (s == "s1s2") return Plane::S1S2;
  if (s == "ds1") return Plane::DS1;
  return std::nullopt;
}

/// Rectangular raster. x is S1in (s1s2) or D (ds1); y is S2in (s1s2) or S1in (ds1).
struct Grid {
  std::size_t nx = 800, ny = 800;
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;

  double dx() const { return (x_max - x_min) / static_cast<double>(nx); }
  double dy() const { return (y_max - y_min) / static_cast<double>(ny); }
  double x(std::size_t i) const { return x_min + (static_cast<double>(i) + 0.5) * dx(); }
  double y(std::size_t j) const { return y_min + (static_cast<double>(j) + 0.5) * dy(); }

  void validate() const {
    if (nx == 0 || ny == 0) throw std::invalid_argument("Grid: resolution must be positive");
    if (!(x_max > x_min) || !(y_max > y_min) || !std::isfinite(x_max) || !std::isfinite(y_max)) {
      throw std::invalid_argument("Grid: empty or non-finite bounds");
    }
  }
};

using Point2 = std::pair<double, double>;

struct Polyline {
  GammaId gamma;
  std::vector<Point2> points;
};

struct DiagramCut {
  Plane plane = Plane::S1S2;
  double fixed = 0.0;  // D for s1s2, S2in for ds1
  Grid grid;
  std::vector<RegionId> raster;  // row-major, row j = 0 at y_min
  std::vector<Polyline> boundaries;

  RegionId at(std::size_t i, std::size_t j) const { return raster[j * grid.nx + i]; }

  std::set<RegionId> inventory() const { return {raster.begin(), raster.end()}; }

  OperatingPoint point(std::size_t i, std::size_t j) const {
    const double x = grid.x(i), y = grid.y(j);
    return plane == Plane::S1S2 ? OperatingPoint{fixed, x, y} : OperatingPoint{x, y, fixed};
  }
};

/// Default bounds that frame every boundary curve of the presets.
inline Grid default_grid(const ModelParams& p, Plane plane, std::size_t resolution = 800) {
  Grid g;
  g.nx = g.ny = resolution;
  if (plane == Plane::S1S2) {
    g.x_max = 20.0;
    g.y_max = 150.0;
  } else {
    g.x_max = 1.25 * std::max(p.D1(), p.D2());
    g.y_max = 30.0;
  }
  return g;
}

namespace detail {

/// Region at a raster point; exact-boundary hits (measure zero) are nudged
/// into a neighbouring region.
inline RegionId raster_region(const ModelParams& p, OperatingPoint pt, double hx, double hy,
                              Plane plane) {
  for (int k = 0; k < 8; ++k) {
    if (auto r = region_of(aux(p, pt), pt)) return *r;
    const double e = 1e-9 * static_cast<double>(k + 1);
    if (plane == Plane::S1S2) {
      pt.S1in += e * hx;
      pt.S2in += e * hy;
    } else {
      pt.D += e * hx;
      pt.S1in += e * hy;
    }
  }
  throw std::runtime_error("raster_region: point could not be classified");
}

/// Clips segment a-b to the grid rectangle (Liang-Barsky).
inline std::optional<std::pair<Point2, Point2>> clip(const Grid& g, Point2 a, Point2 b) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = b.first - a.first, dy = b.second - a.second;
  const std::array<double, 4> pp{-dx, dx, -dy, dy};
  const std::array<double, 4> qq{a.first - g.x_min, g.x_max - a.first, a.second - g.y_min,
                                 g.y_max - a.second};
  for (int i = 0; i < 4; ++i) {
    if (pp[i] == 0.0) {
      if (qq[i] < 0.0) return std::nullopt;
      continue;
    }
    const double r = qq[i] / pp[i];
    if (pp[i] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
  }
  if (t0 > t1) return std::nullopt;
  return std::make_pair(Point2{a.first + t0 * dx, a.second + t0 * dy},
                        Point2{a.first + t1 * dx, a.second + t1 * dy});
}

inline void add_segment(std::vector<Polyline>& out, const Grid& g, GammaId id, Point2 a,
                        Point2 b) {
  if (auto s = clip(g, a, b)) out.push_back({id, {s->first, s->second}});
}

/// Samples y = f(x) on [lo, hi] where `valid(x)` holds, splitting into
/// pieces whenever the curve leaves the grid rectangle.
template <class F, class Valid>
void add_curve(std::vector<Polyline>& out, const Grid& g, GammaId id, double lo, double hi, F f,
               Valid valid, std::size_t n = 1024) {
  lo = std::max(lo, g.x_min);
  hi = std::min(hi, g.x_max);
  if (!(hi > lo)) return;
  Polyline cur{id, {}};
  auto flush = [&]() {
    if (cur.points.size() >= 2) out.push_back(cur);
    cur.points.clear();
  };
  for (std::size_t i = 0; i <= n; ++i) {
    // Endpoints are pulled in slightly so open-interval domains stay valid.
    double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    if (i == 0) x = lo + 1e-9 * (hi - lo);
    if (i == n) x = hi - 1e-9 * (hi - lo);
    if (!valid(x)) {
      flush();
      continue;
    }
    const double y = f(x);
    if (!std::isfinite(y) || y < g.y_min || y > g.y_max) {
      flush();
      continue;
    }
    cur.points.emplace_back(x, y);
  }
  flush();
}

template <class PointAt>
std::vector<RegionId> fill_raster(const ModelParams& p, const Grid& g, Plane plane,
                                  PointAt point_at) {
  std::vector<RegionId> raster(g.nx * g.ny);
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      raster[j * g.nx + i] = raster_region(p, point_at(i, j), g.dx(), g.dy(), plane);
    }
  }
  return raster;
}

}  // namespace detail

/// Cut of the operating space at constant dilution rate D.
inline DiagramCut cut_s1s2(const ModelParams& p, double D, const Grid& grid) {
  if (!(D > 0.0) || !std::isfinite(D)) throw std::invalid_argument("cut_s1s2: D must be > 0");
  grid.validate();
  DiagramCut c;
  c.plane = Plane::S1S2;
  c.fixed = D;
  c.grid = grid;
  c.raster = detail::fill_raster(p, grid, c.plane, [&](std::size_t i, std::size_t j) {
    return c.point(i, j);
  });

  const double D1 = p.D1(), D2 = p.D2(), k = p.yield_ratio();
  const ExtReal s1s = S1_star(p, D);
  const auto [s21, s22] = S2_stars(p, D);
  auto& b = c.boundaries;
  if (D < D1) {
    detail::add_segment(b, grid, GammaId::G1, {s1s.value(), grid.y_min},
                        {s1s.value(), grid.y_max});
  }
  if (D < D2) {
    detail::add_segment(b, grid, GammaId::G2, {grid.x_min, s21.value()},
                        {grid.x_max, s21.value()});
    detail::add_segment(b, grid, GammaId::G3, {grid.x_min, s22.value()},
                        {grid.x_max, s22.value()});
  }
  if (D < std::min(D1, D2)) {
    // S2in = H_i - k S1in for S1in > S1*, from (S1*, S2i*) down to the S1in axis.
    const double h1 = s21.value() + k * s1s.value(), h2 = s22.value() + k * s1s.value();
    detail::add_segment(b, grid, GammaId::G4, {s1s.value(), s21.value()}, {h1 / k, 0.0});
    detail::add_segment(b, grid, GammaId::G5, {s1s.value(), s22.value()}, {h2 / k, 0.0});
  }
  return c;
}

/// Cut of the operating space at constant S2in, with D on the x axis.
inline DiagramCut cut_ds1(const ModelParams& p, double S2in, const Grid& grid) {
  if (!(S2in >= 0.0) || !std::isfinite(S2in)) {
    throw std::invalid_argument("cut_ds1: S2in must be >= 0");
  }
  grid.validate();
  if (grid.x_min < 0.0) throw std::invalid_argument("cut_ds1: D axis must start at >= 0");
  DiagramCut c;
  c.plane = Plane::DS1;
  c.fixed = S2in;
  c.grid = grid;
  c.raster = detail::fill_raster(p, grid, c.plane, [&](std::size_t i, std::size_t j) {
    return c.point(i, j);
  });

  const double D1 = p.D1(), D2 = p.D2(), k = p.yield_ratio(), S2M = p.S2M();
  auto& b = c.boundaries;
  const double D_s2 = p.mu2().value(S2in) / p.alpha();
  if (D_s2 > 0.0 && D_s2 < D2) {
    const GammaId id = S2in < S2M ? GammaId::G2 : GammaId::G3;
    detail::add_segment(b, grid, id, {D_s2, grid.y_min}, {D_s2, grid.y_max});
  }
  detail::add_segment(b, grid, GammaId::G6, {D2, grid.y_min}, {D2, grid.y_max});
  detail::add_curve(
      b, grid, GammaId::G1, 0.0, D1, [&](double D) { return S1_star(p, D).value(); },
      [](double) { return true; });
  const double dmax = std::min(D1, D2);
  for (int i = 1; i <= 2; ++i) {
    const GammaId id = i == 1 ? GammaId::G4 : GammaId::G5;
    detail::add_curve(
        b, grid, id, 0.0, dmax,
        [&, i](double D) { return (H_function(p, i, D).value() - S2in) / k; },
        [&, i](double D) {
          const auto [s21, s22] = S2_stars(p, D);
          return S2in < (i == 1 ? s21 : s22);
        });
  }
  return c;
}

}  // namespace am2
