#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "am2/bifurcations.hpp"
#include "am2/config.hpp"
#include "am2/cuts.hpp"
#include "am2/simulate.hpp"

namespace am2::io {

/// Nine significant digits; infinities as "inf".
inline std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::vector<std::string> split(std::string_view line, char sep = ',') {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline CsvTable read_csv(std::istream& in, const std::vector<std::string>& expected_header) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw CsvError("empty CSV");
  t.header = split(line);
  if (t.header != expected_header) throw CsvError("unexpected CSV header: " + line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.header.size()) throw CsvError("wrong field count: " + line);
    t.rows.push_back(std::move(cells));
  }
  return t;
}

inline double to_double(const std::string& s) {
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  const auto v = am2::detail::parse_double(s);
  if (!v) throw CsvError("not a number: '" + s + "'");
  return *v;
}

// ---- raster -------------------------------------------------------------

inline void write_raster_csv(std::ostream& os, const DiagramCut& c) {
  os << "D,S1in,S2in,region\n";
  for (std::size_t j = 0; j < c.grid.ny; ++j) {
    for (std::size_t i = 0; i < c.grid.nx; ++i) {
      const auto pt = c.point(i, j);
      os << num(pt.D) << ',' << num(pt.S1in) << ',' << num(pt.S2in) << ','
         << region_name(c.at(i, j)) << '\n';
    }
  }
}

struct RasterRow {
  OperatingPoint pt;
  RegionId region;
};

inline std::vector<RasterRow> read_raster_csv(std::istream& in) {
  const auto t = read_csv(in, {"D", "S1in", "S2in", "region"});
  std::vector<RasterRow> out;
  out.reserve(t.rows.size());
  for (const auto& r : t.rows) {
    const auto reg = region_from_name(r[3]);
    if (!reg) throw CsvError("unknown region '" + r[3] + "'");
    out.push_back({{to_double(r[0]), to_double(r[1]), to_double(r[2])}, *reg});
  }
  return out;
}

// ---- boundary polylines -------------------------------------------------

/// Piece names: the first piece of a surface is "G5", later ones "G5:1", ...
inline std::vector<std::string> polyline_names(const std::vector<Polyline>& ps) {
  std::map<GammaId, int> seen;
  std::vector<std::string> names;
  for (const auto& p : ps) {
    const int k = seen[p.gamma]++;
    std::string n(gamma_name(p.gamma));
    if (k > 0) n += ":" + std::to_string(k);
    names.push_back(n);
  }
  return names;
}

inline void write_polylines_csv(std::ostream& os, const DiagramCut& c) {
  os << "gamma,param,x,y\n";
  const auto names = polyline_names(c.boundaries);
  for (std::size_t k = 0; k < c.boundaries.size(); ++k) {
    for (const auto& [x, y] : c.boundaries[k].points) {
      os << names[k] << ',' << num(c.fixed) << ',' << num(x) << ',' << num(y) << '\n';
    }
  }
}

struct PolylineCsv {
  double param = 0.0;
  std::vector<Polyline> lines;
};

inline PolylineCsv read_polylines_csv(std::istream& in) {
  const auto t = read_csv(in, {"gamma", "param", "x", "y"});
  PolylineCsv out;
  std::string current;
  for (const auto& r : t.rows) {
    const auto base = r[0].substr(0, r[0].find(':'));
    const auto g = gamma_from_name(base);
    if (!g) throw CsvError("unknown surface '" + r[0] + "'");
    out.param = to_double(r[1]);
    if (r[0] != current || out.lines.empty()) {
      out.lines.push_back({*g, {}});
      current = r[0];
    }
    out.lines.back().points.emplace_back(to_double(r[2]), to_double(r[3]));
  }
  return out;
}

// ---- bifurcation scans --------------------------------------------------

inline void write_branches_csv(std::ostream& os, const ScanResult& s) {
  os << "label,D,S1,X1,S2,X2,status\n";
  for (const auto& b : s.branches) {
    for (const auto& smp : b.samples) {
      os << label_name(b.label) << ',' << num(smp.D) << ',' << num(smp.x.S1) << ','
         << num(smp.x.X1) << ',' << num(smp.x.S2) << ',' << num(smp.x.X2) << ','
         << stability_name(smp.status) << '\n';
    }
  }
}

inline std::vector<Branch> read_branches_csv(std::istream& in) {
  const auto t = read_csv(in, {"label", "D", "S1", "X1", "S2", "X2", "status"});
  std::vector<Branch> out;
  for (const auto& r : t.rows) {
    const auto l = label_from_name(r[0]);
    const auto st = stability_from_name(r[6]);
    if (!l || !st) throw CsvError("bad branch row");
    if (out.empty() || out.back().label != *l) out.push_back({*l, {}});
    out.back().samples.push_back(
        {to_double(r[1]),
         State{to_double(r[2]), to_double(r[3]), to_double(r[4]), to_double(r[5])}, *st});
  }
  return out;
}

inline std::string join_pairs(const std::vector<StatePair>& ps) {
  std::string s;
  for (const auto& p : ps) s += (s.empty() ? "" : ";") + pair_name(p);
  return s;
}

inline std::string join_gammas(const std::vector<GammaId>& gs) {
  std::string s;
  for (auto g : gs) s += (s.empty() ? "" : ";") + std::string(gamma_name(g));
  return s;
}

inline void write_events_csv(std::ostream& os, const ScanResult& s) {
  os << "D,kind,pair,gamma\n";
  for (const auto& e : s.events) {
    os << num(e.D) << ',' << event_kind_name(e.kind) << ',' << join_pairs(e.pairs) << ','
       << join_gammas(e.gammas) << '\n';
  }
}

inline std::vector<BifurcationEvent> read_events_csv(std::istream& in) {
  const auto t = read_csv(in, {"D", "kind", "pair", "gamma"});
  std::vector<BifurcationEvent> out;
  for (const auto& r : t.rows) {
    BifurcationEvent e;
    e.D = to_double(r[0]);
    const auto k = event_kind_from_name(r[1]);
    if (!k) throw CsvError("unknown event kind '" + r[1] + "'");
    e.kind = *k;
    if (!r[2].empty()) {
      for (const auto& p : split(r[2], ';')) {
        const auto eq = p.find('=');
        const auto a = label_from_name(p.substr(0, eq));
        const auto b = eq == std::string::npos ? std::nullopt : label_from_name(p.substr(eq + 1));
        if (!a || !b) throw CsvError("bad state pair '" + p + "'");
        e.pairs.push_back({*a, *b});
      }
    }
    for (const auto& g : split(r[3], ';')) {
      const auto id = gamma_from_name(g);
      if (!id) throw CsvError("unknown surface '" + g + "'");
      e.gammas.push_back(*id);
    }
    out.push_back(std::move(e));
  }
  return out;
}

// ---- trajectories -------------------------------------------------------

inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os << "t,S1,X1,S2,X2,QCH4\n";
  for (const auto& s : tr.samples) {
    os << num(s.t) << ',' << num(s.x.S1) << ',' << num(s.x.X1) << ',' << num(s.x.S2) << ','
       << num(s.x.X2) << ',' << num(s.qch4) << '\n';
  }
}

inline std::vector<TrajectorySample> read_trajectory_csv(std::istream& in) {
  const auto t = read_csv(in, {"t", "S1", "X1", "S2", "X2", "QCH4"});
  std::vector<TrajectorySample> out;
  for (const auto& r : t.rows) {
    out.push_back({to_double(r[0]),
                   State{to_double(r[1]), to_double(r[2]), to_double(r[3]), to_double(r[4])},
                   to_double(r[5])});
  }
  return out;
}

// ---- SVG ----------------------------------------------------------------

namespace svg {

inline constexpr double kMargin = 60.0;

inline std::string_view gamma_stroke(GammaId g) {
  constexpr std::array<std::string_view, 6> c{"#000000", "#7f3f00", "#5a2d82",
                                              "#1a1a80", "#006400", "#b00000"};
  return c[static_cast<int>(g)];
}

inline std::string_view plane_x_label(Plane p) { return p == Plane::S1S2 ? "S1in" : "D"; }
inline std::string_view plane_y_label(Plane p) { return p == Plane::S1S2 ? "S2in" : "S1in"; }

inline void header(std::ostream& os, double w, double h) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\""
     << num(h) << "\" viewBox=\"0 0 " << num(w) << ' ' << num(h) << "\">\n";
}

inline void axes(std::ostream& os, double x0, double y0, double w, double h,
                 std::string_view xl, std::string_view yl, double xmin, double xmax,
                 double ymin, double ymax) {
  os << "<g id=\"axes\" stroke=\"#000000\" fill=\"none\">\n"
     << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(w)
     << "\" height=\"" << num(h) << "\"/>\n</g>\n"
     << "<g id=\"labels\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#000000\">\n"
     << "<text x=\"" << num(x0 + w / 2) << "\" y=\"" << num(y0 + h + 40) << "\">" << xl
     << "</text>\n"
     << "<text x=\"" << num(x0 - 50) << "\" y=\"" << num(y0 + h / 2) << "\">" << yl
     << "</text>\n"
     << "<text x=\"" << num(x0) << "\" y=\"" << num(y0 + h + 18) << "\">" << num(xmin)
     << "</text>\n"
     << "<text x=\"" << num(x0 + w - 40) << "\" y=\"" << num(y0 + h + 18) << "\">"
     << num(xmax) << "</text>\n"
     << "<text x=\"" << num(x0 - 50) << "\" y=\"" << num(y0 + h) << "\">" << num(ymin)
     << "</text>\n"
     << "<text x=\"" << num(x0 - 50) << "\" y=\"" << num(y0 + 12) << "\">" << num(ymax)
     << "</text>\n</g>\n";
}

}  // namespace svg

/// Operating diagram: one fill layer per colour built from run-length
/// rectangles, one stroke layer per surface, and a legend.
inline void write_diagram_svg(std::ostream& os, const DiagramCut& c) {
  const auto& g = c.grid;
  const double cell = std::max(1.0, 800.0 / static_cast<double>(std::max(g.nx, g.ny)));
  const double W = cell * static_cast<double>(g.nx), H = cell * static_cast<double>(g.ny);
  const double x0 = svg::kMargin, y0 = 20.0;
  svg::header(os, W + x0 + 200.0, H + y0 + svg::kMargin);
  auto px = [&](double x) { return x0 + (x - g.x_min) / (g.x_max - g.x_min) * W; };
  auto py = [&](double y) { return y0 + H - (y - g.y_min) / (g.y_max - g.y_min) * H; };

  for (int ci = 0; ci < 6; ++ci) {
    const auto col = static_cast<Color>(ci);
    std::string body;
    for (std::size_t j = 0; j < g.ny; ++j) {
      std::size_t i = 0;
      while (i < g.nx) {
        if (region_color(c.at(i, j)) != col) {
          ++i;
          continue;
        }
        std::size_t k = i;
        while (k < g.nx && region_color(c.at(k, j)) == col) ++k;
        body += "<rect x=\"" + num(x0 + cell * static_cast<double>(i)) + "\" y=\"" +
                num(y0 + H - cell * static_cast<double>(j + 1)) + "\" width=\"" +
                num(cell * static_cast<double>(k - i)) + "\" height=\"" + num(cell) + "\"/>\n";
        i = k;
      }
    }
    if (body.empty()) continue;
    os << "<g id=\"fill-" << color_name(col) << "\" fill=\"" << color_hex(col)
       << "\" stroke=\"none\">\n"
       << body << "</g>\n";
  }

  const auto names = polyline_names(c.boundaries);
  for (auto gid : kAllGammas) {
    std::string body;
    for (std::size_t k = 0; k < c.boundaries.size(); ++k) {
      if (c.boundaries[k].gamma != gid) continue;
      body += "<polyline data-name=\"" + names[k] + "\" points=\"";
      bool first = true;
      for (const auto& [x, y] : c.boundaries[k].points) {
        body += (first ? "" : " ") + num(px(x)) + "," + num(py(y));
        first = false;
      }
      body += "\"/>\n";
    }
    if (body.empty()) continue;
    os << "<g id=\"boundary-" << gamma_name(gid) << "\" stroke=\"" << svg::gamma_stroke(gid)
       << "\" stroke-width=\"1.5\" fill=\"none\">\n"
       << body << "</g>\n";
  }

  svg::axes(os, x0, y0, W, H, svg::plane_x_label(c.plane), svg::plane_y_label(c.plane),
            g.x_min, g.x_max, g.y_min, g.y_max);

  os << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"13\">\n";
  const auto inv = c.inventory();
  double ly = y0 + 10.0;
  for (auto r : kAllRegions) {
    if (!inv.count(r)) continue;
    os << "<rect x=\"" << num(x0 + W + 20) << "\" y=\"" << num(ly) << "\" width=\"14\" "
       << "height=\"14\" fill=\"" << color_hex(region_color(r)) << "\" stroke=\"#000000\"/>\n"
       << "<text x=\"" << num(x0 + W + 40) << "\" y=\"" << num(ly + 12) << "\">"
       << region_name(r) << "</text>\n";
    ly += 20.0;
  }
  os << "</g>\n</svg>\n";
}

enum class BiomassAxis { X1, X2 };

inline std::string_view branch_color(StateLabel l) {
  constexpr std::array<std::string_view, 6> c{"#000000", "#808080", "#ff8c00",
                                              "#008000", "#ff0000", "#0000ff"};
  return c[static_cast<int>(l)];
}

/// Biomass versus D; stable stretches solid, unstable ones dotted.
inline void write_bifurcation_svg(std::ostream& os, const ScanResult& s, BiomassAxis axis) {
  const double W = 800.0, H = 500.0, x0 = svg::kMargin, y0 = 20.0;
  auto value = [&](const State& x) { return axis == BiomassAxis::X1 ? x.X1 : x.X2; };
  double ymax = 0.0;
  for (const auto& b : s.branches) {
    for (const auto& smp : b.samples) ymax = std::max(ymax, value(smp.x));
  }
  ymax = ymax > 0.0 ? 1.05 * ymax : 1.0;
  svg::header(os, W + x0 + 120.0, H + y0 + svg::kMargin);
  auto px = [&](double D) { return x0 + (D - s.D_min) / (s.D_max - s.D_min) * W; };
  auto py = [&](double y) { return y0 + H - y / ymax * H; };
  const double step = s.step();

  for (const auto& b : s.branches) {
    if (b.samples.empty()) continue;
    os << "<g id=\"branch-" << label_name(b.label) << "\" stroke=\"" << branch_color(b.label)
       << "\" stroke-width=\"2\" fill=\"none\">\n";
    std::size_t i = 0;
    while (i < b.samples.size()) {
      const bool stable = b.samples[i].status == Stability::GAS ||
                          b.samples[i].status == Stability::Stable;
      std::size_t k = i + 1;
      while (k < b.samples.size() && b.samples[k].D - b.samples[k - 1].D < 1.5 * step) {
        const bool st = b.samples[k].status == Stability::GAS ||
                        b.samples[k].status == Stability::Stable;
        if (st != stable) break;
        ++k;
      }
      os << "<polyline" << (stable ? "" : " stroke-dasharray=\"2,4\"") << " points=\"";
      for (std::size_t m = i; m < k; ++m) {
        os << (m == i ? "" : " ") << num(px(b.samples[m].D)) << ','
           << num(py(value(b.samples[m].x)));
      }
      os << "\"/>\n";
      i = k;
    }
    os << "</g>\n";
  }
  svg::axes(os, x0, y0, W, H, "D", axis == BiomassAxis::X1 ? "X1" : "X2", s.D_min, s.D_max,
            0.0, ymax);
  os << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"13\">\n";
  double ly = y0 + 10.0;
  for (const auto& b : s.branches) {
    if (b.samples.empty()) continue;
    os << "<line x1=\"" << num(x0 + W + 15) << "\" y1=\"" << num(ly + 6) << "\" x2=\""
       << num(x0 + W + 35) << "\" y2=\"" << num(ly + 6) << "\" stroke=\""
       << branch_color(b.label) << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << num(x0 + W + 40) << "\" y=\"" << num(ly + 11) << "\">"
       << label_name(b.label) << "</text>\n";
    ly += 20.0;
  }
  os << "</g>\n</svg>\n";
}

}  // namespace am2::io
