// am2-atlas: steady states, operating diagrams, bifurcation scans and
// simulations of the two-step anaerobic digestion model.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "am2/am2.hpp"

namespace fs = std::filesystem;
using namespace am2;

namespace {

enum Exit { kOk = 0, kUsage = 2, kIo = 3, kNumeric = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string preset;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> resolution;
};

Config load(const Globals& g) {
  Config c;
  if (!g.config.empty()) {
    try {
      c = load_config(g.config);
    } catch (const std::ios_base::failure& e) {
      throw IoError(e.what());
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
  }
  if (!g.preset.empty()) {
    try {
      c.set("preset", g.preset);
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
  }
  return c;
}

ModelParams params_of(const Config& c) {
  try {
    return c.params();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

fs::path out_dir(const Globals& g, const Config& c) {
  std::string dir = g.out;
  if (dir.empty()) {
    if (const auto d = c.get("output.dir")) {
      dir = *d;
    } else if (const char* env = std::getenv("AM2_ATLAS_OUT")) {
      dir = env;
    } else {
      dir = ".";
    }
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
  return dir;
}

bool flag_on(const Config& c, const std::string& key) {
  const auto v = c.get(key);
  return !v || *v == "true";
}

template <class Writer>
void write_file(const fs::path& path, Writer&& w) {
  std::ostringstream buf;
  w(buf);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write '" + path.string() + "'");
  os << buf.str();
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

OperatingPoint point(double D, double s1, double s2) {
  const OperatingPoint pt{D, s1, s2};
  if (!pt.valid()) throw UsageError("invalid operating point: need D > 0, S1in >= 0, S2in >= 0");
  return pt;
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

std::string gamma_list(const std::vector<GammaId>& gs) {
  std::string s;
  for (auto g : gs) s += (s.empty() ? "" : ",") + std::string(gamma_name(g));
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operating diagrams and bifurcations of the two-step digestion model"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--preset", g.preset, "Parameter preset: caseA, caseB or caseC");
  app.add_option("--config", g.config, "key = value parameter file");
  app.add_option("--out", g.out, "Output directory (default: $AM2_ATLAS_OUT or .)");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--resolution", g.resolution, "Diagram raster size per axis")
      ->check(CLI::PositiveNumber);

  double D = 0, s1 = 0, s2 = 0;
  auto add_point = [&](CLI::App* sc) {
    sc->add_option("--D", D, "Dilution rate (1/d)")->required();
    sc->add_option("--s1in", s1, "Influent S1 (g/L)")->required();
    sc->add_option("--s2in", s2, "Influent S2 (mmol/L)")->required();
  };

  auto* ss = app.add_subcommand("steady-states", "Six steady states with their status");
  add_point(ss);
  bool ss_csv = false;
  ss->add_flag("--csv", ss_csv, "Also write steady_states.csv");

  auto* cl = app.add_subcommand("classify", "Region, colour and boundary surfaces of a point");
  add_point(cl);

  auto* dg = app.add_subcommand("diagram", "Operating-diagram cut as SVG and CSV");
  std::string plane_s;
  double fixed = 0;
  std::optional<double> xmin, xmax, ymin, ymax;
  dg->add_option("--plane", plane_s, "s1s2 (D fixed) or ds1 (S2in fixed)")
      ->required()
      ->check(CLI::IsMember({"s1s2", "ds1"}));
  dg->add_option("--fixed", fixed, "Value of the fixed parameter")->required();
  dg->add_option("--xmin", xmin);
  dg->add_option("--xmax", xmax);
  dg->add_option("--ymin", ymin);
  dg->add_option("--ymax", ymax);

  auto* bf = app.add_subcommand("bifurcate", "Scan D at fixed influent concentrations");
  double dmin = 0.01, dmax = 0;
  std::size_t npts = 2000;
  bf->add_option("--s1in", s1)->required();
  bf->add_option("--s2in", s2)->required();
  bf->add_option("--dmin", dmin, "Lower end of the scan");
  bf->add_option("--dmax", dmax, "Upper end of the scan (default 1.25 max(D1, D2))");
  bf->add_option("--n", npts, "Grid points");

  auto* sm = app.add_subcommand("simulate", "Integrate from an initial state");
  add_point(sm);
  std::vector<double> x0;
  double tmax = 1000.0;
  sm->add_option("--x0", x0, "Initial S1,X1,S2,X2 (default: random from the seed)")
      ->delimiter(',')
      ->expected(4);
  sm->add_option("--tmax", tmax, "Final time (d)");

  auto* ch = app.add_subcommand("check-hypotheses", "Sample both growth laws for shape violations");
  std::size_t grid_n = 1000;
  ch->add_option("--grid", grid_n, "Samples per law");

  auto* hc = app.add_subcommand("h-case", "Shape of the H2 threshold curve");
  std::size_t hc_n = 1024;
  hc->add_option("--samples", hc_n, "Chebyshev nodes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    const Config cfg = load(g);
    const ModelParams p = params_of(cfg);
    std::ostream& out = std::cout;

    if (*ss) {
      const auto pt = point(D, s1, s2);
      const auto states = steady_states(p, pt);
      out << pad("label", 6) << pad("S1", 16) << pad("X1", 16) << pad("S2", 16) << pad("X2", 16)
          << "status\n";
      for (const auto& s : states) {
        out << pad(std::string(label_name(s.label)), 6);
        for (double v : s.x.to_array()) out << pad(s.exists() ? io::num(v) : "-", 16);
        out << stability_name(s.status) << '\n';
      }
      if (ss_csv) {
        const auto dir = out_dir(g, cfg);
        write_file(dir / "steady_states.csv", [&](std::ostream& os) {
          os << "label,S1,X1,S2,X2,status\n";
          for (const auto& s : states) {
            os << label_name(s.label);
            for (double v : s.x.to_array()) os << ',' << io::num(v);
            os << ',' << stability_name(s.status) << '\n';
          }
        });
      }
      return kOk;
    }

    if (*cl) {
      const auto pt = point(D, s1, s2);
      const auto c = classify(p, pt);
      if (c.on_boundary()) out << "boundary " << gamma_list(c.boundary) << '\n';
      if (c.region) {
        out << "region " << region_name(*c.region) << '\n'
            << "color " << color_name(region_color(*c.region)) << '\n';
      }
      out << "states";
      for (const auto& s : steady_states(p, pt)) {
        if (s.exists()) out << ' ' << label_name(s.label) << ':' << stability_name(s.status);
      }
      out << '\n';
      return kOk;
    }

    if (*dg) {
      const Plane plane = *plane_from_name(plane_s);
      std::size_t res = 800;
      if (const auto r = cfg.get("grid.resolution")) res = std::stoul(*r);
      if (g.resolution) res = *g.resolution;
      Grid grid = default_grid(p, plane, res);
      if (xmin) grid.x_min = *xmin;
      if (xmax) grid.x_max = *xmax;
      if (ymin) grid.y_min = *ymin;
      if (ymax) grid.y_max = *ymax;
      DiagramCut cut;
      try {
        grid.validate();
        cut = plane == Plane::S1S2 ? cut_s1s2(p, fixed, grid) : cut_ds1(p, fixed, grid);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const auto dir = out_dir(g, cfg);
      const std::string stem = "diagram_" + std::string(plane_name(plane)) + "_" + io::num(fixed);
      if (flag_on(cfg, "output.svg")) {
        write_file(dir / (stem + ".svg"), [&](std::ostream& os) { io::write_diagram_svg(os, cut); });
      }
      if (flag_on(cfg, "output.csv")) {
        write_file(dir / (stem + ".csv"), [&](std::ostream& os) { io::write_raster_csv(os, cut); });
        write_file(dir / (stem + "_boundaries.csv"),
                   [&](std::ostream& os) { io::write_polylines_csv(os, cut); });
      }
      out << "regions";
      for (auto r : cut.inventory()) out << ' ' << region_name(r);
      out << '\n';
      return kOk;
    }

    if (*bf) {
      if (dmax == 0.0) dmax = 1.25 * std::max(p.D1(), p.D2());
      if (!(dmin > 0.0) || !(dmax > dmin)) throw UsageError("empty D range");
      if (npts < 100) throw UsageError("--n must be >= 100");
      point(dmin, s1, s2);
      const auto scan = scan_D(p, s1, s2, dmin, dmax, npts);
      out << pad("D", 14) << pad("kind", 8) << pad("pair", 24) << pad("gamma", 8) << "regions\n";
      for (const auto& e : scan.events) {
        out << pad(io::num(e.D), 14) << pad(std::string(event_kind_name(e.kind)), 8)
            << pad(e.pairs.empty() ? "-" : io::join_pairs(e.pairs), 24)
            << pad(io::join_gammas(e.gammas), 8)
            << (e.before ? region_name(*e.before) : "-") << "->"
            << (e.after ? region_name(*e.after) : "-") << '\n';
      }
      const auto dir = out_dir(g, cfg);
      const std::string stem = "bifurcate_" + io::num(s1) + "_" + io::num(s2);
      if (flag_on(cfg, "output.csv")) {
        write_file(dir / (stem + "_events.csv"),
                   [&](std::ostream& os) { io::write_events_csv(os, scan); });
        write_file(dir / (stem + "_branches.csv"),
                   [&](std::ostream& os) { io::write_branches_csv(os, scan); });
      }
      if (flag_on(cfg, "output.svg")) {
        write_file(dir / (stem + "_X1.svg"), [&](std::ostream& os) {
          io::write_bifurcation_svg(os, scan, io::BiomassAxis::X1);
        });
        write_file(dir / (stem + "_X2.svg"), [&](std::ostream& os) {
          io::write_bifurcation_svg(os, scan, io::BiomassAxis::X2);
        });
      }
      return kOk;
    }

    if (*sm) {
      const auto pt = point(D, s1, s2);
      if (!(tmax > 0.0)) throw UsageError("--tmax must be positive");
      State start;
      if (x0.empty()) {
        std::mt19937_64 rng(g.seed ? *g.seed : cfg.seed());
        start = random_initial_state(p, pt, rng);
      } else {
        start = State{x0[0], x0[1], x0[2], x0[3]};
        for (double v : x0) {
          if (!(v >= 0.0) || !std::isfinite(v)) throw UsageError("--x0 components must be >= 0");
        }
      }
      const auto tr = integrate(p, pt, start, tmax);
      const auto dir = out_dir(g, cfg);
      write_file(dir / "trajectory.csv", [&](std::ostream& os) { io::write_trajectory_csv(os, tr); });
      const auto& last = tr.back();
      out << "terminal " << terminal_name(tr.terminal);
      if (tr.converged_to) out << ' ' << label_name(*tr.converged_to);
      out << "\nt " << io::num(last.t) << "\nstate";
      for (double v : last.x.to_array()) out << ' ' << io::num(v);
      out << "\nQCH4 " << io::num(last.qch4) << '\n';
      return kOk;
    }

    if (*ch) {
      if (grid_n < 100) throw UsageError("--grid must be >= 100");
      bool all = true;
      for (int i = 1; i <= 2; ++i) {
        const auto rep = check_hypotheses(i == 1 ? p.mu1() : p.mu2(), grid_n);
        all = all && rep.pass;
        out << "mu" << i << ' ' << (rep.pass ? "pass" : "fail");
        if (rep.maximizer_bracket) {
          out << " maximizer in [" << io::num(rep.maximizer_bracket->first) << ", "
              << io::num(rep.maximizer_bracket->second) << "]";
        }
        out << '\n';
        for (const auto& v : rep.violations) out << "  " << v << '\n';
      }
      return all ? kOk : kNumeric;
    }

    if (*hc) {
      if (hc_n < 256) throw UsageError("--samples must be >= 256");
      const auto rep = h_case(p, hc_n);
      out << "case " << hcase_name(rep.kind) << (rep.degenerate ? " degenerate" : "") << '\n'
          << "D1 " << io::num(rep.D1) << "\nD2 " << io::num(rep.D2) << '\n';
      for (const auto& e : rep.extrema) {
        out << (e.is_min ? "min" : "max") << " D " << io::num(e.D) << " scaled_H2 "
            << io::num(e.scaled_H2) << '\n';
      }
      if (rep.scaled_H2_at_D2) out << "scaled_H2_at_D2 " << io::num(*rep.scaled_H2_at_D2) << '\n';
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const IntegrationError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumeric;
  }
  return kUsage;
}
