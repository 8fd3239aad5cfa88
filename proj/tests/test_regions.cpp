#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "am2/cuts.hpp"
#include "am2/equilibria.hpp"
#include "oracles.hpp"

using namespace am2;

namespace {

const ModelParams& params(Preset p) {
  static const std::array<ModelParams, 3> all{preset(Preset::CaseA), preset(Preset::CaseB),
                                              preset(Preset::CaseC)};
  return all[static_cast<int>(p)];
}

std::set<RegionId> regions(std::initializer_list<int> ids) {
  std::set<RegionId> s;
  for (int i : ids) s.insert(static_cast<RegionId>(i));
  return s;
}

}  // namespace

TEST(Classify, UpperRightOfModerateDilutionIsRegionEight) {
  EXPECT_EQ(classify(params(Preset::CaseA), {0.7, 60, 120}).region, RegionId::I8);
}

TEST(Classify, JustAboveSaddleNodeRateOnlyWashoutRegions) {
  const auto& p = params(Preset::CaseA);
  const double s1 = aux(p, {0.82, 1, 1}).S1star.value();
  for (double s2 : {0.0, 10.0, 50.0, 140.0}) {
    EXPECT_EQ(classify(p, {0.82, 0.5 * s1, s2}).region, RegionId::I0);
    EXPECT_EQ(classify(p, {0.82, 2 * s1, s2}).region, RegionId::I3);
  }
}

TEST(Classify, CaseBHorizontalLine) {
  const auto& p = params(Preset::CaseB);
  EXPECT_EQ(classify(p, {0.55, 14, 0}).region, RegionId::I4);
  EXPECT_EQ(classify(p, {0.6, 14, 0}).region, RegionId::I5);
  EXPECT_EQ(classify(p, {0.7, 14, 0}).region, RegionId::I5);
}

TEST(Classify, SaddleNodeRateIsBoundary) {
  const auto& p = params(Preset::CaseA);
  const auto c = classify(p, {p.D2(), 5, 10});
  ASSERT_TRUE(c.on_boundary());
  EXPECT_NE(std::find(c.boundary.begin(), c.boundary.end(), GammaId::G6), c.boundary.end());
}

TEST(Classify, UpperBreakEvenBelongsToRegionOneAndBoundaryThree) {
  const auto& p = params(Preset::CaseA);
  const double D = 0.6;
  const double s1 = aux(p, {D, 1, 1}).S1star.value();
  const double s22 = aux(p, {D, 1, 1}).S2star2.value();
  const auto c = classify(p, {D, 0.5 * s1, s22});
  EXPECT_EQ(c.region, RegionId::I1);
  EXPECT_EQ(c.boundary, std::vector<GammaId>{GammaId::G3});
}

TEST(Classify, BoundaryPointsHaveSmallResidual) {
  const auto& p = params(Preset::CaseB);
  for (double D : {0.3, 0.5, 0.7}) {
    const double s1 = aux(p, {D, 1, 1}).S1star.value();
    const OperatingPoint pt{D, s1, 3.0};
    const auto c = classify(p, pt);
    ASSERT_TRUE(c.on_boundary());
    bool small = false;
    for (auto g : c.boundary) small = small || std::abs(gamma_value(p, g, pt).value) < 1e-9;
    EXPECT_TRUE(small);
  }
}

TEST(Classify, PartitionMatchesIndependentStatePattern) {
  std::mt19937_64 rng(17);
  int n_checked = 0;
  for (auto pr : kAllPresets) {
    const auto& p = params(pr);
    const auto o = oracle::nominal(nominal_values(pr).m1);
    std::uniform_real_distribution<double> uD(0.01, 1.3), u1(0, 30), u2(0, 150);
    for (int n = 0; n < 33334; ++n) {
      const OperatingPoint pt{uD(rng), u1(rng), u2(rng)};
      const auto c = classify(p, pt);
      ASSERT_TRUE(c.region.has_value());
      if (boundary_margin(p, pt) < 1e-6) continue;
      const int expect = oracle::region_from_pattern(oracle::pattern(o, pt.D, pt.S1in, pt.S2in));
      ASSERT_EQ(static_cast<int>(*c.region), expect)
          << "D=" << pt.D << " S1in=" << pt.S1in << " S2in=" << pt.S2in;
      const auto row = region_status_row(*c.region);
      const auto ss = steady_states(p, pt);
      for (int i = 0; i < 6; ++i) ASSERT_EQ(ss[i].status, row[i]);
      ++n_checked;
    }
  }
  EXPECT_GT(n_checked, 99000);
}

TEST(Classify, NoSecondPopulationOnlyRegionsWithoutInfluentS2) {
  std::mt19937_64 rng(4);
  const auto forbidden = regions({1, 2, 6, 7, 8});
  for (auto pr : kAllPresets) {
    std::uniform_real_distribution<double> uD(0.01, 1.3), u1(0, 40);
    for (int n = 0; n < 5000; ++n) {
      const auto r = classify(params(pr), {uD(rng), u1(rng), 0.0}).region;
      ASSERT_TRUE(r.has_value());
      EXPECT_EQ(forbidden.count(*r), 0u);
    }
  }
}

TEST(Classify, CaseBBistableToMonostableWithIncreasingDilution) {
  const auto& p = params(Preset::CaseB);
  EXPECT_EQ(classify(p, {0.7, 13, 0}).region, RegionId::I5);
  EXPECT_EQ(classify(p, {0.79, 13, 0}).region, RegionId::I4);
}

TEST(Colors, OnePerRegion) {
  const Color want[] = {Color::Red,  Color::Blue, Color::Cyan, Color::Yellow, Color::Green,
                        Color::Pink, Color::Green, Color::Pink, Color::Pink};
  for (int r = 0; r < 9; ++r) EXPECT_EQ(region_color(static_cast<RegionId>(r)), want[r]);
}

TEST(GammaValue, SaddleNodeRateIsZero) {
  const auto& p = params(Preset::CaseA);
  const auto r = gamma_value(p, GammaId::G6, {p.D2(), 3, 3});
  EXPECT_EQ(r.value, 0.0);
  EXPECT_TRUE(r.in_domain);
}

TEST(GammaValue, FirstBreakEvenCaseB) {
  const auto& p = params(Preset::CaseB);
  const auto r = gamma_value(p, GammaId::G1, {0.6, 3.15, 0});
  EXPECT_NEAR(r.value, 0.0, 1e-12);
  EXPECT_TRUE(r.in_domain);
}

TEST(GammaValue, UpperCoexistenceBoundaryAtMinimumOfH2) {
  const auto& p = params(Preset::CaseB);
  const double D = h_case(p).first_min()->D;
  const double s1 = H_function(p, 2, D).value() / p.yield_ratio();
  const auto r = gamma_value(p, GammaId::G5, {D, s1, 0});
  EXPECT_TRUE(r.in_domain);
  EXPECT_NEAR(r.value, 0.0, 1e-9);
  EXPECT_NEAR(s1, 12.57, 5e-3);
}

TEST(GammaValue, OutOfDomainMarked) {
  const auto& p = params(Preset::CaseB);
  EXPECT_FALSE(gamma_value(p, GammaId::G4, {0.6, 1.0, 0}).in_domain);  // S1in below S1*
  EXPECT_FALSE(gamma_value(p, GammaId::G2, {0.9, 1.0, 0}).in_domain);  // D > D2
  EXPECT_FALSE(gamma_value(p, GammaId::G1, {1.1, 1.0, 0}).in_domain);  // D > D1
}

TEST(HGeometry, LowerThresholdIncreasingAndBelowUpper) {
  for (auto pr : kAllPresets) {
    const auto& p = params(pr);
    const double top = std::min(p.D1(), p.D2());
    double prev = 0.0;
    for (int i = 1; i < 2000; ++i) {
      const double D = top * i / 2000.0;
      const double h1 = H_function(p, 1, D).value();
      EXPECT_GT(h1, prev);
      EXPECT_LT(h1, H_function(p, 2, D).value());
      prev = h1;
    }
  }
}

TEST(HCase, ThreePresets) {
  EXPECT_EQ(h_case(params(Preset::CaseA)).kind, HCase::A);
  EXPECT_EQ(h_case(params(Preset::CaseC)).kind, HCase::C);
  const auto b = h_case(params(Preset::CaseB));
  EXPECT_EQ(b.kind, HCase::B);
  ASSERT_TRUE(b.first_min() && b.first_max() && b.scaled_H2_at_D2);
  EXPECT_NEAR(b.first_min()->D, 0.72, 5e-3);
  EXPECT_NEAR(b.first_max()->D, 0.81, 5e-3);
  EXPECT_NEAR(b.first_min()->scaled_H2, 12.57, 5e-3);
  EXPECT_NEAR(b.first_max()->scaled_H2, 13.37, 5e-3);
  EXPECT_NEAR(*b.scaled_H2_at_D2, 13.11, 5e-3);
}

TEST(HCase, ExtremaAreStationaryPointsOfSampledH2) {
  const auto& p = params(Preset::CaseB);
  for (const auto& e : h_case(p).extrema) {
    const double h = 1e-5;
    const double l = H_function(p, 2, e.D - h).value(), c = H_function(p, 2, e.D).value(),
                 r = H_function(p, 2, e.D + h).value();
    if (e.is_min) {
      EXPECT_LE(c, l);
      EXPECT_LE(c, r);
    } else {
      EXPECT_GE(c, l);
      EXPECT_GE(c, r);
    }
  }
}

TEST(HCase, DegenerateWhenRatesCoincide) {
  const double D2 = params(Preset::CaseA).D2();
  const auto p = make_params({D2 * 0.5, 2.1, 0.95, 24, 55, 0.5, 25, 250, 268, 1});
  const auto rep = h_case(p);
  EXPECT_TRUE(rep.degenerate);
}

TEST(HCase, TooFewSamplesRejected) {
  EXPECT_THROW(h_case(params(Preset::CaseA), 100), std::invalid_argument);
}

TEST(Cuts, ConstantDilutionInventories) {
  const auto& p = params(Preset::CaseA);
  const auto g = default_grid(p, Plane::S1S2, 200);
  EXPECT_EQ(cut_s1s2(p, 0.7, g).inventory(), regions({0, 1, 2, 3, 4, 5, 6, 7, 8}));
  EXPECT_EQ(cut_s1s2(p, 0.82, g).inventory(), regions({0, 3}));
  EXPECT_EQ(cut_s1s2(p, 1.25, g).inventory(), regions({0}));
}

TEST(Cuts, ConstantInfluentInventories) {
  const auto& a = params(Preset::CaseA);
  const auto ga = default_grid(a, Plane::DS1, 200);
  EXPECT_EQ(cut_ds1(a, 0, ga).inventory(), regions({0, 3, 4, 5}));
  EXPECT_EQ(cut_ds1(a, 15, ga).inventory(), regions({0, 1, 3, 4, 5, 6, 7}));
  EXPECT_EQ(cut_ds1(a, 100, ga).inventory(), regions({0, 1, 2, 3, 6, 7, 8}));
  const auto& b = params(Preset::CaseB);
  EXPECT_EQ(cut_ds1(b, 0, default_grid(b, Plane::DS1, 200)).inventory(), regions({0, 3, 4, 5}));
  const auto& c = params(Preset::CaseC);
  EXPECT_EQ(cut_ds1(c, 100, default_grid(c, Plane::DS1, 200)).inventory().count(RegionId::I2), 1u);
}

TEST(Cuts, RasterCellsMatchClassify) {
  const auto& p = params(Preset::CaseB);
  const auto cut = cut_ds1(p, 20, default_grid(p, Plane::DS1, 60));
  for (std::size_t j = 0; j < 60; ++j) {
    for (std::size_t i = 0; i < 60; ++i) {
      EXPECT_EQ(classify(p, cut.point(i, j)).region, cut.at(i, j));
    }
  }
}

TEST(Cuts, PolylinesLieOnTheirSurfaces) {
  for (auto pr : kAllPresets) {
    const auto& p = params(pr);
    std::vector<DiagramCut> cuts{cut_s1s2(p, 0.5, default_grid(p, Plane::S1S2, 40)),
                                 cut_ds1(p, 10, default_grid(p, Plane::DS1, 40)),
                                 cut_ds1(p, 60, default_grid(p, Plane::DS1, 40))};
    for (const auto& c : cuts) {
      for (const auto& line : c.boundaries) {
        for (const auto& [x, y] : line.points) {
          const OperatingPoint pt =
              c.plane == Plane::S1S2 ? OperatingPoint{c.fixed, x, y} : OperatingPoint{x, y, c.fixed};
          const auto r = gamma_value(p, line.gamma, pt);
          EXPECT_LT(std::abs(r.relative()), 1e-9)
              << gamma_name(line.gamma) << " at " << x << "," << y;
        }
      }
    }
  }
}

TEST(Cuts, ConstantDilutionLineSet) {
  const auto& p = params(Preset::CaseA);
  const auto g = default_grid(p, Plane::S1S2, 20);
  auto ids = [](const DiagramCut& c) {
    std::set<GammaId> s;
    for (const auto& l : c.boundaries) s.insert(l.gamma);
    return s;
  };
  EXPECT_EQ(ids(cut_s1s2(p, 0.7, g)).size(), 5u);
  EXPECT_EQ(ids(cut_s1s2(p, 0.82, g)), std::set<GammaId>{GammaId::G1});
  EXPECT_TRUE(ids(cut_s1s2(p, 1.25, g)).empty());
}

TEST(Cuts, InvalidInputsRejected) {
  const auto& p = params(Preset::CaseA);
  EXPECT_THROW(cut_s1s2(p, 0.0, default_grid(p, Plane::S1S2, 10)), std::invalid_argument);
  EXPECT_THROW(cut_ds1(p, -1.0, default_grid(p, Plane::DS1, 10)), std::invalid_argument);
  Grid bad = default_grid(p, Plane::DS1, 10);
  bad.x_max = bad.x_min;
  EXPECT_THROW(cut_ds1(p, 1.0, bad), std::invalid_argument);
}
