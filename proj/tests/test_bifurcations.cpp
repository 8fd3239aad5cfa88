#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "am2/bifurcations.hpp"
#include "oracles.hpp"

using namespace am2;
using L = StateLabel;

namespace {

const ModelParams& case_b() {
  static const ModelParams p = preset(Preset::CaseB);
  return p;
}

const ScanResult& scan(double s1in) {
  static std::map<double, ScanResult> cache;
  auto it = cache.find(s1in);
  if (it == cache.end()) it = cache.emplace(s1in, scan_D(case_b(), s1in, 0.0, 0.3, 1.0, 2000)).first;
  return it->second;
}

double gamma_residual(const ModelParams& p, GammaId g, double D, double s1, double s2) {
  return std::abs(gamma_value(p, g, {D, s1, s2}).relative());
}

}  // namespace

TEST(ClassifyEvent, SecondPopulationInvasionOnWashout) {
  const auto& p = case_b();
  const double D = 0.5;
  const double s21 = aux(p, {D, 1, 1}).S2star1.value();
  const auto ev = classify_event(p, {D, 1.0, s21}, GammaId::G2);
  EXPECT_EQ(ev.kind, EventKind::Transcritical);
  EXPECT_EQ(ev.pairs, (std::vector<StatePair>{{L::E10, L::E11}}));
}

TEST(ClassifyEvent, FirstBreakEvenRowsBySecondInfluent) {
  const auto& p = case_b();
  const double D = 0.5;
  const auto a = aux(p, {D, 1, 1});
  const double s1 = a.S1star.value();
  EXPECT_EQ(classify_event(p, {D, s1, 0.0}, GammaId::G1).pairs,
            (std::vector<StatePair>{{L::E10, L::E20}}));
  const double mid = 0.5 * (a.S2star1.value() + a.S2star2.value());
  EXPECT_EQ(classify_event(p, {D, s1, mid}, GammaId::G1).pairs,
            (std::vector<StatePair>{{L::E10, L::E20}, {L::E11, L::E21}}));
  EXPECT_EQ(classify_event(p, {D, s1, a.S2star2.value() + 10}, GammaId::G1).pairs,
            (std::vector<StatePair>{{L::E10, L::E20}, {L::E11, L::E21}, {L::E12, L::E22}}));
}

TEST(ClassifyEvent, SaddleNodeRows) {
  const auto& p = case_b();
  const double D2 = p.D2();
  const double s1_at = S1_star(p, D2).value();
  auto at = [&](double s1, double s2) { return classify_event(p, {D2, s1, s2}, GammaId::G6); };
  EXPECT_EQ(at(s1_at + 1, 60).pairs,
            (std::vector<StatePair>{{L::E11, L::E12}, {L::E21, L::E22}}));
  EXPECT_EQ(at(s1_at - 1, 60).pairs, (std::vector<StatePair>{{L::E11, L::E12}}));
  EXPECT_EQ(at(14, 0).pairs, (std::vector<StatePair>{{L::E21, L::E22}}));
  EXPECT_EQ(at(13, 0).kind, EventKind::NoCollision);
  EXPECT_EQ(at(14, 60).kind, EventKind::SaddleNode);
}

TEST(ClassifyEvent, SaddleNodeWhenFirstPopulationWashesOutFirst) {
  const auto p = preset(Preset::CaseC);
  ASSERT_LT(p.D1(), p.D2());
  EXPECT_EQ(classify_event(p, {p.D2(), 5, 60}, GammaId::G6).pairs,
            (std::vector<StatePair>{{L::E11, L::E12}}));
  EXPECT_EQ(classify_event(p, {p.D2(), 5, 10}, GammaId::G6).kind, EventKind::NoCollision);
}

TEST(ScanD, HighInfluentLine) {
  const auto& s = scan(14);
  ASSERT_EQ(s.events.size(), 3u);
  EXPECT_NEAR(s.events[0].D, 0.5917, 5e-4);
  EXPECT_NEAR(s.events[1].D, 0.8186, 5e-4);
  EXPECT_NEAR(s.events[2].D, 0.8696, 5e-4);
  EXPECT_EQ(s.events[1].kind, EventKind::SaddleNode);
  EXPECT_EQ(s.events[0].before, RegionId::I4);
  EXPECT_EQ(s.events[0].after, RegionId::I5);
  EXPECT_EQ(s.events[2].after, RegionId::I0);
}

TEST(ScanD, EventsSitOnExactlyOneSurface) {
  for (double s1 : {13.0, 13.3, 14.0}) {
    for (const auto& e : scan(s1).events) {
      ASSERT_EQ(e.gammas.size(), 1u);
      for (auto g : kAllGammas) {
        const auto r = gamma_value(case_b(), g, {e.D, s1, 0});
        if (!r.in_domain) continue;
        if (g == e.gammas[0]) {
          EXPECT_LT(gamma_residual(case_b(), g, e.D, s1, 0), 1e-8);
        } else {
          EXPECT_GT(gamma_residual(case_b(), g, e.D, s1, 0), 1e-4);
        }
      }
    }
  }
}

TEST(ScanD, CollidingStatesCoincide) {
  const auto& p = case_b();
  for (double s1 : {13.0, 13.3, 14.0}) {
    for (const auto& e : scan(s1).events) {
      const OperatingPoint pt{e.D, s1, 0};
      for (const auto& pr : e.pairs) {
        const auto a = steady_state_formula(p, pt, pr.first);
        const auto b = steady_state_formula(p, pt, pr.second);
        ASSERT_TRUE(a && b);
        const auto xa = a->to_array(), xb = b->to_array();
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(xa[i], xb[i], 1e-6 * std::max(1.0, std::abs(xa[i])));
        if (e.kind == EventKind::SaddleNode) {
          double closest = 1e9;
          for (const auto& z : eigenvalues(jacobian(p, *a, pt))) closest = std::min(closest, std::abs(z.real()));
          EXPECT_LT(closest, 1e-5);
        }
      }
    }
  }
}

TEST(ScanD, TranscriticalExchangesStability) {
  const auto& p = case_b();
  for (double s1 : {13.0, 13.3, 14.0}) {
    for (const auto& e : scan(s1).events) {
      if (e.kind != EventKind::Transcritical) continue;
      for (const auto& pr : e.pairs) {
        auto verdicts = [&](double D) {
          const OperatingPoint pt{D, s1, 0};
          std::array<double, 2> out{};
          int k = 0;
          for (auto l : {pr.first, pr.second}) {
            const auto x = steady_state_formula(p, pt, l);
            out[k++] = max_real_part(jacobian(p, *x, pt));
          }
          return out;
        };
        const auto lo = verdicts(e.D - 1e-4), hi = verdicts(e.D + 1e-4);
        EXPECT_NE(lo[0] < 0, hi[0] < 0) << pair_name(pr) << " at " << e.D;
        EXPECT_NE(lo[1] < 0, hi[1] < 0) << pair_name(pr) << " at " << e.D;
      }
    }
  }
}

TEST(ScanD, BranchStatusesFollowRegionTable) {
  const auto& p = case_b();
  for (double s1 : {13.0, 13.3, 14.0}) {
    const auto& s = scan(s1);
    ASSERT_EQ(s.branches.size(), 6u);
    for (const auto& b : s.branches) {
      for (const auto& smp : b.samples) {
        const auto c = classify(p, {smp.D, s1, 0});
        if (c.on_boundary() || smp.status == Stability::NonHyperbolic) continue;
        EXPECT_EQ(region_status_row(*c.region)[static_cast<int>(b.label)], smp.status);
      }
    }
  }
}

TEST(ScanD, BranchesAbsentWithoutSecondInfluent) {
  const auto& s = scan(14);
  EXPECT_TRUE(s.branches[1].samples.empty());
  EXPECT_TRUE(s.branches[2].samples.empty());
  EXPECT_EQ(s.branches[0].samples.size(), s.n);
}

TEST(ScanD, CodimensionTwoCandidateReported) {
  // Choose S2in on the lower break-even curve and S1in on the upper
  // coexistence boundary at the same rate.
  const auto& p = case_b();
  const double D = 0.5;
  const auto a = aux(p, {D, 1, 1});
  const double s2 = a.S2star1.value();
  const double s1 = (a.H2.value() - s2) / p.yield_ratio();
  const auto s = scan_D(p, s1, s2, 0.3, 0.7, 400);
  bool found = false;
  for (const auto& e : s.events) {
    if (e.kind == EventKind::CodimensionTwo) {
      found = true;
      EXPECT_NEAR(e.D, D, 1e-6);
      EXPECT_EQ(e.gammas, (std::vector<GammaId>{GammaId::G2, GammaId::G5}));
    }
  }
  EXPECT_TRUE(found);
}

TEST(ScanD, InvalidRangesRejected) {
  EXPECT_THROW(scan_D(case_b(), 14, 0, 0.5, 0.5, 200), std::invalid_argument);
  EXPECT_THROW(scan_D(case_b(), 14, 0, 0.0, 0.5, 200), std::invalid_argument);
  EXPECT_THROW(scan_D(case_b(), 14, 0, 0.1, 0.5, 50), std::invalid_argument);
}

TEST(SolveDk, RootCountsFollowH2Shape) {
  const auto& p = case_b();
  EXPECT_EQ(solve_Dk(p, 14, 0).H2_roots.size(), 1u);
  EXPECT_EQ(solve_Dk(p, 13, 0).H2_roots.size(), 2u);
  EXPECT_EQ(solve_Dk(p, 13.3, 0).H2_roots.size(), 3u);
  EXPECT_EQ(solve_Dk(p, 12, 0).H2_roots.size(), 0u);
  const auto a = preset(Preset::CaseA);
  for (double s1 : {2.0, 8.0, 11.0, 20.0}) EXPECT_LE(solve_Dk(a, s1, 0).H2_roots.size(), 1u);
}

TEST(SolveDk, NamedValues) {
  const auto& p = case_b();
  const auto v = solve_Dk(p, 13, 0);
  ASSERT_TRUE(v.D_washout);
  EXPECT_NEAR(*v.D_washout, 0.5 * 13 / (2.1 + 13) / 0.5, 1e-12);
  EXPECT_NEAR(v.D2, p.D2(), 0);
  ASSERT_EQ(v.H1_roots.size(), 1u);
  EXPECT_NEAR(v.H1_roots[0], 0.8184, 5e-4);
  EXPECT_NEAR(v.H2_roots[0], 0.6526, 5e-4);
  EXPECT_NEAR(v.H2_roots[1], 0.7844, 5e-4);
}

TEST(SolveDk, ShiftedInfluentMatchesEquivalentLine) {
  const auto& p = case_b();
  const auto a = solve_Dk(p, 12.0, 10.0);  // 12 + 10/10 = 13
  const auto b = solve_Dk(p, 13.0, 0.0);
  ASSERT_EQ(a.H2_roots.size(), b.H2_roots.size());
  for (std::size_t i = 0; i < a.H2_roots.size(); ++i) EXPECT_NEAR(a.H2_roots[i], b.H2_roots[i], 1e-9);
}

TEST(SolveDk, RootsAgreeWithIndependentThresholds) {
  const auto o = oracle::nominal(0.5);
  for (double r : solve_Dk(case_b(), 13.3, 0).H2_roots) {
    const double h2 = oracle::s2_roots(o, r).second + 10.0 * oracle::s1_star(o, r);
    EXPECT_NEAR(h2 / 10.0, 13.3, 1e-6);
  }
}
