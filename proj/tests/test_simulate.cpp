#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "am2/simulate.hpp"
#include "oracles.hpp"

using namespace am2;
using L = StateLabel;

namespace {

const ModelParams& case_a() {
  static const ModelParams p = preset(Preset::CaseA);
  return p;
}
const ModelParams& case_b() {
  static const ModelParams p = preset(Preset::CaseB);
  return p;
}

State nudged(const State& x, double factor) {
  return {x.S1 * factor, x.X1 * factor, x.S2 * factor, x.X2 * factor};
}

IntegrateOptions no_stop() {
  IntegrateOptions o;
  o.stop_on_convergence = false;
  return o;
}

}  // namespace

TEST(VectorField, MatchesIndependentField) {
  const auto o = oracle::nominal(0.6);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    const oracle::Vec x{u(rng), u(rng) / 10, u(rng), u(rng) / 10};
    const double D = u(rng) / 40, s1 = u(rng) / 2, s2 = u(rng);
    const auto a = vector_field(case_a(), {D, s1, s2}, State::from_array(x));
    const auto b = oracle::field(o, D, s1, s2, x);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(a[k], b[k], 1e-10 * std::max(1.0, std::abs(b[k])));
  }
}

TEST(VectorField, VanishesAtEveryExistingSteadyState) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uD(0.05, 1.3), u1(0.0, 20.0), u2(0.0, 150.0);
  for (auto pr : kAllPresets) {
    const auto p = preset(pr);
    for (int i = 0; i < 500; ++i) {
      const OperatingPoint pt{uD(rng), u1(rng), u2(rng)};
      for (const auto& ss : steady_states(p, pt)) {
        if (!ss.exists()) continue;
        const double scale = std::max(1.0, norm2(ss.x.to_array()));
        EXPECT_LT(norm2(vector_field(p, pt, ss.x)), 1e-10 * scale);
      }
    }
  }
}

TEST(Integrate, ReachesCoexistenceWhereItIsTheOnlyAttractor) {
  const OperatingPoint pt{0.55, 14, 0};
  ASSERT_EQ(classify(case_b(), pt).region, RegionId::I4);
  const auto tr = integrate(case_b(), pt, {14, 0.1, 0, 0.1}, 1000);
  ASSERT_EQ(tr.terminal, Terminal::Converged);
  EXPECT_EQ(tr.converged_to, L::E21);
  EXPECT_LT(tr.back().t, 1000);
}

TEST(Integrate, BistableRegionKeepsEachStableStateAttracting) {
  const OperatingPoint pt{0.7, 14, 0};
  ASSERT_EQ(classify(case_b(), pt).region, RegionId::I5);
  const auto ss = steady_states(case_b(), pt);
  for (auto l : {L::E20, L::E21}) {
    const auto& e = ss[static_cast<int>(l)];
    ASSERT_EQ(e.status, Stability::Stable);
    for (double f : {0.99, 1.01}) {
      const auto tr = integrate(case_b(), pt, nudged(e.x, f), 2000);
      ASSERT_EQ(tr.terminal, Terminal::Converged) << label_name(l) << " x" << f;
      EXPECT_EQ(tr.converged_to, l);
    }
  }
}

TEST(Integrate, StartingAtSteadyStateStopsImmediately) {
  const OperatingPoint pt{1.3, 5, 10};
  const auto tr = integrate(case_a(), pt, {5, 0, 10, 0}, 100);
  EXPECT_EQ(tr.terminal, Terminal::Converged);
  EXPECT_EQ(tr.converged_to, L::E10);
  EXPECT_EQ(tr.samples.size(), 1u);
  EXPECT_EQ(tr.steps, 0u);
}

TEST(Integrate, ShortHorizonEndsAtMaxTime) {
  const auto tr = integrate(case_a(), {0.5, 10, 20}, {1, 1, 1, 1}, 1.0);
  EXPECT_EQ(tr.terminal, Terminal::MaxTime);
  EXPECT_DOUBLE_EQ(tr.back().t, 1.0);
}

TEST(Integrate, InvalidInputsRejected) {
  EXPECT_THROW(integrate(case_a(), {0.5, 10, 20}, {-1, 1, 1, 1}, 1.0), std::invalid_argument);
  EXPECT_THROW(integrate(case_a(), {0.5, 10, 20}, {1, 1, 1, 1}, 0.0), std::invalid_argument);
  EXPECT_THROW(integrate(case_a(), {-0.5, 10, 20}, {1, 1, 1, 1}, 1.0), std::invalid_argument);
}

TEST(Integrate, StaysNonNegativeFromRandomStarts) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uD(0.05, 1.3), u1(0.0, 20.0), u2(0.0, 150.0);
  const auto opt = no_stop();
  for (int i = 0; i < 1000; ++i) {
    const OperatingPoint pt{uD(rng), u1(rng), u2(rng)};
    const auto x0 = random_initial_state(case_a(), pt, rng);
    const auto tr = integrate(case_a(), pt, x0, 20.0, opt);
    for (const auto& s : tr.samples) {
      for (double c : s.x.to_array()) ASSERT_GE(c, -opt.abs_tol) << "run " << i;
    }
  }
}

TEST(Integrate, FirstSubstrateStaysBelowItsInflowEnvelope) {
  // dS1/dt <= D (S1in - S1), so S1(t) <= S1in + (S1(0) - S1in) exp(-D t).
  std::mt19937_64 rng(23);
  const OperatingPoint pt{0.4, 8, 30};
  for (int i = 0; i < 50; ++i) {
    const auto x0 = random_initial_state(case_a(), pt, rng);
    const auto tr = integrate(case_a(), pt, x0, 200.0, no_stop());
    for (const auto& s : tr.samples) {
      const double env = pt.S1in + (x0.S1 - pt.S1in) * std::exp(-pt.D * s.t);
      ASSERT_LE(s.x.S1, env + 1e-6 * std::max(1.0, env));
    }
    for (double c : tr.back().x.to_array()) EXPECT_LT(c, 1e3);
  }
}

TEST(Integrate, MethaneFlowFollowsState) {
  const OperatingPoint pt{0.55, 14, 0};
  const auto tr = integrate(case_b(), pt, {14, 0.1, 0, 0.1}, 1000);
  for (const auto& s : tr.samples) {
    EXPECT_DOUBLE_EQ(s.qch4, case_b().mu2().value(s.x.S2) * s.x.X2);
    EXPECT_GE(s.qch4, 0.0);
  }
  // At a steady state with methanogens, mu2 = alpha D.
  const auto& end = tr.back().x;
  EXPECT_NEAR(tr.back().qch4, case_b().alpha() * pt.D * end.X2, 1e-6 * tr.back().qch4);
  EXPECT_EQ(methane_flow(case_b(), {14, 0, 0, 0}), 0.0);
}

TEST(Reduce, UnitStateExample) {
  const auto r = reduce(case_a(), {1, 1, 1, 1});
  EXPECT_DOUBLE_EQ(r.s1, 10);
  EXPECT_DOUBLE_EQ(r.x1, 250);
  EXPECT_DOUBLE_EQ(r.s2, 1);
  EXPECT_DOUBLE_EQ(r.x2, 268);
  const auto back = unreduce(case_a(), r);
  EXPECT_DOUBLE_EQ(back.X1, 1);
  EXPECT_DOUBLE_EQ(back.X2, 1);
  EXPECT_THROW(reduce(case_a(), {-1, 0, 0, 0}), std::domain_error);
}

TEST(Reduce, TrajectoriesMapOntoEachOther) {
  std::mt19937_64 rng(29);
  const OperatingPoint pt{0.6, 14, 0};
  for (int i = 0; i < 10; ++i) {
    const auto x0 = random_initial_state(case_b(), pt, rng);
    const auto full = integrate(case_b(), pt, x0, 20.0, no_stop()).back();
    ASSERT_DOUBLE_EQ(full.t, 20.0);
    const auto red = unreduce(case_b(), integrate_reduced(case_b(), pt, reduce(case_b(), x0), 20.0));
    const auto a = full.x.to_array(), b = red.to_array();
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(a[k], b[k], 1e-6 * std::max(1.0, std::abs(a[k])));
  }
}

TEST(Corroborate, SingleAttractorInsideGasRegion) {
  const OperatingPoint pt{0.55, 14, 0};
  const auto c = corroborate(case_b(), pt, 30, 101);
  EXPECT_EQ(c.unconverged, 0);
  ASSERT_EQ(c.attractors.size(), 1u);
  EXPECT_EQ(c.attractors.begin()->first, L::E21);
}

TEST(Corroborate, TwoAttractorsInBistableRegion) {
  const OperatingPoint pt{0.7, 14, 0};
  const auto ss = steady_states(case_b(), pt);
  const std::vector<State> seeds{nudged(ss[3].x, 1.01), nudged(ss[4].x, 1.01)};
  const auto c = corroborate(case_b(), pt, 50, 7, 1000, seeds);
  EXPECT_EQ(c.unconverged, 0);
  ASSERT_EQ(c.attractors.size(), 2u);
  EXPECT_GT(c.attractors.at(L::E20), 0);
  EXPECT_GT(c.attractors.at(L::E21), 0);
}

TEST(Corroborate, SameSeedSameTally) {
  const OperatingPoint pt{0.7, 14, 0};
  const auto a = corroborate(case_b(), pt, 20, 99);
  const auto b = corroborate(case_b(), pt, 20, 99);
  EXPECT_EQ(a.attractors, b.attractors);
}

TEST(RandomInitialState, PositiveAndBounded) {
  std::mt19937_64 rng(1);
  const OperatingPoint pt{0.5, 10, 20};
  for (int i = 0; i < 1000; ++i) {
    const auto x = random_initial_state(case_a(), pt, rng);
    EXPECT_GT(x.S1, 0);
    EXPECT_LT(x.S1, 20);
    EXPECT_LT(x.S2, 2 * (20 + 100));
  }
}
