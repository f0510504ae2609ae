#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "saucer/planner.hpp"

using namespace saucer;

namespace {

const ManeuverMode kModes[] = {ManeuverMode::Attacking, ManeuverMode::Landing, ManeuverMode::G2Strict};

double inf_dist(const ChartPoint5& a, const ChartPoint5& b) {
  double d = 0;
  for (int i = 0; i < 5; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST(Family, FieldsAreAdmissible) {
  ChartSampler s(71);
  for (int k = 0; k < 50; ++k) {
    auto p = s.next();
    for (auto mode : kModes) {
      auto f = bracket_family(mode);
      for (int i = 0; i < 4; ++i) {
        Vec5 v = f.Y[i].value(p);
        EXPECT_LT(std::abs(contact_form(p).dot(v)), 1e-9);
        auto c = f.controls[i];
        EXPECT_LT((v - maneuver_velocity(mode, p, c[0], c[1], c[2])).norm(), 1e-12);
        for (double n : nullity_values(mode, p, v)) EXPECT_LT(std::abs(n), 1e-9);
      }
    }
  }
}

TEST(Family, G2SimpleUsesStrictFamily) {
  auto f = bracket_family(ManeuverMode::G2Simple);
  ChartPoint5 p{0.1, 0.2, 0.3, 0.4, 0.5};
  for (int i = 0; i < 4; ++i) {
    auto c = f.controls[i];
    EXPECT_LT((f.Y[i].value(p) - maneuver_velocity(ManeuverMode::G2Simple, p, c[0], c[1], c[2])).norm(), 1e-12);
  }
}

TEST(Brackets, StatedIdentities) {
  ChartSampler s(72);
  for (int k = 0; k < 20; ++k) {
    auto p = s.next();
    EXPECT_LT(bracket_identity_residual(bracket_identity(ManeuverMode::Attacking), p), 1e-12);
    EXPECT_LT(bracket_identity_residual(bracket_identity(ManeuverMode::G2Strict), p), 1e-12);
    // The nested landing chain vanishes identically.
    EXPECT_LT(bracket_identity(ManeuverMode::Landing).lhs.value(p).norm(), 1e-12);
    Vec5 b13 = bracket(bracket_family(ManeuverMode::Landing).Y[0], bracket_family(ManeuverMode::Landing).Y[2], p);
    Vec5 expect = Vec5::Zero();
    expect[kZ] = 9.0;
    expect[kX] = -9.0 * p[kA];
    EXPECT_LT((b13 - expect).norm(), 1e-12);
  }
}

TEST(Brackets, GeneratingRank) {
  ChartSampler s(73);
  for (int k = 0; k < 100; ++k) {
    auto p = s.next();
    for (auto mode : kModes) {
      auto f = bracket_family(mode);
      EXPECT_EQ(bracket_generating_check(f, p), 5);
      EXPECT_EQ(bracket_generating_check(f, p, false), 4);
    }
  }
}

TEST(Flow, BasicsAndReversibility) {
  auto f = bracket_family(ManeuverMode::Attacking);
  ChartPoint5 q = flow(f.Y[0], ChartPoint5{}, 1.0);
  EXPECT_NEAR(q[kB], -3.0, 1e-14);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(q[i], 0.0);
  ChartPoint5 p{0.3, 0.2, -0.1, 0.5, -0.4};
  EXPECT_EQ(flow(f.Y[2], p, 0.0), p);
  Rng rng(74);
  ChartSampler s(75);
  for (int k = 0; k < 20; ++k) {
    auto p0 = s.next();
    for (auto mode : kModes) {
      auto fam = bracket_family(mode);
      const auto& Y = fam.Y[static_cast<std::size_t>(k % 4)];
      const double t = rng.uniform(-1, 1);
      EXPECT_LT(inf_dist(flow(Y, flow(Y, p0, t), -t), p0), 1e-8);
    }
  }
}

TEST(Rectangle, SecondOrderAsymptotics) {
  for (auto mode : {ManeuverMode::Attacking, ManeuverMode::G2Strict, ManeuverMode::Landing}) {
    auto f = bracket_family(mode);
    ChartPoint5 p{0.2, -0.3, 0.1, 0.4, -0.2};
    auto ratio = [&](double eps) {
      auto q = rectangle(f.Y[f.rect_i], f.Y[f.rect_j], p, eps);
      return (q[kZ] - p[kZ]) / (eps * eps);
    };
    const double c = f.rect_coeff;
    const double e1 = std::abs(ratio(0.1) - c), e2 = std::abs(ratio(0.05) - c);
    EXPECT_LT(e2, 0.3 * e1 + 1e-6) << to_string(mode);
    EXPECT_LT(e2, 0.5);
  }
}

TEST(Planner, TrivialAndExactCases) {
  auto empty = plan_path(ManeuverMode::Attacking, ChartPoint5{}, ChartPoint5{});
  EXPECT_TRUE(empty.legs.empty());
  auto single = plan_path(ManeuverMode::Attacking, ChartPoint5{}, ChartPoint5{0, 0, 0, 0, 1});
  ASSERT_EQ(single.legs.size(), 1u);
  EXPECT_EQ(single.legs[0].field, 0);
  EXPECT_NEAR(single.legs[0].duration, -1.0 / 3.0, 1e-9);
  auto lift = plan_path(ManeuverMode::Attacking, ChartPoint5{}, ChartPoint5{0, 0, 1, 0, 0});
  EXPECT_LT(lift.error, 1e-3);
  EXPECT_EQ(lift.rectangles, 1);
  EXPECT_TRUE(lift.certified);
}

TEST(Planner, SeededPairs) {
  for (auto mode : kModes) {
    ChartSampler s(76 + static_cast<int>(mode));
    for (int k = 0; k < 50; ++k) {
      auto a = s.next(), b = s.next();
      auto t0 = std::chrono::steady_clock::now();
      Plan plan;
      try {
        plan = plan_path(mode, a, b, 1e-3);
      } catch (const NoConvergence& e) {
        ADD_FAILURE() << to_string(mode) << " pair " << k << " error " << e.best().error;
        continue;
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      EXPECT_LT(plan.error, 1e-3);
      EXPECT_TRUE(plan.certified) << to_string(mode) << " " << plan.max_contact << " " << plan.max_nullity;
      EXPECT_LT(secs, 10.0);
    }
  }
}

TEST(Planner, ReplayMatchesEndpoint) {
  auto plan = plan_path(ManeuverMode::Landing, ChartPoint5{0.1, 0.2, 0.3, -0.2, 0.1}, ChartPoint5{-0.5, 0.4, 0.9, 0.3, -0.6});
  auto tr = replay(plan);
  EXPECT_LT(inf_dist(tr.samples.back().state, plan.endpoint), 1e-12);
  auto j = plan.to_json();
  EXPECT_EQ(j["mode"], "landing");
  EXPECT_EQ(j["leg_count"], plan.legs.size());
}

TEST(Planner, RejectsPointsOutsideBox) {
  EXPECT_THROW(plan_path(ManeuverMode::Attacking, ChartPoint5{5, 0, 0, 0, 0}, ChartPoint5{}), OutsideChart);
}
