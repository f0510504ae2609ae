#include <gtest/gtest.h>

#include <cmath>

#include "saucer/fibration.hpp"
#include "saucer/random.hpp"

using namespace saucer;

namespace {

Coords6 random_coords(Rng& rng) {
  Coords6 p;
  for (auto& c : p) c = rng.uniform(-2, 2);
  return p;
}

D2Controls controls(ControlSignal u, ControlSignal w) { return {std::move(u), std::move(w)}; }

}  // namespace

TEST(CoordinateChange, Examples) {
  EXPECT_EQ(y_from_x(Coords6{}), Coords6{});
  Coords6 y = y_from_x(Coords6{0, 0, 0, 0, 1, 1});
  Coords6 expect{-1, 1, -1, 1, 1, 1};
  for (int i = 0; i < 6; ++i) EXPECT_DOUBLE_EQ(y[i], expect[i]);
}

TEST(CoordinateChange, Roundtrip) {
  Rng rng(61);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    Coords6 x = random_coords(rng);
    Coords6 back = x_from_y(y_from_x(x));
    Coords6 y = random_coords(rng);
    Coords6 yb = y_from_x(x_from_y(y));
    for (int i = 0; i < 6; ++i) worst = std::max({worst, std::abs(back[i] - x[i]), std::abs(yb[i] - y[i])});
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Coframes, ReferenceEntries) {
  Mat6 X = coframe_matrix(Chart6::X, Coords6{0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
  Vec6 w7;
  w7 << 0, 0, 0, 0, 0, -1;
  EXPECT_EQ(Vec6(X.row(5)), w7);
  Mat6 Y = coframe_matrix(Chart6::Y, Coords6{0, 0, 0, 0, 1, 0});
  Vec6 w1;
  w1 << 0, 1, 3, 3, 0, 0;
  EXPECT_EQ(Vec6(Y.row(1)), w1);
}

TEST(Coframes, PullbackConsistency) {
  Rng rng(62);
  for (int k = 0; k < 100; ++k) {
    Coords6 x = random_coords(rng);
    Mat6 J;
    for (int j = 0; j < 6; ++j) {
      auto col = y_from_x(seed_axis(x, static_cast<std::size_t>(j)));
      for (int i = 0; i < 6; ++i) J(i, j) = col[i].d;
    }
    EXPECT_LT((coframe_matrix(Chart6::Y, y_from_x(x)) * J - coframe_matrix(Chart6::X, x)).norm(), 1e-9);
  }
}

TEST(Eds, BothCoframes) {
  Rng rng(63);
  for (auto chart : {Chart6::X, Chart6::Y}) {
    double worst = 0.0;
    for (int k = 0; k < 100; ++k)
      for (double r : verify_eds(coframe_forms(chart), random_coords(rng))) worst = std::max(worst, r);
    EXPECT_LT(worst, 1e-7);
  }
}

TEST(Eds, PerturbedCoframeFails) {
  Coframe6 w = coframe_forms(Chart6::X);
  w[1] = w[1] + multiply(function_form<6>([]<class T>(const Point<6, T>& p) { return p[0]; }),
                         constant_form<6>(basis_form<6>({3})));
  Rng rng(64);
  auto r = verify_eds(w, random_coords(rng));
  EXPECT_GT(r[1], 1e-3);
}

TEST(DualFrame, IsDualAndMatchesReferenceE3) {
  Rng rng(65);
  for (int k = 0; k < 20; ++k) {
    Coords6 q = random_coords(rng);
    Mat6 E;
    for (int a = 0; a < 6; ++a) E.col(a) = dual_frame(Chart6::Y)[a].value(q);
    EXPECT_LT((coframe_matrix(Chart6::Y, q) * E - Mat6::Identity()).norm(), 1e-12);
    Vec6 e3;
    e3 << 3 * q[2], 3 * q[4] * q[4], -2 * q[4], 1, 0, 0;
    EXPECT_LT((E.col(3) - e3).norm(), 1e-12);
  }
}

// Computed brackets; the reference table is checked against these in the acceptance run.
TEST(DualFrame, Commutators) {
  Rng rng(66);
  for (int k = 0; k < 10; ++k)
    for (auto chart : {Chart6::X, Chart6::Y}) {
      auto checks = verify_commutators(chart, random_coords(rng));
      ASSERT_EQ(checks.size(), 7u);
      auto coeff = [&](int n, int label) { return checks[static_cast<std::size_t>(n)].computed[frame_index(label)]; };
      auto rest = [&](int n, int label) {
        Vec6 v = checks[static_cast<std::size_t>(n)].computed;
        if (label >= 0) v[frame_index(label)] = 0;
        return v.norm();
      };
      EXPECT_NEAR(coeff(0, 3), -1, 1e-9);
      EXPECT_NEAR(coeff(1, 2), 2, 1e-9);
      EXPECT_NEAR(coeff(2, 1), 3, 1e-9);
      EXPECT_NEAR(coeff(3, 0), -3, 1e-9);
      EXPECT_NEAR(coeff(6, 0), 1, 1e-9);
      for (auto [n, l] : {std::pair{0, 3}, {1, 2}, {2, 1}, {3, 0}, {4, -1}, {5, -1}, {6, 0}}) EXPECT_LT(rest(n, l), 1e-9);
      EXPECT_LT(checks[0].residual, 1e-9);
      EXPECT_LT(checks[1].residual, 1e-9);
      EXPECT_LT(checks[4].residual, 1e-9);
      EXPECT_LT(checks[5].residual, 1e-9);
    }
}

TEST(D2Curve, ClosedForms) {
  auto c0 = integrate_d2_curve({0, 0, 0, 0, 0}, controls(ControlSignal::constant(0), ControlSignal::constant(1)), 1.0, 0.01);
  for (const auto& s : c0.samples) {
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(s.y[i], 0.0, 1e-15);
    EXPECT_NEAR(s.y[4], s.t, 1e-12);
  }
  auto c1 = integrate_d2_curve({0, 0, 0, 0, 0}, controls(ControlSignal::constant(1), ControlSignal::constant(1)), 1.5, 0.01);
  for (const auto& s : c1.samples) {
    const double t = s.t;
    EXPECT_NEAR(s.y[3], t, 1e-12);
    EXPECT_NEAR(s.y[4], t, 1e-12);
    EXPECT_NEAR(s.y[2], -t * t, 1e-12);
    EXPECT_NEAR(s.y[1], t * t * t, 1e-12);
    EXPECT_NEAR(s.y[0], -t * t * t, 1e-12);
  }
  EXPECT_LT(d2_constraint_residual(c1), 1e-8);
}

TEST(D2Curve, JsonRoundtrip) {
  auto c = integrate_d2_curve({0.1, 0, 0, 0, 0}, controls(ControlSignal::sine(1, 1), ControlSignal::constant(1)), 0.5, 0.1);
  auto back = D2Curve::from_json(c.to_json());
  ASSERT_EQ(back.samples.size(), c.samples.size());
  EXPECT_EQ(back.samples.back().y, c.samples.back().y);
  EXPECT_EQ(back.samples.back().u, c.samples.back().u);
}

TEST(Lift, Examples) {
  auto l0 = lift_curve(integrate_d2_curve({0, 0, 0, 0, 0}, controls(ControlSignal::constant(0), ControlSignal::constant(1)), 1, 0.1));
  for (const auto& s : l0.samples) EXPECT_EQ(s.y[5], 0.0);
  auto l1 = lift_curve(integrate_d2_curve({0, 0, 0, 0, 0}, controls(ControlSignal::polynomial({0, 1}), ControlSignal::constant(1)), 1, 0.1));
  for (const auto& s : l1.samples) EXPECT_NEAR(s.y[5], s.t, 1e-15);
  EXPECT_THROW(lift_curve(integrate_d2_curve({0, 0, 0, 0, 0}, controls(ControlSignal::constant(1), ControlSignal::constant(0)), 1, 0.1)),
               LiftSingular);
}

TEST(Lift, TangentToD2InYCoords) {
  auto l = lift_curve(integrate_d2_curve({0.2, -0.1, 0.3, 0, 0.5}, controls(ControlSignal::sine(1, 2), ControlSignal::constant(1.2)), 2, 0.01));
  for (const auto& s : l.samples) {
    Vec6 v = coframe_matrix(Chart6::Y, s.y) * to_eigen<6>(s.ydot);
    for (int k = 0; k < 3; ++k) EXPECT_LT(std::abs(v[k]), 1e-12);
  }
}

TEST(Projection, Examples) {
  auto p0 = project_to_contact(lift_curve(integrate_d2_curve({0, 0, 0, 0, 0}, controls(ControlSignal::constant(0), ControlSignal::constant(1)), 1, 0.1)));
  for (const auto& s : p0.samples) EXPECT_LT(s.velocity.norm(), 1e-14);
  for (const auto& s : p0.samples)
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(s.x[i], p0.samples.front().x[i], 1e-14);
  auto lc = lift_curve(integrate_d2_curve({0, 0, 0, 0, 0}, controls(ControlSignal::polynomial({0, 1}), ControlSignal::constant(1)), 1, 0.1));
  auto p1 = project_to_contact(lc);
  EXPECT_GT(p1.samples.back().velocity.norm(), 0.1);
  for (std::size_t k = 0; k < lc.samples.size(); ++k) {
    const auto& s = p1.samples[k];
    Coords6 x{s.x[0], s.x[1], s.x[2], s.x[3], s.x[4], s.fiber};
    Coords6 y = y_from_x(x);
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(y[i], lc.samples[k].y[i], 1e-12);
  }
}

TEST(Tangency, CertifiesAdmissibleCurves) {
  for (auto u : {ControlSignal::polynomial({0, 1}), ControlSignal::sine(1, 1)}) {
    auto r = certify_twisted_cubic_tangency(
        project_to_contact(lift_curve(integrate_d2_curve({0, 0, 0, 0, 0}, controls(u, ControlSignal::constant(1)), 2, 0.01))));
    EXPECT_LT(r.max_angular, 1e-6);
    EXPECT_LT(r.max_contact, 1e-9);
  }
}

TEST(Tangency, CoordinateLineFails) {
  ProjectedCurve pc;
  ProjectedSample s;
  s.velocity << 1, 0, 0, 0, 0;
  pc.samples.push_back(s);
  auto r = certify_twisted_cubic_tangency(pc);
  EXPECT_GT(r.max_contact, 0.5);
  EXPECT_GT(r.max_angular, 0.5);
}

TEST(Tangency, SeededPrograms) {
  Rng rng(67);
  for (int k = 0; k < 20; ++k) {
    ControlSignal u = ControlSignal::sine(rng.uniform(-2, 2), rng.uniform(0.2, 3), rng.uniform(0, 6));
    u += ControlSignal::polynomial({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    double w0 = rng.uniform(0.8, 1.5) * (rng.uniform(0, 1) < 0.5 ? -1 : 1);
    ControlSignal w = ControlSignal::constant(w0);
    w += ControlSignal::sine(0.25, rng.uniform(0.2, 2));
    std::array<double, 5> q0{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    auto r = certify_twisted_cubic_tangency(project_to_contact(lift_curve(integrate_d2_curve(q0, controls(u, w), 2, 0.01))));
    EXPECT_LT(r.max_contact, 1e-7);
    EXPECT_LT(r.max_angular, 1e-5);
  }
}
