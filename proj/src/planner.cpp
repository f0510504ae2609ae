#include "saucer/planner.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace saucer {

namespace {

template <class F>
VectorField<5> z_field(std::string id, F coeffs) {
  return VectorField<5>(std::move(id), [coeffs]<class T>(const Point<5, T>& p) {
    auto c = coeffs(p);
    return z_combination(p, c[0], c[1], c[2], c[3]);
  });
}

}  // namespace

BracketFamily bracket_family(ManeuverMode mode) {
  BracketFamily f;
  f.mode = mode;
  switch (mode) {
    case ManeuverMode::Attacking:
      f.Y = {z_field("Y1", []<class T>(const Point<5, T>&) { return std::array<T, 4>{T(0.0), T(0.0), T(1.0), T(0.0)}; }),
             z_field("Y2", []<class T>(const Point<5, T>&) { return std::array<T, 4>{T(0.0), T(0.0), T(0.0), T(1.0)}; }),
             z_field("Y3", []<class T>(const Point<5, T>&) { return std::array<T, 4>{T(3.0), T(0.0), T(1.0), T(0.0)}; }),
             z_field("Y4", []<class T>(const Point<5, T>&) { return std::array<T, 4>{T(0.0), T(1.0), T(0.0), T(1.0)}; })};
      f.controls = {{{1, 0, 0}, {0, 1, 0}, {1, 0, 1}, {0, 1, 1}}};
      f.rect_i = 1;
      f.rect_j = 2;
      f.rect_coeff = 3.0;
      break;
    case ManeuverMode::Landing:
      f.Y = {z_field("Y1", []<class T>(const Point<5, T>&) { return std::array<T, 4>{T(0.0), T(0.0), T(1.0), T(0.0)}; }),
             z_field("Y2", []<class T>(const Point<5, T>&) { return std::array<T, 4>{T(0.0), T(0.0), T(0.0), T(1.0)}; }),
             z_field("Y3",
                     []<class T>(const Point<5, T>& p) {
                       const T& a = p[kA];
                       const T& b = p[kB];
                       return std::array<T, 4>{3.0 * a * b, -3.0 * (1.0 + a * a), T(1.0), T(0.0)};
                     }),
             z_field("Y4", []<class T>(const Point<5, T>& p) {
               const T& a = p[kA];
               const T& b = p[kB];
               return std::array<T, 4>{1.0 + b * b, -(a * b), T(0.0), T(1.0)};
             })};
      f.controls = {{{1, 0, 0}, {0, 1, 0}, {1, 0, 1}, {0, 1, 1}}};
      f.rect_i = 0;
      f.rect_j = 2;
      f.rect_coeff = 9.0;
      break;
    case ManeuverMode::G2Simple:
    case ManeuverMode::G2Strict: {
      const double ts[4] = {0.0, 1.0, -1.0, 2.0};
      for (int k = 0; k < 4; ++k) {
        const double t = ts[k];
        f.Y[k] = z_field("Y" + std::to_string(k + 1), [t]<class T>(const Point<5, T>&) {
          return std::array<T, 4>{T(1.0), T(t), T(t * t), T(t * t * t)};
        });
        f.controls[k] = {1.0, t, 0.0};
      }
      f.rect_i = 1;
      f.rect_j = 0;
      f.rect_coeff = 1.0;
      break;
    }
  }
  return f;
}

VectorField<5> distinguished_bracket(const BracketFamily& f) { return bracket(f.Y[f.rect_i], f.Y[f.rect_j]); }

int bracket_generating_check(const BracketFamily& f, const ChartPoint5& p, bool include_bracket) {
  Eigen::Matrix<double, 5, Eigen::Dynamic> M(5, include_bracket ? 5 : 4);
  for (int k = 0; k < 4; ++k) M.col(k) = f.Y[k].value(p);
  if (include_bracket) M.col(4) = distinguished_bracket(f).value(p);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > 1e-10 * s[0]) ++r;
  return r;
}

BracketIdentity bracket_identity(ManeuverMode mode) {
  auto f = bracket_family(mode);
  switch (mode) {
    case ManeuverMode::Attacking:
      return {"[Y2,Y3] = 3 dz", bracket(f.Y[1], f.Y[2]), 3.0};
    case ManeuverMode::Landing:
      return {"[Y1,[Y2,[Y2,Y3]]] = 9 dz", bracket(f.Y[0], bracket(f.Y[1], bracket(f.Y[1], f.Y[2]))), 9.0};
    default:
      return {"[Y2,Y1] = dz", bracket(f.Y[1], f.Y[0]), 1.0};
  }
}

double bracket_identity_residual(const BracketIdentity& id, const ChartPoint5& p) {
  Vec5 v = id.lhs.value(p);
  v[kZ] -= id.dz;
  return v.cwiseAbs().maxCoeff();
}

namespace {

template <class T>
Point<5, T> flow_t(const VectorField<5>& Y, Point<5, T> p, const T& s, double h) {
  const double sp = std::abs(primal(s));
  const int steps = std::max(1, static_cast<int>(std::ceil(sp / h - 1e-9)));
  const T dt = s / static_cast<double>(steps);
  auto axpy = [](const Point<5, T>& y, const T& a, const Point<5, T>& k) {
    Point<5, T> r;
    for (int i = 0; i < 5; ++i) r[i] = y[i] + a * k[i];
    return r;
  };
  for (int n = 0; n < steps; ++n) {
    auto k1 = Y(p);
    auto k2 = Y(axpy(p, 0.5 * dt, k1));
    auto k3 = Y(axpy(p, 0.5 * dt, k2));
    auto k4 = Y(axpy(p, dt, k3));
    for (int i = 0; i < 5; ++i) p[i] = p[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return p;
}

}  // namespace

ChartPoint5 flow(const VectorField<5>& Y, const ChartPoint5& p, double s, double h) {
  if (!std::isfinite(s)) throw std::invalid_argument("flow time must be finite");
  return flow_t<double>(Y, p, s, h);
}

bool inside_box(const ChartPoint5& p, double box) {
  for (double c : p)
    if (!(std::abs(c) <= box)) return false;
  return true;
}

ChartPoint5 rectangle(const VectorField<5>& Yi, const VectorField<5>& Yj, const ChartPoint5& p, double eps, double h) {
  ChartPoint5 q = flow(Yi, p, eps, h);
  q = flow(Yj, q, eps, h);
  q = flow(Yi, q, -eps, h);
  return flow(Yj, q, -eps, h);
}

namespace {

constexpr double kPrune = 1e-9;
constexpr double kMaxStep = 1.0;

// Parameters: `blocks` rounds of durations along Y₁..Y₄, then the rectangle amplitude r.
std::vector<PlanLeg> legs_from(const BracketFamily& f, const Eigen::VectorXd& th, double delta) {
  std::vector<PlanLeg> legs;
  const Eigen::Index n = th.size() - 1;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(th[k]) <= kPrune) continue;
    const int field = static_cast<int>(k % 4);
    if (!legs.empty() && legs.back().field == field)
      legs.back().duration += th[k];
    else
      legs.push_back({field, th[k]});
  }
  if (std::abs(th[n]) > kPrune) {
    legs.push_back({f.rect_i, th[n]});
    legs.push_back({f.rect_j, delta});
    legs.push_back({f.rect_i, -th[n]});
    legs.push_back({f.rect_j, -delta});
  }
  return legs;
}

template <class T>
Point<5, T> compose(const BracketFamily& f, const ChartPoint5& start, const std::vector<T>& th, double delta, double h) {
  Point<5, T> p;
  for (int i = 0; i < 5; ++i) p[i] = T(start[i]);
  const std::size_t n = th.size() - 1;
  for (std::size_t k = 0; k < n; ++k) p = flow_t(f.Y[k % 4], p, th[k], h);
  p = flow_t(f.Y[f.rect_i], p, th[n], h);
  p = flow_t(f.Y[f.rect_j], p, T(delta), h);
  p = flow_t(f.Y[f.rect_i], p, T(-1.0) * th[n], h);
  return flow_t(f.Y[f.rect_j], p, T(-delta), h);
}

double inf_norm(const Vec5& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

ControlProgram leg_program(const BracketFamily& f, const PlanLeg& leg, double dt) {
  ControlProgram prog;
  prog.mode = f.mode;
  prog.duration = std::abs(leg.duration);
  prog.dt = dt;
  auto c = f.controls[static_cast<std::size_t>(leg.field)];
  if (leg.duration < 0) {
    c[0] = -c[0];
    if (f.mode == ManeuverMode::Attacking || f.mode == ManeuverMode::Landing) c[1] = -c[1];
  }
  for (int i = 0; i < 3; ++i) prog.u[i] = ControlSignal::constant(c[i]);
  return prog;
}

Trajectory replay(const Plan& plan, double dt) {
  auto f = bracket_family(plan.mode);
  Trajectory out;
  ChartPoint5 p = plan.start;
  double t0 = 0.0;
  out.samples.push_back({0.0, p, std::nullopt, {}});
  for (const auto& leg : plan.legs) {
    auto tr = integrate_trajectory(leg_program(f, leg, dt), p, kSamplingBox);
    if (tr.chart_escape && !out.chart_escape) {
      out.chart_escape = true;
      out.escape_time = t0 + tr.escape_time;
    }
    out.samples.back() = tr.samples.front();
    out.samples.back().t = t0;
    for (std::size_t k = 1; k < tr.samples.size(); ++k) {
      auto s = tr.samples[k];
      s.t += t0;
      out.samples.push_back(s);
    }
    t0 += std::abs(leg.duration);
    p = tr.samples.back().state;
  }
  return out;
}

Plan plan_path(ManeuverMode mode, const ChartPoint5& start, const ChartPoint5& goal, double tol, const PlannerOptions& opt) {
  if (!inside_box(start) || !inside_box(goal)) throw OutsideChart("start and goal must lie in the sampling box");
  const auto f = bracket_family(mode);
  const double dz = goal[kZ] - start[kZ];
  const double delta = std::clamp(std::sqrt(std::abs(dz) / f.rect_coeff), 0.05, 1.0);
  const Vec5 g = to_eigen<5>(goal);

  const double target = std::min(1e-10, 1e-3 * tol);
  int it = 0;
  // Damped minimum-norm Gauss-Newton toward `gl` from `th`; returns the final residual.
  auto solve = [&](Eigen::VectorXd& th, const Vec5& gl, int budget) {
    const Eigen::Index m = th.size();
    auto residual = [&](const Eigen::VectorXd& t) {
      std::vector<double> tv(t.data(), t.data() + m);
      return Vec5(to_eigen<5>(compose<double>(f, start, tv, delta, opt.plan_step)) - gl);
    };
    Vec5 r = residual(th);
    for (int k = 0; k < budget && it < opt.max_iterations && inf_norm(r) > target; ++k, ++it) {
      Eigen::MatrixXd J(5, m);
      for (Eigen::Index j = 0; j < m; ++j) {
        std::vector<S1> td(static_cast<std::size_t>(m));
        for (Eigen::Index q = 0; q < m; ++q) td[static_cast<std::size_t>(q)] = S1(th[q], q == j ? 1.0 : 0.0);
        auto out = compose<S1>(f, start, td, delta, opt.plan_step);
        for (int i = 0; i < 5; ++i) J(i, j) = out[i].d;
      }
      const Eigen::Matrix<double, 5, 5> JJ = J * J.transpose();
      const double mu = 1e-12 * JJ.trace();
      Eigen::VectorXd step = -J.transpose() * (JJ + mu * Eigen::Matrix<double, 5, 5>::Identity()).ldlt().solve(r);
      if (!step.allFinite()) break;
      const double cap = step.cwiseAbs().maxCoeff() / kMaxStep;
      if (cap > 1.0) step /= cap;
      bool accepted = false;
      double alpha = 1.0;
      for (int ls = 0; ls < 20; ++ls, alpha *= 0.5) {
        Eigen::VectorXd trial = th + alpha * step;
        Vec5 rt = residual(trial);
        if (rt.allFinite() && rt.norm() < r.norm()) {
          th = trial;
          r = rt;
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
    }
    return inf_norm(r);
  };

  Eigen::VectorXd th;
  double res = std::numeric_limits<double>::infinity();
  const Vec5 s0 = to_eigen<5>(start);
  // More rounds of Y₁..Y₄ and a finer continuation from start to goal on failure.
  for (int attempt = 0; attempt < 4 && res > target && it < opt.max_iterations; ++attempt) {
    const int blocks = 1 + attempt;
    const int stages = 1 << attempt;
    th = Eigen::VectorXd::Zero(4 * blocks + 1);
    for (int k = 1; k <= stages && it < opt.max_iterations; ++k)
      res = solve(th, s0 + (static_cast<double>(k) / stages) * (g - s0), k == stages ? opt.max_iterations / 4 : 30);
  }

  Plan plan;
  plan.mode = mode;
  plan.start = start;
  plan.goal = goal;
  plan.iterations = it;
  plan.legs = legs_from(f, th, delta);
  plan.rectangles = std::abs(th[th.size() - 1]) > kPrune ? 1 : 0;

  plan.certified = true;
  ChartPoint5 p = plan.start;
  for (const auto& leg : plan.legs) {
    auto seg = integrate_trajectory(leg_program(f, leg, opt.replay_dt), p, kSamplingBox);
    auto rep = constraint_residuals(seg, mode, opt.replay_tol);
    plan.max_contact = std::max(plan.max_contact, rep.max_contact);
    plan.max_nullity = std::max(plan.max_nullity, rep.max_nullity);
    plan.certified = plan.certified && rep.certified;
    plan.box_escape = plan.box_escape || seg.chart_escape;
    p = seg.samples.back().state;
  }
  plan.endpoint = p;
  plan.error = inf_norm(to_eigen<5>(plan.endpoint) - g);
  if (!(plan.error < tol)) throw NoConvergence("planner did not reach the goal within tolerance", plan);
  return plan;
}

nlohmann::json Plan::to_json() const {
  nlohmann::json legs_j = nlohmann::json::array();
  for (const auto& l : legs) legs_j.push_back({{"field", "Y" + std::to_string(l.field + 1)}, {"duration", l.duration}});
  return {{"mode", to_string(mode)},
          {"start", start},
          {"goal", goal},
          {"endpoint", endpoint},
          {"error", error},
          {"legs", legs_j},
          {"leg_count", legs.size()},
          {"rectangles", rectangles},
          {"iterations", iterations},
          {"box_escape", box_escape},
          {"replay", {{"max_contact", max_contact}, {"max_nullity", max_nullity}, {"certified", certified}}}};
}

}  // namespace saucer
