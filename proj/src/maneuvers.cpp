#include "saucer/maneuvers.hpp"

#include <cmath>

namespace saucer {

std::string to_string(ManeuverMode m) {
  switch (m) {
    case ManeuverMode::Attacking:
      return "attacking";
    case ManeuverMode::Landing:
      return "landing";
    case ManeuverMode::G2Simple:
      return "g2s";
    case ManeuverMode::G2Strict:
      return "g2d";
  }
  return "attacking";
}

ManeuverMode parse_mode(const std::string& s) {
  if (s == "attacking") return ManeuverMode::Attacking;
  if (s == "landing") return ManeuverMode::Landing;
  if (s == "g2s") return ManeuverMode::G2Simple;
  if (s == "g2d") return ManeuverMode::G2Strict;
  throw std::invalid_argument("unknown maneuver mode '" + s + "' (expected attacking|landing|g2s|g2d)");
}

const SymTensorField<5>& attacking_metric_field() {
  static const auto g = SymTensorField<5>::from_polynomial(
      "g_attacking", 2,
      []<class T>(const Point<5, T>&, const Point<5, T>& v) { return 2.0 * (v[kX] * v[kA] + v[kY] * v[kB]); });
  return g;
}

const SymTensorField<5>& landing_metric_field() {
  static const auto g = SymTensorField<5>::from_polynomial(
      "g_landing", 2, []<class T>(const Point<5, T>& p, const Point<5, T>& v) {
        const T& a = p[kA];
        const T& b = p[kB];
        return 2.0 * ((1.0 + a * a) * v[kB] - a * b * v[kA]) * v[kX] - 2.0 * ((1.0 + b * b) * v[kA] - a * b * v[kB]) * v[kY];
      });
  return g;
}

SymTensor<5> attacking_metric(const ChartPoint5& p) { return attacking_metric_field().at(p); }
SymTensor<5> landing_metric(const ChartPoint5& p) { return landing_metric_field().at(p); }

Mat4 restrict_to_frame(const SymTensor<5>& S, const Frame4& frame, const ChartPoint5& p) {
  if (S.rank != 2) throw std::invalid_argument("restrict_to_frame expects a rank-2 tensor");
  MatN<5> G;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) G(i, j) = S.at({i, j});
  Eigen::Matrix<double, 5, 4> F;
  for (int k = 0; k < 4; ++k) F.col(k) = frame.fields[k].value(p);
  return F.transpose() * G * F;
}

std::array<Vec5, 4> g2_coframe(const ChartPoint5&) {
  std::array<Vec5, 4> w;
  for (auto& r : w) r.setZero();
  w[0][kX] = 1.0;
  w[1][kY] = 1.0;
  w[2][kB] = -1.0 / 3.0;
  w[3][kA] = 1.0;
  return w;
}

const std::array<DifferentialForm<5>, 4>& g2_coframe_fields() {
  static const std::array<DifferentialForm<5>, 4> w = [] {
    std::array<DifferentialForm<5>, 4> out;
    auto rows = g2_coframe(ChartPoint5{});
    for (int i = 0; i < 4; ++i) out[i] = constant_form(one_form<5, double>(to_point<5>(rows[i])));
    return out;
  }();
  return w;
}

const SymTensorField<5>& upsilon_field() {
  static const auto U =
      SymTensorField<5>::from_polynomial("upsilon", 4, []<class T>(const Point<5, T>&, const Point<5, T>& v) {
        auto w = g2_components(v);
        return upsilon(w[0], w[1], w[2], w[3]);
      });
  return U;
}

Vec5 maneuver_velocity(ManeuverMode mode, const ChartPoint5& p, double u1, double u2, double u3) {
  return to_eigen<5>(maneuver_velocity<double>(mode, p, u1, u2, u3));
}

ControlProgram ControlProgram::from_json(const nlohmann::json& j) {
  ControlProgram prog;
  if (!j.is_object()) throw ControlFormatError("control program must be a JSON object");
  if (j.contains("mode")) prog.mode = parse_mode(j.at("mode").get<std::string>());
  if (j.contains("duration")) prog.duration = j.at("duration").get<double>();
  if (j.contains("dt")) prog.dt = j.at("dt").get<double>();
  const char* keys[3] = {"u1", "u2", "u3"};
  for (int i = 0; i < 3; ++i)
    if (j.contains(keys[i])) prog.u[i] = ControlSignal::from_json(j.at(keys[i]));
  if (!(prog.dt > 0.0)) throw ControlFormatError("dt must be positive");
  if (!(prog.duration >= 0.0)) throw ControlFormatError("duration must be nonnegative");
  return prog;
}

namespace {

std::array<double, 3> controls_at(const ControlProgram& prog, double t) {
  std::array<double, 3> u{prog.u[0].value(t), prog.u[1].value(t), prog.u[2].value(t)};
  for (double c : u)
    if (!std::isfinite(c)) throw std::domain_error("control value is not finite");
  return u;
}

Point<5> velocity_at(const ControlProgram& prog, const ChartPoint5& p, double t) {
  auto u = controls_at(prog, t);
  return maneuver_velocity<double>(prog.mode, p, u[0], u[1], u[2]);
}

}  // namespace

Trajectory integrate_trajectory(const ControlProgram& program, const ChartPoint5& p0, double box) {
  if (!(program.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  Trajectory tr;
  const long steps = std::max(1L, static_cast<long>(std::ceil(program.duration / program.dt - 1e-9)));
  const double h = program.duration / static_cast<double>(steps);
  auto record = [&](double t, const ChartPoint5& p) {
    TrajectorySample s;
    s.t = t;
    s.state = p;
    s.controls = controls_at(program, t);
    s.velocity = to_eigen<5>(maneuver_velocity<double>(program.mode, p, s.controls[0], s.controls[1], s.controls[2]));
    tr.samples.push_back(s);
    if (!tr.chart_escape) {
      for (double c : p)
        if (std::abs(c) > box) {
          tr.chart_escape = true;
          tr.escape_time = t;
          break;
        }
    }
  };
  ChartPoint5 p = p0;
  record(0.0, p);
  if (program.duration == 0.0) return tr;
  auto axpy = [](const ChartPoint5& y, double a, const Point<5>& k) {
    ChartPoint5 r;
    for (int i = 0; i < 5; ++i) r[i] = y[i] + a * k[i];
    return r;
  };
  for (long n = 0; n < steps; ++n) {
    const double t = n * h;
    auto k1 = velocity_at(program, p, t);
    auto k2 = velocity_at(program, axpy(p, h / 2, k1), t + h / 2);
    auto k3 = velocity_at(program, axpy(p, h / 2, k2), t + h / 2);
    auto k4 = velocity_at(program, axpy(p, h, k3), t + h);
    for (int i = 0; i < 5; ++i) p[i] += (h / 6.0) * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    record((n + 1 == steps) ? program.duration : (n + 1) * h, p);
  }
  return tr;
}

std::vector<std::string> nullity_names(ManeuverMode mode) {
  switch (mode) {
    case ManeuverMode::Attacking:
      return {"adot_xdot_plus_bdot_ydot"};
    case ManeuverMode::Landing:
      return {"g_landing"};
    case ManeuverMode::G2Simple:
      return {"upsilon"};
    case ManeuverMode::G2Strict:
      return {"g1", "g2", "g3", "upsilon"};
  }
  return {};
}

std::vector<double> nullity_values(ManeuverMode mode, const ChartPoint5& p, const Vec5& v) {
  switch (mode) {
    case ManeuverMode::Attacking:
      return {v[kA] * v[kX] + v[kB] * v[kY]};
    case ManeuverMode::Landing: {
      const double a = p[kA], b = p[kB];
      return {2 * ((1 + a * a) * v[kB] - a * b * v[kA]) * v[kX] - 2 * ((1 + b * b) * v[kA] - a * b * v[kB]) * v[kY]};
    }
    case ManeuverMode::G2Simple: {
      auto w = g2_components(to_point<5>(v));
      return {upsilon(w[0], w[1], w[2], w[3])};
    }
    case ManeuverMode::G2Strict: {
      auto w = g2_components(to_point<5>(v));
      Vector4 X(w[0], w[1], w[2], w[3]);
      auto g = bilinears(X, X);
      return {g.g1, g.g2, g.g3, quartic_upsilon(X)};
    }
  }
  return {};
}

ResidualReport constraint_residuals(const Trajectory& tr, ManeuverMode mode, ResidualTolerances tol) {
  ResidualReport rep;
  rep.mode = mode;
  for (const auto& s : tr.samples) {
    if (!s.velocity) throw MissingVelocity("trajectory sample at t=" + std::to_string(s.t) + " has no velocity");
    SampleResidual r;
    r.t = s.t;
    r.contact = std::abs(contact_form(s.state).dot(*s.velocity));
    r.nullity = nullity_values(mode, s.state, *s.velocity);
    for (auto& x : r.nullity) x = std::abs(x);
    rep.max_contact = std::max(rep.max_contact, r.contact);
    for (double x : r.nullity) rep.max_nullity = std::max(rep.max_nullity, x);
    rep.samples.push_back(std::move(r));
  }
  rep.certified = rep.max_contact < tol.contact && rep.max_nullity < tol.nullity;
  return rep;
}

double ambient_attacking_residual(const ChartPoint5& p, const Vec5& v) {
  using D = S1;
  const D a(p[kA], v[kA]);
  const D b(p[kB], v[kB]);
  D inv = 1.0 / sqrt(1.0 + a * a + b * b);
  D n[3] = {-a * inv, -b * inv, inv};
  return v[kX] * n[0].d + v[kY] * n[1].d + v[kZ] * n[2].d;
}

}  // namespace saucer
