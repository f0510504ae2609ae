#include "saucer/fibration.hpp"

#include <cmath>

namespace saucer {

Mat6 coframe_matrix(Chart6 chart, const Coords6& p) {
  auto rows = coframe_rows(chart, p);
  Mat6 M;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) M(i, j) = rows[i][j];
  return M;
}

namespace {

Coframe6 make_coframe(Chart6 chart) {
  Coframe6 out;
  for (int r = 0; r < 6; ++r)
    out[r] = one_form_field<6>([chart, r]<class T>(const Point<6, T>& p) { return coframe_rows(chart, p)[r]; });
  return out;
}

}  // namespace

const Coframe6& coframe_forms(Chart6 chart) {
  static const Coframe6 x = make_coframe(Chart6::X);
  static const Coframe6 y = make_coframe(Chart6::Y);
  return chart == Chart6::X ? x : y;
}

std::array<double, 6> verify_eds(const Coframe6& w, const Coords6& p) {
  std::array<Form<6>, 6> v;
  for (int i = 0; i < 6; ++i) v[i] = w[i].at(p);
  const Form<6> zero(2);
  const std::array<Form<6>, 6> rhs{
      wedge(v[1], v[4]) - scale(3.0, wedge(v[2], v[3])),
      scale(3.0, wedge(v[2], v[5])),
      scale(2.0, wedge(v[3], v[5])),
      wedge(v[4], v[5]),
      zero,
      zero,
  };
  std::array<double, 6> res{};
  for (int i = 0; i < 6; ++i) {
    Form<6> d = exterior_derivative(w[i], p) - rhs[i];
    for (double c : d.c) res[i] = std::max(res[i], std::abs(c));
  }
  return res;
}

namespace {

// Inverse by Gauss-Jordan, pivoting on primal magnitudes.
template <class T>
std::array<Point<6, T>, 6> invert(std::array<Point<6, T>, 6> A) {
  std::array<Point<6, T>, 6> B{};
  for (int i = 0; i < 6; ++i) {
    B[i].fill(T(0.0));
    B[i][i] = T(1.0);
  }
  for (int c = 0; c < 6; ++c) {
    int piv = c;
    for (int r = c + 1; r < 6; ++r)
      if (std::abs(primal(A[r][c])) > std::abs(primal(A[piv][c]))) piv = r;
    if (primal(A[piv][c]) == 0.0) throw std::domain_error("coframe is singular");
    std::swap(A[c], A[piv]);
    std::swap(B[c], B[piv]);
    const T inv = 1.0 / A[c][c];
    for (int j = 0; j < 6; ++j) {
      A[c][j] = A[c][j] * inv;
      B[c][j] = B[c][j] * inv;
    }
    for (int r = 0; r < 6; ++r) {
      if (r == c) continue;
      const T f = A[r][c];
      for (int j = 0; j < 6; ++j) {
        A[r][j] = A[r][j] - f * A[c][j];
        B[r][j] = B[r][j] - f * B[c][j];
      }
    }
  }
  return B;
}

std::array<VectorField<6>, 6> make_dual(Chart6 chart) {
  std::array<VectorField<6>, 6> out;
  for (int a = 0; a < 6; ++a)
    out[a] = VectorField<6>("e" + std::to_string(frame_label(a)), [chart, a]<class T>(const Point<6, T>& p) {
      auto inv = invert(coframe_rows(chart, p));
      Point<6, T> col;
      for (int i = 0; i < 6; ++i) col[i] = inv[i][a];
      return col;
    });
  return out;
}

}  // namespace

const std::array<VectorField<6>, 6>& dual_frame(Chart6 chart) {
  static const auto x = make_dual(Chart6::X);
  static const auto y = make_dual(Chart6::Y);
  return chart == Chart6::X ? x : y;
}

int frame_index(int label) {
  if (label >= 0 && label <= 4) return label;
  if (label == 7) return 5;
  throw std::invalid_argument("frame labels are 0..4 and 7");
}

int frame_label(int index) { return index == 5 ? 7 : index; }

std::vector<CommutatorCheck> verify_commutators(Chart6 chart, const Coords6& p) {
  struct Claim {
    int i, j, k;
    double c;
  };
  const Claim claims[] = {{4, 7, 3, -1}, {7, 3, 2, 2}, {7, 2, 1, -3}, {3, 2, 0, 3}, {4, 2, 0, 0}, {4, 0, 0, 0}, {4, 1, 0, -1}};
  const auto& e = dual_frame(chart);
  const Mat6 W = coframe_matrix(chart, p);
  std::vector<CommutatorCheck> out;
  for (const auto& cl : claims) {
    CommutatorCheck c;
    c.i = cl.i;
    c.j = cl.j;
    c.claimed.setZero();
    c.claimed[frame_index(cl.k)] = cl.c;
    c.computed = W * bracket(e[frame_index(cl.i)], e[frame_index(cl.j)], p);
    c.residual = (c.computed - c.claimed).cwiseAbs().maxCoeff();
    out.push_back(c);
  }
  return out;
}

D2Controls D2Controls::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("u") || !j.contains("w")) throw ControlFormatError("D2 controls need \"u\" and \"w\"");
  return {ControlSignal::from_json(j.at("u")), ControlSignal::from_json(j.at("w"))};
}

std::array<double, 5> d2_velocity(const std::array<double, 5>& y, double u, double w) {
  return {3.0 * y[2] * u, 3.0 * y[4] * y[4] * u, -2.0 * y[4] * u, u, w};
}

D2Curve integrate_d2_curve(const std::array<double, 5>& q0, const D2Controls& ctl, double duration, double dt,
                           double t0) {
  if (!(duration >= 0.0) || !(dt > 0.0)) throw std::invalid_argument("duration must be >= 0 and dt > 0");
  const int n = std::max(1, static_cast<int>(std::ceil(duration / dt - 1e-12)));
  const double h = duration / n;
  auto sample = [&](double t, const std::array<double, 5>& y) {
    return D2Sample{t, y, ctl.u.value(t), ctl.w.value(t), ctl.u.derivative(t), ctl.w.derivative(t)};
  };
  auto rhs = [&](double t, const std::array<double, 5>& y) { return d2_velocity(y, ctl.u.value(t), ctl.w.value(t)); };
  auto axpy = [](std::array<double, 5> y, double a, const std::array<double, 5>& k) {
    for (int i = 0; i < 5; ++i) y[i] += a * k[i];
    return y;
  };
  D2Curve c;
  std::array<double, 5> y = q0;
  c.samples.push_back(sample(t0, y));
  for (int s = 0; s < n && duration > 0.0; ++s) {
    const double t = t0 + s * h;
    auto k1 = rhs(t, y);
    auto k2 = rhs(t + h / 2, axpy(y, h / 2, k1));
    auto k3 = rhs(t + h / 2, axpy(y, h / 2, k2));
    auto k4 = rhs(t + h, axpy(y, h, k3));
    for (int i = 0; i < 5; ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    c.samples.push_back(sample(t0 + (s + 1) * h, y));
  }
  return c;
}

double d2_constraint_residual(const D2Curve& c) {
  double worst = 0.0;
  for (const auto& s : c.samples) {
    auto v = d2_velocity(s.y, s.u, s.w);
    worst = std::max({worst, std::abs(v[0] - 3.0 * s.y[2] * v[3]), std::abs(v[1] - 3.0 * s.y[4] * s.y[4] * v[3]),
                      std::abs(v[2] + 2.0 * s.y[4] * v[3]), std::abs(v[3] - s.u), std::abs(v[4] - s.w)});
  }
  return worst;
}

nlohmann::json D2Curve::to_json() const {
  nlohmann::json t = nlohmann::json::array(), y = nlohmann::json::array(), ctl = nlohmann::json::array();
  for (const auto& s : samples) {
    t.push_back(s.t);
    y.push_back(s.y);
    ctl.push_back({s.u, s.w});
  }
  return {{"t", t}, {"y", y}, {"controls", ctl}};
}

D2Curve D2Curve::from_json(const nlohmann::json& j) {
  D2Curve c;
  const auto& t = j.at("t");
  const auto& y = j.at("y");
  const auto& ctl = j.at("controls");
  if (t.size() != y.size() || t.size() != ctl.size()) throw std::invalid_argument("curve arrays differ in length");
  for (std::size_t k = 0; k < t.size(); ++k) {
    D2Sample s;
    s.t = t[k].get<double>();
    s.y = y[k].get<std::array<double, 5>>();
    s.u = ctl[k].at(0).get<double>();
    s.w = ctl[k].at(1).get<double>();
    c.samples.push_back(s);
  }
  return c;
}

LiftedCurve lift_curve(const D2Curve& c, double eps) {
  LiftedCurve out;
  for (const auto& s : c.samples) {
    if (std::abs(s.w) <= eps) throw LiftSingular("|dy4/dt| <= " + std::to_string(eps) + " at t = " + std::to_string(s.t));
    LiftedSample l;
    l.t = s.t;
    for (int i = 0; i < 5; ++i) l.y[i] = s.y[i];
    l.y[5] = s.u / s.w;
    auto v = d2_velocity(s.y, s.u, s.w);
    for (int i = 0; i < 5; ++i) l.ydot[i] = v[i];
    l.ydot[5] = (s.du * s.w - s.u * s.dw) / (s.w * s.w);
    out.samples.push_back(l);
  }
  return out;
}

nlohmann::json LiftedCurve::to_json() const {
  nlohmann::json t = nlohmann::json::array(), y = nlohmann::json::array();
  for (const auto& s : samples) {
    t.push_back(s.t);
    y.push_back(s.y);
  }
  return {{"t", t}, {"y", y}};
}

ProjectedCurve project_to_contact(const LiftedCurve& lc) {
  ProjectedCurve pc;
  for (const auto& s : lc.samples) {
    auto xd = x_from_y(seed(s.y, s.ydot));
    ProjectedSample p;
    p.t = s.t;
    for (int i = 0; i < 5; ++i) {
      p.x[i] = xd[i].v;
      p.velocity[i] = xd[i].d;
    }
    p.fiber = xd[5].v;
    p.y4 = s.y[4];
    pc.samples.push_back(p);
  }
  return pc;
}

TangencyReport certify_twisted_cubic_tangency(const ProjectedCurve& pc, double zero_velocity) {
  TangencyReport r;
  for (const auto& s : pc.samples) {
    TangencySample ts;
    ts.t = s.t;
    const auto& v = s.velocity;
    const double speed = v.norm();
    if (speed <= zero_velocity) {
      ts.skipped = true;
      ++r.skipped;
      r.samples.push_back(ts);
      continue;
    }
    ts.contact = std::abs(v[0] - 3.0 * s.x[2] * v[3] + s.x[1] * v[4]) / speed;
    Eigen::Vector4d c(v[4], v[3], v[2], v[1]);
    const double T = -s.y4;
    Eigen::Vector4d cubic(1.0, T, T * T, T * T * T);
    cubic.normalize();
    if (c.norm() <= zero_velocity * speed)
      ts.angular = 1.0;
    else
      ts.angular = (c - c.dot(cubic) * cubic).norm() / c.norm();
    r.max_contact = std::max(r.max_contact, ts.contact);
    r.max_angular = std::max(r.max_angular, ts.angular);
    r.samples.push_back(ts);
  }
  return r;
}

nlohmann::json TangencyReport::to_json() const {
  nlohmann::json j;
  j["max_contact_residual"] = max_contact;
  j["max_angular_residual"] = max_angular;
  j["samples"] = samples.size();
  j["skipped"] = skipped;
  return j;
}

}  // namespace saucer
