#include "saucer/config_space.hpp"

#include <cmath>

namespace saucer {

namespace {

constexpr double kUnitTol = 1e-12;

// Top-degree coefficient against dx∧dy∧da∧db∧dz.
double top_coefficient(const Form<5>& f) { return f.component({kX, kY, kA, kB, kZ}); }

}  // namespace

ChartPoint5 chart_from_ambient(const AmbientConfig& c) {
  if (!c.r.allFinite() || !c.n.allFinite()) throw InvalidNormal("non-finite ambient configuration");
  if (std::abs(c.n.norm() - 1.0) > kUnitTol) throw InvalidNormal("normal vector is not a unit vector");
  if (c.n.z() <= 0.0) throw OutsideChart("normal has n·e_z <= 0; point lies outside the northern chart");
  return {c.r.x(), c.r.y(), c.r.z(), -c.n.x() / c.n.z(), -c.n.y() / c.n.z()};
}

AmbientConfig ambient_from_chart(const ChartPoint5& p) {
  AmbientConfig c;
  c.r = Vec3(p[kX], p[kY], p[kZ]);
  Vec3 N(-p[kA], -p[kB], 1.0);
  c.n = N / N.norm();
  return c;
}

Vec5 contact_form(const ChartPoint5& p) {
  Vec5 w;
  w << -p[kA], -p[kB], 1.0, 0.0, 0.0;
  return w;
}

const DifferentialForm<5>& contact_form_field() {
  static const DifferentialForm<5> w0 = one_form_field<5>([]<class T>(const Point<5, T>& p) {
    return Point<5, T>{-p[kA], -p[kB], T(1.0), T(0.0), T(0.0)};
  });
  return w0;
}

const DifferentialForm<5>& ambient_contact_form_field() {
  static const DifferentialForm<5> w = one_form_field<5>([]<class T>(const Point<5, T>& p) {
    using std::sqrt;
    T inv = 1.0 / sqrt(1.0 + p[kA] * p[kA] + p[kB] * p[kB]);
    return Point<5, T>{-p[kA] * inv, -p[kB] * inv, inv, T(0.0), T(0.0)};
  });
  return w;
}

double contact_nondegeneracy(const ChartPoint5& p) {
  static const DifferentialForm<5> top = [] {
    const auto& w = contact_form_field();
    auto dw = exterior_derivative(w);
    return wedge(wedge(dw, dw), w);
  }();
  return top_coefficient(top.at(p));
}

double ambient_top_form(const ChartPoint5& p) {
  static const DifferentialForm<5> top = [] {
    const auto& w = ambient_contact_form_field();
    auto dw = exterior_derivative(w);
    return wedge(wedge(dw, dw), w);
  }();
  return top_coefficient(top.at(p));
}

double sphere_volume_form(const ChartPoint5& p) {
  // n(a, b) and its partials, then ½ε_ijk n_i dn_j∧dn_k = n·(∂_a n × ∂_b n) da∧db.
  auto n_of = []<class T>(const T& a, const T& b) {
    using std::sqrt;
    T inv = 1.0 / sqrt(1.0 + a * a + b * b);
    return std::array<T, 3>{-a * inv, -b * inv, inv};
  };
  const double a = p[kA];
  const double b = p[kB];
  auto na = n_of(S1(a, 1.0), S1(b, 0.0));
  auto nb = n_of(S1(a, 0.0), S1(b, 1.0));
  Vec3 n(na[0].v, na[1].v, na[2].v);
  Vec3 da(na[0].d, na[1].d, na[2].d);
  Vec3 db(nb[0].d, nb[1].d, nb[2].d);
  double area = n.dot(da.cross(db));
  // (da∧db)∧(dx∧dy∧dz) = dx∧dy∧da∧db∧dz
  return -2.0 * area;
}

const Frame4& e_frame() {
  static const Frame4 f{FrameTag::E,
                        {VectorField<5>("E1", []<class T>(const Point<5, T>& p) {
                           return Point<5, T>{T(1.0), T(0.0), p[kA], T(0.0), T(0.0)};
                         }),
                         VectorField<5>("E2", []<class T>(const Point<5, T>& p) {
                           return Point<5, T>{T(0.0), T(1.0), p[kB], T(0.0), T(0.0)};
                         }),
                         coordinate_field<5>(kB, "E3"), coordinate_field<5>(kA, "E4")}};
  return f;
}

const Frame4& z_frame() {
  static const Frame4 f{FrameTag::Z,
                        {VectorField<5>("Z1", []<class T>(const Point<5, T>& p) {
                           return Point<5, T>{T(1.0), T(0.0), p[kA], T(0.0), T(0.0)};
                         }),
                         VectorField<5>("Z2", []<class T>(const Point<5, T>& p) {
                           return Point<5, T>{T(0.0), T(1.0), p[kB], T(0.0), T(0.0)};
                         }),
                         VectorField<5>("Z3", []<class T>(const Point<5, T>&) {
                           return Point<5, T>{T(0.0), T(0.0), T(0.0), T(0.0), T(-3.0)};
                         }),
                         coordinate_field<5>(kA, "Z4")}};
  return f;
}

const VectorField<5>& d_z() {
  static const VectorField<5> f = coordinate_field<5>(kZ, "dz");
  return f;
}

std::string to_string(FrameTag tag) { return tag == FrameTag::E ? "E-frame" : "Z-frame"; }

ChartSampler::ChartSampler(std::uint64_t seed, double half_width, double max_normal)
    : rng_(seed), half_width_(half_width), max_normal_(max_normal) {}

ChartPoint5 ChartSampler::next() {
  while (true) {
    ChartPoint5 p;
    for (auto& c : p) c = rng_.uniform(-half_width_, half_width_);
    if (std::sqrt(1.0 + p[kA] * p[kA] + p[kB] * p[kB]) <= max_normal_) return p;
  }
}

}  // namespace saucer
