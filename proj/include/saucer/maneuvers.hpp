#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "saucer/config_space.hpp"
#include "saucer/controls.hpp"
#include "saucer/gl2_rep.hpp"

namespace saucer {

enum class ManeuverMode { Attacking, Landing, G2Simple, G2Strict };

std::string to_string(ManeuverMode m);
/// Accepts attacking | landing | g2s | g2d.
ManeuverMode parse_mode(const std::string& s);

/// g = 2(dx·da + dy·db) over the coordinate differentials.
const SymTensorField<5>& attacking_metric_field();
/// ĝ = 2((1+a²)db − ab·da)dx − 2((1+b²)da − ab·db)dy.
const SymTensorField<5>& landing_metric_field();
SymTensor<5> attacking_metric(const ChartPoint5& p);
SymTensor<5> landing_metric(const ChartPoint5& p);

/// Matrix S(F_i, F_j) of a rank-2 tensor on the four frame fields.
Mat4 restrict_to_frame(const SymTensor<5>& S, const Frame4& frame, const ChartPoint5& p);

/// (ω¹, ω², ω³, ω⁴) = (dx, dy, −⅓db, da) applied to a vector.
template <class T>
std::array<T, 4> g2_components(const Point<5, T>& v) {
  return {v[kX], v[kY], (-1.0 / 3.0) * v[kB], v[kA]};
}
/// Rows are the four covectors against (dx, dy, dz, da, db).
std::array<Vec5, 4> g2_coframe(const ChartPoint5& p);
const std::array<DifferentialForm<5>, 4>& g2_coframe_fields();

/// Υ(ω¹(v), …, ω⁴(v)) as a rank-4 field over coordinate differentials.
const SymTensorField<5>& upsilon_field();

template <class T>
Point<5, T> z_combination(const Point<5, T>& p, const T& c1, const T& c2, const T& c3, const T& c4) {
  return {c1, c2, p[kA] * c1 + p[kB] * c2, c4, -3.0 * c3};
}

/// Velocity of the control law for `mode` as a combination of Z₁..Z₄.
template <class T>
Point<5, T> maneuver_velocity(ManeuverMode mode, const Point<5, T>& p, const T& u1, const T& u2, const T& u3) {
  const T& a = p[kA];
  const T& b = p[kB];
  switch (mode) {
    case ManeuverMode::Attacking:
      return z_combination(p, 3.0 * u1 * u3, u2 * u3, u1, u2);
    case ManeuverMode::Landing:
      return z_combination(p, u3 * ((1.0 + b * b) * u2 + 3.0 * a * b * u1), -(u3 * (a * b * u2 + 3.0 * (1.0 + a * a) * u1)),
                           u1, u2);
    case ManeuverMode::G2Simple:
      return z_combination(p, u1, u1 * (u2 + u3), u1 * (u2 * u2 + 2.0 * u3 * u2),
                           u1 * (u2 * u2 * u2 + 3.0 * u3 * u2 * u2));
    case ManeuverMode::G2Strict:
      return z_combination(p, u1, u1 * u2, u1 * u2 * u2, u1 * u2 * u2 * u2);
  }
  return Point<5, T>{};
}

Vec5 maneuver_velocity(ManeuverMode mode, const ChartPoint5& p, double u1, double u2, double u3);

struct ControlProgram {
  ManeuverMode mode = ManeuverMode::Attacking;
  std::array<ControlSignal, 3> u{ControlSignal::constant(0.0), ControlSignal::constant(0.0),
                                 ControlSignal::constant(0.0)};
  double duration = 1.0;
  double dt = 1e-3;

  /// {"mode":..., "duration":T, "dt":h, "u1":signal, "u2":signal, "u3":signal}
  static ControlProgram from_json(const nlohmann::json& j);
};

struct TrajectorySample {
  double t = 0.0;
  ChartPoint5 state{};
  std::optional<Vec5> velocity;
  std::array<double, 3> controls{};
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  bool chart_escape = false;
  double escape_time = 0.0;
};

inline constexpr double kSamplingBox = 2.0;

/// Classical RK4 on ṗ = maneuver_velocity(mode, p, u(t)).
Trajectory integrate_trajectory(const ControlProgram& program, const ChartPoint5& p0, double box = kSamplingBox);

class MissingVelocity : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ResidualTolerances {
  double contact = 1e-9;
  double nullity = 1e-8;
};

struct SampleResidual {
  double t = 0.0;
  double contact = 0.0;
  std::vector<double> nullity;
};

struct ResidualReport {
  ManeuverMode mode = ManeuverMode::Attacking;
  std::vector<SampleResidual> samples;
  double max_contact = 0.0;
  double max_nullity = 0.0;
  bool certified = false;
};

/// Names of the nullity residuals reported for a mode.
std::vector<std::string> nullity_names(ManeuverMode mode);
/// Mode-specific nullity values of a velocity v at p.
std::vector<double> nullity_values(ManeuverMode mode, const ChartPoint5& p, const Vec5& v);

ResidualReport constraint_residuals(const Trajectory& tr, ManeuverMode mode, ResidualTolerances tol = {});

/// ṙ·ṅ for the ambient lift of a chart velocity v at p.
double ambient_attacking_residual(const ChartPoint5& p, const Vec5& v);

}  // namespace saucer
