#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "saucer/controls.hpp"
#include "saucer/forms.hpp"

namespace saucer {

using Coords6 = Point<6>;
using Vec6 = VecN<6>;
using Mat6 = MatN<6>;

template <class T>
Point<6, T> y_from_x(const Point<6, T>& x) {
  const T x4sq = x[4] * x[4];
  const T x5cu = x[5] * x[5] * x[5];
  return {x[0] + x[1] * x[4] + 3.0 * x[5] * x[2] * x[4] - x5cu * x4sq,
          x[1] + x5cu * x[4],
          x[2] - x[5] * x[5] * x[4],
          x[3] + x[5] * x[4],
          x[5],
          x[4]};
}

template <class T>
Point<6, T> x_from_y(const Point<6, T>& y) {
  const T y4cu = y[4] * y[4] * y[4];
  return {y[0] - y[1] * y[5] - 3.0 * y[2] * y[4] * y[5] - y4cu * y[5] * y[5],
          y[1] - y4cu * y[5],
          y[2] + y[4] * y[4] * y[5],
          y[3] - y[4] * y[5],
          y[5],
          y[4]};
}

enum class Chart6 { X, Y };

/// Rows ω⁰, ω¹, ω², ω³, ω⁴, ω⁷ against (d·⁰..d·⁵).
template <class T>
std::array<Point<6, T>, 6> coframe_rows(Chart6 chart, const Point<6, T>& p) {
  const T O(0.0), I(1.0);
  if (chart == Chart6::X) {
    const T& x1 = p[1];
    const T& x2 = p[2];
    const T& x5 = p[5];
    return {{{I, O, O, -3.0 * x2, x1, O},
             {O, I, 3.0 * x5, 3.0 * x5 * x5, x5 * x5 * x5, O},
             {O, O, I, 2.0 * x5, x5 * x5, O},
             {O, O, O, I, x5, O},
             {O, O, O, O, I, O},
             {O, O, O, O, O, -I}}};
  }
  const T& y2 = p[2];
  const T& y4 = p[4];
  const T& y5 = p[5];
  return {{{I, -y5, -3.0 * y4 * y5, -3.0 * (y2 + y5 * y4 * y4), O, O},
           {O, I, 3.0 * y4, 3.0 * y4 * y4, O, O},
           {O, O, I, 2.0 * y4, O, O},
           {O, O, O, I, -y5, O},
           {O, O, O, O, O, I},
           {O, O, O, O, -I, O}}};
}

Mat6 coframe_matrix(Chart6 chart, const Coords6& p);

using Coframe6 = std::array<DifferentialForm<6>, 6>;

const Coframe6& coframe_forms(Chart6 chart);

/// Max coefficient residual of each structure equation, ordered ω⁰..ω⁴, ω⁷.
std::array<double, 6> verify_eds(const Coframe6& coframe, const Coords6& p);

/// Frame (e₀, e₁, e₂, e₃, e₄, e₇) dual to the coframe.
const std::array<VectorField<6>, 6>& dual_frame(Chart6 chart);

/// Frame index for a label in {0,1,2,3,4,7}.
int frame_index(int label);
int frame_label(int index);

struct CommutatorCheck {
  int i = 0, j = 0;   // labels
  Vec6 claimed;       // coefficients on (e₀..e₄, e₇)
  Vec6 computed;
  double residual = 0.0;
};

/// Seven reference commutators and their computed frame coefficients.
std::vector<CommutatorCheck> verify_commutators(Chart6 chart, const Coords6& p);

class LiftSingular : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct D2Controls {
  ControlSignal u;  // ẏ³
  ControlSignal w;  // ẏ⁴
  static D2Controls from_json(const nlohmann::json& j);
};

struct D2Sample {
  double t = 0.0;
  std::array<double, 5> y{};
  double u = 0.0, w = 0.0, du = 0.0, dw = 0.0;
};

struct D2Curve {
  std::vector<D2Sample> samples;
  nlohmann::json to_json() const;
  static D2Curve from_json(const nlohmann::json& j);
};

std::array<double, 5> d2_velocity(const std::array<double, 5>& y, double u, double w);

/// Samples carry absolute time t0 + k·h.
D2Curve integrate_d2_curve(const std::array<double, 5>& q0, const D2Controls& controls, double duration, double dt,
                           double t0 = 0.0);

/// Max violation of the tangency relations using stored controls.
double d2_constraint_residual(const D2Curve& c);

inline constexpr double kLiftEpsilon = 1e-6;

struct LiftedSample {
  double t = 0.0;
  Coords6 y{};
  Coords6 ydot{};
};

struct LiftedCurve {
  std::vector<LiftedSample> samples;
  nlohmann::json to_json() const;
};

LiftedCurve lift_curve(const D2Curve& c, double eps = kLiftEpsilon);

struct ProjectedSample {
  double t = 0.0;
  std::array<double, 5> x{};
  double fiber = 0.0;  // x⁵
  Eigen::Matrix<double, 5, 1> velocity;
  double y4 = 0.0;
};

struct ProjectedCurve {
  std::vector<ProjectedSample> samples;
};

ProjectedCurve project_to_contact(const LiftedCurve& lc);

struct TangencySample {
  double t = 0.0;
  double contact = 0.0;
  double angular = 0.0;
  bool skipped = false;
};

struct TangencyReport {
  std::vector<TangencySample> samples;
  double max_contact = 0.0;
  double max_angular = 0.0;
  int skipped = 0;
  nlohmann::json to_json() const;
};

/// Velocity coefficients in the frame Z₁ = ∂x⁴ − x¹∂x⁰, Z₂ = ∂x³ + 3x²∂x⁰,
/// Z₃ = ∂x², Z₄ = ∂x¹ against (1, T, T², T³), T = −y⁴.
TangencyReport certify_twisted_cubic_tangency(const ProjectedCurve& pc, double zero_velocity = 1e-12);

}  // namespace saucer
