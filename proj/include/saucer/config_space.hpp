#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>

#include "saucer/forms.hpp"
#include "saucer/random.hpp"

namespace saucer {

enum Axis : int { kX = 0, kY = 1, kZ = 2, kA = 3, kB = 4 };

/// (x, y, z, a, b) on the northern-hemisphere chart.
using ChartPoint5 = Point<5>;
using Vec3 = Eigen::Vector3d;
using Vec5 = VecN<5>;

struct AmbientConfig {
  Vec3 r = Vec3::Zero();
  Vec3 n = Vec3::UnitZ();
};

class OutsideChart : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InvalidNormal : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ChartPoint5 chart_from_ambient(const AmbientConfig& c);
AmbientConfig ambient_from_chart(const ChartPoint5& p);

/// ω⁰ = dz − a dx − b dy, coefficients against (dx, dy, dz, da, db).
Vec5 contact_form(const ChartPoint5& p);
const DifferentialForm<5>& contact_form_field();

/// n·dr, the unnormalized ambient contact form pulled back to the chart.
const DifferentialForm<5>& ambient_contact_form_field();

/// Coefficient of dω⁰∧dω⁰∧ω⁰ against dx∧dy∧da∧db∧dz.
double contact_nondegeneracy(const ChartPoint5& p);

/// Coefficient of dω∧dω∧ω for ω = n·dr against dx∧dy∧da∧db∧dz.
double ambient_top_form(const ChartPoint5& p);

/// Coefficient of −2 vol_{S²}∧vol_{ℝ³} against dx∧dy∧da∧db∧dz, with
/// vol_{S²} = ½ ε_ijk n_i dn_j∧dn_k.
double sphere_volume_form(const ChartPoint5& p);

enum class FrameTag { E, Z };

struct Frame4 {
  FrameTag tag;
  std::array<VectorField<5>, 4> fields;
};

/// E₁ = ∂x + a∂z, E₂ = ∂y + b∂z, E₃ = ∂b, E₄ = ∂a.
const Frame4& e_frame();
/// Z₁ = ∂x + a∂z, Z₂ = ∂y + b∂z, Z₃ = −3∂b, Z₄ = ∂a.
const Frame4& z_frame();
const VectorField<5>& d_z();

std::string to_string(FrameTag tag);

/// Seeded points in [−h, h]⁵ with ‖N‖ ≤ max_normal.
class ChartSampler {
 public:
  explicit ChartSampler(std::uint64_t seed = kDefaultSeed, double half_width = 2.0, double max_normal = 10.0);
  ChartPoint5 next();

 private:
  Rng rng_;
  double half_width_;
  double max_normal_;
};

}  // namespace saucer
