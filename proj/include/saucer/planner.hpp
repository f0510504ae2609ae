#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "saucer/config_space.hpp"
#include "saucer/maneuvers.hpp"

namespace saucer {

struct BracketFamily {
  ManeuverMode mode = ManeuverMode::Attacking;
  std::array<VectorField<5>, 4> Y;
  /// Constant controls (u1, u2, u3) that realize Yᵢ under the mode's law.
  std::array<std::array<double, 3>, 4> controls{};
  /// Rectangle pair (i, j) and the ∂z coefficient of [Yᵢ, Yⱼ].
  int rect_i = 0, rect_j = 0;
  double rect_coeff = 1.0;
};

/// G2Simple reuses the G2Strict family.
BracketFamily bracket_family(ManeuverMode mode);

/// Bracket completing Y₁..Y₄ to a frame: attacking [Y₂,Y₃], landing [Y₁,Y₃], G₂ [Y₂,Y₁].
VectorField<5> distinguished_bracket(const BracketFamily& f);

/// Numerical rank of [Y₁..Y₄ | bracket] (or of Y₁..Y₄ alone).
int bracket_generating_check(const BracketFamily& f, const ChartPoint5& p, bool include_bracket = true);

struct BracketIdentity {
  std::string name;
  VectorField<5> lhs;
  double dz = 0.0;  // claimed lhs = dz ∂z
};

/// Attacking [Y₂,Y₃] = 3∂z, landing [Y₁,[Y₂,[Y₂,Y₃]]] = 9∂z, G₂ [Y₂,Y₁] = ∂z.
BracketIdentity bracket_identity(ManeuverMode mode);
double bracket_identity_residual(const BracketIdentity& id, const ChartPoint5& p);

/// RK4 flow of Y for time s with step at most h.
ChartPoint5 flow(const VectorField<5>& Y, const ChartPoint5& p, double s, double h = 1e-3);

bool inside_box(const ChartPoint5& p, double box = kSamplingBox);

/// Endpoint of the loop ε along Yᵢ, ε along Yⱼ, −ε along Yᵢ, −ε along Yⱼ.
ChartPoint5 rectangle(const VectorField<5>& Yi, const VectorField<5>& Yj, const ChartPoint5& p, double eps,
                      double h = 1e-3);

struct PlanLeg {
  int field = 0;
  double duration = 0.0;
};

struct Plan {
  ManeuverMode mode = ManeuverMode::Attacking;
  ChartPoint5 start{}, goal{}, endpoint{};
  std::vector<PlanLeg> legs;
  double error = 0.0;  // ‖endpoint − goal‖∞ from the replay
  int iterations = 0;
  int rectangles = 0;
  bool box_escape = false;
  double max_contact = 0.0;
  double max_nullity = 0.0;
  bool certified = false;

  nlohmann::json to_json() const;
};

struct PlannerOptions {
  int max_iterations = 200;
  double plan_step = 5e-3;
  double replay_dt = 1e-3;
  ResidualTolerances replay_tol{1e-7, 1e-6};
};

class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(const std::string& what, Plan best) : std::runtime_error(what), best_(std::move(best)) {}
  const Plan& best() const { return best_; }

 private:
  Plan best_;
};

Plan plan_path(ManeuverMode mode, const ChartPoint5& start, const ChartPoint5& goal, double tol = 1e-3,
               const PlannerOptions& opt = {});

/// Program realizing one leg (negative durations flip the sign of the field).
ControlProgram leg_program(const BracketFamily& f, const PlanLeg& leg, double dt);

/// Concatenated replay trajectory with cumulative time.
Trajectory replay(const Plan& plan, double dt = 1e-3);

}  // namespace saucer
