#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>

#include "saucer/forms.hpp"

namespace saucer {

using Vector4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;

/// Ψ^{ABC} as a full 2×2×2 array, Ψ^{ABC} = X^{A+B+C+1}.
using Spinor3 = std::array<double, 8>;

Spinor3 spinor_from_vector(const Vector4& X);
inline double spinor_at(const Spinor3& psi, int A, int B, int C) { return psi[(A << 2) | (B << 1) | C]; }

/// ε_AB with ε₁₂ = 1.
inline double epsilon(int A, int B) { return A == B ? 0.0 : (A == 0 ? 1.0 : -1.0); }

/// Closed-form L(X).
Mat2 endomorphism_L(const Vector4& X);
/// L^A_H = Ψ^{ABC} Ψ^{DEF} ε_CD ε_BE ε_FH.
Mat2 endomorphism_L_spinor(const Vector4& X);

template <class T>
T upsilon(const T& X1, const T& X2, const T& X3, const T& X4) {
  return 3.0 * (X2 * X2) * (X3 * X3) - 4.0 * X1 * (X3 * X3 * X3) - 4.0 * (X2 * X2 * X2) * X4 +
         6.0 * X1 * X2 * X3 * X4 - (X1 * X1) * (X4 * X4);
}

double quartic_upsilon(const Vector4& X);
/// Symmetric 4-linear form with upsilon_polarized(X,X,X,X) = Υ(X).
double upsilon_polarized(const Vector4& X1, const Vector4& X2, const Vector4& X3, const Vector4& X4);
/// Dense coefficients of the polarized Υ.
const SymTensor<4>& upsilon_tensor();

struct Bilinears {
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;
};

/// Polarizations of g¹ = X¹X³ − (X²)², g² = (X³)² − X²X⁴, g³ = X¹X⁴ − X²X³.
Bilinears bilinears(const Vector4& X, const Vector4& Y);
/// Matrices G with g^i(X,Y) = Xᵀ G Y.
std::array<Mat4, 3> bilinear_matrices();

/// ω(X,Y) = X¹Y⁴ − X⁴Y¹ − 3X²Y³ + 3X³Y².
double invariant_two_form(const Vector4& X, const Vector4& Y);
/// Ψ^{ABC} Φ^{DEF} ε_CD ε_BE ε_AF.
double invariant_two_form_spinor(const Vector4& X, const Vector4& Y);
/// W with ω(X,Y) = Xᵀ W Y.
Mat4 two_form_matrix();

class SingularMatrix : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// ρ(α): α⊗α⊗α on Sym³ℝ², in the basis (Ψ¹¹¹, Ψ¹¹², Ψ¹²², Ψ²²²).
Mat4 gl2_action(const Mat2& alpha);

enum class NullClass { TypeN, TypeII, NotNull };
std::string to_string(NullClass c);

class ZeroVector : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kClassifyTol = 1e-9;

NullClass classify_direction(const Vector4& X, double tol = kClassifyTol);

/// ν(t) = (1, t, t², t³)
Vector4 cubic_point(double t);
/// ν(t) + s ν'(t)
Vector4 tangent_point(double t, double s);

}  // namespace saucer
