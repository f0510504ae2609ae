#include "saucer/gl2_rep.hpp"

#include <cmath>

namespace saucer {

Spinor3 spinor_from_vector(const Vector4& X) {
  Spinor3 psi{};
  for (int A = 0; A < 2; ++A)
    for (int B = 0; B < 2; ++B)
      for (int C = 0; C < 2; ++C) psi[(A << 2) | (B << 1) | C] = X[A + B + C];
  return psi;
}

Mat2 endomorphism_L(const Vector4& X) {
  const double X1 = X[0], X2 = X[1], X3 = X[2], X4 = X[3];
  Mat2 L;
  L << X2 * X3 - X1 * X4, -2 * X2 * X2 + 2 * X1 * X3, 2 * X3 * X3 - 2 * X2 * X4, -X2 * X3 + X1 * X4;
  return L;
}

Mat2 endomorphism_L_spinor(const Vector4& X) {
  const Spinor3 psi = spinor_from_vector(X);
  Mat2 L = Mat2::Zero();
  for (int A = 0; A < 2; ++A)
    for (int H = 0; H < 2; ++H)
      for (int B = 0; B < 2; ++B)
        for (int C = 0; C < 2; ++C)
          for (int D = 0; D < 2; ++D)
            for (int E = 0; E < 2; ++E)
              for (int F = 0; F < 2; ++F)
                L(A, H) += spinor_at(psi, A, B, C) * spinor_at(psi, D, E, F) * epsilon(C, D) * epsilon(B, E) *
                           epsilon(F, H);
  return L;
}

double quartic_upsilon(const Vector4& X) { return upsilon(X[0], X[1], X[2], X[3]); }

const SymTensor<4>& upsilon_tensor() {
  static const SymTensor<4> S =
      polarize<4, double>(4, [](const Point<4>& v) { return upsilon(v[0], v[1], v[2], v[3]); });
  return S;
}

double upsilon_polarized(const Vector4& X1, const Vector4& X2, const Vector4& X3, const Vector4& X4) {
  const auto& S = upsilon_tensor();
  double sum = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) sum += S.at({i, j, k, l}) * X1[i] * X2[j] * X3[k] * X4[l];
  return sum;
}

std::array<Mat4, 3> bilinear_matrices() {
  std::array<Mat4, 3> G;
  for (auto& m : G) m.setZero();
  // g¹ = X¹X³ − (X²)²
  G[0](0, 2) = G[0](2, 0) = 0.5;
  G[0](1, 1) = -1.0;
  // g² = (X³)² − X²X⁴
  G[1](2, 2) = 1.0;
  G[1](1, 3) = G[1](3, 1) = -0.5;
  // g³ = X¹X⁴ − X²X³
  G[2](0, 3) = G[2](3, 0) = 0.5;
  G[2](1, 2) = G[2](2, 1) = -0.5;
  return G;
}

Bilinears bilinears(const Vector4& X, const Vector4& Y) {
  static const auto G = bilinear_matrices();
  return {X.dot(G[0] * Y), X.dot(G[1] * Y), X.dot(G[2] * Y)};
}

double invariant_two_form(const Vector4& X, const Vector4& Y) {
  return X[0] * Y[3] - X[3] * Y[0] - 3 * X[1] * Y[2] + 3 * X[2] * Y[1];
}

double invariant_two_form_spinor(const Vector4& X, const Vector4& Y) {
  const Spinor3 psi = spinor_from_vector(X);
  const Spinor3 phi = spinor_from_vector(Y);
  double sum = 0.0;
  for (int A = 0; A < 2; ++A)
    for (int B = 0; B < 2; ++B)
      for (int C = 0; C < 2; ++C)
        for (int D = 0; D < 2; ++D)
          for (int E = 0; E < 2; ++E)
            for (int F = 0; F < 2; ++F)
              sum += spinor_at(psi, A, B, C) * spinor_at(phi, D, E, F) * epsilon(C, D) * epsilon(B, E) *
                     epsilon(A, F);
  return sum;
}

Mat4 two_form_matrix() {
  Mat4 W = Mat4::Zero();
  W(0, 3) = 1;
  W(3, 0) = -1;
  W(1, 2) = -3;
  W(2, 1) = 3;
  return W;
}

Mat4 gl2_action(const Mat2& alpha) {
  if (!alpha.allFinite() || std::abs(alpha.determinant()) <= 1e-14 * std::max(1.0, alpha.squaredNorm()))
    throw SingularMatrix("gl2_action requires an invertible 2x2 matrix");
  Mat4 rho;
  for (int j = 0; j < 4; ++j) {
    const Spinor3 psi = spinor_from_vector(Vector4::Unit(j));
    Spinor3 out{};
    for (int A = 0; A < 2; ++A)
      for (int B = 0; B < 2; ++B)
        for (int C = 0; C < 2; ++C)
          for (int A1 = 0; A1 < 2; ++A1)
            for (int B1 = 0; B1 < 2; ++B1)
              for (int C1 = 0; C1 < 2; ++C1)
                out[(A << 2) | (B << 1) | C] += alpha(A, A1) * alpha(B, B1) * alpha(C, C1) * spinor_at(psi, A1, B1, C1);
    rho(0, j) = spinor_at(out, 0, 0, 0);
    rho(1, j) = spinor_at(out, 0, 0, 1);
    rho(2, j) = spinor_at(out, 0, 1, 1);
    rho(3, j) = spinor_at(out, 1, 1, 1);
  }
  return rho;
}

std::string to_string(NullClass c) {
  switch (c) {
    case NullClass::TypeN:
      return "TypeN";
    case NullClass::TypeII:
      return "TypeII";
    case NullClass::NotNull:
      return "NotNull";
  }
  return "NotNull";
}

NullClass classify_direction(const Vector4& X, double tol) {
  const double n2 = X.squaredNorm();
  if (!(n2 > 0.0)) throw ZeroVector("classify_direction requires a nonzero vector");
  const Bilinears g = bilinears(X, X);
  if (std::abs(g.g1) < tol * n2 && std::abs(g.g2) < tol * n2 && std::abs(g.g3) < tol * n2) return NullClass::TypeN;
  if (std::abs(quartic_upsilon(X)) < tol * n2 * n2) return NullClass::TypeII;
  return NullClass::NotNull;
}

Vector4 cubic_point(double t) { return {1.0, t, t * t, t * t * t}; }

Vector4 tangent_point(double t, double s) { return cubic_point(t) + s * Vector4(0.0, 1.0, 2.0 * t, 3.0 * t * t); }

}  // namespace saucer
