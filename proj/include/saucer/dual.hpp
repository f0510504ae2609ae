#pragma once

#include <array>
#include <cmath>
#include <type_traits>

namespace saucer {

/// Forward-mode dual number carrying one directional derivative.
///
/// Nesting (`Dual<Dual<double>>`, ...) gives higher directional derivatives;
/// every coefficient map in the library is written generically over the
/// scalar type so that Jacobians, brackets and exterior derivatives are exact
/// to rounding instead of finite-difference approximations.
template <class T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value), d(0.0) {}  // NOLINT(implicit)
  constexpr Dual(T value, T deriv) : v(value), d(deriv) {}
};

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};
template <class T>
inline constexpr bool is_dual_v = is_dual<T>::value;

/// Derivative nesting depth of a scalar type (double = 0).
template <class T>
struct dual_depth : std::integral_constant<int, 0> {};
template <class T>
struct dual_depth<Dual<T>> : std::integral_constant<int, 1 + dual_depth<T>::value> {};

using S0 = double;
using S1 = Dual<S0>;
using S2 = Dual<S1>;
using S3 = Dual<S2>;

/// Highest derivative level every base field supports.
inline constexpr int kMaxLevel = 3;

inline double primal(double x) { return x; }
template <class T>
double primal(const Dual<T>& x) {
  return primal(x.v);
}

// Arithmetic. Mixed overloads take `double` as a non-deduced parameter so
// integer literals convert implicitly.

template <class T>
constexpr Dual<T> operator-(const Dual<T>& a) {
  return {-a.v, -a.d};
}
template <class T>
constexpr Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  return {a.v + b.v, a.d + b.d};
}
template <class T>
constexpr Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  return {a.v - b.v, a.d - b.d};
}
template <class T>
constexpr Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d};
}
template <class T>
constexpr Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T q = a.v / b.v;
  return {q, (a.d - q * b.d) / b.v};
}

template <class T>
constexpr Dual<T> operator+(const Dual<T>& a, std::type_identity_t<double> b) {
  return {a.v + b, a.d};
}
template <class T>
constexpr Dual<T> operator+(std::type_identity_t<double> a, const Dual<T>& b) {
  return {a + b.v, b.d};
}
template <class T>
constexpr Dual<T> operator-(const Dual<T>& a, std::type_identity_t<double> b) {
  return {a.v - b, a.d};
}
template <class T>
constexpr Dual<T> operator-(std::type_identity_t<double> a, const Dual<T>& b) {
  return {a - b.v, -b.d};
}
template <class T>
constexpr Dual<T> operator*(const Dual<T>& a, std::type_identity_t<double> b) {
  return {a.v * b, a.d * b};
}
template <class T>
constexpr Dual<T> operator*(std::type_identity_t<double> a, const Dual<T>& b) {
  return {a * b.v, a * b.d};
}
template <class T>
constexpr Dual<T> operator/(const Dual<T>& a, std::type_identity_t<double> b) {
  return {a.v / b, a.d / b};
}
template <class T>
constexpr Dual<T> operator/(std::type_identity_t<double> a, const Dual<T>& b) {
  return Dual<T>(a) / b;
}

template <class T, class U>
Dual<T>& operator+=(Dual<T>& a, const U& b) {
  return a = a + b;
}
template <class T, class U>
Dual<T>& operator-=(Dual<T>& a, const U& b) {
  return a = a - b;
}
template <class T, class U>
Dual<T>& operator*=(Dual<T>& a, const U& b) {
  return a = a * b;
}
template <class T, class U>
Dual<T>& operator/=(Dual<T>& a, const U& b) {
  return a = a / b;
}

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  T s = sqrt(a.v);
  return {s, a.d / (2.0 * s)};
}
template <class T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.v), a.d * cos(a.v)};
}
template <class T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.v), -(a.d * sin(a.v))};
}
template <class T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  T e = exp(a.v);
  return {e, a.d * e};
}

/// Lift a point into the dual plane: value `p`, tangent `v`.
template <class T, std::size_t N>
std::array<Dual<T>, N> seed(const std::array<T, N>& p, const std::array<T, N>& v) {
  std::array<Dual<T>, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = Dual<T>(p[i], v[i]);
  return out;
}

/// Lift a point with tangent along coordinate axis `axis`.
template <class T, std::size_t N>
std::array<Dual<T>, N> seed_axis(const std::array<T, N>& p, std::size_t axis) {
  std::array<Dual<T>, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = Dual<T>(p[i], T(i == axis ? 1.0 : 0.0));
  return out;
}

}  // namespace saucer
