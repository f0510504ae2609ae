#pragma once

// Differential forms, vector fields and symmetric tensors on a coordinate
// chart of dimension N (5 for the configuration space, 6 for the G2
// correspondence space).
//
// Every field is stored as a coefficient map that is generic over the scalar
// type, instantiated at the dual-number levels S0..S3. Derivatives are taken
// by evaluating one level up with a seeded tangent, so a derived object
// (bracket, exterior derivative, Lie derivative) supports one level less than
// its inputs.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "saucer/dual.hpp"

namespace saucer {

template <std::size_t N, class T = double>
using Point = std::array<T, N>;

template <std::size_t N>
using VecN = Eigen::Matrix<double, N, 1>;
template <std::size_t N>
using MatN = Eigen::Matrix<double, N, N>;

template <std::size_t N, class T>
Point<N, double> primal(const Point<N, T>& p) {
  Point<N, double> out;
  for (int i = 0; i < static_cast<int>(N); ++i) out[i] = primal(p[i]);
  return out;
}

template <std::size_t N>
VecN<N> to_eigen(const Point<N, double>& p) {
  VecN<N> v;
  for (int i = 0; i < static_cast<int>(N); ++i) v[i] = p[i];
  return v;
}

template <std::size_t N>
Point<N, double> to_point(const VecN<N>& v) {
  Point<N, double> p;
  for (int i = 0; i < static_cast<int>(N); ++i) p[i] = v[i];
  return p;
}

/// Thrown when a derived object is evaluated deeper than its inputs allow.
class DerivativeDepthError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A map R^N -> Out<T> available at scalar levels 0..depth.
template <std::size_t N, template <class> class Out>
class LeveledMap {
 public:
  LeveledMap() = default;

  template <class F>
  explicit LeveledMap(F f, int depth = kMaxLevel) : depth_(depth) {
    if (depth >= 0) std::get<0>(fns_) = [f](const Point<N, S0>& p) { return Out<S0>(f(p)); };
    if (depth >= 1) std::get<1>(fns_) = [f](const Point<N, S1>& p) { return Out<S1>(f(p)); };
    if (depth >= 2) std::get<2>(fns_) = [f](const Point<N, S2>& p) { return Out<S2>(f(p)); };
    if (depth >= 3) std::get<3>(fns_) = [f](const Point<N, S3>& p) { return Out<S3>(f(p)); };
  }

  template <class T>
  Out<T> operator()(const Point<N, T>& p) const {
    constexpr int level = dual_depth<T>::value;
    if constexpr (level > kMaxLevel) {
      throw DerivativeDepthError("derivative level exceeds the supported maximum");
    } else {
      const auto& f = std::get<level>(fns_);
      if (!f) throw DerivativeDepthError("map evaluated beyond its derivative depth");
      return f(p);
    }
  }

  int depth() const { return depth_; }
  bool empty() const { return depth_ < 0; }

 private:
  int depth_ = -1;
  std::tuple<std::function<Out<S0>(const Point<N, S0>&)>, std::function<Out<S1>(const Point<N, S1>&)>,
             std::function<Out<S2>(const Point<N, S2>&)>, std::function<Out<S3>(const Point<N, S3>&)>>
      fns_;
};

template <std::size_t N>
struct PointOut {
  template <class T>
  using type = Point<N, T>;
};

// ---------------------------------------------------------------------------
// Vector fields
// ---------------------------------------------------------------------------

template <std::size_t N>
class VectorField {
 public:
  VectorField() = default;

  template <class F>
  VectorField(std::string id, F f, int depth = kMaxLevel) : id_(std::move(id)), map_(f, depth) {}

  const std::string& id() const { return id_; }
  int depth() const { return map_.depth(); }

  template <class T>
  Point<N, T> operator()(const Point<N, T>& p) const {
    return map_(p);
  }

  VecN<N> value(const Point<N>& p) const { return to_eigen<N>(map_(p)); }

  /// J(i,j) = d X^i / d x^j, exact via one dual level.
  MatN<N> jacobian(const Point<N>& p) const {
    MatN<N> J;
    for (int j = 0; j < static_cast<int>(N); ++j) {
      auto col = map_(seed_axis(p, static_cast<std::size_t>(j)));
      for (int i = 0; i < static_cast<int>(N); ++i) J(i, j) = col[i].d;
    }
    return J;
  }

 private:
  std::string id_;
  LeveledMap<N, PointOut<N>::template type> map_;
};

/// Directional derivative of Y along v at p (J_Y v), at any level.
template <std::size_t N, class T>
Point<N, T> directional(const VectorField<N>& Y, const Point<N, T>& p, const Point<N, T>& v) {
  auto out = Y(seed(p, v));
  Point<N, T> d;
  for (int i = 0; i < static_cast<int>(N); ++i) d[i] = out[i].d;
  return d;
}

/// Lie bracket [X,Y] = J_Y X - J_X Y as a field one level shallower.
template <std::size_t N>
VectorField<N> bracket(const VectorField<N>& X, const VectorField<N>& Y) {
  auto impl = [X, Y]<class T>(const Point<N, T>& p) {
    Point<N, T> xv = X(p);
    Point<N, T> yv = Y(p);
    Point<N, T> a = directional(Y, p, xv);
    Point<N, T> b = directional(X, p, yv);
    Point<N, T> out;
    for (int i = 0; i < static_cast<int>(N); ++i) out[i] = a[i] - b[i];
    return out;
  };
  int depth = std::min(X.depth(), Y.depth()) - 1;
  return VectorField<N>("[" + X.id() + "," + Y.id() + "]", impl, depth);
}

template <std::size_t N>
VecN<N> bracket(const VectorField<N>& X, const VectorField<N>& Y, const Point<N>& p) {
  return bracket(X, Y).value(p);
}

/// Linear combination with constant coefficients.
template <std::size_t N>
VectorField<N> combine(std::string id, std::vector<std::pair<double, VectorField<N>>> terms) {
  int depth = kMaxLevel;
  for (const auto& t : terms) depth = std::min(depth, t.second.depth());
  auto impl = [terms]<class T>(const Point<N, T>& p) {
    Point<N, T> out{};
    for (const auto& [c, F] : terms) {
      auto v = F(p);
      for (int i = 0; i < static_cast<int>(N); ++i) out[i] = out[i] + c * v[i];
    }
    return out;
  };
  return VectorField<N>(std::move(id), impl, depth);
}

template <std::size_t N>
VectorField<N> coordinate_field(int axis, std::string id = {}) {
  if (id.empty()) id = "d" + std::to_string(axis);
  return VectorField<N>(std::move(id), [axis]<class T>(const Point<N, T>&) {
    Point<N, T> out{};
    out[axis] = T(1.0);
    return out;
  });
}

// ---------------------------------------------------------------------------
// Forms at a point
// ---------------------------------------------------------------------------

inline int parity(unsigned x) { return std::popcount(x) & 1; }

/// Sign of dx^i ∧ (basis form with index set `mask`) relative to sorted order.
inline double insertion_sign(int i, unsigned mask) {
  return parity(mask & ((1u << i) - 1u)) ? -1.0 : 1.0;
}

/// Sign of (basis A) ∧ (basis B) relative to the sorted basis of A|B.
inline double merge_sign(unsigned a, unsigned b) {
  int inversions = 0;
  for (unsigned rest = b; rest; rest &= rest - 1) {
    int j = std::countr_zero(rest);
    inversions += std::popcount(a >> (j + 1));
  }
  return (inversions & 1) ? -1.0 : 1.0;
}

/// Degree-k form at a point, dense over sorted index masks.
template <std::size_t N, class T = double>
struct Form {
  static constexpr unsigned kSize = 1u << N;
  int degree = 0;
  std::array<T, kSize> c{};

  Form() = default;
  explicit Form(int k) : degree(k) {}

  T& operator[](unsigned mask) { return c[mask]; }
  const T& operator[](unsigned mask) const { return c[mask]; }

  /// Coefficient of dx^{i1}∧...∧dx^{ik} for indices in any order.
  T component(std::initializer_list<int> idx) const {
    unsigned mask = 0;
    double sign = 1.0;
    for (int i : idx) {
      if (mask & (1u << i)) return T(0.0);
      sign *= parity(mask >> (i + 1)) ? -1.0 : 1.0;
      mask |= 1u << i;
    }
    return sign * c[mask];
  }

  void set(std::initializer_list<int> idx, T value) {
    unsigned mask = 0;
    double sign = 1.0;
    for (int i : idx) {
      sign *= parity(mask >> (i + 1)) ? -1.0 : 1.0;
      mask |= 1u << i;
    }
    c[mask] = sign * value;
  }

  double norm() const {
    double s = 0.0;
    for (const auto& x : c) s += primal(x) * primal(x);
    return std::sqrt(s);
  }
};

template <std::size_t N, class T>
Form<N, T> operator+(Form<N, T> a, const Form<N, T>& b) {
  if (a.degree != b.degree) throw std::invalid_argument("adding forms of different degree");
  for (unsigned m = 0; m < Form<N, T>::kSize; ++m) a.c[m] = a.c[m] + b.c[m];
  return a;
}
template <std::size_t N, class T>
Form<N, T> operator-(Form<N, T> a, const Form<N, T>& b) {
  if (a.degree != b.degree) throw std::invalid_argument("subtracting forms of different degree");
  for (unsigned m = 0; m < Form<N, T>::kSize; ++m) a.c[m] = a.c[m] - b.c[m];
  return a;
}
template <std::size_t N, class T, class S>
Form<N, T> scale(const S& s, Form<N, T> a) {
  for (auto& x : a.c) x = s * x;
  return a;
}

class DegreeOverflow : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <std::size_t N, class T>
Form<N, T> wedge(const Form<N, T>& a, const Form<N, T>& b) {
  if (a.degree + b.degree > static_cast<int>(N)) throw DegreeOverflow("wedge degree exceeds chart dimension");
  Form<N, T> out(a.degree + b.degree);
  for (unsigned ma = 0; ma < Form<N, T>::kSize; ++ma) {
    if (std::popcount(ma) != a.degree) continue;
    for (unsigned mb = 0; mb < Form<N, T>::kSize; ++mb) {
      if (std::popcount(mb) != b.degree || (ma & mb)) continue;
      out.c[ma | mb] = out.c[ma | mb] + merge_sign(ma, mb) * (a.c[ma] * b.c[mb]);
    }
  }
  return out;
}

/// dx^i ∧ a
template <std::size_t N, class T>
Form<N, T> wedge_differential(int i, const Form<N, T>& a) {
  if (a.degree + 1 > static_cast<int>(N)) throw DegreeOverflow("wedge degree exceeds chart dimension");
  Form<N, T> out(a.degree + 1);
  const unsigned bit = 1u << i;
  for (unsigned m = 0; m < Form<N, T>::kSize; ++m) {
    if (std::popcount(m) != a.degree || (m & bit)) continue;
    out.c[m | bit] = out.c[m | bit] + insertion_sign(i, m) * a.c[m];
  }
  return out;
}

/// v ⌟ a, so that (v⌟a)(w,...) = a(v,w,...).
template <std::size_t N, class T>
Form<N, T> interior(const Point<N, T>& v, const Form<N, T>& a) {
  if (a.degree == 0) return Form<N, T>(-1);
  Form<N, T> out(a.degree - 1);
  for (unsigned m = 0; m < Form<N, T>::kSize; ++m) {
    if (std::popcount(m) != a.degree) continue;
    for (unsigned rest = m; rest; rest &= rest - 1) {
      int i = std::countr_zero(rest);
      unsigned sub = m & ~(1u << i);
      out.c[sub] = out.c[sub] + insertion_sign(i, m) * (v[i] * a.c[m]);
    }
  }
  return out;
}

/// a(v1,...,vk)
template <std::size_t N, class T>
T evaluate(Form<N, T> a, std::initializer_list<Point<N, T>> vectors) {
  if (static_cast<int>(vectors.size()) != a.degree) throw std::invalid_argument("form arity mismatch");
  for (const auto& v : vectors) a = interior(v, a);
  return a.c[0];
}

template <std::size_t N, class T = double>
Form<N, T> basis_form(std::initializer_list<int> idx) {
  Form<N, T> f(static_cast<int>(idx.size()));
  f.set(idx, T(1.0));
  return f;
}

/// 1-form from its N coefficients against dx^0..dx^{N-1}.
template <std::size_t N, class T>
Form<N, T> one_form(const Point<N, T>& coeffs) {
  Form<N, T> f(1);
  for (int i = 0; i < static_cast<int>(N); ++i) f.c[1u << i] = coeffs[i];
  return f;
}

template <std::size_t N, class T>
Point<N, T> covector(const Form<N, T>& f) {
  if (f.degree != 1) throw std::invalid_argument("covector of a non-1-form");
  Point<N, T> out;
  for (int i = 0; i < static_cast<int>(N); ++i) out[i] = f.c[1u << i];
  return out;
}

// ---------------------------------------------------------------------------
// Differential forms
// ---------------------------------------------------------------------------

template <std::size_t N>
struct FormOut {
  template <class T>
  using type = Form<N, T>;
};

template <std::size_t N>
class DifferentialForm {
 public:
  DifferentialForm() = default;

  template <class F>
  DifferentialForm(int degree, F f, int depth = kMaxLevel) : degree_(degree), map_(f, depth) {
    if (degree < 0 || degree > static_cast<int>(N)) throw DegreeOverflow("form degree out of range");
  }

  int degree() const { return degree_; }
  int depth() const { return map_.depth(); }

  template <class T>
  Form<N, T> operator()(const Point<N, T>& p) const {
    return map_(p);
  }

  Form<N> at(const Point<N>& p) const { return map_(p); }

 private:
  int degree_ = 0;
  LeveledMap<N, FormOut<N>::template type> map_;
};

/// Constant-coefficient form.
template <std::size_t N>
DifferentialForm<N> constant_form(const Form<N>& value) {
  return DifferentialForm<N>(value.degree, [value]<class T>(const Point<N, T>&) {
    Form<N, T> out(value.degree);
    for (unsigned m = 0; m < Form<N>::kSize; ++m) out.c[m] = T(value.c[m]);
    return out;
  });
}

/// 1-form from a generic coefficient map p -> Point<N,T>.
template <std::size_t N, class F>
DifferentialForm<N> one_form_field(F coeffs) {
  return DifferentialForm<N>(1, [coeffs]<class T>(const Point<N, T>& p) { return one_form<N, T>(coeffs(p)); });
}

/// Scalar function as a 0-form.
template <std::size_t N, class F>
DifferentialForm<N> function_form(F f) {
  return DifferentialForm<N>(0, [f]<class T>(const Point<N, T>& p) {
    Form<N, T> out(0);
    out.c[0] = f(p);
    return out;
  });
}

template <std::size_t N>
DifferentialForm<N> exterior_derivative(const DifferentialForm<N>& a) {
  if (a.degree() + 1 > static_cast<int>(N)) throw DegreeOverflow("exterior derivative of a top-degree form");
  auto impl = [a]<class T>(const Point<N, T>& p) {
    Form<N, T> out(a.degree() + 1);
    for (int i = 0; i < static_cast<int>(N); ++i) {
      Form<N, Dual<T>> up = a(seed_axis(p, static_cast<std::size_t>(i)));
      Form<N, T> partial(a.degree());
      for (unsigned m = 0; m < Form<N>::kSize; ++m) partial.c[m] = up.c[m].d;
      out = out + wedge_differential(i, partial);
    }
    return out;
  };
  return DifferentialForm<N>(a.degree() + 1, impl, a.depth() - 1);
}

/// Value of dα at p. Coefficients must be finite.
template <std::size_t N>
Form<N> exterior_derivative(const DifferentialForm<N>& a, const Point<N>& p) {
  Form<N> out = exterior_derivative(a).at(p);
  for (double x : out.c)
    if (!std::isfinite(x)) throw std::domain_error("non-finite coefficient in exterior derivative");
  return out;
}

template <std::size_t N>
DifferentialForm<N> wedge(const DifferentialForm<N>& a, const DifferentialForm<N>& b) {
  if (a.degree() + b.degree() > static_cast<int>(N)) throw DegreeOverflow("wedge degree exceeds chart dimension");
  auto impl = [a, b]<class T>(const Point<N, T>& p) { return wedge(a(p), b(p)); };
  return DifferentialForm<N>(a.degree() + b.degree(), impl, std::min(a.depth(), b.depth()));
}

template <std::size_t N>
DifferentialForm<N> operator+(const DifferentialForm<N>& a, const DifferentialForm<N>& b) {
  auto impl = [a, b]<class T>(const Point<N, T>& p) { return a(p) + b(p); };
  return DifferentialForm<N>(a.degree(), impl, std::min(a.depth(), b.depth()));
}

template <std::size_t N>
DifferentialForm<N> operator-(const DifferentialForm<N>& a, const DifferentialForm<N>& b) {
  auto impl = [a, b]<class T>(const Point<N, T>& p) { return a(p) - b(p); };
  return DifferentialForm<N>(a.degree(), impl, std::min(a.depth(), b.depth()));
}

/// f·α for a 0-form f.
template <std::size_t N>
DifferentialForm<N> multiply(const DifferentialForm<N>& f, const DifferentialForm<N>& a) {
  if (f.degree() != 0) throw std::invalid_argument("multiply expects a 0-form factor");
  auto impl = [f, a]<class T>(const Point<N, T>& p) { return scale(f(p).c[0], a(p)); };
  return DifferentialForm<N>(a.degree(), impl, std::min(f.depth(), a.depth()));
}

template <std::size_t N>
DifferentialForm<N> interior(const VectorField<N>& X, const DifferentialForm<N>& a) {
  if (a.degree() == 0) {
    return DifferentialForm<N>(0, []<class T>(const Point<N, T>&) { return Form<N, T>(0); });
  }
  auto impl = [X, a]<class T>(const Point<N, T>& p) { return interior(X(p), a(p)); };
  return DifferentialForm<N>(a.degree() - 1, impl, std::min(X.depth(), a.depth()));
}

/// Cartan formula L_X α = X⌟dα + d(X⌟α).
template <std::size_t N>
DifferentialForm<N> lie_derivative(const VectorField<N>& X, const DifferentialForm<N>& a) {
  if (a.degree() == static_cast<int>(N)) return exterior_derivative(interior(X, a));
  if (a.degree() == 0) return interior(X, exterior_derivative(a));
  return interior(X, exterior_derivative(a)) + exterior_derivative(interior(X, a));
}

template <std::size_t N>
Form<N> lie_derivative_form(const VectorField<N>& X, const DifferentialForm<N>& a, const Point<N>& p) {
  return lie_derivative(X, a).at(p);
}

// ---------------------------------------------------------------------------
// Symmetric tensors
// ---------------------------------------------------------------------------

/// Fully symmetric rank-k covariant tensor on R^N, stored densely (N^k).
template <std::size_t N, class T = double>
struct SymTensor {
  int rank = 0;
  std::vector<T> c;

  SymTensor() = default;
  explicit SymTensor(int k) : rank(k), c(static_cast<std::size_t>(ipow(N, k)), T(0.0)) {}

  static constexpr int ipow(int b, int e) {
    int r = 1;
    while (e-- > 0) r *= b;
    return r;
  }

  std::size_t flat(const int* idx) const {
    std::size_t f = 0;
    for (int r = 0; r < rank; ++r) f = f * N + static_cast<std::size_t>(idx[r]);
    return f;
  }

  T& at(std::initializer_list<int> idx) { return c[flat(idx.begin())]; }
  const T& at(std::initializer_list<int> idx) const { return c[flat(idx.begin())]; }

  /// S(v, v, ..., v)
  T quadratic(const Point<N, T>& v) const {
    T sum(0.0);
    std::vector<int> idx(static_cast<std::size_t>(rank), 0);
    for (std::size_t f = 0; f < c.size(); ++f) {
      T term = c[f];
      for (int r = 0; r < rank; ++r) term = term * v[idx[r]];
      sum = sum + term;
      for (int r = rank - 1; r >= 0; --r) {
        if (++idx[r] < static_cast<int>(N)) break;
        idx[r] = 0;
      }
    }
    return sum;
  }

  double norm() const {
    double s = 0.0;
    for (const auto& x : c) s += primal(x) * primal(x);
    return std::sqrt(s);
  }
};

/// Visit sorted multi-indices i1 <= ... <= ik.
template <std::size_t N, class F>
void for_each_sorted_index(int rank, F&& f) {
  std::vector<int> idx(static_cast<std::size_t>(rank), 0);
  if (rank == 0) {
    f(idx);
    return;
  }
  while (true) {
    f(idx);
    int r = rank - 1;
    while (r >= 0 && idx[r] == static_cast<int>(N) - 1) --r;
    if (r < 0) return;
    ++idx[r];
    for (int s = r + 1; s < rank; ++s) idx[s] = idx[r];
  }
}

/// Write `value` into every permutation slot of a sorted multi-index.
template <std::size_t N, class T>
void fill_symmetric(SymTensor<N, T>& S, std::vector<int> idx, const T& value) {
  std::sort(idx.begin(), idx.end());
  do {
    S.c[S.flat(idx.data())] = value;
  } while (std::next_permutation(idx.begin(), idx.end()));
}

/// Coefficients of the symmetric tensor whose diagonal S(v,...,v) is the
/// homogeneous polynomial `poly`, via the polarization identity
/// S(v1..vk) = (1/k!) Σ_{∅≠I} (-1)^{k-|I|} poly(Σ_{i∈I} v_i).
template <std::size_t N, class T, class Poly>
SymTensor<N, T> polarize(int rank, Poly&& poly) {
  SymTensor<N, T> S(rank);
  double fact = 1.0;
  for (int r = 2; r <= rank; ++r) fact *= r;
  for_each_sorted_index<N>(rank, [&](const std::vector<int>& idx) {
    T sum(0.0);
    for (unsigned subset = 1; subset < (1u << rank); ++subset) {
      Point<N, T> v{};
      for (int r = 0; r < rank; ++r)
        if (subset & (1u << r)) v[idx[r]] = v[idx[r]] + 1.0;
      double sign = ((rank - std::popcount(subset)) & 1) ? -1.0 : 1.0;
      sum = sum + sign * poly(v);
    }
    fill_symmetric(S, idx, T(sum / fact));
  });
  return S;
}

template <std::size_t N>
struct SymOut {
  template <class T>
  using type = SymTensor<N, T>;
};

template <std::size_t N>
class SymTensorField {
 public:
  SymTensorField() = default;

  template <class F>
  SymTensorField(std::string id, int rank, F f, int depth = kMaxLevel)
      : id_(std::move(id)), rank_(rank), map_(f, depth) {}

  /// Field whose diagonal is the generic polynomial poly(p, v), homogeneous
  /// of degree `rank` in v.
  template <class Poly>
  static SymTensorField from_polynomial(std::string id, int rank, Poly poly) {
    auto impl = [rank, poly]<class T>(const Point<N, T>& p) {
      return polarize<N, T>(rank, [&](const Point<N, T>& v) { return poly(p, v); });
    };
    return SymTensorField(std::move(id), rank, impl);
  }

  const std::string& id() const { return id_; }
  int rank() const { return rank_; }
  int depth() const { return map_.depth(); }

  template <class T>
  SymTensor<N, T> operator()(const Point<N, T>& p) const {
    return map_(p);
  }
  SymTensor<N> at(const Point<N>& p) const { return map_(p); }

 private:
  std::string id_;
  int rank_ = 0;
  LeveledMap<N, SymOut<N>::template type> map_;
};

/// (L_X S)_{i..} = X^m ∂_m S_{i..} + Σ_r S_{..m..} ∂_{i_r} X^m at p.
template <std::size_t N>
SymTensor<N> lie_derivative_symtensor(const VectorField<N>& X, const SymTensorField<N>& S, const Point<N>& p) {
  const int k = S.rank();
  Point<N> xv = X(p);
  SymTensor<N, S1> moved = S(seed(p, xv));
  SymTensor<N> s0 = S.at(p);
  MatN<N> J = X.jacobian(p);
  SymTensor<N> out(k);
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  for (std::size_t f = 0; f < out.c.size(); ++f) {
    double v = moved.c[f].d;
    for (int r = 0; r < k; ++r) {
      std::vector<int> sub = idx;
      for (int m = 0; m < static_cast<int>(N); ++m) {
        sub[r] = m;
        v += s0.c[s0.flat(sub.data())] * J(m, idx[r]);
      }
    }
    out.c[f] = v;
    for (int r = k - 1; r >= 0; --r) {
      if (++idx[r] < static_cast<int>(N)) break;
      idx[r] = 0;
    }
  }
  return out;
}

/// Symmetrized product of a 1-form with a rank-(k-1) symmetric tensor,
/// normalized so that (α⊙β)(v..v) = α(v)·β(v..v).
template <std::size_t N>
SymTensor<N> symmetric_product(const Point<N>& alpha, const SymTensor<N>& beta) {
  const int k = beta.rank + 1;
  SymTensor<N> out(k);
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  for (std::size_t f = 0; f < out.c.size(); ++f) {
    double v = 0.0;
    for (int r = 0; r < k; ++r) {
      std::vector<int> sub;
      sub.reserve(static_cast<std::size_t>(k - 1));
      for (int s = 0; s < k; ++s)
        if (s != r) sub.push_back(idx[s]);
      v += alpha[idx[r]] * (beta.rank == 0 ? beta.c[0] : beta.c[beta.flat(sub.data())]);
    }
    out.c[f] = v / k;
    for (int r = k - 1; r >= 0; --r) {
      if (++idx[r] < static_cast<int>(N)) break;
      idx[r] = 0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Flows
// ---------------------------------------------------------------------------

/// Classical RK4 flow of X for time s in `steps` equal steps; generic so the
/// flow differential is available by seeding duals.
template <std::size_t N, class T>
Point<N, T> flow_rk4(const VectorField<N>& X, Point<N, T> p, double s, int steps) {
  if (steps <= 0 || s == 0.0) return p;
  const double h = s / steps;
  auto axpy = [](const Point<N, T>& y, double a, const Point<N, T>& k) {
    Point<N, T> r;
    for (int i = 0; i < static_cast<int>(N); ++i) r[i] = y[i] + a * k[i];
    return r;
  };
  for (int n = 0; n < steps; ++n) {
    auto k1 = X(p);
    auto k2 = X(axpy(p, h / 2, k1));
    auto k3 = X(axpy(p, h / 2, k2));
    auto k4 = X(axpy(p, h, k3));
    for (int i = 0; i < static_cast<int>(N); ++i) p[i] = p[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return p;
}

/// Pullback of a form along the time-s flow of X, evaluated at p.
template <std::size_t N>
Form<N> flow_pullback(const VectorField<N>& X, const DifferentialForm<N>& a, const Point<N>& p, double s,
                      int steps) {
  MatN<N> D;
  Point<N> q{};
  for (int j = 0; j < static_cast<int>(N); ++j) {
    auto img = flow_rk4<N, S1>(X, seed_axis(p, static_cast<std::size_t>(j)), s, steps);
    for (int i = 0; i < static_cast<int>(N); ++i) {
      D(i, j) = img[i].d;
      q[i] = img[i].v;
    }
  }
  Form<N> at_q = a.at(q);
  Form<N> out(a.degree());
  for (unsigned m = 0; m < Form<N>::kSize; ++m) {
    if (std::popcount(m) != a.degree()) continue;
    // out_m = at_q(D e_{i1}, ..., D e_{ik})
    Form<N> f = at_q;
    for (unsigned rest = m; rest; rest &= rest - 1) {
      int j = std::countr_zero(rest);
      Point<N> col;
      for (int i = 0; i < static_cast<int>(N); ++i) col[i] = D(i, j);
      f = interior(col, f);
    }
    out.c[m] = f.c[0];
  }
  return out;
}

}  // namespace saucer
