#include <gtest/gtest.h>

#include <cmath>

#include "saucer/config_space.hpp"
#include "saucer/forms.hpp"

using namespace saucer;

namespace {

template <int N>
Point<N> random_point(Rng& rng, double h = 2.0) {
  Point<N> p;
  for (auto& c : p) c = rng.uniform(-h, h);
  return p;
}

// A smooth non-polynomial 1-form for d² and Leibniz checks.
DifferentialForm<5> wavy_form() {
  return one_form_field<5>([]<class T>(const Point<5, T>& p) {
    using std::cos;
    using std::sin;
    return Point<5, T>{sin(p[0] * p[3]), p[1] * p[1] * p[4], cos(p[2]) * p[0], p[4] * p[3] * p[1], sin(p[4] + p[2])};
  });
}

VectorField<5> wavy_field(const std::string& id, double k) {
  return VectorField<5>(id, [k]<class T>(const Point<5, T>& p) {
    using std::cos;
    using std::sin;
    return Point<5, T>{p[1] * p[2] + k, sin(k * p[0]), p[3] * p[3] - p[4], cos(p[1]) * k, p[0] * p[2] * p[4]};
  });
}

}  // namespace

TEST(Wedge, RepeatedDifferentialVanishes) {
  auto dx = basis_form<5>({kX});
  EXPECT_EQ(wedge(dx, dx).norm(), 0.0);
}

TEST(Wedge, OrderedTopCoefficient) {
  auto f = wedge(wedge(basis_form<5>({kX, kA}), basis_form<5>({kY, kB})), basis_form<5>({kZ}));
  EXPECT_DOUBLE_EQ(f.component({kX, kA, kY, kB, kZ}), 1.0);
  EXPECT_DOUBLE_EQ(f.component({kX, kY, kA, kB, kZ}), -1.0);
}

TEST(Wedge, GradedCommutativity) {
  Rng rng(11);
  Form<5> a(2), b(1), c(2);
  for (unsigned m = 0; m < 32; ++m) {
    if (std::popcount(m) == 2) a.c[m] = rng.normal(), c.c[m] = rng.normal();
    if (std::popcount(m) == 1) b.c[m] = rng.normal();
  }
  EXPECT_LT((wedge(a, b) - wedge(b, a)).norm(), 1e-14);
  EXPECT_LT((wedge(a, c) - wedge(c, a)).norm(), 1e-14);
  Form<5> e(1);
  for (int i = 0; i < 5; ++i) e.c[1u << i] = rng.normal();
  EXPECT_LT((wedge(b, e) + wedge(e, b)).norm(), 1e-14);
}

TEST(Wedge, DegreeOverflowRejected) {
  auto f = basis_form<5>({0, 1, 2});
  EXPECT_THROW(wedge(f, basis_form<5>({3, 4, 0})), DegreeOverflow);
}

TEST(Interior, EvaluationMatchesDeterminant) {
  Point<5> u{1, 2, 0, 0, 0}, v{3, 5, 0, 0, 0};
  EXPECT_DOUBLE_EQ(evaluate(basis_form<5>({0, 1}), {u, v}), 1 * 5 - 2 * 3);
  EXPECT_DOUBLE_EQ(evaluate(basis_form<5>({1, 0}), {u, v}), -(1 * 5 - 2 * 3));
}

TEST(ExteriorDerivative, ContactFormGivesOmega) {
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    auto p = random_point<5>(rng);
    auto dw = exterior_derivative(contact_form_field(), p);
    Form<5> expected = basis_form<5>({kX, kA}) + basis_form<5>({kY, kB});
    EXPECT_LT((dw - expected).norm(), 1e-14);
  }
}

TEST(ExteriorDerivative, ConstantFormIsClosed) {
  Form<5> c(1);
  c.c[1] = 2.0;
  c.c[8] = -1.5;
  auto dc = exterior_derivative(constant_form(c), Point<5>{0.3, 1, 2, 3, 4});
  EXPECT_EQ(dc.norm(), 0.0);
}

TEST(ExteriorDerivative, SquareIsZero) {
  auto a = wavy_form();
  auto dda = exterior_derivative(exterior_derivative(a));
  Rng rng(5);
  for (int k = 0; k < 100; ++k) EXPECT_LT(dda.at(random_point<5>(rng)).norm(), 1e-12);
}

TEST(ExteriorDerivative, MatchesCentralDifferences) {
  auto a = wavy_form();
  Point<5> p{0.3, -0.7, 1.1, 0.4, -0.2};
  auto da = exterior_derivative(a, p);
  const double h = 1e-5;
  // (dα)_{ij} = ∂_i α_j − ∂_j α_i
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      auto partial = [&](int axis, int comp) {
        Point<5> q1 = p, q2 = p;
        q1[axis] += h;
        q2[axis] -= h;
        return (a.at(q1).c[1u << comp] - a.at(q2).c[1u << comp]) / (2 * h);
      };
      EXPECT_NEAR(da.component({i, j}), partial(i, j) - partial(j, i), 1e-8);
    }
}

TEST(ExteriorDerivative, NonFiniteRejected) {
  auto bad = function_form<5>([]<class T>(const Point<5, T>& p) { return 1.0 / p[0]; });
  EXPECT_THROW(exterior_derivative(bad, Point<5>{0, 0, 0, 0, 0}), std::domain_error);
}

TEST(VectorFieldTest, JacobianMatchesCentralDifferences) {
  auto X = wavy_field("W", 0.7);
  Point<5> p{0.2, 0.5, -0.3, 1.0, -1.2};
  auto J = X.jacobian(p);
  const double h = 1e-6;
  for (int j = 0; j < 5; ++j) {
    Point<5> q1 = p, q2 = p;
    q1[j] += h;
    q2[j] -= h;
    VecN<5> col = (X.value(q1) - X.value(q2)) / (2 * h);
    EXPECT_LT((col - J.col(j)).norm(), 1e-6 * std::max(1.0, col.norm()));
  }
}

TEST(Bracket, CoordinateFieldsCommute) {
  auto b = bracket(coordinate_field<5>(kX), coordinate_field<5>(kY), Point<5>{1, 2, 3, 4, 5});
  EXPECT_EQ(b.norm(), 0.0);
}

TEST(Bracket, AntisymmetryBilinearityJacobi) {
  auto X = wavy_field("X", 0.3), Y = wavy_field("Y", -1.1), Z = wavy_field("Z", 2.0);
  Rng rng(9);
  for (int k = 0; k < 20; ++k) {
    auto p = random_point<5>(rng, 1.0);
    VecN<5> xy = bracket(X, Y, p), yx = bracket(Y, X, p);
    EXPECT_LT((xy + yx).norm(), 1e-13 * (1 + xy.norm()));
    auto sum = combine<5>("X+2Z", {{1.0, X}, {2.0, Z}});
    VecN<5> lin = bracket(sum, Y, p) - bracket(X, Y, p) - 2.0 * bracket(Z, Y, p);
    EXPECT_LT(lin.norm(), 1e-12 * (1 + xy.norm()));
    VecN<5> jac = bracket(X, bracket(Y, Z), p) + bracket(Y, bracket(Z, X), p) + bracket(Z, bracket(X, Y), p);
    EXPECT_LT(jac.norm(), 1e-6);
  }
}

TEST(Bracket, DepthIsTracked) {
  auto X = wavy_field("X", 0.3);
  auto b = bracket(X, X);
  EXPECT_EQ(b.depth(), kMaxLevel - 1);
  auto bbb = bracket(X, bracket(X, bracket(X, X)));
  EXPECT_EQ(bbb.depth(), kMaxLevel - 3);
  EXPECT_NO_THROW(bbb.value(Point<5>{}));
  EXPECT_THROW(bbb.jacobian(Point<5>{}), DerivativeDepthError);
}

TEST(LieDerivative, DzPreservesContactForm) {
  auto L = lie_derivative_form(d_z(), contact_form_field(), Point<5>{0.1, -2, 3, 1.5, -0.5});
  EXPECT_EQ(L.norm(), 0.0);
}

TEST(LieDerivative, Leibniz) {
  auto X = wavy_field("X", 0.4);
  auto f = function_form<5>([]<class T>(const Point<5, T>& p) {
    using std::sin;
    return sin(p[0]) * p[4] + p[2] * p[3];
  });
  auto a = wavy_form();
  Rng rng(21);
  for (int k = 0; k < 20; ++k) {
    auto p = random_point<5>(rng, 1.0);
    Form<5> lhs = lie_derivative_form(X, multiply(f, a), p);
    double xf = lie_derivative_form(X, f, p).c[0];
    Form<5> rhs = scale(xf, a.at(p)) + scale(f.at(p).c[0], lie_derivative_form(X, a, p));
    EXPECT_LT((lhs - rhs).norm(), 1e-7);
  }
}

TEST(LieDerivative, CartanAgreesWithFlowPullback) {
  auto X = wavy_field("X", 0.4);
  auto a = wavy_form();
  Point<5> p{0.3, 0.2, -0.4, 0.5, 0.1};
  const double eps = 1e-4;
  Form<5> plus = flow_pullback(X, a, p, eps, 4);
  Form<5> minus = flow_pullback(X, a, p, -eps, 4);
  Form<5> fd = scale(1.0 / (2 * eps), plus - minus);
  EXPECT_LT((fd - lie_derivative_form(X, a, p)).norm(), 1e-4);
}

TEST(SymTensorTest, PolarizationRecoversQuadratic) {
  auto S = polarize<5, double>(2, [](const Point<5>& v) { return 2.0 * (v[0] * v[3] + v[1] * v[4]); });
  EXPECT_DOUBLE_EQ(S.at({0, 3}), 1.0);
  EXPECT_DOUBLE_EQ(S.at({3, 0}), 1.0);
  EXPECT_DOUBLE_EQ(S.at({0, 0}), 0.0);
  Point<5> v{1, 2, 3, 4, 5};
  EXPECT_DOUBLE_EQ(S.quadratic(v), 2.0 * (4 + 10));
}

TEST(SymTensorTest, QuarticPolarizationSymmetric) {
  auto poly = [](const Point<5>& v) { return v[0] * v[1] * v[1] * v[2] - 3 * v[3] * v[3] * v[3] * v[4]; };
  auto S = polarize<5, double>(4, poly);
  EXPECT_DOUBLE_EQ(S.at({0, 1, 1, 2}), S.at({1, 2, 0, 1}));
  Point<5> v{0.3, -1.2, 2.0, 0.7, 1.1};
  EXPECT_NEAR(S.quadratic(v), poly(v), 1e-12);
}

TEST(SymTensorTest, LieDerivativeLinearAndTranslationInvariant) {
  auto g = SymTensorField<5>::from_polynomial("g", 2, []<class T>(const Point<5, T>& p, const Point<5, T>& v) {
    return (1.0 + p[kA] * p[kA]) * v[0] * v[4] - p[kB] * v[1] * v[3];
  });
  auto h = SymTensorField<5>::from_polynomial("h", 2, []<class T>(const Point<5, T>& p, const Point<5, T>& v) {
    return p[kX] * v[2] * v[2] + v[0] * v[1];
  });
  auto gh = SymTensorField<5>::from_polynomial("g+3h", 2, []<class T>(const Point<5, T>& p, const Point<5, T>& v) {
    return (1.0 + p[kA] * p[kA]) * v[0] * v[4] - p[kB] * v[1] * v[3] + 3.0 * (p[kX] * v[2] * v[2] + v[0] * v[1]);
  });
  auto X = wavy_field("X", 0.6);
  Point<5> p{0.5, -0.3, 0.2, 1.1, -0.8};
  auto Lg = lie_derivative_symtensor(X, g, p);
  auto Lh = lie_derivative_symtensor(X, h, p);
  auto Lgh = lie_derivative_symtensor(X, gh, p);
  for (std::size_t i = 0; i < Lg.c.size(); ++i) EXPECT_NEAR(Lgh.c[i], Lg.c[i] + 3.0 * Lh.c[i], 1e-12);
  // ∂z does not change coefficients independent of z.
  EXPECT_EQ(lie_derivative_symtensor(d_z(), g, p).norm(), 0.0);
}

TEST(SymTensorTest, SymmetricProductDiagonal) {
  Point<5> alpha{1, -2, 0.5, 0, 3};
  auto beta = polarize<5, double>(2, [](const Point<5>& v) { return v[0] * v[1] + v[4] * v[4]; });
  auto prod = symmetric_product(alpha, beta);
  Point<5> v{0.2, 1.0, -0.7, 0.4, 0.9};
  double av = 0;
  for (int i = 0; i < 5; ++i) av += alpha[i] * v[i];
  EXPECT_NEAR(prod.quadratic(v), av * beta.quadratic(v), 1e-12);
}

TEST(Flow, ReversibleAndExactForConstantFields) {
  auto X = wavy_field("X", 0.2);
  Point<5> p{0.1, 0.2, 0.3, 0.4, 0.5};
  auto q = flow_rk4<5, double>(X, flow_rk4<5, double>(X, p, 0.5, 200), -0.5, 200);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(q[i], p[i], 1e-8);
  auto r = flow_rk4<5, double>(z_frame().fields[2], Point<5>{}, 1.0, 10);
  EXPECT_NEAR(r[kB], -3.0, 1e-15);
}
