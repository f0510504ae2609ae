#include "saucer/structure_ops.hpp"

#include <cmath>

#include "saucer/maneuvers.hpp"

namespace saucer {

using cd = std::complex<double>;

KOperator k_operator(const Mat4& g, const Mat4& Omega, double branch) {
  Eigen::FullPivLU<Mat4> lu(g);
  if (!lu.isInvertible()) throw std::invalid_argument("metric is degenerate on the distribution");
  KOperator K;
  K.raw = lu.solve(Omega);
  Mat4 sq = K.raw * K.raw;
  K.lambda = sq.trace() / 4.0;
  if ((sq - K.lambda * Mat4::Identity()).norm() > 1e-8 * std::max(1.0, std::abs(K.lambda)))
    throw NotScalarSquare("K̃² is not a multiple of the identity");
  if (K.lambda == 0.0) throw NotScalarSquare("K̃² vanishes");
  K.sign = K.lambda > 0 ? 1 : -1;
  K.matrix = branch * K.raw / std::sqrt(std::abs(K.lambda));
  return K;
}

Mat4 two_form_in_frame(const DifferentialForm<5>& form, const Frame4& frame, const ChartPoint5& p) {
  if (form.degree() != 2) throw std::invalid_argument("two_form_in_frame expects a 2-form");
  Form<5> f = form.at(p);
  Mat4 M;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) M(i, j) = evaluate(f, {frame.fields[i](p), frame.fields[j](p)});
  return M;
}

Mat4 contact_two_form(const ChartPoint5& p) {
  static const DifferentialForm<5> Omega = exterior_derivative(contact_form_field());
  return two_form_in_frame(Omega, e_frame(), p);
}

KOperator attacking_k_operator(const ChartPoint5& p) {
  return k_operator(restrict_to_frame(attacking_metric(p), e_frame(), p), contact_two_form(p), -1.0);
}

KOperator landing_k_operator(const ChartPoint5& p) {
  return k_operator(restrict_to_frame(landing_metric(p), e_frame(), p), contact_two_form(p), 1.0);
}

EigenSplit eigen_split(const KOperator& K) {
  Eigen::ComplexEigenSolver<Mat4c> es(K.matrix.cast<cd>());
  EigenSplit out;
  out.complex = K.sign < 0;
  int np = 0, nm = 0;
  for (int i = 0; i < 4; ++i) {
    cd l = es.eigenvalues()[i];
    double key = out.complex ? l.imag() : l.real();
    Vec4c v = es.eigenvectors().col(i);
    if (key > 0) {
      if (np == 2) throw DefectiveOperator("more than two eigenvectors with positive eigenvalue");
      out.plus.col(np++) = v;
    } else {
      if (nm == 2) throw DefectiveOperator("more than two eigenvectors with negative eigenvalue");
      out.minus.col(nm++) = v;
    }
  }
  Eigen::JacobiSVD<Eigen::Matrix<cd, 4, 2>> sp(out.plus), sm(out.minus);
  if (sp.singularValues()[1] < 1e-8 * sp.singularValues()[0] || sm.singularValues()[1] < 1e-8 * sm.singularValues()[0])
    throw DefectiveOperator("eigenspace is rank deficient");
  return out;
}

std::array<Vec4c, 2> landing_complex_frame(const ChartPoint5& p) {
  const double a = p[kA], b = p[kB];
  const double R = std::sqrt(1 + a * a + b * b);
  const cd i(0, 1);
  Vec4c Z1(0, 0, R + i * a * b, i * (1 + a * a));
  Vec4c Z2(i * (1 + b * b), R - i * a * b, 0, 0);
  return {Z1, Z2};
}

double span_membership_residual(const Eigen::Matrix<cd, 4, 2>& B, const Vec4c& v) {
  Eigen::Matrix<cd, 2, 1> c = B.colPivHouseholderQr().solve(v);
  return (B * c - v).norm() / v.norm();
}

LeviForm levi_form(const ChartPoint5& p) {
  const double a = p[kA], b = p[kB];
  const double R = std::sqrt(1 + a * a + b * b);
  const cd i(0, 1);
  Mat4c Om = contact_two_form(p).cast<cd>();
  auto Z = landing_complex_frame(p);
  auto h = [&](const Vec4c& u, const Vec4c& v) { return -i * (u.transpose() * Om * v.conjugate())(0, 0); };
  LeviForm L;
  std::array<Vec4c, 2> W{Z[0], -i * Z[1]};
  for (int A = 0; A < 2; ++A)
    for (int B = 0; B < 2; ++B) {
      L.frame_matrix(A, B) = h(Z[A], Z[B]);
      L.matrix(A, B) = h(W[A], W[B]);
    }
  L.C = 2.0 * (1 + a * a + b * b + i * a * b * R);
  L.hermitian_residual = (L.matrix - L.matrix.adjoint()).norm() / L.matrix.norm();
  Eigen::SelfAdjointEigenSolver<Mat2c> es(L.matrix);
  for (int k = 0; k < 2; ++k) {
    double l = es.eigenvalues()[k];
    if (l > 1e-10 * L.matrix.norm()) ++L.positive;
    if (l < -1e-10 * L.matrix.norm()) ++L.negative;
  }
  return L;
}

namespace {

int ipow4(int k) {
  int r = 1;
  while (k-- > 0) r *= 4;
  return r;
}

}  // namespace

TensorConstraint TensorConstraint::from_matrix(std::string name, const Mat4& M) {
  TensorConstraint t;
  t.name = std::move(name);
  t.rank = 2;
  t.coeffs.resize(16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t.coeffs[static_cast<std::size_t>(4 * i + j)] = M(i, j);
  return t;
}

TensorConstraint TensorConstraint::from_symtensor(std::string name, const SymTensor<4>& S) {
  TensorConstraint t;
  t.name = std::move(name);
  t.rank = S.rank;
  t.coeffs = S.c;
  return t;
}

TensorConstraint TensorConstraint::pulled_back(const Mat4& P) const {
  TensorConstraint out = *this;
  const int n = ipow4(rank);
  // Contract one slot at a time with P.
  std::vector<double> cur = coeffs;
  for (int r = 0; r < rank; ++r) {
    std::vector<double> next(static_cast<std::size_t>(n), 0.0);
    const int stride = ipow4(rank - 1 - r);
    for (int f = 0; f < n; ++f) {
      const int slot = (f / stride) % 4;
      const int base = f - slot * stride;
      double v = 0.0;
      for (int m = 0; m < 4; ++m) v += cur[static_cast<std::size_t>(base + m * stride)] * P(m, slot);
      next[static_cast<std::size_t>(f)] = v;
    }
    cur = std::move(next);
  }
  out.coeffs = std::move(cur);
  return out;
}

namespace {

// Rows of the linear map (Y, f) ↦ Σ_r Y^m_{i_r} T_{..m..} − f T.
Eigen::MatrixXd stabilizer_system(const std::vector<TensorConstraint>& tensors) {
  int rows = 0;
  for (const auto& t : tensors) rows += ipow4(t.rank);
  const int cols = 16 + static_cast<int>(tensors.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, cols);
  int row0 = 0;
  for (std::size_t ti = 0; ti < tensors.size(); ++ti) {
    const auto& t = tensors[ti];
    const int n = ipow4(t.rank);
    if (static_cast<int>(t.coeffs.size()) != n) throw std::invalid_argument("tensor coefficient count mismatch");
    for (int f = 0; f < n; ++f) {
      for (int r = 0; r < t.rank; ++r) {
        const int stride = ipow4(t.rank - 1 - r);
        const int slot = (f / stride) % 4;
        const int base = f - slot * stride;
        for (int m = 0; m < 4; ++m) A(row0 + f, 4 * m + slot) += t.coeffs[static_cast<std::size_t>(base + m * stride)];
      }
      A(row0 + f, 16 + static_cast<int>(ti)) = -t.coeffs[static_cast<std::size_t>(f)];
    }
    row0 += n;
  }
  return A;
}

}  // namespace

StabilizerSolution solve_infinitesimal_stabilizer(const std::vector<TensorConstraint>& tensors, double rel_threshold) {
  if (tensors.empty()) throw EmptyInput("stabilizer needs at least one tensor");
  Eigen::MatrixXd A = stabilizer_system(tensors);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const int cols = static_cast<int>(A.cols());
  const double cut = rel_threshold * (s.size() ? s[0] : 0.0);
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[i] > cut) ++rank;
  StabilizerSolution sol;
  sol.dimension = cols - rank;
  for (int k = rank; k < cols; ++k) {
    Eigen::VectorXd v = svd.matrixV().col(k);
    Mat4 Y;
    for (int m = 0; m < 4; ++m)
      for (int i = 0; i < 4; ++i) Y(m, i) = v[4 * m + i];
    sol.basis.push_back(Y);
    sol.scales.emplace_back(v.data() + 16, v.data() + cols);
    sol.max_residual = std::max(sol.max_residual, (A * v).norm());
  }
  return sol;
}

double stabilizer_residual(const std::vector<TensorConstraint>& tensors, const Mat4& Y) {
  Eigen::MatrixXd A = stabilizer_system(tensors);
  Eigen::VectorXd y(16);
  for (int m = 0; m < 4; ++m)
    for (int i = 0; i < 4; ++i) y[4 * m + i] = Y(m, i);
  Eigen::VectorXd rhs = -A.leftCols(16) * y;
  Eigen::MatrixXd F = A.rightCols(A.cols() - 16);
  Eigen::VectorXd f = F.colPivHouseholderQr().solve(rhs);
  return (A.leftCols(16) * y + F * f).norm();
}

std::vector<Mat4> attacking_g0_basis() {
  Mat4 Y1 = Mat4::Zero(), Y2 = Mat4::Zero(), Y3 = Mat4::Zero();
  Y1.diagonal() << 1, -1, 1, -1;
  Y2(0, 1) = 1;
  Y2(2, 3) = -1;
  Y3(1, 0) = 1;
  Y3(3, 2) = -1;
  Mat4 Y4 = Mat4::Zero();
  Y4.diagonal() << 1, 1, -1, -1;
  return {Y1, Y2, Y3, Y4, Mat4::Identity()};
}

CommutationTable attacking_g0_table() {
  return {{0, 1, {0, 2, 0, 0, 0}}, {0, 2, {0, 0, -2, 0, 0}}, {1, 2, {1, 0, 0, 0, 0}}};
}

double verify_commutation_table(const std::vector<Mat4>& basis, const CommutationTable& expected) {
  double worst = 0.0;
  const int n = static_cast<int>(basis.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Mat4 target = Mat4::Zero();
      for (const auto& [a, b, c] : expected)
        if (a == i && b == j)
          for (int k = 0; k < n && k < static_cast<int>(c.size()); ++k) target += c[static_cast<std::size_t>(k)] * basis[k];
      Mat4 br = basis[i] * basis[j] - basis[j] * basis[i];
      worst = std::max(worst, (br - target).norm());
    }
  return worst;
}

int matrix_span_rank(const std::vector<Mat4>& mats, double rel_threshold) {
  if (mats.empty()) return 0;
  Eigen::MatrixXd M(16, static_cast<int>(mats.size()));
  for (std::size_t k = 0; k < mats.size(); ++k) M.col(static_cast<int>(k)) = Eigen::Map<const Eigen::VectorXd>(mats[k].data(), 16);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[i] > rel_threshold * s[0]) ++r;
  return r;
}

Mat4 alternative_g2_frame(const ChartPoint5& p) {
  const double x = p[kX], y = p[kY];
  if (x == 0.0 || y == 0.0) throw std::domain_error("alternative coframe is singular on x = 0 or y = 0");
  // Columns E1 = ∂x + a∂z, E2 = ∂y + b∂z, E3 = ∂b, E4 = ∂a; none of the ωⁱ has a dz part.
  Mat4 M = Mat4::Zero();
  M(0, 0) = 1.0;
  M(0, 1) = -x / y;
  M(1, 0) = 1.0 / x;
  M(2, 2) = -y * y / 3.0;
  M(2, 3) = -x * y / 3.0;
  M(3, 2) = -y * y / x;
  return M;
}

}  // namespace saucer
