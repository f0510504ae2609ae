#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "saucer/config_space.hpp"
#include "saucer/gl2_rep.hpp"

namespace saucer {

using Mat4c = Eigen::Matrix4cd;
using Vec4c = Eigen::Vector4cd;
using Mat2c = Eigen::Matrix2cd;

class NotScalarSquare : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DefectiveOperator : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KOperator {
  Mat4 raw;     // K̃ = g⁻¹Ω
  Mat4 matrix;  // normalized and branch-fixed
  double lambda = 0.0;  // K̃² = λ Id
  int sign = 0;         // sign of λ
};

/// K̃ = g⁻¹Ω, K = branch · K̃ / √|λ|.
KOperator k_operator(const Mat4& g, const Mat4& Omega, double branch = 1.0);

/// Ω(F_i, F_j) for a 2-form on the chart.
Mat4 two_form_in_frame(const DifferentialForm<5>& form, const Frame4& frame, const ChartPoint5& p);
/// dω⁰ in the E-frame.
Mat4 contact_two_form(const ChartPoint5& p);

/// Branch with K = +Y₄ in the E-frame.
KOperator attacking_k_operator(const ChartPoint5& p);
/// Branch with eigenvalue +i on the reference Z₁.
KOperator landing_k_operator(const ChartPoint5& p);

struct EigenSplit {
  bool complex = false;
  Eigen::Matrix<std::complex<double>, 4, 2> plus;
  Eigen::Matrix<std::complex<double>, 4, 2> minus;
};

EigenSplit eigen_split(const KOperator& K);

/// Reference complex vectors Z₁, Z₂ of the landing structure in E-frame
/// components (x, y, b, a).
std::array<Vec4c, 2> landing_complex_frame(const ChartPoint5& p);

/// Residual of v against span of the columns of B (relative).
double span_membership_residual(const Eigen::Matrix<std::complex<double>, 4, 2>& B, const Vec4c& v);

struct LeviForm {
  Mat2c matrix;        // h in the frame (Z₁, −iZ₂): [[0, −C], [−C̄, 0]]
  Mat2c frame_matrix;  // h_{AB̄} = −iΩ(Z_A, Z̄_B)
  std::complex<double> C;
  int positive = 0;
  int negative = 0;
  double hermitian_residual = 0.0;
};

LeviForm levi_form(const ChartPoint5& p);

/// Covariant tensor on ℝ⁴ stored densely (4^rank).
struct TensorConstraint {
  std::string name;
  int rank = 2;
  std::vector<double> coeffs;

  static TensorConstraint from_matrix(std::string name, const Mat4& M);
  static TensorConstraint from_symtensor(std::string name, const SymTensor<4>& S);
  /// T'(v, ...) = T(P v, ...)
  TensorConstraint pulled_back(const Mat4& P) const;
};

struct StabilizerSolution {
  std::vector<Mat4> basis;
  std::vector<std::vector<double>> scales;
  int dimension = 0;
  double max_residual = 0.0;
};

class EmptyInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Null space of Σ_r Y^m_{i_r} T_{..m..} = f T per tensor.
StabilizerSolution solve_infinitesimal_stabilizer(const std::vector<TensorConstraint>& tensors,
                                                  double rel_threshold = 1e-10);

/// Residual of one matrix against the defining equations (best scale).
double stabilizer_residual(const std::vector<TensorConstraint>& tensors, const Mat4& Y);

/// Matrices Y₁..Y₅ of the reduced attacking structure algebra.
std::vector<Mat4> attacking_g0_basis();

/// Expected bracket [Y_i, Y_j] = Σ_k c_k Y_k for i < j; pairs not listed vanish.
using CommutationTable = std::vector<std::tuple<int, int, std::vector<double>>>;
CommutationTable attacking_g0_table();

double verify_commutation_table(const std::vector<Mat4>& basis, const CommutationTable& expected);

/// Rank of the span of a list of matrices.
int matrix_span_rank(const std::vector<Mat4>& mats, double rel_threshold = 1e-10);

/// Matrix M with M_ij = ωⁱ(E_j) for the alternative coframe
/// ω¹ = (y dx − x dy)/y, ω² = dx/x, ω³ = −⅓y(x da + y db), ω⁴ = −y² db/x.
Mat4 alternative_g2_frame(const ChartPoint5& p);

}  // namespace saucer
