#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "saucer/config_space.hpp"
#include "saucer/forms.hpp"

namespace saucer {

enum class CatalogName { AttackingSL4, LandingSU22, G2Contact };

std::string to_string(CatalogName c);
/// Accepts attacking | landing | g2.
CatalogName parse_catalog(const std::string& s);

struct SymmetryCatalog {
  CatalogName name;
  std::vector<VectorField<5>> fields;
};

const SymmetryCatalog& attacking_catalog();
const SymmetryCatalog& landing_catalog();
const SymmetryCatalog& g2_catalog();
const SymmetryCatalog& catalog(CatalogName name);

struct SymmetryResidual {
  double contact = 0.0;
  double tensor = 0.0;  // metric or quartic
};

/// ‖(L_X ω⁰)∧ω⁰‖ and the distance of L_X g from span{g} ⊕ ω⁰⊙(covectors).
SymmetryResidual legendrean_symmetry_residual(const VectorField<5>& X, const ChartPoint5& p,
                                              const SymTensorField<5>& g);
/// Same with L_X Υ against span{Υ} ⊕ ω⁰⊙(symmetric rank 3).
SymmetryResidual g2_symmetry_residual(const VectorField<5>& X, const ChartPoint5& p);
/// Dispatch on the catalog's geometry.
SymmetryResidual symmetry_residual(CatalogName name, const VectorField<5>& X, const ChartPoint5& p);

/// Rank of the 5m × n matrix of field values at the given points.
int catalog_rank(const SymmetryCatalog& cat, const std::vector<ChartPoint5>& points, double rel_threshold = 1e-9);

struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
  bool operator==(const Signature&) const = default;
};

struct LieAlgebraModel {
  int dimension = 0;
  std::vector<double> c;  // c[(k * n + i) * n + j] = c^k_{ij}
  double closure_residual = 0.0;
  double jacobi_residual = 0.0;

  double structure(int k, int i, int j) const { return c[static_cast<std::size_t>((k * dimension + i) * dimension + j)]; }
  double& structure(int k, int i, int j) { return c[static_cast<std::size_t>((k * dimension + i) * dimension + j)]; }
};

class IllConditioned : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

LieAlgebraModel extract_structure_constants(const SymmetryCatalog& cat, const std::vector<ChartPoint5>& points);

/// Max relative difference of two sets of structure constants.
double structure_constant_distance(const LieAlgebraModel& a, const LieAlgebraModel& b);

struct KillingDiagnostics {
  Eigen::MatrixXd B;
  Signature signature;
  bool nondegenerate = false;
};

KillingDiagnostics killing_diagnostics(const LieAlgebraModel& model);

/// Structure constants of a matrix Lie algebra given by a basis.
LieAlgebraModel model_from_matrices(const std::vector<Eigen::MatrixXd>& basis);

/// Orthonormal basis of the null space (relative SVD threshold).
Eigen::MatrixXd null_space(const Eigen::MatrixXd& A, double rel_threshold = 1e-10);

/// Trace-free real 4×4 matrices.
std::vector<Eigen::MatrixXd> sl4_matrix_model();
/// A†H + HA = 0, tr A = 0 with H = diag(1,1,−1,−1), realified to 8×8.
std::vector<Eigen::MatrixXd> su22_matrix_model();
/// Stabilizer of the split 3-form on ℝ⁷.
std::vector<Eigen::MatrixXd> g2_matrix_model();

}  // namespace saucer
