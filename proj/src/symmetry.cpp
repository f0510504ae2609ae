#include "saucer/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "saucer/maneuvers.hpp"

namespace saucer {

#define SAUCER_FIELD(ID, ...)                                \
  VectorField<5>(ID, []<class T>(const Point<5, T>& p) {     \
    using std::sqrt;                                         \
    [[maybe_unused]] const T& x = p[kX];                     \
    [[maybe_unused]] const T& y = p[kY];                     \
    [[maybe_unused]] const T& z = p[kZ];                     \
    [[maybe_unused]] const T& a = p[kA];                     \
    [[maybe_unused]] const T& b = p[kB];                     \
    [[maybe_unused]] const T O(0.0);                         \
    [[maybe_unused]] const T I(1.0);                         \
    [[maybe_unused]] const T R = sqrt(1.0 + a * a + b * b);  \
    return Point<5, T>{__VA_ARGS__};                         \
  })

std::string to_string(CatalogName c) {
  switch (c) {
    case CatalogName::AttackingSL4: return "attacking";
    case CatalogName::LandingSU22: return "landing";
    case CatalogName::G2Contact: return "g2";
  }
  return "?";
}

CatalogName parse_catalog(const std::string& s) {
  if (s == "attacking") return CatalogName::AttackingSL4;
  if (s == "landing") return CatalogName::LandingSU22;
  if (s == "g2") return CatalogName::G2Contact;
  throw std::invalid_argument("unknown catalog: " + s);
}

// Components are listed in chart order (x, y, z, a, b).
const SymmetryCatalog& attacking_catalog() {
  static const SymmetryCatalog cat{
      CatalogName::AttackingSL4,
      {
          SAUCER_FIELD("X1", z * x, z * y, z * z, (z - a * x - b * y) * a, (z - a * x - b * y) * b),
          SAUCER_FIELD("X2", x * x, x * y, x * z, z - a * x - b * y, O),
          SAUCER_FIELD("X3", O, -z, O, b * a, b * b),
          SAUCER_FIELD("X4", O, -x, O, b, O),
          SAUCER_FIELD("X5", -z, O, O, a * a, a * b),
          SAUCER_FIELD("X6", -x, O, O, a, O),
          SAUCER_FIELD("X7", O, O, x, I, O),
          SAUCER_FIELD("X8", y * x, y * y, y * z, O, z - a * x - b * y),
          SAUCER_FIELD("X9", -y, O, O, O, a),
          SAUCER_FIELD("X10", x, O, z, O, b),
          SAUCER_FIELD("X11", O, O, y, O, I),
          SAUCER_FIELD("X12", x, y, z, O, O),
          SAUCER_FIELD("X13", O, I, O, O, O),
          SAUCER_FIELD("X14", I, O, O, O, O),
          SAUCER_FIELD("X15", O, O, I, O, O),
      }};
  return cat;
}

const SymmetryCatalog& landing_catalog() {
  static const SymmetryCatalog cat{
      CatalogName::LandingSU22,
      {
          SAUCER_FIELD("X1", -z * x, -z * y, 0.5 * (x * x + y * y - z * z), (1.0 + a * a) * x + a * b * y,
                       (1.0 + b * b) * y + a * b * x),
          SAUCER_FIELD("X2", 0.5 * (y * y + z * z - x * x), -x * y, -x * z, -((1.0 + a * a) * z - b * y),
                       -a * (b * z + y)),
          SAUCER_FIELD("X3", y * x, 0.5 * (y * y - x * x - z * z), y * z, b * (a * z + x), (1.0 + b * b) * z - a * x),
          SAUCER_FIELD("X4", -0.5 * a * (x * x + y * y + z * z) / R, -0.5 * b * (x * x + y * y + z * z) / R,
                       0.5 * (x * x + y * y + z * z) / R, R * (a * z + x), R * (b * z + y)),
          SAUCER_FIELD("X5", -z, O, x, a * a + 1.0, a * b),
          SAUCER_FIELD("X6", O, -z, y, a * b, b * b + 1.0),
          SAUCER_FIELD("X7", y, -x, O, b, -a),
          SAUCER_FIELD("X8", -a * x / R, -b * x / R, x / R, R, O),
          SAUCER_FIELD("X9", -a * z / R, -b * z / R, z / R, R * a, R * b),
          SAUCER_FIELD("X10", -a * y / R, -b * y / R, y / R, O, R),
          SAUCER_FIELD("X11", -a / R, -b / R, 1.0 / R, O, O),
          SAUCER_FIELD("X12", x, y, z, O, O),
          SAUCER_FIELD("X13", I, O, O, O, O),
          SAUCER_FIELD("X14", O, I, O, O, O),
          SAUCER_FIELD("X15", O, O, I, O, O),
      }};
  return cat;
}

const SymmetryCatalog& g2_catalog() {
  static const SymmetryCatalog cat{
      CatalogName::G2Contact,
      {
          SAUCER_FIELD("X1", y * y * y + x * z, y * z - b * b * x / 9.0 - 2.0 * b * y * y / 3.0,
                       z * z - 2.0 * b * b * b * x / 27.0 - b * b * y * y / 3.0,
                       a * z - a * a * x - a * b * y + b * b * b / 27.0, b * z - a * b * x - 3.0 * a * y * y - b * b * y / 3.0),
          SAUCER_FIELD("X2", x * x, x * y, x * z - y * y * y, z - a * x - b * y, -3.0 * y * y),
          SAUCER_FIELD("X3", -0.5 * z, b * b / 18.0, b * b * b / 27.0, 0.5 * a * a, 0.5 * a * b),
          SAUCER_FIELD("X4", -3.0 * y * y, 4.0 * b * y / 3.0 - z, 2.0 * b * b * y / 3.0, a * b, 6.0 * a * y + b * b / 3.0),
          SAUCER_FIELD("X5", O, y / 3.0, z, a, 2.0 * b / 3.0),
          SAUCER_FIELD("X6", 4.5 * x * y, 1.5 * y * y - b * x, 0.5 * (9.0 * y * z - b * b * x), 0.5 * b * b,
                       0.5 * (9.0 * z + 3.0 * b * y - 9.0 * a * x)),
          SAUCER_FIELD("X7", O, -x, 3.0 * y * y, b, 6.0 * y),
          SAUCER_FIELD("X8", x, 2.0 * y / 3.0, z, O, b / 3.0),
          SAUCER_FIELD("X9", y, -2.0 * b / 9.0, -b * b / 9.0, O, -a),
          SAUCER_FIELD("X10", O, O, x, I, O),
          SAUCER_FIELD("X11", O, O, y, O, I),
          SAUCER_FIELD("X12", I, O, O, O, O),
          SAUCER_FIELD("X13", O, I, O, O, O),
          SAUCER_FIELD("X14", O, O, I, O, O),
      }};
  return cat;
}

#undef SAUCER_FIELD

const SymmetryCatalog& catalog(CatalogName name) {
  switch (name) {
    case CatalogName::AttackingSL4: return attacking_catalog();
    case CatalogName::LandingSU22: return landing_catalog();
    case CatalogName::G2Contact: return g2_catalog();
  }
  throw std::invalid_argument("unknown catalog");
}

namespace {

double input_scale(const VectorField<5>& X, const ChartPoint5& p) {
  return std::max(1.0, X.value(p).norm() + X.jacobian(p).norm());
}

Eigen::VectorXd as_vector(const SymTensor<5>& S) { return Eigen::Map<const Eigen::VectorXd>(S.c.data(), static_cast<Eigen::Index>(S.c.size())); }

// Distance of L from span{S} ⊕ ω⁰⊙(symmetric rank k−1).
double membership_misfit(const SymTensor<5>& L, const SymTensor<5>& S, const Point<5>& w0) {
  const int k = S.rank;
  std::vector<Eigen::VectorXd> cols{as_vector(S)};
  for_each_sorted_index<5>(k - 1, [&](const std::vector<int>& idx) {
    SymTensor<5> beta(k - 1);
    if (k - 1 == 0)
      beta.c[0] = 1.0;
    else
      fill_symmetric(beta, idx, 1.0);
    cols.push_back(as_vector(symmetric_product(w0, beta)));
  });
  Eigen::MatrixXd A(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) A.col(static_cast<Eigen::Index>(j)) = cols[j];
  Eigen::VectorXd rhs = as_vector(L);
  Eigen::VectorXd coef = A.colPivHouseholderQr().solve(rhs);
  return (A * coef - rhs).norm();
}

double contact_misfit(const VectorField<5>& X, const ChartPoint5& p) {
  const auto& w = contact_form_field();
  Form<5> L = lie_derivative_form(X, w, p);
  Form<5> w0 = w.at(p);
  return wedge(L, w0).norm() / (w0.norm() * w0.norm());
}

}  // namespace

SymmetryResidual legendrean_symmetry_residual(const VectorField<5>& X, const ChartPoint5& p,
                                              const SymTensorField<5>& g) {
  const double s = input_scale(X, p);
  SymmetryResidual r;
  r.contact = contact_misfit(X, p) / s;
  SymTensor<5> G = g.at(p);
  SymTensor<5> L = lie_derivative_symtensor(X, g, p);
  r.tensor = membership_misfit(L, G, covector(contact_form_field().at(p))) / (as_vector(G).norm() * s);
  return r;
}

SymmetryResidual g2_symmetry_residual(const VectorField<5>& X, const ChartPoint5& p) {
  const double s = input_scale(X, p);
  SymmetryResidual r;
  r.contact = contact_misfit(X, p) / s;
  const auto& U = upsilon_field();
  SymTensor<5> S = U.at(p);
  SymTensor<5> L = lie_derivative_symtensor(X, U, p);
  r.tensor = membership_misfit(L, S, covector(contact_form_field().at(p))) / (as_vector(S).norm() * s);
  return r;
}

SymmetryResidual symmetry_residual(CatalogName name, const VectorField<5>& X, const ChartPoint5& p) {
  switch (name) {
    case CatalogName::AttackingSL4: return legendrean_symmetry_residual(X, p, attacking_metric_field());
    case CatalogName::LandingSU22: return legendrean_symmetry_residual(X, p, landing_metric_field());
    case CatalogName::G2Contact: return g2_symmetry_residual(X, p);
  }
  throw std::invalid_argument("unknown catalog");
}

namespace {

Eigen::MatrixXd stacked_values(const SymmetryCatalog& cat, const std::vector<ChartPoint5>& points) {
  const auto n = static_cast<Eigen::Index>(cat.fields.size());
  Eigen::MatrixXd A(5 * static_cast<Eigen::Index>(points.size()), n);
  for (std::size_t m = 0; m < points.size(); ++m)
    for (Eigen::Index k = 0; k < n; ++k) A.block<5, 1>(5 * static_cast<Eigen::Index>(m), k) = cat.fields[static_cast<std::size_t>(k)].value(points[m]);
  return A;
}

int numeric_rank(const Eigen::VectorXd& s, double rel) {
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > rel * s[0]) ++r;
  return r;
}

double jacobi_residual(const LieAlgebraModel& m) {
  const int n = m.dimension;
  double cmax = 0.0;
  for (double v : m.c) cmax = std::max(cmax, std::abs(v));
  if (cmax == 0.0) return 0.0;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = 0.0;
          for (int q = 0; q < n; ++q)
            v += m.structure(q, i, j) * m.structure(l, q, k) + m.structure(q, j, k) * m.structure(l, q, i) +
                 m.structure(q, k, i) * m.structure(l, q, j);
          worst = std::max(worst, std::abs(v));
        }
  return worst / (cmax * cmax);
}

}  // namespace

int catalog_rank(const SymmetryCatalog& cat, const std::vector<ChartPoint5>& points, double rel_threshold) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked_values(cat, points));
  return numeric_rank(svd.singularValues(), rel_threshold);
}

LieAlgebraModel extract_structure_constants(const SymmetryCatalog& cat, const std::vector<ChartPoint5>& points) {
  const int n = static_cast<int>(cat.fields.size());
  if (static_cast<int>(points.size()) < 2 * n) throw IllConditioned("need at least 2n sample points");
  Eigen::MatrixXd A = stacked_values(cat, points);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < n) throw IllConditioned("stacked field values are rank deficient; add points");
  LieAlgebraModel m;
  m.dimension = n;
  m.c.assign(static_cast<std::size_t>(n * n * n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      VectorField<5> br = bracket(cat.fields[static_cast<std::size_t>(i)], cat.fields[static_cast<std::size_t>(j)]);
      Eigen::VectorXd rhs(A.rows());
      for (std::size_t q = 0; q < points.size(); ++q) rhs.segment<5>(5 * static_cast<Eigen::Index>(q)) = br.value(points[q]);
      Eigen::VectorXd c = qr.solve(rhs);
      const double denom = std::max(rhs.norm(), 1e-300);
      const double mis = (A * c - rhs).norm();
      m.closure_residual = std::max(m.closure_residual, rhs.norm() > 1e-12 ? mis / denom : mis);
      for (int k = 0; k < n; ++k) {
        m.structure(k, i, j) = c[k];
        m.structure(k, j, i) = -c[k];
      }
    }
  m.jacobi_residual = jacobi_residual(m);
  return m;
}

double structure_constant_distance(const LieAlgebraModel& a, const LieAlgebraModel& b) {
  if (a.dimension != b.dimension) return std::numeric_limits<double>::infinity();
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    diff = std::max(diff, std::abs(a.c[i] - b.c[i]));
    scale = std::max(scale, std::abs(a.c[i]));
  }
  return scale > 0 ? diff / scale : diff;
}

KillingDiagnostics killing_diagnostics(const LieAlgebraModel& m) {
  const int n = m.dimension;
  KillingDiagnostics d;
  d.B = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) v += m.structure(a, i, b) * m.structure(b, j, a);
      d.B(i, j) = v;
    }
  Eigen::MatrixXd Bs = 0.5 * (d.B + d.B.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Bs);
  const auto& ev = es.eigenvalues();
  const double cut = 1e-8 * ev.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > cut)
      ++d.signature.positive;
    else if (ev[i] < -cut)
      ++d.signature.negative;
    else
      ++d.signature.zero;
  }
  d.nondegenerate = d.signature.zero == 0;
  return d;
}

LieAlgebraModel model_from_matrices(const std::vector<Eigen::MatrixXd>& basis) {
  const int n = static_cast<int>(basis.size());
  if (n == 0) throw std::invalid_argument("empty basis");
  const Eigen::Index sz = basis[0].size();
  Eigen::MatrixXd A(sz, n);
  for (int k = 0; k < n; ++k) A.col(k) = Eigen::Map<const Eigen::VectorXd>(basis[static_cast<std::size_t>(k)].data(), sz);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < n) throw IllConditioned("matrix basis is linearly dependent");
  LieAlgebraModel m;
  m.dimension = n;
  m.c.assign(static_cast<std::size_t>(n * n * n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto& X = basis[static_cast<std::size_t>(i)];
      const auto& Y = basis[static_cast<std::size_t>(j)];
      Eigen::MatrixXd br = X * Y - Y * X;
      Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(br.data(), sz);
      Eigen::VectorXd c = qr.solve(rhs);
      m.closure_residual = std::max(m.closure_residual, (A * c - rhs).norm() / std::max(1.0, rhs.norm()));
      for (int k = 0; k < n; ++k) {
        m.structure(k, i, j) = c[k];
        m.structure(k, j, i) = -c[k];
      }
    }
  m.jacobi_residual = jacobi_residual(m);
  return m;
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& A, double rel_threshold) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const int r = svd.singularValues().size() ? numeric_rank(svd.singularValues(), rel_threshold) : 0;
  return svd.matrixV().rightCols(A.cols() - r);
}

namespace {

std::vector<Eigen::MatrixXd> unflatten(const Eigen::MatrixXd& N, int dim) {
  std::vector<Eigen::MatrixXd> out;
  for (Eigen::Index k = 0; k < N.cols(); ++k) out.push_back(Eigen::Map<const Eigen::MatrixXd>(N.col(k).data(), dim, dim));
  return out;
}

}  // namespace

std::vector<Eigen::MatrixXd> sl4_matrix_model() {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(1, 16);
  for (int i = 0; i < 4; ++i) A(0, 5 * i) = 1.0;
  return unflatten(null_space(A), 4);
}

std::vector<Eigen::MatrixXd> su22_matrix_model() {
  // Unknowns: real parts P (16) then imaginary parts Q (16), column-major.
  const double h[4] = {1, 1, -1, -1};
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(32 + 2, 32);
  auto P = [](int i, int j) { return j * 4 + i; };
  auto Q = [](int i, int j) { return 16 + j * 4 + i; };
  int row = 0;
  // (A†H + HA)_{ij} = conj(A_ji) h_j + h_i A_ij
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      A(row, P(j, i)) += h[j];
      A(row, P(i, j)) += h[i];
      A(row + 16, Q(j, i)) -= h[j];
      A(row + 16, Q(i, j)) += h[i];
      ++row;
    }
  for (int i = 0; i < 4; ++i) {
    A(32, P(i, i)) = 1.0;
    A(33, Q(i, i)) = 1.0;
  }
  Eigen::MatrixXd N = null_space(A);
  std::vector<Eigen::MatrixXd> out;
  for (Eigen::Index k = 0; k < N.cols(); ++k) {
    Eigen::Map<const Eigen::Matrix4d> Pm(N.col(k).data());
    Eigen::Map<const Eigen::Matrix4d> Qm(N.col(k).data() + 16);
    Eigen::MatrixXd M(8, 8);
    M << Pm, -Qm, Qm, Pm;
    out.push_back(M);
  }
  return out;
}

std::vector<Eigen::MatrixXd> g2_matrix_model() {
  struct Term {
    int i, j, k;
    double s;
  };
  const Term terms[] = {{0, 1, 2, 1}, {0, 3, 4, -1}, {0, 5, 6, -1}, {1, 3, 5, -1}, {1, 4, 6, 1}, {2, 3, 6, 1}, {2, 4, 5, 1}};
  std::vector<double> phi(343, 0.0);
  auto at = [](int i, int j, int k) { return static_cast<std::size_t>((i * 7 + j) * 7 + k); };
  for (const auto& t : terms) {
    int idx[3] = {t.i, t.j, t.k};
    std::sort(idx, idx + 3);
    do {
      double sign = 1.0;
      for (int u = 0; u < 3; ++u)
        for (int v = u + 1; v < 3; ++v)
          if (idx[u] > idx[v]) sign = -sign;
      phi[at(idx[0], idx[1], idx[2])] = sign * t.s;
    } while (std::next_permutation(idx, idx + 3));
  }
  // Σ_m (A_{m i} φ_{mjk} + A_{m j} φ_{imk} + A_{m k} φ_{ijm}) = 0; unknown A(m, i) at column i*7 + m.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(343, 49);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      for (int k = 0; k < 7; ++k) {
        const int row = static_cast<int>(at(i, j, k));
        for (int m = 0; m < 7; ++m) {
          A(row, i * 7 + m) += phi[at(m, j, k)];
          A(row, j * 7 + m) += phi[at(i, m, k)];
          A(row, k * 7 + m) += phi[at(i, j, m)];
        }
      }
  return unflatten(null_space(A), 7);
}

}  // namespace saucer
