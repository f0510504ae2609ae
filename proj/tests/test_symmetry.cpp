#include <gtest/gtest.h>

#include "saucer/maneuvers.hpp"
#include "saucer/symmetry.hpp"

using namespace saucer;

namespace {

std::vector<ChartPoint5> sample(std::uint64_t seed, int n) {
  ChartSampler s(seed);
  std::vector<ChartPoint5> pts;
  for (int k = 0; k < n; ++k) pts.push_back(s.next());
  return pts;
}

double max_residual(CatalogName name, std::uint64_t seed) {
  double worst = 0.0;
  for (const auto& p : sample(seed, 50))
    for (const auto& X : catalog(name).fields) {
      auto r = symmetry_residual(name, X, p);
      worst = std::max({worst, r.contact, r.tensor});
    }
  return worst;
}

}  // namespace

TEST(Catalogs, Sizes) {
  EXPECT_EQ(attacking_catalog().fields.size(), 15u);
  EXPECT_EQ(landing_catalog().fields.size(), 15u);
  EXPECT_EQ(g2_catalog().fields.size(), 14u);
  EXPECT_EQ(parse_catalog("g2"), CatalogName::G2Contact);
  EXPECT_THROW(parse_catalog("so3"), std::invalid_argument);
}

TEST(Catalogs, TranslationsAreTrivial) {
  const ChartPoint5 p{0.3, -0.2, 1.1, 0.5, -0.7};
  auto r = legendrean_symmetry_residual(attacking_catalog().fields[14], p, attacking_metric_field());
  EXPECT_EQ(r.contact, 0.0);
  EXPECT_LT(r.tensor, 1e-15);
  auto q = g2_symmetry_residual(g2_catalog().fields[13], p);
  EXPECT_EQ(q.contact, 0.0);
  EXPECT_LT(q.tensor, 1e-15);
}

TEST(Catalogs, AttackingFieldsAreSymmetries) { EXPECT_LT(max_residual(CatalogName::AttackingSL4, 41), 1e-7); }
TEST(Catalogs, LandingFieldsAreSymmetries) { EXPECT_LT(max_residual(CatalogName::LandingSU22, 42), 1e-7); }
TEST(Catalogs, G2FieldsAreSymmetries) { EXPECT_LT(max_residual(CatalogName::G2Contact, 43), 1e-7); }

TEST(Catalogs, NegativeControls) {
  auto da = coordinate_field<5>(kA, "da");
  double contact = 0.0;
  for (const auto& p : sample(44, 20)) contact = std::max(contact, legendrean_symmetry_residual(da, p, attacking_metric_field()).contact);
  EXPECT_GT(contact, 1e-2);
  auto euler = VectorField<5>("E", []<class T>(const Point<5, T>& p) { return Point<5, T>{p[kX], p[kY], p[kZ], T(0.0), T(0.0)}; });
  double quartic = 0.0;
  for (const auto& p : sample(45, 20)) quartic = std::max(quartic, g2_symmetry_residual(euler, p).tensor);
  EXPECT_GT(quartic, 1e-3);
}

TEST(Catalogs, ExactAndHomotheticAttackingFields) {
  const auto& cat = attacking_catalog();
  const auto& w = contact_form_field();
  const auto& g = attacking_metric_field();
  for (const auto& p : sample(46, 20)) {
    auto check = [&](int idx, double c) {
      const auto& X = cat.fields[static_cast<std::size_t>(idx - 1)];
      EXPECT_LT((lie_derivative_form(X, w, p) - scale(c, w.at(p))).norm(), 1e-9) << X.id();
      SymTensor<5> L = lie_derivative_symtensor(X, g, p);
      SymTensor<5> G = g.at(p);
      double d = 0.0;
      for (std::size_t f = 0; f < L.c.size(); ++f) d = std::max(d, std::abs(L.c[f] - c * G.c[f]));
      EXPECT_LT(d, 1e-9) << X.id();
    };
    for (int i : {4, 6, 7, 9, 11, 13, 14, 15}) check(i, 0.0);
    for (int i : {10, 12}) check(i, 1.0);
  }
}

TEST(Catalogs, LinearIndependence) {
  auto pts = sample(47, 10);
  EXPECT_EQ(catalog_rank(attacking_catalog(), pts), 15);
  EXPECT_EQ(catalog_rank(landing_catalog(), pts), 15);
  EXPECT_EQ(catalog_rank(g2_catalog(), pts), 14);
}

TEST(StructureConstants, ClosureJacobiAndStability) {
  for (auto name : {CatalogName::AttackingSL4, CatalogName::LandingSU22, CatalogName::G2Contact}) {
    const auto& cat = catalog(name);
    const int n = static_cast<int>(cat.fields.size());
    auto m1 = extract_structure_constants(cat, sample(48, 2 * n));
    auto m2 = extract_structure_constants(cat, sample(49, 2 * n));
    EXPECT_LT(m1.closure_residual, 1e-8) << to_string(name);
    EXPECT_LT(m1.jacobi_residual, 1e-8) << to_string(name);
    EXPECT_LT(structure_constant_distance(m1, m2), 1e-6) << to_string(name);
  }
  EXPECT_THROW(extract_structure_constants(g2_catalog(), sample(50, 5)), IllConditioned);
}

TEST(MatrixModels, Dimensions) {
  EXPECT_EQ(sl4_matrix_model().size(), 15u);
  EXPECT_EQ(su22_matrix_model().size(), 15u);
  EXPECT_EQ(g2_matrix_model().size(), 14u);
}

TEST(Killing, CatalogsMatchMatrixModels) {
  const Signature sl4{9, 6, 0}, su22{8, 7, 0}, g2{8, 6, 0};
  EXPECT_EQ(killing_diagnostics(model_from_matrices(sl4_matrix_model())).signature, sl4);
  EXPECT_EQ(killing_diagnostics(model_from_matrices(su22_matrix_model())).signature, su22);
  EXPECT_EQ(killing_diagnostics(model_from_matrices(g2_matrix_model())).signature, g2);
  auto kA = killing_diagnostics(extract_structure_constants(attacking_catalog(), sample(51, 30)));
  auto kL = killing_diagnostics(extract_structure_constants(landing_catalog(), sample(52, 30)));
  auto kG = killing_diagnostics(extract_structure_constants(g2_catalog(), sample(53, 28)));
  EXPECT_EQ(kA.signature, sl4);
  EXPECT_EQ(kL.signature, su22);
  EXPECT_EQ(kG.signature, g2);
  EXPECT_TRUE(kA.nondegenerate && kL.nondegenerate && kG.nondegenerate);
  EXPECT_LT((kA.B - kA.B.transpose()).norm(), 1e-8 * kA.B.norm());
}
