#include "kronstat/quadrature.hpp"

#include <numbers>

#include "kronstat/errors.hpp"
#include "test_support.hpp"

namespace kronstat {
namespace {

using testing::rel_error;
using testing::scalar1;

Eigen::VectorXd v1(double a) { return Eigen::VectorXd::Constant(1, a); }

CumulantSet univariate(const std::vector<double>& c) {
  CumulantSet s(1, c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) s.set(k, scalar1(k, c[k]));
  return s;
}

TEST(AxisRule, IntegratesPolynomialsExactly) {
  for (auto rule : {QuadratureRule::gauss_legendre, QuadratureRule::trapezoid}) {
    const AxisRule r = axis_rule(rule, 64, -1.0, 2.0);
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      s0 += r.weights[i];
      s1 += r.weights[i] * r.nodes[i];
    }
    EXPECT_NEAR(s0, 3.0, 1e-13);
    EXPECT_NEAR(s1, 1.5, 1e-13);
  }
  const AxisRule gl = axis_rule(QuadratureRule::gauss_legendre, 32, 0.0, 1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * std::pow(gl.nodes[i], 40.0);
  EXPECT_NEAR(s, 1.0 / 41.0, 1e-14);
}

TEST(QuadratureGrid, Validation) {
  QuadratureGrid g;
  g.points_per_axis = 16;
  EXPECT_THROW(g.validate(), ContractError);
  g = QuadratureGrid{};
  g.dim = 3;
  EXPECT_THROW(g.validate(), ContractError);
  g = QuadratureGrid{};
  g.half_width = 0.0;
  EXPECT_THROW(g.validate(), ContractError);
  const std::size_t saved = entry_budget();
  set_entry_budget(1000);
  g = QuadratureGrid{};
  g.dim = 2;
  g.points_per_axis = 64;
  EXPECT_THROW(g.validate(), ResourceError);
  set_entry_budget(saved);
}

TEST(QuadratureGrid, Defaults) {
  const QuadratureGrid g1 = default_lambda_grid(Eigen::MatrixXd::Constant(1, 1, 4.0));
  EXPECT_EQ(g1.points_per_axis, 256u);
  EXPECT_DOUBLE_EQ(g1.half_width, 8.0 * 0.5);
  const QuadratureGrid g2 = default_lambda_grid(Eigen::Matrix2d::Identity());
  EXPECT_EQ(g2.points_per_axis, 128u);
  EXPECT_EQ(default_hermite_grid(2).dim, 2u);
}

TEST(PdfFromCumulants, StandardNormalAtOrigin) {
  const CumulantSet c = univariate({0, 0, 1});
  EXPECT_NEAR(pdf_from_cumulants_quadrature(c, v1(0.0), default_lambda_grid(Eigen::MatrixXd::Identity(1, 1))),
              1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-6);
}

TEST(PdfFromCumulants, ShiftedBivariateAtMean) {
  const CumulantSet c = gaussian_cumulants(Eigen::Vector2d(1.0, -1.0), Eigen::Matrix2d::Identity(), 2);
  EXPECT_NEAR(pdf_from_cumulants_quadrature(c, Eigen::Vector2d(1.0, -1.0), default_lambda_grid(Eigen::Matrix2d::Identity())),
              1.0 / (2.0 * std::numbers::pi), 1e-6);
}

TEST(PdfFromCumulants, ShrinkingVarianceApproachesDeltaAwayFromMean) {
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.5, 0.25, 0.1, 0.05}) {
    const CumulantSet c = univariate({0, 0, eps});
    const double v = pdf_from_cumulants_quadrature(c, v1(1.0), default_lambda_grid(Eigen::MatrixXd::Constant(1, 1, eps)));
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(PdfFromCumulants, RejectsHigherEvenCumulants) {
  const CumulantSet c = univariate({0, 0, 1, 0.1, 0.2});
  EXPECT_THROW(pdf_from_cumulants_quadrature(c, v1(0.0), QuadratureGrid{}), ContractError);
}

TEST(PdfFromCumulants, RejectsNonPositiveDefiniteVariance) {
  const CumulantSet c = univariate({0, 0, -1});
  EXPECT_THROW(pdf_from_cumulants_quadrature(c, v1(0.0), QuadratureGrid{}), NumericalError);
}

TEST(PdfFromCumulants, CoarseGridIsAccuracyError) {
  const CumulantSet c = univariate({0, 0, 1});
  QuadratureGrid g;
  g.points_per_axis = 32;
  g.half_width = 60.0;
  g.tolerance = 1e-12;
  EXPECT_THROW(pdf_from_cumulants_quadrature(c, v1(3.0), g), AccuracyError);
}

TEST(PdfFromCumulants, HalfDomainMatchesFullDomain) {
  const CumulantSet c = univariate({0, 0.3, 1.4});
  const QuadratureGrid g = default_lambda_grid(Eigen::MatrixXd::Constant(1, 1, 1.4));
  for (double x : {-1.0, 0.3, 2.0})
    EXPECT_NEAR(pdf_from_cumulants_quadrature_half(c, v1(x), g), pdf_from_cumulants_quadrature(c, v1(x), g), 1e-8);
  const CumulantSet c2 = gaussian_cumulants(Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity(), 2);
  EXPECT_THROW(pdf_from_cumulants_quadrature_half(c2, Eigen::Vector2d::Zero(), default_lambda_grid(Eigen::Matrix2d::Identity())),
               ContractError);
}

TEST(GaussianDerivativeQuadrature, Examples) {
  const GaussianParams s1 = GaussianParams::standard(1);
  const QuadratureGrid g1 = default_lambda_grid(Eigen::MatrixXd::Identity(1, 1));
  EXPECT_NEAR(gaussian_derivative_quadrature(v1(0.4), 0, s1, g1)[0], gaussian_pdf(v1(0.4), s1), 1e-6);
  EXPECT_NEAR(gaussian_derivative_quadrature(v1(1.0), 1, s1, g1)[0], -gaussian_pdf(v1(1.0), s1), 1e-6);
  const KronVector d2 = gaussian_derivative_quadrature(Eigen::Vector2d::Zero(), 2, GaussianParams::standard(2),
                                                       default_lambda_grid(Eigen::Matrix2d::Identity()));
  const double inv2pi = 1.0 / (2.0 * std::numbers::pi);
  EXPECT_NEAR(d2[0], -inv2pi, 1e-7);
  EXPECT_NEAR(d2[1], 0.0, 1e-7);
  EXPECT_NEAR(d2[3], -inv2pi, 1e-7);
}

TEST(GaussianDerivativeQuadrature, MatchesClosedForm) {
  Eigen::Matrix2d C;
  C << 1.2, 0.3, 0.3, 0.7;
  const GaussianParams g(Eigen::Vector2d(0.1, -0.2), C);
  const Eigen::Vector2d x(0.6, 0.4);
  for (std::size_t k = 0; k <= 4; ++k)
    EXPECT_LE(rel_error(gaussian_derivative_quadrature(x, k, g, default_lambda_grid(C)), gaussian_derivative(x, k, g)), 1e-5)
        << k;
  EXPECT_THROW(gaussian_derivative_quadrature(x, 5, g, default_lambda_grid(C)), ContractError);
}

TEST(HermiteIntegral, Examples) {
  EXPECT_NEAR(hermite_integral_quadrature(v1(0.0), 0, default_hermite_grid(1))[0], 1.0, 1e-9);
  EXPECT_NEAR(hermite_integral_quadrature(v1(2.0), 3, default_hermite_grid(1))[0], 2.0, 1e-8);
  const Eigen::Vector2d ab(0.7, -1.2);
  const KronVector h = hermite_integral_quadrature(ab, 1, default_hermite_grid(2));
  EXPECT_NEAR(h[0], 0.7, 1e-8);
  EXPECT_NEAR(h[1], -1.2, 1e-8);
}

TEST(HermiteIntegral, MatchesClosedForm) {
  for (const Eigen::Vector2d x : {Eigen::Vector2d(0.2, 1.0), Eigen::Vector2d(-1.4, 0.5)})
    for (std::size_t k = 0; k <= 4; ++k)
      EXPECT_LE(rel_error(hermite_integral_quadrature(x, k, default_hermite_grid(2)), hermite_identity(x, k)), 1e-5);
}

}  // namespace
}  // namespace kronstat
