#include "kronstat/gauss_hermite.hpp"

#include <numbers>

#include "kronstat/cumulants.hpp"
#include "kronstat/errors.hpp"
#include "kronstat/oracles.hpp"
#include "kronstat/quadrature.hpp"
#include "test_support.hpp"

namespace kronstat {
namespace {

using testing::rel_error;

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

Eigen::VectorXd v1(double a) { return Eigen::VectorXd::Constant(1, a); }

GaussianParams gauss1(double mean, double var) { return GaussianParams(v1(mean), Eigen::MatrixXd::Constant(1, 1, var)); }

GaussianParams correlated2(Eigen::Vector2d mean = Eigen::Vector2d::Zero()) {
  Eigen::Matrix2d C;
  C << 1.4, -0.45, -0.45, 0.8;
  return GaussianParams(mean, C);
}

KronVector fd_tensor(const GaussianParams& g, const Eigen::VectorXd& x, std::size_t k) {
  auto f = [&](const Eigen::VectorXd& y) { return oracle::normal_density(y, g.mean(), g.cov()); };
  return KronVector(g.dim(), k, oracle::finite_difference_derivatives(f, x, k));
}

TEST(GaussianParams, Validation) {
  Eigen::Matrix2d asym;
  asym << 1.0, 0.5, 0.4, 1.0;
  EXPECT_THROW(GaussianParams(Eigen::Vector2d::Zero(), asym), ContractError);
  Eigen::Matrix2d indefinite;
  indefinite << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW(GaussianParams(Eigen::Vector2d::Zero(), indefinite), NumericalError);
  EXPECT_THROW(GaussianParams(Eigen::Vector3d::Zero(), Eigen::Matrix2d::Identity()), ContractError);
  const GaussianParams g = correlated2();
  EXPECT_LE((g.chol() * g.chol().transpose() - g.cov()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(std::exp(2.0 * g.log_sqrt_det()), g.cov().determinant(), 1e-14);
}

TEST(GaussianPdf, Examples) {
  EXPECT_NEAR(gaussian_pdf(Eigen::Vector2d::Zero(), GaussianParams::standard(2)), 0.159154943091895, 1e-15);
  EXPECT_NEAR(gaussian_pdf(v1(0.0), gauss1(0.0, 4.0)), 0.199471140200716, 1e-15);
  EXPECT_NEAR(gaussian_pdf(v1(1.0), gauss1(0.0, 1.0)), std::exp(-0.5) * kInvSqrt2Pi, 1e-16);
  EXPECT_THROW(gaussian_pdf(Eigen::Vector3d::Zero(), GaussianParams::standard(2)), ContractError);
}

TEST(GaussianPdf, MatchesTextbookFormula) {
  const GaussianParams g = correlated2(Eigen::Vector2d(0.3, -0.2));
  for (const Eigen::Vector2d x : {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.2, -0.7), Eigen::Vector2d(-2.0, 1.0)})
    EXPECT_NEAR(gaussian_pdf(x, g), oracle::normal_density(x, g.mean(), g.cov()), 1e-15);
}

TEST(HermiteScalar, MatchesExplicitSumAndRecurrence) {
  for (double x : {-2.5, -0.4, 0.0, 1.3, 3.0}) {
    for (std::size_t k = 0; k <= 10; ++k)
      EXPECT_NEAR(hermite_scalar(k, x), oracle::hermite_explicit(k, x),
                  1e-12 * std::max(1.0, std::abs(oracle::hermite_explicit(k, x))));
    for (std::size_t k = 1; k <= 8; ++k)
      EXPECT_NEAR(hermite_scalar(k + 1, x), x * hermite_scalar(k, x) - static_cast<double>(k) * hermite_scalar(k - 1, x),
                  1e-12 * std::max(1.0, std::abs(hermite_scalar(k + 1, x))));
  }
}

TEST(HermiteIdentity, Examples) {
  EXPECT_DOUBLE_EQ(hermite_identity(v1(2.0), 3)[0], 2.0);
  for (std::size_t d = 1; d <= 3; ++d) {
    const KronVector h = hermite_identity(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d)), 2);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) EXPECT_EQ(h[i * d + j], i == j ? -1.0 : 0.0);
  }
  const Eigen::Vector2d x(0.7, -1.9);
  const KronVector h1 = hermite_identity(x, 1);
  EXPECT_EQ(h1[0], x(0));
  EXPECT_EQ(h1[1], x(1));
  EXPECT_EQ(hermite_identity(x, 0).values(), (std::vector<double>{1.0}));
}

TEST(HermiteIdentity, RodriguesByFiniteDifferences) {
  const GaussianParams g = GaussianParams::standard(2);
  for (const Eigen::Vector2d x : {Eigen::Vector2d(0.4, -0.8), Eigen::Vector2d(1.1, 0.3)}) {
    const double G = gaussian_pdf(x, g);
    for (std::size_t k = 1; k <= 4; ++k) {
      KronVector want = fd_tensor(g, x, k);
      want *= (k % 2 == 0 ? 1.0 : -1.0) / G;
      EXPECT_LE(rel_error(hermite_identity(x, k), want), 1e-6) << k;
    }
  }
}

TEST(HermiteIdentity, ScalarRecurrenceEntrywise) {
  for (double x : {-1.7, 0.2, 2.4})
    for (std::size_t k = 1; k <= 7; ++k)
      EXPECT_NEAR(hermite_identity(v1(x), k + 1)[0],
                  x * hermite_identity(v1(x), k)[0] - static_cast<double>(k) * hermite_identity(v1(x), k - 1)[0],
                  1e-12 * std::max(1.0, std::abs(hermite_identity(v1(x), k + 1)[0])));
}

TEST(HermiteIdentity, Symmetric) {
  for (std::size_t k = 2; k <= 4; ++k) EXPECT_EQ(symmetry_residual(hermite_identity(Eigen::Vector3d(0.3, -1.0, 0.8), k)), 0.0);
}

TEST(HermiteGeneral, IdentityCovariance) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int t = 0; t < 5; ++t) {
    const Eigen::Vector2d x(n(rng), n(rng));
    for (std::size_t k = 0; k <= 4; ++k)
      EXPECT_LE(rel_error(hermite_general(x, k, GaussianParams::standard(2)), hermite_identity(x, k)), 1e-15);
  }
}

TEST(HermiteGeneral, UnivariateClosedForms) {
  const double s2 = 2.25, x = 0.9;
  EXPECT_NEAR(hermite_general(v1(x), 1, gauss1(0.0, s2))[0], x, 1e-15);
  EXPECT_NEAR(hermite_general(v1(x), 2, gauss1(0.0, s2))[0], x * x - s2, 1e-14);
  // Rodrigues with variance s2, by finite differences
  const GaussianParams g = gauss1(0.0, s2);
  for (std::size_t k = 1; k <= 3; ++k) {
    std::vector<double> fd = fd_tensor(g, v1(x), k).values();
    const double want = std::pow(-s2, static_cast<double>(k)) * fd[0] / gaussian_pdf(v1(x), g);
    EXPECT_NEAR(hermite_general(v1(x), k, g)[0], want, 1e-6 * std::max(1.0, std::abs(want)));
  }
}

TEST(HermiteGeneral, CholeskyTransportMatchesRodrigues) {
  const GaussianParams g = correlated2();
  for (const Eigen::Vector2d x : {Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(-1.2, 0.3)}) {
    const double G = gaussian_pdf(x, g);
    for (std::size_t k = 1; k <= 3; ++k) {
      std::vector<double> want = oracle::kron_matrix_apply(g.cov(), fd_tensor(g, x, k).values(), k);
      for (double& v : want) v *= (k % 2 == 0 ? 1.0 : -1.0) / G;
      EXPECT_LE(rel_error(hermite_general(x, k, g), KronVector(2, k, want)), 1e-6) << k;
    }
  }
}

TEST(HermiteGeneral, RequiresZeroMean) {
  EXPECT_THROW(hermite_general(Eigen::Vector2d::Zero(), 2, correlated2(Eigen::Vector2d(0.1, 0.0))), ContractError);
}

TEST(GaussianDerivative, Examples) {
  const GaussianParams g = correlated2(Eigen::Vector2d(0.2, 0.1));
  const Eigen::Vector2d x(0.5, -0.4);
  EXPECT_EQ(gaussian_derivative(x, 0, g).values(), (std::vector<double>{gaussian_pdf(x, g)}));
  const double x1 = 0.8;
  EXPECT_NEAR(gaussian_derivative(v1(x1), 1, gauss1(0, 1))[0], -x1 * gaussian_pdf(v1(x1), gauss1(0, 1)), 1e-16);
  const KronVector d2 = gaussian_derivative(Eigen::Vector2d::Zero(), 2, GaussianParams::standard(2));
  const double inv2pi = 1.0 / (2.0 * std::numbers::pi);
  EXPECT_NEAR(d2[0], -inv2pi, 1e-16);
  EXPECT_NEAR(d2[3], -inv2pi, 1e-16);
  EXPECT_EQ(d2[1], 0.0);
  EXPECT_EQ(d2[2], 0.0);
}

TEST(GaussianDerivative, MatchesFiniteDifferences) {
  const GaussianParams g = correlated2(Eigen::Vector2d(0.2, -0.1));
  for (const Eigen::Vector2d x : {Eigen::Vector2d(0.9, 0.4), Eigen::Vector2d(-0.7, -1.1)})
    for (std::size_t k = 1; k <= 4; ++k) EXPECT_LE(rel_error(gaussian_derivative(x, k, g), fd_tensor(g, x, k)), 1e-6) << k;
}

TEST(GaussianDerivative, RodriguesConsistency) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  const Eigen::Vector2d mu(0.3, -0.6);
  const GaussianParams g = correlated2(mu);
  const GaussianParams g0 = correlated2();
  for (int t = 0; t < 5; ++t) {
    const Eigen::Vector2d x = mu + Eigen::Vector2d(n(rng), n(rng));
    for (std::size_t k = 1; k <= 4; ++k) {
      KronVector lhs = apply_each_mode(gaussian_derivative(x, k, g), g.cov());
      lhs *= (k % 2 == 0 ? 1.0 : -1.0) / gaussian_pdf(x, g);
      EXPECT_LE(rel_error(lhs, hermite_general(x - mu, k, g0)), 1e-9);
    }
  }
}

TEST(Hermite, OrthogonalityUnderStandardNormal) {
  const AxisRule r = axis_rule(QuadratureRule::gauss_legendre, 300, -12.0, 12.0);
  for (std::size_t j = 0; j <= 5; ++j) {
    for (std::size_t k = 0; k <= 5; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        const double z = r.nodes[i];
        s += r.weights[i] * hermite_scalar(j, z) * hermite_scalar(k, z) * std::exp(-0.5 * z * z) * kInvSqrt2Pi;
      }
      EXPECT_NEAR(s, j == k ? factorial(k) : 0.0, 1e-8);
    }
  }
}

}  // namespace
}  // namespace kronstat
