#include "kronstat/gauss_hermite.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "kronstat/errors.hpp"

namespace kronstat {

namespace {

void require_dim(const Eigen::VectorXd& x, const GaussianParams& g, const char* op) {
  if (static_cast<std::size_t>(x.size()) != g.dim()) {
    throw ContractError(std::string(op) + ": point has dim " + std::to_string(x.size()) +
                        ", Gaussian has dim " + std::to_string(g.dim()));
  }
}

}  // namespace

GaussianParams::GaussianParams(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  const Eigen::Index d = mean_.size();
  if (d == 0) throw ContractError("Gaussian: empty mean");
  if (cov_.rows() != d || cov_.cols() != d) throw ContractError("Gaussian: covariance must be d x d");
  if (!mean_.allFinite() || !cov_.allFinite()) throw ContractError("Gaussian: non-finite parameters");
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ContractError("Gaussian: covariance is not symmetric");
  }
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
  Eigen::LLT<Eigen::MatrixXd> llt(cov_);
  if (llt.info() != Eigen::Success) throw NumericalError("Gaussian: covariance is not positive definite");
  chol_ = llt.matrixL();
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!(chol_(i, i) > 0.0)) throw NumericalError("Gaussian: covariance is not positive definite");
    log_sqrt_det_ += std::log(chol_(i, i));
  }
  chol_inv_ = chol_.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(d, d));
}

GaussianParams GaussianParams::standard(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return GaussianParams(Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Identity(d, d));
}

Eigen::VectorXd GaussianParams::whiten(const Eigen::VectorXd& x) const {
  return chol_.triangularView<Eigen::Lower>().solve(x - mean_);
}

double gaussian_pdf(const Eigen::VectorXd& x, const GaussianParams& g) {
  require_dim(x, g, "gaussian_pdf");
  const Eigen::VectorXd z = g.whiten(x);
  const double d = static_cast<double>(g.dim());
  return std::exp(-0.5 * z.squaredNorm() - g.log_sqrt_det() - 0.5 * d * std::log(2.0 * std::numbers::pi));
}

double hermite_scalar(std::size_t n, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (std::size_t j = 1; j < n; ++j) {
    const double next = x * cur - static_cast<double>(j) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

KronVector hermite_identity(const Eigen::VectorXd& x, std::size_t k) {
  const auto d = static_cast<std::size_t>(x.size());
  if (d == 0) throw ContractError("hermite_identity: empty point");
  // table[j][r] = He_r(x_j)
  std::vector<std::vector<double>> table(d, std::vector<double>(k + 1));
  for (std::size_t j = 0; j < d; ++j) {
    const double xj = x(static_cast<Eigen::Index>(j));
    table[j][0] = 1.0;
    if (k >= 1) table[j][1] = xj;
    for (std::size_t r = 1; r < k; ++r) table[j][r + 1] = xj * table[j][r] - static_cast<double>(r) * table[j][r - 1];
  }

  KronVector out(d, k);
  std::vector<std::size_t> idx(k, 0), mult(d);
  for (std::size_t pos = 0; pos < out.size(); ++pos) {
    std::fill(mult.begin(), mult.end(), 0);
    for (std::size_t i : idx) ++mult[i];
    double v = 1.0;
    for (std::size_t j = 0; j < d; ++j) v *= table[j][mult[j]];
    out[pos] = v;
    for (std::size_t j = k; j-- > 0;) {
      if (++idx[j] < d) break;
      idx[j] = 0;
    }
  }
  return out;
}

KronVector hermite_general(const Eigen::VectorXd& x, std::size_t k, const GaussianParams& g) {
  require_dim(x, g, "hermite_general");
  if (g.mean().cwiseAbs().maxCoeff() != 0.0) throw ContractError("hermite_general: Gaussian mean must be zero");
  const Eigen::VectorXd z = g.chol_inverse() * x;
  return apply_each_mode(hermite_identity(z, k), g.chol());
}

KronVector gaussian_derivative(const Eigen::VectorXd& x, std::size_t k, const GaussianParams& g) {
  require_dim(x, g, "gaussian_derivative");
  const Eigen::VectorXd z = g.whiten(x);
  KronVector h = apply_each_mode(hermite_identity(z, k), g.chol_inverse().transpose());
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  h *= sign * gaussian_pdf(x, g);
  return h;
}

}  // namespace kronstat
