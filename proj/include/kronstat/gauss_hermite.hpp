#pragma once

// Multivariate Gaussian density, its Kronecker derivatives and the vector
// Hermite polynomials (probabilists' normalization).

#include <cstddef>

#include <Eigen/Dense>

#include "kronstat/kron_tensor.hpp"

namespace kronstat {

/// Mean and covariance with the Cholesky factor C = L Lᵀ cached.
class GaussianParams {
 public:
  /// Throws ContractError on shape mismatch or an asymmetric covariance,
  /// NumericalError if the covariance is not positive definite.
  GaussianParams(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  static GaussianParams standard(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(mean_.size()); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }
  const Eigen::MatrixXd& chol() const { return chol_; }
  /// L^{-1}, used to whiten coordinates.
  const Eigen::MatrixXd& chol_inverse() const { return chol_inv_; }

  /// log |C|^{1/2} = Σ log L_ii.
  double log_sqrt_det() const { return log_sqrt_det_; }

  /// z = L^{-1}(x - μ).
  Eigen::VectorXd whiten(const Eigen::VectorXd& x) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd chol_;
  Eigen::MatrixXd chol_inv_;
  double log_sqrt_det_ = 0.0;
};

double gaussian_pdf(const Eigen::VectorXd& x, const GaussianParams& g);

/// Probabilists' Hermite polynomial He_n(x) by the three-term recurrence.
double hermite_scalar(std::size_t n, double x);

/// H_k(x; 0, I): entry (i_1..i_k) = Π_j He_{r_j}(x_j), r_j = multiplicity of j.
KronVector hermite_identity(const Eigen::VectorXd& x, std::size_t k);

/// H_k(x; 0, C) = L^{⊗k} H_k(L^{-1}x; 0, I). Requires a zero mean.
KronVector hermite_general(const Eigen::VectorXd& x, std::size_t k, const GaussianParams& g);

/// D_x^{⊗k} G(x; μ, C) = (-1)^k G(x) (L^{-T})^{⊗k} H_k(L^{-1}(x-μ); 0, I).
KronVector gaussian_derivative(const Eigen::VectorXd& x, std::size_t k, const GaussianParams& g);

}  // namespace kronstat
