#pragma once

// Quadrature evaluation of the Fourier-integral forms of the density, the
// Gaussian derivatives and the Hermite polynomials, for d ≤ 2.
//
// Every routine integrates on the requested grid and again with twice the
// points per axis. If the two disagree by more than 10× the grid tolerance
// an AccuracyError is thrown; otherwise the finer result is returned.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "kronstat/cumulants.hpp"
#include "kronstat/gauss_hermite.hpp"

namespace kronstat {

enum class QuadratureRule { trapezoid, gauss_legendre };

struct QuadratureGrid {
  std::size_t dim = 1;
  /// Integration runs over [-half_width, half_width]^dim.
  double half_width = 8.0;
  std::size_t points_per_axis = 256;
  QuadratureRule rule = QuadratureRule::gauss_legendre;
  /// Accuracy target, relative to max(1, |result|).
  double tolerance = 1e-9;

  /// Throws ContractError unless dim ∈ {1,2}, n ≥ 32 and L > 0;
  /// ResourceError if the refined grid exceeds the entry budget.
  void validate() const;
};

struct AxisRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// One-dimensional rule with n points on [lo, hi].
AxisRule axis_rule(QuadratureRule rule, std::size_t n, double lo, double hi);

/// λ-space grid for integrands damped by exp(-½ λᵀCλ):
/// half-width 8·max √diag(C^{-1}); 256 points per axis at d=1, 128 at d=2.
QuadratureGrid default_lambda_grid(const Eigen::MatrixXd& cov);

/// u-space grid for integrands damped by exp(-uᵀu): half-width 8/√2.
QuadratureGrid default_hermite_grid(std::size_t dim);

/// (2π)^{-d} ∫ exp(-½⟨c(2), λ^{⊗2}⟩) cos(xᵀλ + Σ_{j odd} (-1)^{(j+1)/2} ⟨c(j), λ^{⊗j}⟩/j!) dλ.
/// Nonzero even cumulants of order ≥ 4 are rejected (the integrand is not
/// damped in general); odd orders only shift the phase.
double pdf_from_cumulants_quadrature(const CumulantSet& c, const Eigen::VectorXd& x, const QuadratureGrid& grid);

/// The same integral over the half line using evenness of the integrand
/// (d = 1 only): π^{-1} ∫_0^L ... dλ.
double pdf_from_cumulants_quadrature_half(const CumulantSet& c, const Eigen::VectorXd& x,
                                          const QuadratureGrid& grid);

/// (2π)^{-d} ∫ λ^{⊗k} exp(-½λᵀCλ) cos((x-μ)ᵀλ + kπ/2) dλ, for k ≤ 4.
KronVector gaussian_derivative_quadrature(const Eigen::VectorXd& x, std::size_t k, const GaussianParams& g,
                                          const QuadratureGrid& grid);

/// 2^{k/2} π^{-d/2} exp(½xᵀx) ∫ u^{⊗k} exp(-uᵀu) cos(√2 xᵀu - kπ/2) du, for k ≤ 4.
KronVector hermite_integral_quadrature(const Eigen::VectorXd& x, std::size_t k, const QuadratureGrid& grid);

}  // namespace kronstat
