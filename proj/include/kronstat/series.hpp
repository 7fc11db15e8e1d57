#pragma once

// Truncated Gram-Charlier A and generalized Gram-Charlier density expansions,
// and the matching characteristic functions.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kronstat/cumulants.hpp"
#include "kronstat/gauss_hermite.hpp"

namespace kronstat {

/// Reference density ψ for the generalized expansion: a Gaussian or a
/// finite Gaussian mixture, both with analytic derivatives.
class ReferenceDensity {
 public:
  enum class Kind { gaussian, gaussian_mixture };

  struct Component {
    double weight;
    GaussianParams params;
  };

  static ReferenceDensity gaussian(GaussianParams params);
  /// Weights must be positive and sum to 1 within 1e-12.
  static ReferenceDensity mixture(std::vector<Component> components);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return components_.front().params.dim(); }
  const std::vector<Component>& components() const { return components_; }

  double pdf(const Eigen::VectorXd& x) const;
  /// ψ^{(k)}(x) = D_x^{⊗k} ψ(x).
  KronVector derivative(const Eigen::VectorXd& x, std::size_t k) const;
  std::complex<double> char_fn(const Eigen::VectorXd& lambda) const;
  /// Cumulants of ψ up to max_order (mixtures go through their moments).
  CumulantSet cumulants(std::size_t max_order) const;

 private:
  ReferenceDensity(Kind kind, std::vector<Component> components)
      : kind_(kind), components_(std::move(components)) {}

  Kind kind_;
  std::vector<Component> components_;
};

KronVector reference_derivative(const ReferenceDensity& ref, const Eigen::VectorXd& x, std::size_t k);

/// x' = A x + b maps raw coordinates to working coordinates.
struct AffineMap {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  double log_abs_det_A = 0.0;

  static AffineMap identity(std::size_t dim);
  /// Computes log|det A|; throws NumericalError when A is singular.
  static AffineMap from(Eigen::MatrixXd A, Eigen::VectorXd b);

  std::size_t dim() const { return static_cast<std::size_t>(b.size()); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return A * x + b; }
};

/// f(x) = |det A| Σ_{k=0}^{K} (-1)^k/k! ⟨α(k), ψ^{(k)}(Ax + b)⟩.
class ExpansionModel {
 public:
  ExpansionModel(ExpansionCoefficients alpha, ReferenceDensity reference, AffineMap transform);

  std::size_t dim() const { return alpha_.dim(); }
  std::size_t max_order() const { return alpha_.max_order(); }
  const ExpansionCoefficients& alpha() const { return alpha_; }
  const ReferenceDensity& reference() const { return reference_; }
  const AffineMap& transform() const { return transform_; }

 private:
  ExpansionCoefficients alpha_;
  ReferenceDensity reference_;
  AffineMap transform_;
};

/// Builds a model from cumulant differences against the given reference.
ExpansionModel make_expansion(const CumulantDelta& delta, ReferenceDensity reference,
                              AffineMap transform);

/// Truncated generalized Gram-Charlier density; may be negative.
double ggc_density(const ExpansionModel& model, const Eigen::VectorXd& x);

/// Evaluates ggc_density at each row of `points` (n × d). Rows are split
/// across `workers` threads; the result does not depend on the split.
std::vector<double> ggc_density_many(const ExpansionModel& model, const Eigen::MatrixXd& points,
                                     unsigned workers = 0);

/// Gram-Charlier A: Gaussian reference N(c(1), c(2)), δ(k) = c(k) for k ≥ 3.
double gca_density(const CumulantSet& cumulants, const Eigen::VectorXd& x, std::size_t max_order);

/// The GCA model used by gca_density, truncated at max_order.
ExpansionModel gca_model(const CumulantSet& cumulants, std::size_t max_order);

/// Independent Hermite-polynomial evaluation routes of the GCA series.
enum class HermiteForm {
  /// G(x) Σ α(k)'(C^{-1})^{⊗k} H_k(x-μ; 0, C)/k!
  covariance,
  /// |L|^{-1} φ(z) Σ α_z(k)' H_k(z; 0, I)/k! with z = L^{-1}(x-μ)
  standardized,
};
double gca_density_hermite(const CumulantSet& cumulants, const Eigen::VectorXd& x, std::size_t max_order,
                           HermiteForm form);

/// Σ_k ⟨m(k), (iλ)^{⊗k}⟩ / k!.
std::complex<double> char_fn_series(const MomentSet& m, const Eigen::VectorXd& lambda);

using CharFn = std::function<std::complex<double>(const Eigen::VectorXd&)>;

/// exp(Σ_k ⟨δ(k), (iλ)^{⊗k}⟩ / k!) · ref_cf(λ).
std::complex<double> char_fn_ggc(const CumulantDelta& delta, const CharFn& ref_cf,
                                 const Eigen::VectorXd& lambda);

/// Characteristic function of the model in raw coordinates, in the
/// exponential (cumulant-difference) form.
std::complex<double> model_char_fn(const ExpansionModel& model, const Eigen::VectorXd& lambda);

/// Fraction of absolute density mass on a grid that is negative:
/// Σ max(-f, 0) / Σ |f| over the supplied points.
double negative_mass_fraction(const ExpansionModel& model, const Eigen::MatrixXd& points);

}  // namespace kronstat
