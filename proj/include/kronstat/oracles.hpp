#pragma once

// Reference computations used by the validation suite and the tests.
//
// Each routine here takes a different route from the library code it is
// compared against (set-partition enumeration, power-series composition,
// finite differences, closed forms) and does not call the routines under test.

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace kronstat::oracle {

/// Coefficients of m(k) in terms of cumulant products, by enumerating all set
/// partitions of {1..k}. Keys are block sizes in decreasing order.
std::map<std::vector<std::size_t>, long> set_partition_coefficients(std::size_t k);

/// Univariate m_k = Σ over set partitions of Π c_{|B|}, k = 0..K (c[0] unused).
std::vector<double> moments_by_partitions(const std::vector<double>& c);

/// Univariate moments as k!·[t^k] exp(Σ c_j t^j / j!), by power-series
/// exponentiation e_n = (1/n) Σ_{j=1}^{n} j g_j e_{n-j}.
std::vector<double> moments_by_power_series(const std::vector<double>& c);

/// Univariate c_k = m_k - Σ_{p=1}^{k-1} C(k-1,p) c_{k-p} m_p.
std::vector<double> cumulants_by_scalar_recursion(const std::vector<double>& m);

/// Probabilists' Hermite polynomial from the explicit sum
/// He_n(x) = n! Σ_m (-1)^m x^{n-2m} / (m! (n-2m)! 2^m).
double hermite_explicit(std::size_t n, double x);

/// Flat tensor of k-th partial derivatives D^{⊗k} f(x) (row-major multi-index),
/// by nested 4th-order central differences with step h_k = ε^{1/(k+4)}·max(1,|x|∞).
std::vector<double> finite_difference_derivatives(const std::function<double(const Eigen::VectorXd&)>& f,
                                                  const Eigen::VectorXd& x, std::size_t k);

/// M^{⊗k} v by direct summation over all index pairs.
std::vector<double> kron_matrix_apply(const Eigen::MatrixXd& m, const std::vector<double>& v, std::size_t k);

/// Multivariate normal density from the textbook formula (inverse and determinant).
double normal_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov);

/// exp(i μᵀλ - ½ λᵀCλ).
std::complex<double> normal_char_fn(const Eigen::VectorXd& lambda, const Eigen::VectorXd& mean,
                                    const Eigen::MatrixXd& cov);

/// Scalar Gram-Charlier A density of a standardized variable:
/// φ(z) Σ_{k=0}^{K} a_k He_k(z)/k! with a from exp(Σ_{j≥3} c_j t^j/j!).
double scalar_gca_density(double z, const std::vector<double>& standardized_cumulants, std::size_t max_order);

/// Density of the standardized Exponential(1) variable z = x - 1.
double standardized_exponential_pdf(double z);

}  // namespace kronstat::oracle
