#include "kronstat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "kronstat/errors.hpp"

namespace kronstat {

namespace {

constexpr std::size_t kMaxQuadratureOrder = 4;

std::vector<double> legendre_nodes_unit(std::size_t n, std::vector<double>& weights) {
  std::vector<double> x(n);
  weights.assign(n, 0.0);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * static_cast<double>(j) - 1.0) * z * p2 - (static_cast<double>(j) - 1.0) * p3) /
             static_cast<double>(j);
      }
      pp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return x;
}

void require_supported_order(std::size_t k, const char* op) {
  if (k > kMaxQuadratureOrder) {
    throw ContractError(std::string(op) + ": order " + std::to_string(k) + " exceeds " +
                        std::to_string(kMaxQuadratureOrder));
  }
}

// Integrates a vector-valued integrand f(point, out) over the tensor grid.
template <class F>
std::vector<double> integrate_grid(const QuadratureGrid& grid, std::size_t n, double lo, double hi,
                                   std::size_t width, const F& f) {
  const AxisRule axis = axis_rule(grid.rule, n, lo, hi);
  std::vector<double> acc(width, 0.0), val(width);
  Eigen::VectorXd point(static_cast<Eigen::Index>(grid.dim));
  if (grid.dim == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      point(0) = axis.nodes[i];
      f(point, val);
      for (std::size_t e = 0; e < width; ++e) acc[e] += axis.weights[i] * val[e];
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      point(0) = axis.nodes[i];
      for (std::size_t j = 0; j < n; ++j) {
        point(1) = axis.nodes[j];
        f(point, val);
        const double w = axis.weights[i] * axis.weights[j];
        for (std::size_t e = 0; e < width; ++e) acc[e] += w * val[e];
      }
    }
  }
  return acc;
}

// Integrates at n and 2n points per axis and checks agreement.
template <class F>
std::vector<double> integrate_checked(const QuadratureGrid& grid, double lo, double hi, std::size_t width,
                                      const F& f, const char* op) {
  grid.validate();
  const std::vector<double> coarse = integrate_grid(grid, grid.points_per_axis, lo, hi, width, f);
  const std::vector<double> fine = integrate_grid(grid, 2 * grid.points_per_axis, lo, hi, width, f);
  double scale = 1.0, diff = 0.0;
  for (std::size_t e = 0; e < width; ++e) {
    scale = std::max(scale, std::abs(fine[e]));
    diff = std::max(diff, std::abs(fine[e] - coarse[e]));
  }
  if (diff > 10.0 * grid.tolerance * scale) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s: grid refinement changed the result by %.3g (limit %.3g); refine the grid",
                  op, diff, 10.0 * grid.tolerance * scale);
    throw AccuracyError(buf);
  }
  return fine;
}

// Phase xᵀλ + Σ_{j odd} (-1)^{(j+1)/2} ⟨c(j), λ^{⊗j}⟩ / j!
double cumulant_phase(const CumulantSet& c, const Eigen::VectorXd& x, const Eigen::VectorXd& lambda) {
  double phase = x.dot(lambda);
  KronVector power = kron_power(lambda, 1);
  const KronVector step = power;
  for (std::size_t j = 1; j <= c.max_order(); ++j) {
    if (j > 1) power = kron_product(power, step);
    if (j % 2 == 0) continue;
    const double sign = ((j + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    phase += sign * c[j].dot(power) / factorial(j);
  }
  return phase;
}

void require_damped(const CumulantSet& c, const Eigen::VectorXd& x, const char* op) {
  if (c.dim() > 2) throw ContractError(std::string(op) + ": only d <= 2 is supported");
  if (static_cast<std::size_t>(x.size()) != c.dim()) throw ContractError(std::string(op) + ": point dimension mismatch");
  if (c.max_order() < 2) throw ContractError(std::string(op) + ": cumulants up to order 2 are required");
  for (std::size_t k = 4; k <= c.max_order(); k += 2) {
    if (c[k].max_abs() != 0.0) {
      throw ContractError(std::string(op) + ": nonzero cumulant of even order " + std::to_string(k) +
                          " gives an undamped integrand (unsupported input)");
    }
  }
  // Throws NumericalError when c(2) is not positive definite.
  (void)GaussianParams(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(c.dim())), as_matrix(c[2]));
}

}  // namespace

void QuadratureGrid::validate() const {
  if (dim < 1 || dim > 2) throw ContractError("quadrature grid: dim must be 1 or 2");
  if (points_per_axis < 32) throw ContractError("quadrature grid: at least 32 points per axis are required");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw ContractError("quadrature grid: half-width must be positive");
  if (!(tolerance > 0.0)) throw ContractError("quadrature grid: tolerance must be positive");
  checked_entries(2 * points_per_axis, dim);
}

AxisRule axis_rule(QuadratureRule rule, std::size_t n, double lo, double hi) {
  if (n < 2) throw ContractError("axis_rule: at least 2 points are required");
  AxisRule r;
  if (rule == QuadratureRule::trapezoid) {
    const double h = (hi - lo) / static_cast<double>(n - 1);
    r.nodes.resize(n);
    r.weights.assign(n, h);
    for (std::size_t i = 0; i < n; ++i) r.nodes[i] = lo + h * static_cast<double>(i);
    r.weights.front() = r.weights.back() = 0.5 * h;
    return r;
  }
  r.nodes = legendre_nodes_unit(n, r.weights);
  const double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
  for (std::size_t i = 0; i < n; ++i) {
    r.nodes[i] = mid + half * r.nodes[i];
    r.weights[i] *= half;
  }
  return r;
}

QuadratureGrid default_lambda_grid(const Eigen::MatrixXd& cov) {
  QuadratureGrid g;
  g.dim = static_cast<std::size_t>(cov.rows());
  const GaussianParams params(Eigen::VectorXd::Zero(cov.rows()), cov);
  const Eigen::MatrixXd precision = params.chol_inverse().transpose() * params.chol_inverse();
  g.half_width = 8.0 * std::sqrt(precision.diagonal().maxCoeff());
  g.points_per_axis = g.dim == 1 ? 256 : 128;
  return g;
}

QuadratureGrid default_hermite_grid(std::size_t dim) {
  QuadratureGrid g;
  g.dim = dim;
  g.half_width = 8.0 / std::numbers::sqrt2;
  g.points_per_axis = dim == 1 ? 256 : 128;
  return g;
}

double pdf_from_cumulants_quadrature(const CumulantSet& c, const Eigen::VectorXd& x, const QuadratureGrid& grid) {
  require_damped(c, x, "pdf_from_cumulants_quadrature");
  if (grid.dim != c.dim()) throw ContractError("pdf_from_cumulants_quadrature: grid dimension mismatch");
  const KronVector& c2 = c[2];
  auto f = [&](const Eigen::VectorXd& lambda, std::vector<double>& out) {
    const double damp = -0.5 * c2.dot(kron_power(lambda, 2));
    out[0] = std::exp(damp) * std::cos(cumulant_phase(c, x, lambda));
  };
  const double L = grid.half_width;
  const auto v = integrate_checked(grid, -L, L, 1, f, "pdf_from_cumulants_quadrature");
  return v[0] / std::pow(2.0 * std::numbers::pi, static_cast<double>(c.dim()));
}

double pdf_from_cumulants_quadrature_half(const CumulantSet& c, const Eigen::VectorXd& x,
                                          const QuadratureGrid& grid) {
  require_damped(c, x, "pdf_from_cumulants_quadrature_half");
  if (c.dim() != 1 || grid.dim != 1) {
    throw ContractError("pdf_from_cumulants_quadrature_half: the half-domain form holds for d = 1 only");
  }
  const KronVector& c2 = c[2];
  auto f = [&](const Eigen::VectorXd& lambda, std::vector<double>& out) {
    const double damp = -0.5 * c2.dot(kron_power(lambda, 2));
    out[0] = std::exp(damp) * std::cos(cumulant_phase(c, x, lambda));
  };
  const auto v = integrate_checked(grid, 0.0, grid.half_width, 1, f, "pdf_from_cumulants_quadrature_half");
  return v[0] / std::numbers::pi;
}

KronVector gaussian_derivative_quadrature(const Eigen::VectorXd& x, std::size_t k, const GaussianParams& g,
                                          const QuadratureGrid& grid) {
  require_supported_order(k, "gaussian_derivative_quadrature");
  if (static_cast<std::size_t>(x.size()) != g.dim() || grid.dim != g.dim()) {
    throw ContractError("gaussian_derivative_quadrature: dimension mismatch");
  }
  const Eigen::VectorXd y = x - g.mean();
  const Eigen::MatrixXd& cov = g.cov();
  const double shift = static_cast<double>(k) * std::numbers::pi / 2.0;
  const std::size_t width = checked_entries(g.dim(), k);
  auto f = [&](const Eigen::VectorXd& lambda, std::vector<double>& out) {
    const double w = std::exp(-0.5 * lambda.dot(cov * lambda)) * std::cos(y.dot(lambda) + shift);
    const KronVector p = kron_power(lambda, k);
    for (std::size_t e = 0; e < width; ++e) out[e] = w * p[e];
  };
  const double L = grid.half_width;
  auto v = integrate_checked(grid, -L, L, width, f, "gaussian_derivative_quadrature");
  const double norm = std::pow(2.0 * std::numbers::pi, static_cast<double>(g.dim()));
  for (double& e : v) e /= norm;
  return KronVector(g.dim(), k, std::move(v));
}

KronVector hermite_integral_quadrature(const Eigen::VectorXd& x, std::size_t k, const QuadratureGrid& grid) {
  require_supported_order(k, "hermite_integral_quadrature");
  const auto d = static_cast<std::size_t>(x.size());
  if (grid.dim != d) throw ContractError("hermite_integral_quadrature: dimension mismatch");
  const double shift = static_cast<double>(k) * std::numbers::pi / 2.0;
  const std::size_t width = checked_entries(d, k);
  auto f = [&](const Eigen::VectorXd& u, std::vector<double>& out) {
    const double w = std::exp(-u.squaredNorm()) * std::cos(std::numbers::sqrt2 * x.dot(u) - shift);
    const KronVector p = kron_power(u, k);
    for (std::size_t e = 0; e < width; ++e) out[e] = w * p[e];
  };
  const double L = grid.half_width;
  auto v = integrate_checked(grid, -L, L, width, f, "hermite_integral_quadrature");
  const double pref = std::pow(2.0, 0.5 * static_cast<double>(k)) *
                      std::pow(std::numbers::pi, -0.5 * static_cast<double>(d)) * std::exp(0.5 * x.squaredNorm());
  for (double& e : v) e *= pref;
  return KronVector(d, k, std::move(v));
}

}  // namespace kronstat
