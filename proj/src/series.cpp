#include "kronstat/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "kronstat/errors.hpp"

namespace kronstat {

namespace {

// (-1)^k / k!
double series_weight(std::size_t k) { return (k % 2 == 0 ? 1.0 : -1.0) / factorial(k); }

// i^k
std::complex<double> i_power(std::size_t k) {
  switch (k % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void require_point(const Eigen::VectorXd& x, std::size_t dim, const char* op) {
  if (static_cast<std::size_t>(x.size()) != dim) {
    throw ContractError(std::string(op) + ": point has dim " + std::to_string(x.size()) + ", expected " +
                        std::to_string(dim));
  }
}

// Σ_{k=1}^{K} ⟨t(k), (iλ)^{⊗k}⟩ / k!
template <class Tag>
std::complex<double> imaginary_power_series(const TensorSequence<Tag>& t, const Eigen::VectorXd& lambda,
                                            std::size_t first) {
  require_point(lambda, t.dim(), "characteristic function");
  std::complex<double> sum = 0.0;
  KronVector power = kron_power(lambda, 0);
  for (std::size_t k = 0; k <= t.max_order(); ++k) {
    if (k > 0) power = kron_product(power, kron_power(lambda, 1));
    if (k < first) continue;
    sum += i_power(k) * (t[k].dot(power) / factorial(k));
  }
  return sum;
}

CumulantDelta gca_delta(const CumulantSet& c, std::size_t max_order) {
  if (max_order > c.max_order()) {
    throw ContractError("gca: truncation order " + std::to_string(max_order) + " exceeds cumulant order " +
                        std::to_string(c.max_order()));
  }
  if (c.max_order() < 2) throw ContractError("gca: cumulants up to order 2 are required");
  CumulantDelta delta(c.dim(), max_order);
  for (std::size_t k = 3; k <= max_order; ++k) delta.set(k, c[k]);
  return delta;
}

GaussianParams gca_gaussian(const CumulantSet& c) {
  const auto d = static_cast<Eigen::Index>(c.dim());
  Eigen::VectorXd mean = Eigen::Map<const Eigen::VectorXd>(c[1].data().data(), d);
  return GaussianParams(std::move(mean), as_matrix(c[2]));
}

}  // namespace

ReferenceDensity ReferenceDensity::gaussian(GaussianParams params) {
  return ReferenceDensity(Kind::gaussian, {Component{1.0, std::move(params)}});
}

ReferenceDensity ReferenceDensity::mixture(std::vector<Component> components) {
  if (components.empty()) throw ContractError("mixture: no components");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight > 0.0)) throw ContractError("mixture: weights must be positive");
    if (c.params.dim() != components.front().params.dim()) throw ContractError("mixture: dimension mismatch");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ContractError("mixture: weights must sum to 1");
  return ReferenceDensity(Kind::gaussian_mixture, std::move(components));
}

double ReferenceDensity::pdf(const Eigen::VectorXd& x) const {
  double s = 0.0;
  for (const auto& c : components_) s += c.weight * gaussian_pdf(x, c.params);
  return s;
}

KronVector ReferenceDensity::derivative(const Eigen::VectorXd& x, std::size_t k) const {
  KronVector out = gaussian_derivative(x, k, components_.front().params);
  out *= components_.front().weight;
  for (std::size_t i = 1; i < components_.size(); ++i) {
    out += components_[i].weight * gaussian_derivative(x, k, components_[i].params);
  }
  return out;
}

std::complex<double> ReferenceDensity::char_fn(const Eigen::VectorXd& lambda) const {
  require_point(lambda, dim(), "reference char_fn");
  std::complex<double> s = 0.0;
  for (const auto& c : components_) {
    const double phase = c.params.mean().dot(lambda);
    const double damp = -0.5 * lambda.dot(c.params.cov() * lambda);
    s += c.weight * std::exp(std::complex<double>(damp, phase));
  }
  return s;
}

CumulantSet ReferenceDensity::cumulants(std::size_t max_order) const {
  if (kind_ == Kind::gaussian) {
    const auto& g = components_.front().params;
    return gaussian_cumulants(g.mean(), g.cov(), max_order);
  }
  MomentSet m(dim(), max_order);
  std::vector<KronVector> acc;
  for (std::size_t k = 0; k <= max_order; ++k) acc.emplace_back(dim(), k);
  for (const auto& c : components_) {
    const MomentSet mc = moments_from_cumulants(gaussian_cumulants(c.params.mean(), c.params.cov(), max_order));
    for (std::size_t k = 1; k <= max_order; ++k) acc[k] += c.weight * mc[k];
  }
  for (std::size_t k = 1; k <= max_order; ++k) m.set(k, symmetrize(acc[k]));
  return cumulants_from_moments(m);
}

KronVector reference_derivative(const ReferenceDensity& ref, const Eigen::VectorXd& x, std::size_t k) {
  return ref.derivative(x, k);
}

AffineMap AffineMap::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return AffineMap{Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Zero(d), 0.0};
}

AffineMap AffineMap::from(Eigen::MatrixXd A, Eigen::VectorXd b) {
  if (A.rows() != A.cols() || A.rows() != b.size()) throw ContractError("affine map: A must be d x d, b length d");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  double log_det = 0.0;
  const Eigen::MatrixXd& u = lu.matrixLU();
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    if (u(i, i) == 0.0) throw NumericalError("affine map: A is singular");
    log_det += std::log(std::abs(u(i, i)));
  }
  return AffineMap{std::move(A), std::move(b), log_det};
}

ExpansionModel::ExpansionModel(ExpansionCoefficients alpha, ReferenceDensity reference, AffineMap transform)
    : alpha_(std::move(alpha)), reference_(std::move(reference)), transform_(std::move(transform)) {
  if (reference_.dim() != alpha_.dim() || transform_.dim() != alpha_.dim()) {
    throw ContractError("expansion model: dimension mismatch between coefficients, reference and transform");
  }
}

ExpansionModel make_expansion(const CumulantDelta& delta, ReferenceDensity reference, AffineMap transform) {
  return ExpansionModel(alpha_from_delta(delta), std::move(reference), std::move(transform));
}

double ggc_density(const ExpansionModel& model, const Eigen::VectorXd& x) {
  require_point(x, model.dim(), "ggc_density");
  const Eigen::VectorXd w = model.transform().apply(x);
  double sum = model.reference().pdf(w);
  for (std::size_t k = 1; k <= model.max_order(); ++k) {
    const KronVector& a = model.alpha()[k];
    if (a.max_abs() == 0.0) continue;
    sum += series_weight(k) * a.dot(model.reference().derivative(w, k));
  }
  return sum * std::exp(model.transform().log_abs_det_A);
}

std::vector<double> ggc_density_many(const ExpansionModel& model, const Eigen::MatrixXd& points, unsigned workers) {
  const auto n = static_cast<std::size_t>(points.rows());
  std::vector<double> out(n);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, n / 64)));
  auto run = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) out[i] = ggc_density(model, points.row(static_cast<Eigen::Index>(i)).transpose());
  };
  if (workers <= 1) {
    run(0, n);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = std::min(n, w * chunk), hi = std::min(n, lo + chunk);
    pool.emplace_back([&, w, lo, hi] {
      try {
        run(lo, hi);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

ExpansionModel gca_model(const CumulantSet& cumulants, std::size_t max_order) {
  const CumulantDelta delta = gca_delta(cumulants, max_order);
  return make_expansion(delta, ReferenceDensity::gaussian(gca_gaussian(cumulants)), AffineMap::identity(cumulants.dim()));
}

double gca_density(const CumulantSet& cumulants, const Eigen::VectorXd& x, std::size_t max_order) {
  return ggc_density(gca_model(cumulants, max_order), x);
}

double gca_density_hermite(const CumulantSet& cumulants, const Eigen::VectorXd& x, std::size_t max_order,
                           HermiteForm form) {
  require_point(x, cumulants.dim(), "gca_density_hermite");
  const GaussianParams g = gca_gaussian(cumulants);
  const auto d = static_cast<Eigen::Index>(cumulants.dim());

  if (form == HermiteForm::covariance) {
    const ExpansionCoefficients alpha = alpha_from_delta(gca_delta(cumulants, max_order));
    const GaussianParams centered(Eigen::VectorXd::Zero(d), g.cov());
    const Eigen::MatrixXd cov_inv = g.chol_inverse().transpose() * g.chol_inverse();
    const Eigen::VectorXd y = x - g.mean();
    double bracket = 1.0;
    for (std::size_t k = 3; k <= max_order; ++k) {
      const KronVector h = apply_each_mode(hermite_general(y, k, centered), cov_inv);
      bracket += alpha[k].dot(h) / factorial(k);
    }
    return gaussian_pdf(x, g) * bracket;
  }

  // Standardized coordinates: cumulants map as c_z(k) = (L^{-1})^{⊗k} c(k).
  const Eigen::VectorXd z = g.whiten(x);
  CumulantDelta delta_z(cumulants.dim(), max_order);
  for (std::size_t k = 3; k <= max_order; ++k) delta_z.set(k, apply_each_mode(cumulants[k], g.chol_inverse()));
  const ExpansionCoefficients alpha_z = alpha_from_delta(delta_z);
  double bracket = 1.0;
  for (std::size_t k = 3; k <= max_order; ++k) bracket += alpha_z[k].dot(hermite_identity(z, k)) / factorial(k);
  const double phi = std::exp(-0.5 * z.squaredNorm() - 0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi));
  return phi * bracket * std::exp(-g.log_sqrt_det());
}

std::complex<double> char_fn_series(const MomentSet& m, const Eigen::VectorXd& lambda) {
  return imaginary_power_series(m, lambda, 0);
}

std::complex<double> char_fn_ggc(const CumulantDelta& delta, const CharFn& ref_cf, const Eigen::VectorXd& lambda) {
  return std::exp(imaginary_power_series(delta, lambda, 1)) * ref_cf(lambda);
}

std::complex<double> model_char_fn(const ExpansionModel& model, const Eigen::VectorXd& lambda) {
  require_point(lambda, model.dim(), "model_char_fn");
  const AffineMap& t = model.transform();
  // x' = A x + b  ⇒  φ_x(λ) = exp(-i λᵀA^{-1}b) φ_{x'}(A^{-T} λ)
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(t.A);
  const Eigen::VectorXd shift = lu.solve(t.b);
  const Eigen::VectorXd mu = t.A.transpose().partialPivLu().solve(lambda);
  const CumulantDelta delta = delta_from_alpha(model.alpha());
  const ReferenceDensity& ref = model.reference();
  const std::complex<double> working = char_fn_ggc(delta, [&ref](const Eigen::VectorXd& l) { return ref.char_fn(l); }, mu);
  return std::exp(std::complex<double>(0.0, -lambda.dot(shift))) * working;
}

double negative_mass_fraction(const ExpansionModel& model, const Eigen::MatrixXd& points) {
  const std::vector<double> f = ggc_density_many(model, points);
  double neg = 0.0, total = 0.0;
  for (double v : f) {
    total += std::abs(v);
    if (v < 0.0) neg -= v;
  }
  return total > 0.0 ? neg / total : 0.0;
}

}  // namespace kronstat
