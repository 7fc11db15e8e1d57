#include "kronstat/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace kronstat::oracle {

namespace {

double choose(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

double fact(std::size_t n) {
  double r = 1.0;
  for (std::size_t i = 2; i <= n; ++i) r *= static_cast<double>(i);
  return r;
}

// Restricted growth strings enumerate each set partition exactly once.
template <class Visit>
void for_each_partition(std::size_t k, Visit&& visit) {
  if (k == 0) {
    visit(std::vector<std::size_t>{});
    return;
  }
  std::vector<std::size_t> label(k, 0);
  auto rec = [&](auto&& self, std::size_t pos, std::size_t blocks) -> void {
    if (pos == k) {
      std::vector<std::size_t> sizes(blocks, 0);
      for (auto l : label) ++sizes[l];
      std::sort(sizes.rbegin(), sizes.rend());
      visit(sizes);
      return;
    }
    for (std::size_t b = 0; b <= blocks; ++b) {
      label[pos] = b;
      self(self, pos + 1, std::max(blocks, b + 1));
    }
  };
  label[0] = 0;
  rec(rec, 1, 1);
}

constexpr double kOffsets[4] = {-2.0, -1.0, 1.0, 2.0};
constexpr double kWeights[4] = {1.0, -8.0, 8.0, -1.0};

}  // namespace

std::map<std::vector<std::size_t>, long> set_partition_coefficients(std::size_t k) {
  std::map<std::vector<std::size_t>, long> out;
  for_each_partition(k, [&](const std::vector<std::size_t>& sizes) { ++out[sizes]; });
  return out;
}

std::vector<double> moments_by_partitions(const std::vector<double>& c) {
  std::vector<double> m(c.size(), 0.0);
  if (m.empty()) return m;
  m[0] = 1.0;
  for (std::size_t k = 1; k < c.size(); ++k) {
    for (const auto& [sizes, count] : set_partition_coefficients(k)) {
      double p = static_cast<double>(count);
      for (auto s : sizes) p *= c[s];
      m[k] += p;
    }
  }
  return m;
}

std::vector<double> moments_by_power_series(const std::vector<double>& c) {
  const std::size_t K = c.size();
  if (K == 0) return {};
  // g_j = c_j / j!, e = exp(g), m_k = k! e_k
  std::vector<double> g(K, 0.0), e(K, 0.0), m(K, 0.0);
  for (std::size_t j = 1; j < K; ++j) g[j] = c[j] / fact(j);
  e[0] = 1.0;
  for (std::size_t n = 1; n < K; ++n) {
    double s = 0.0;
    for (std::size_t j = 1; j <= n; ++j) s += static_cast<double>(j) * g[j] * e[n - j];
    e[n] = s / static_cast<double>(n);
  }
  for (std::size_t k = 0; k < K; ++k) m[k] = fact(k) * e[k];
  return m;
}

std::vector<double> cumulants_by_scalar_recursion(const std::vector<double>& m) {
  std::vector<double> c(m.size(), 0.0);
  for (std::size_t k = 1; k < m.size(); ++k) {
    double s = m[k];
    for (std::size_t p = 1; p < k; ++p) s -= choose(k - 1, p) * c[k - p] * m[p];
    c[k] = s;
  }
  return c;
}

double hermite_explicit(std::size_t n, double x) {
  double s = 0.0;
  for (std::size_t j = 0; 2 * j <= n; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    s += sign * std::pow(x, static_cast<double>(n - 2 * j)) / (fact(j) * fact(n - 2 * j) * std::ldexp(1.0, static_cast<int>(j)));
  }
  return fact(n) * s;
}

std::vector<double> finite_difference_derivatives(const std::function<double(const Eigen::VectorXd&)>& f,
                                                  const Eigen::VectorXd& x, std::size_t k) {
  const auto d = static_cast<std::size_t>(x.size());
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  const double h = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / static_cast<double>(k + 4)) * scale;

  std::size_t total = 1;
  for (std::size_t j = 0; j < k; ++j) total *= d;
  std::vector<double> out(total, 0.0);
  std::vector<std::size_t> idx(k, 0);
  Eigen::VectorXd y = x;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t j = k; j-- > 0;) {
      idx[j] = rem % d;
      rem /= d;
    }
    // nested stencil over the k axes
    auto rec = [&](auto&& self, std::size_t level) -> double {
      if (level == k) return f(y);
      double s = 0.0;
      const auto axis = static_cast<Eigen::Index>(idx[level]);
      for (int t = 0; t < 4; ++t) {
        y(axis) += kOffsets[t] * h;
        s += kWeights[t] * self(self, level + 1);
        y(axis) -= kOffsets[t] * h;
      }
      return s / (12.0 * h);
    };
    y = x;
    out[flat] = rec(rec, 0);
  }
  return out;
}

std::vector<double> kron_matrix_apply(const Eigen::MatrixXd& m, const std::vector<double>& v, std::size_t k) {
  const auto d = static_cast<std::size_t>(m.rows());
  if (m.cols() != m.rows()) throw std::invalid_argument("kron_matrix_apply: square matrix required");
  std::size_t total = 1;
  for (std::size_t j = 0; j < k; ++j) total *= d;
  if (v.size() != total) throw std::invalid_argument("kron_matrix_apply: size mismatch");
  std::vector<double> out(total, 0.0);
  std::vector<std::size_t> ri(k), ci(k);
  for (std::size_t r = 0; r < total; ++r) {
    std::size_t rem = r;
    for (std::size_t j = k; j-- > 0;) {
      ri[j] = rem % d;
      rem /= d;
    }
    double s = 0.0;
    for (std::size_t c = 0; c < total; ++c) {
      std::size_t cr = c;
      double w = 1.0;
      for (std::size_t j = k; j-- > 0;) {
        w *= m(static_cast<Eigen::Index>(ri[j]), static_cast<Eigen::Index>(cr % d));
        cr /= d;
      }
      s += w * v[c];
    }
    out[r] = s;
  }
  return out;
}

double normal_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
  const Eigen::VectorXd r = x - mean;
  const double q = r.dot(cov.inverse() * r);
  const double norm = std::pow(2.0 * std::numbers::pi, static_cast<double>(x.size()) / 2.0) * std::sqrt(cov.determinant());
  return std::exp(-0.5 * q) / norm;
}

std::complex<double> normal_char_fn(const Eigen::VectorXd& lambda, const Eigen::VectorXd& mean,
                                    const Eigen::MatrixXd& cov) {
  return std::exp(std::complex<double>(-0.5 * lambda.dot(cov * lambda), mean.dot(lambda)));
}

double scalar_gca_density(double z, const std::vector<double>& standardized_cumulants, std::size_t max_order) {
  // a = k!·[t^k] exp(Σ_{j≥3} c_j t^j / j!)
  std::vector<double> c(max_order + 1, 0.0);
  for (std::size_t j = 3; j <= max_order && j < standardized_cumulants.size(); ++j) c[j] = standardized_cumulants[j];
  const auto a = moments_by_power_series(c);
  double s = 0.0;
  for (std::size_t k = 0; k <= max_order; ++k) s += a[k] * hermite_explicit(k, z) / fact(k);
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi) * s;
}

double standardized_exponential_pdf(double z) { return z < -1.0 ? 0.0 : std::exp(-(z + 1.0)); }

}  // namespace kronstat::oracle
