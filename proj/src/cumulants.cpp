#include "kronstat/cumulants.hpp"

#include <cmath>
#include <cstdio>
#include <type_traits>

#include "kronstat/errors.hpp"

namespace kronstat {

namespace {

template <class Tag>
constexpr bool has_unit_order_zero() {
  return std::is_same_v<Tag, MomentTag> || std::is_same_v<Tag, AlphaTag>;
}

template <class Tag>
void require_order_cap(const TensorSequence<Tag>& s) {
  if (s.max_order() > kMaxOrderCap) {
    throw ContractError(std::string(Tag::name) + ": max order " + std::to_string(s.max_order()) +
                        " exceeds cap " + std::to_string(kMaxOrderCap));
  }
}

// out(k) = Σ_{p=0}^{k-1} C(k-1,p) Sym(in(k-p) ⊗ out(p)), out(0) = 1.
template <class OutTag, class InTag>
TensorSequence<OutTag> exponential_recursion(const TensorSequence<InTag>& in) {
  require_order_cap(in);
  const std::size_t d = in.dim();
  const std::size_t K = in.max_order();
  TensorSequence<OutTag> out(d, K);
  for (std::size_t k = 1; k <= K; ++k) {
    KronVector acc(d, k);
    for (std::size_t p = 0; p < k; ++p) {
      acc += binomial(k - 1, p) * kron_product(in[k - p], out[p]);
    }
    out.set(k, symmetrize(acc));
  }
  return out;
}

// in(k) = out(k) - Σ_{p=1}^{k-1} C(k-1,p) Sym(in(k-p) ⊗ out(p)).
template <class InTag, class OutTag>
TensorSequence<InTag> logarithmic_recursion(const TensorSequence<OutTag>& out) {
  require_order_cap(out);
  const std::size_t d = out.dim();
  const std::size_t K = out.max_order();
  TensorSequence<InTag> in(d, K);
  for (std::size_t k = 1; k <= K; ++k) {
    KronVector acc(d, k);
    for (std::size_t p = 1; p < k; ++p) {
      acc += binomial(k - 1, p) * kron_product(in[k - p], out[p]);
    }
    in.set(k, symmetrize(out[k] - acc));
  }
  return in;
}

template <class A, class B>
void require_same_shape(const TensorSequence<A>& a, const TensorSequence<B>& b, const char* op) {
  if (a.dim() != b.dim() || a.max_order() != b.max_order()) {
    throw ContractError(std::string(op) + ": shape mismatch (dim " + std::to_string(a.dim()) + ", K " +
                        std::to_string(a.max_order()) + ") vs (dim " + std::to_string(b.dim()) + ", K " +
                        std::to_string(b.max_order()) + ")");
  }
}

}  // namespace

template <class Tag>
TensorSequence<Tag>::TensorSequence(std::size_t dim, std::size_t max_order) : dim_(dim) {
  if (dim == 0) throw ContractError("sequence dimension must be positive");
  if (max_order > kMaxOrderCap) {
    throw ContractError(std::string(Tag::name) + ": max order " + std::to_string(max_order) +
                        " exceeds cap " + std::to_string(kMaxOrderCap));
  }
  vectors_.reserve(max_order + 1);
  for (std::size_t k = 0; k <= max_order; ++k) vectors_.emplace_back(dim, k);
  if constexpr (has_unit_order_zero<Tag>()) vectors_[0][0] = 1.0;
}

template <class Tag>
void TensorSequence<Tag>::set(std::size_t k, KronVector v) {
  if (k > max_order()) throw ContractError("order " + std::to_string(k) + " beyond max order");
  if (v.order() != k || (k > 0 && v.dim() != dim_)) {
    throw ContractError(std::string(Tag::name) + ": tensor shape mismatch at order " + std::to_string(k));
  }
  if constexpr (has_unit_order_zero<Tag>()) {
    if (k == 0 && v[0] != 1.0) throw ContractError(std::string(Tag::name) + ": order-0 entry must be 1");
  }
  if (k == 0) v = KronVector(dim_, 0, {v[0]});
  vectors_[k] = std::move(v);
}

template <class Tag>
TensorSequence<Tag> symmetrized(const TensorSequence<Tag>& s, const WarningSink& warn) {
  TensorSequence<Tag> out(s.dim(), s.max_order());
  for (std::size_t k = 0; k <= s.max_order(); ++k) {
    const double r = symmetry_residual(s[k]);
    if (r > 1e-8 && warn) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s order %zu is not symmetric (relative residual %.3g); symmetrized",
                    Tag::name, k, r);
      warn(buf);
    }
    out.set(k, k < 2 ? s[k] : symmetrize(s[k]));
  }
  return out;
}

template class TensorSequence<MomentTag>;
template class TensorSequence<CumulantTag>;
template class TensorSequence<DeltaTag>;
template class TensorSequence<AlphaTag>;
template MomentSet symmetrized(const MomentSet&, const WarningSink&);
template CumulantSet symmetrized(const CumulantSet&, const WarningSink&);
template CumulantDelta symmetrized(const CumulantDelta&, const WarningSink&);
template ExpansionCoefficients symmetrized(const ExpansionCoefficients&, const WarningSink&);

MomentSet moments_from_cumulants(const CumulantSet& c) {
  return exponential_recursion<MomentTag>(c);
}

CumulantSet cumulants_from_moments(const MomentSet& m) {
  if (m[0][0] != 1.0) throw ContractError("cumulants_from_moments: m(0) must be 1");
  return logarithmic_recursion<CumulantTag>(m);
}

CumulantDelta cumulant_delta(const CumulantSet& c, const CumulantSet& c_ref) {
  require_same_shape(c, c_ref, "cumulant_delta");
  CumulantDelta delta(c.dim(), c.max_order());
  for (std::size_t k = 1; k <= c.max_order(); ++k) delta.set(k, c[k] - c_ref[k]);
  return delta;
}

ExpansionCoefficients alpha_from_delta(const CumulantDelta& delta) {
  return exponential_recursion<AlphaTag>(delta);
}

CumulantDelta delta_from_alpha(const ExpansionCoefficients& alpha) {
  return logarithmic_recursion<DeltaTag>(alpha);
}

CumulantSet gaussian_cumulants(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                               std::size_t max_order) {
  const auto d = static_cast<std::size_t>(mean.size());
  if (cov.rows() != mean.size() || cov.cols() != mean.size()) {
    throw ContractError("gaussian_cumulants: covariance must be d x d");
  }
  CumulantSet c(d, max_order);
  if (max_order >= 1) c.set(1, kron_power(mean, 1));
  if (max_order >= 2) c.set(2, vec(cov));
  return c;
}

Eigen::MatrixXd as_matrix(const KronVector& v) {
  if (v.order() != 2) throw ContractError("as_matrix: order-2 tensor required");
  const auto d = static_cast<Eigen::Index>(v.dim());
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = v[static_cast<std::size_t>(i * d + j)];
  return m;
}

KronVector vec(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ContractError("vec: square matrix required");
  const auto d = static_cast<std::size_t>(m.rows());
  std::vector<double> data(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      data[i * d + j] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return KronVector(d, 2, std::move(data));
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

double factorial(std::size_t n) {
  double r = 1.0;
  for (std::size_t i = 2; i <= n; ++i) r *= static_cast<double>(i);
  return r;
}

}  // namespace kronstat
