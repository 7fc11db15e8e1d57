#pragma once

// Moment/cumulant vectors and the generalized Gram-Charlier coefficient algebra.
//
// Both conversions are driven by the same exponential recursion
//     out(k) = Σ_{p=0}^{k-1} C(k-1, p) · Sym(in(k-p) ⊗ out(p)),   out(0) = 1,
// which maps cumulants to moments and cumulant differences δ to the
// expansion coefficients α.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "kronstat/kron_tensor.hpp"

namespace kronstat {

/// Default truncation order and hard cap for moment/cumulant sequences.
inline constexpr std::size_t kDefaultMaxOrder = 6;
inline constexpr std::size_t kMaxOrderCap = 10;

struct MomentTag {
  static constexpr const char* name = "moments";
};
struct CumulantTag {
  static constexpr const char* name = "cumulants";
};
struct DeltaTag {
  static constexpr const char* name = "delta";
};
struct AlphaTag {
  static constexpr const char* name = "alpha";
};

/// Tensors of orders 0..K over a common dimension. Tag keeps moments,
/// cumulants, δ and α from being mixed up.
template <class Tag>
class TensorSequence {
 public:
  /// Zero tensors of orders 0..max_order (order 0 is [1] for moments and α).
  TensorSequence(std::size_t dim, std::size_t max_order);

  std::size_t dim() const { return dim_; }
  std::size_t max_order() const { return vectors_.size() - 1; }

  const KronVector& operator[](std::size_t k) const { return vectors_.at(k); }

  /// Replaces order k after shape checking. Order 0 is fixed for moments/α.
  void set(std::size_t k, KronVector v);

  const std::vector<KronVector>& vectors() const { return vectors_; }

 private:
  std::size_t dim_;
  std::vector<KronVector> vectors_;
};

using MomentSet = TensorSequence<MomentTag>;
using CumulantSet = TensorSequence<CumulantTag>;
using CumulantDelta = TensorSequence<DeltaTag>;
using ExpansionCoefficients = TensorSequence<AlphaTag>;

/// Called with a message when ingested data needed noticeable symmetrization.
using WarningSink = std::function<void(const std::string&)>;

/// Symmetrizes every order in place; reports orders whose residual exceeds 1e-8.
template <class Tag>
TensorSequence<Tag> symmetrized(const TensorSequence<Tag>& s, const WarningSink& warn = {});

MomentSet moments_from_cumulants(const CumulantSet& c);
CumulantSet cumulants_from_moments(const MomentSet& m);

CumulantDelta cumulant_delta(const CumulantSet& c, const CumulantSet& c_ref);
ExpansionCoefficients alpha_from_delta(const CumulantDelta& delta);
/// Inverse of alpha_from_delta.
CumulantDelta delta_from_alpha(const ExpansionCoefficients& alpha);

/// Cumulants of N(mean, cov) up to max_order: c(1)=mean, c(2)=Vec cov, rest 0.
CumulantSet gaussian_cumulants(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                               std::size_t max_order);

/// Reshapes an order-2 tensor to a d×d matrix (row i holds entries (i, ·)).
Eigen::MatrixXd as_matrix(const KronVector& v);
KronVector vec(const Eigen::MatrixXd& m);

/// Binomial coefficient as a double (exact for the small arguments used here).
double binomial(std::size_t n, std::size_t k);
double factorial(std::size_t n);

}  // namespace kronstat
