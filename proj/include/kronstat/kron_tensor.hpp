#pragma once

// Flat Kronecker-vector tensors.
//
// An order-k tensor over dimension d is stored as a flat array of d^k reals.
// The multi-index (i_1, ..., i_k) lives at position
//     p = i_1 d^{k-1} + i_2 d^{k-2} + ... + i_k,
// i.e. the left Kronecker factor varies slowest. This matches the block
// structure of a ⊗ b and is the layout used by every file format.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace kronstat {

/// Default cap on the number of entries any single tensor may hold.
inline constexpr std::size_t kDefaultEntryBudget = 10'000'000;

/// Largest order accepted by symmetrization (and hence by the conversions).
inline constexpr std::size_t kMaxSymmetrizeOrder = 10;

/// Current entry budget. Initialized from the KRON_BUDGET environment variable
/// when set, else kDefaultEntryBudget.
std::size_t entry_budget();
void set_entry_budget(std::size_t entries);

/// d^k, throwing ResourceError when it exceeds the entry budget.
std::size_t checked_entries(std::size_t dim, std::size_t order);

struct MultiIndex {
  std::size_t dim = 1;
  std::vector<std::size_t> indices;

  std::size_t order() const { return indices.size(); }
};

/// Flat position of a multi-index. Throws ContractError if an index is >= dim.
std::size_t encode(const MultiIndex& idx);

/// Inverse of encode for a tensor of the given dim and order.
MultiIndex decode(std::size_t dim, std::size_t order, std::size_t pos);

class KronVector {
 public:
  KronVector() : KronVector(1, 0) {}

  /// Zero tensor of shape (dim, order).
  KronVector(std::size_t dim, std::size_t order);

  /// Takes ownership of data; size must be dim^order and entries finite.
  KronVector(std::size_t dim, std::size_t order, std::vector<double> data);

  static KronVector scalar(double value);

  std::size_t dim() const { return dim_; }
  std::size_t order() const { return order_; }
  std::size_t size() const { return data_.size(); }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }
  const std::vector<double>& values() const { return data_; }

  double operator[](std::size_t pos) const { return data_[pos]; }
  double& operator[](std::size_t pos) { return data_[pos]; }

  double at(const MultiIndex& idx) const;

  /// Inner product ⟨this, other⟩ over matching shapes.
  double dot(const KronVector& other) const;

  /// Largest absolute entry (0 for an empty tensor).
  double max_abs() const;

  KronVector& operator+=(const KronVector& rhs);
  KronVector& operator-=(const KronVector& rhs);
  KronVector& operator*=(double s);

  friend KronVector operator+(KronVector lhs, const KronVector& rhs) { return lhs += rhs; }
  friend KronVector operator-(KronVector lhs, const KronVector& rhs) { return lhs -= rhs; }
  friend KronVector operator*(KronVector v, double s) { return v *= s; }
  friend KronVector operator*(double s, KronVector v) { return v *= s; }

  friend bool operator==(const KronVector&, const KronVector&) = default;

 private:
  void require_same_shape(const KronVector& rhs, const char* op) const;

  std::size_t dim_;
  std::size_t order_;
  std::vector<double> data_;
};

/// Permutation of the k tensor modes, stored 0-based.
///
/// Applying it to v gives out[(i_1..i_k)] = v[(i_{p(1)}..i_{p(k)})], so
/// a⊗b⊗c under (1,3,2) becomes a⊗c⊗b.
class ModePermutation {
 public:
  /// Throws ContractError unless perm is a bijection on {0..k-1}.
  explicit ModePermutation(std::vector<std::size_t> perm);

  static ModePermutation identity(std::size_t order);
  static ModePermutation from_one_based(std::vector<std::size_t> perm);
  /// Transposition of modes a and b (0-based).
  static ModePermutation swap(std::size_t order, std::size_t a, std::size_t b);

  std::size_t order() const { return perm_.size(); }
  std::size_t operator()(std::size_t j) const { return perm_[j]; }
  const std::vector<std::size_t>& mapping() const { return perm_; }

  /// (p ∘ q)(j) = p(q(j)); permute_modes(v, p∘q) = permute_modes(permute_modes(v, q), p).
  ModePermutation compose(const ModePermutation& q) const;

 private:
  std::vector<std::size_t> perm_;
};

KronVector kron_product(const KronVector& a, const KronVector& b);

/// x^{⊗k}; k = 0 gives [1].
KronVector kron_power(std::span<const double> x, std::size_t k);
KronVector kron_power(const Eigen::VectorXd& x, std::size_t k);

/// Average over all k! mode permutations. Idempotent and linear.
KronVector symmetrize(const KronVector& v);

KronVector permute_modes(const KronVector& v, const ModePermutation& p);

/// max |symmetrize(v) - v| / max(1, max |v|).
double symmetry_residual(const KronVector& v);

/// M^{⊗k} v, applied as k successive mode-wise products (M is d×d).
KronVector apply_each_mode(const KronVector& v, const Eigen::MatrixXd& m);

}  // namespace kronstat
