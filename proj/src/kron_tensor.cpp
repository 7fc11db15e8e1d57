#include "kronstat/kron_tensor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>

#include "kronstat/errors.hpp"

namespace kronstat {

namespace {

std::size_t initial_budget() {
  if (const char* env = std::getenv("KRON_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultEntryBudget;
}

std::atomic<std::size_t>& budget_slot() {
  static std::atomic<std::size_t> slot{initial_budget()};
  return slot;
}

void require_finite(std::span<const double> data, const char* where) {
  for (double v : data) {
    if (!std::isfinite(v)) throw ContractError(std::string(where) + ": non-finite tensor entry");
  }
}

// Advances a multi-index odometer (last index fastest). Returns false on wrap.
bool next_index(std::vector<std::size_t>& idx, std::size_t dim) {
  for (std::size_t j = idx.size(); j-- > 0;) {
    if (++idx[j] < dim) return true;
    idx[j] = 0;
  }
  return false;
}

}  // namespace

std::size_t entry_budget() { return budget_slot().load(std::memory_order_relaxed); }

void set_entry_budget(std::size_t entries) {
  if (entries == 0) throw ContractError("entry budget must be positive");
  budget_slot().store(entries, std::memory_order_relaxed);
}

std::size_t checked_entries(std::size_t dim, std::size_t order) {
  if (dim == 0) throw ContractError("tensor dimension must be positive");
  const std::size_t budget = entry_budget();
  std::size_t n = 1;
  for (std::size_t j = 0; j < order; ++j) {
    if (n > budget / dim) {
      throw ResourceError("tensor of dim " + std::to_string(dim) + " and order " + std::to_string(order) +
                          " exceeds entry budget " + std::to_string(budget));
    }
    n *= dim;
  }
  return n;
}

std::size_t encode(const MultiIndex& idx) {
  std::size_t pos = 0;
  for (std::size_t i : idx.indices) {
    if (i >= idx.dim) {
      throw ContractError("multi-index entry " + std::to_string(i) + " out of range for dim " +
                          std::to_string(idx.dim));
    }
    pos = pos * idx.dim + i;
  }
  return pos;
}

MultiIndex decode(std::size_t dim, std::size_t order, std::size_t pos) {
  const std::size_t n = checked_entries(dim, order);
  if (pos >= n) throw ContractError("flat position " + std::to_string(pos) + " out of range");
  MultiIndex idx{dim, std::vector<std::size_t>(order)};
  for (std::size_t j = order; j-- > 0;) {
    idx.indices[j] = pos % dim;
    pos /= dim;
  }
  return idx;
}

KronVector::KronVector(std::size_t dim, std::size_t order)
    : dim_(dim), order_(order), data_(checked_entries(dim, order), 0.0) {}

KronVector::KronVector(std::size_t dim, std::size_t order, std::vector<double> data)
    : dim_(dim), order_(order), data_(std::move(data)) {
  if (data_.size() != checked_entries(dim, order)) {
    throw ContractError("KronVector data length " + std::to_string(data_.size()) + " != " +
                        std::to_string(dim) + "^" + std::to_string(order));
  }
  require_finite(data_, "KronVector");
}

KronVector KronVector::scalar(double value) { return KronVector(1, 0, {value}); }

double KronVector::at(const MultiIndex& idx) const {
  if (idx.dim != dim_ || idx.order() != order_) throw ContractError("multi-index shape mismatch");
  return data_[encode(idx)];
}

void KronVector::require_same_shape(const KronVector& rhs, const char* op) const {
  // Order-0 tensors are scalars regardless of the nominal dim.
  const bool scalars = order_ == 0 && rhs.order_ == 0;
  if (!scalars && (dim_ != rhs.dim_ || order_ != rhs.order_)) {
    throw ContractError(std::string(op) + ": shape mismatch (" + std::to_string(dim_) + "," +
                        std::to_string(order_) + ") vs (" + std::to_string(rhs.dim_) + "," +
                        std::to_string(rhs.order_) + ")");
  }
}

double KronVector::dot(const KronVector& other) const {
  require_same_shape(other, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) s += data_[i] * other.data_[i];
  return s;
}

double KronVector::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

KronVector& KronVector::operator+=(const KronVector& rhs) {
  require_same_shape(rhs, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

KronVector& KronVector::operator-=(const KronVector& rhs) {
  require_same_shape(rhs, "subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

KronVector& KronVector::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

ModePermutation::ModePermutation(std::vector<std::size_t> perm) : perm_(std::move(perm)) {
  std::vector<bool> seen(perm_.size(), false);
  for (std::size_t p : perm_) {
    if (p >= perm_.size() || seen[p]) throw ContractError("mode permutation is not a bijection");
    seen[p] = true;
  }
}

ModePermutation ModePermutation::identity(std::size_t order) {
  std::vector<std::size_t> p(order);
  for (std::size_t j = 0; j < order; ++j) p[j] = j;
  return ModePermutation(std::move(p));
}

ModePermutation ModePermutation::from_one_based(std::vector<std::size_t> perm) {
  for (std::size_t& p : perm) {
    if (p == 0) throw ContractError("one-based permutation contains 0");
    --p;
  }
  return ModePermutation(std::move(perm));
}

ModePermutation ModePermutation::swap(std::size_t order, std::size_t a, std::size_t b) {
  if (a >= order || b >= order) throw ContractError("swap mode out of range");
  auto p = identity(order).perm_;
  std::swap(p[a], p[b]);
  return ModePermutation(std::move(p));
}

ModePermutation ModePermutation::compose(const ModePermutation& q) const {
  if (q.order() != order()) throw ContractError("composing permutations of different order");
  std::vector<std::size_t> r(order());
  for (std::size_t j = 0; j < order(); ++j) r[j] = perm_[q.perm_[j]];
  return ModePermutation(std::move(r));
}

KronVector kron_product(const KronVector& a, const KronVector& b) {
  // Scalars combine with anything.
  const std::size_t dim = a.order() == 0 ? b.dim() : a.dim();
  if (a.order() > 0 && b.order() > 0 && a.dim() != b.dim()) {
    throw ContractError("kron_product: dimension mismatch " + std::to_string(a.dim()) + " vs " +
                        std::to_string(b.dim()));
  }
  KronVector out(dim, a.order() + b.order());
  auto o = out.data();
  const std::size_t nb = b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ai = a[i];
    for (std::size_t j = 0; j < nb; ++j) o[i * nb + j] = ai * b[j];
  }
  require_finite(out.data(), "kron_product");
  return out;
}

KronVector kron_power(std::span<const double> x, std::size_t k) {
  if (x.empty()) throw ContractError("kron_power: empty vector");
  const std::size_t d = x.size();
  KronVector out(d, k);
  auto o = out.data();
  o[0] = 1.0;
  // Grow x^{⊗j} in place: x^{⊗(j+1)}[i*d + t] = x^{⊗j}[i] * x[t].
  std::size_t len = 1;
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = len; i-- > 0;) {
      const double v = o[i];
      for (std::size_t t = 0; t < d; ++t) o[i * d + t] = v * x[t];
    }
    len *= d;
  }
  require_finite(out.data(), "kron_power");
  return out;
}

KronVector kron_power(const Eigen::VectorXd& x, std::size_t k) {
  return kron_power(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())), k);
}

KronVector symmetrize(const KronVector& v) {
  const std::size_t k = v.order();
  if (k > kMaxSymmetrizeOrder) {
    throw ContractError("symmetrize: order " + std::to_string(k) + " exceeds cap " +
                        std::to_string(kMaxSymmetrizeOrder));
  }
  if (k <= 1) return v;
  const std::size_t d = v.dim();
  const std::size_t n = v.size();

  // Each position belongs to the orbit of its sorted multi-index. The mean over
  // the k! permutations equals the mean over the orbit's distinct members,
  // since every member is hit the same number of times.
  std::vector<std::size_t> key(n);
  std::vector<double> sum(n, 0.0), first(n, 0.0);
  std::vector<std::size_t> count(n, 0);
  std::vector<std::uint8_t> uniform(n, 1);
  std::vector<std::size_t> idx(k, 0), sorted(k);
  for (std::size_t pos = 0; pos < n; ++pos) {
    sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    std::size_t c = 0;
    for (std::size_t i : sorted) c = c * d + i;
    key[pos] = c;
    if (count[c] == 0) {
      first[c] = v[pos];
    } else if (v[pos] != first[c]) {
      uniform[c] = 0;
    }
    sum[c] += v[pos];
    ++count[c];
    next_index(idx, d);
  }

  // Orbits whose entries are already equal are copied verbatim, so that
  // symmetrize(symmetrize(v)) == symmetrize(v) bit for bit.
  KronVector out(d, k);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t c = key[pos];
    out[pos] = uniform[c] ? first[c] : sum[c] / static_cast<double>(count[c]);
  }
  return out;
}

KronVector permute_modes(const KronVector& v, const ModePermutation& p) {
  const std::size_t k = v.order();
  if (p.order() != k) {
    throw ContractError("permute_modes: permutation order " + std::to_string(p.order()) +
                        " != tensor order " + std::to_string(k));
  }
  const std::size_t d = v.dim();
  // stride of source mode m in the flat layout
  std::vector<std::size_t> stride(k, 1);
  for (std::size_t j = k; j-- > 1;) stride[j - 1] = stride[j] * d;

  KronVector out(d, k);
  std::vector<std::size_t> idx(k, 0);
  for (std::size_t pos = 0; pos < v.size(); ++pos) {
    // out[(i_1..i_k)] = v[(i_{p(1)}..i_{p(k)})]: source mode j reads i_{p(j)}
    std::size_t src = 0;
    for (std::size_t j = 0; j < k; ++j) src += idx[p(j)] * stride[j];
    out[pos] = v[src];
    next_index(idx, d);
  }
  return out;
}

double symmetry_residual(const KronVector& v) {
  const KronVector s = symmetrize(v);
  double r = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) r = std::max(r, std::abs(s[i] - v[i]));
  return r / std::max(1.0, v.max_abs());
}

KronVector apply_each_mode(const KronVector& v, const Eigen::MatrixXd& m) {
  const std::size_t d = v.dim();
  if (static_cast<std::size_t>(m.rows()) != d || static_cast<std::size_t>(m.cols()) != d) {
    throw ContractError("apply_each_mode: matrix must be d x d");
  }
  const std::size_t k = v.order();
  std::vector<double> cur(v.values()), next(cur.size());
  std::size_t outer = 1;
  std::size_t inner = v.size();
  for (std::size_t mode = 0; mode < k; ++mode) {
    inner /= d;
    // view as [outer][d][inner]
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t a = 0; a < d; ++a) {
        double* dst = next.data() + (o * d + a) * inner;
        std::fill(dst, dst + inner, 0.0);
        for (std::size_t b = 0; b < d; ++b) {
          const double mab = m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
          if (mab == 0.0) continue;
          const double* src = cur.data() + (o * d + b) * inner;
          for (std::size_t t = 0; t < inner; ++t) dst[t] += mab * src[t];
        }
      }
    }
    cur.swap(next);
    outer *= d;
  }
  return KronVector(d, k, std::move(cur));
}

}  // namespace kronstat
