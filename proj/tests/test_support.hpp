#pragma once

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kronstat/cumulants.hpp"

namespace kronstat::testing {

inline KronVector random_tensor(std::mt19937_64& rng, std::size_t d, std::size_t k) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  KronVector v(d, k);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = u(rng);
  return v;
}

inline KronVector random_symmetric(std::mt19937_64& rng, std::size_t d, std::size_t k) {
  return k >= 2 ? symmetrize(random_tensor(rng, d, k)) : random_tensor(rng, d, k);
}

template <class Tag>
TensorSequence<Tag> random_sequence(std::mt19937_64& rng, std::size_t d, std::size_t K, std::size_t from = 1) {
  TensorSequence<Tag> s(d, K);
  for (std::size_t k = from; k <= K; ++k) s.set(k, random_symmetric(rng, d, k));
  return s;
}

/// max|a - b| / max(max|b|, tiny).
inline double rel_error(const KronVector& a, const KronVector& b) {
  double diff = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  const double s = b.max_abs();
  return s > 0.0 ? diff / s : diff;
}

inline KronVector scalar1(std::size_t k, double v) { return KronVector(1, k, {v}); }

}  // namespace kronstat::testing
