#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "kronstat/cumulants.hpp"
#include "kronstat/series.hpp"

namespace kronstat {

/// n × d block of finite samples, one observation per row.
class SampleMatrix {
 public:
  explicit SampleMatrix(Eigen::MatrixXd data);

  std::size_t rows() const { return static_cast<std::size_t>(data_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(data_.cols()); }
  const Eigen::MatrixXd& data() const { return data_; }

 private:
  Eigen::MatrixXd data_;
};

/// Parses comma-separated samples. Non-numeric or empty cells are rejected with
/// an InputError naming the (1-based) line and column.
SampleMatrix read_samples_csv(std::istream& in, bool has_header);
SampleMatrix read_samples_csv_file(const std::string& path, bool has_header);

/// m(k) = (1/n) Σ_i x_i^{⊗k}. Rows are reduced in fixed blocks, in block order,
/// so the result is bit-identical for any number of workers.
MomentSet sample_moments(const SampleMatrix& samples, std::size_t max_order, unsigned workers = 1);

/// x' = A(x - mean) with A = L^{-1}, L the Cholesky factor of the (1/n) covariance.
using AffineStandardizer = AffineMap;

struct Standardized {
  SampleMatrix samples;
  AffineStandardizer transform;
};

/// Requires n ≥ d + 1 and a positive definite sample covariance.
Standardized standardize(const SampleMatrix& samples);

struct ReferenceSpec {
  ReferenceDensity::Kind kind = ReferenceDensity::Kind::gaussian;
  /// Mixture components in standardized coordinates (kind == gaussian_mixture).
  std::optional<ReferenceDensity> mixture;
};

struct FitResult {
  ExpansionModel model;
  CumulantSet cumulants;  // working (standardized) coordinates
  CumulantDelta delta;
};

/// standardize → sample_moments → cumulants_from_moments → cumulant_delta →
/// alpha_from_delta, carrying the standardizer into the model.
FitResult fit_expansion(const SampleMatrix& samples, std::size_t max_order, const ReferenceSpec& reference);

}  // namespace kronstat
