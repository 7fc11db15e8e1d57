#include "kronstat/empirical.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include "kronstat/errors.hpp"

namespace kronstat {

namespace {

constexpr std::size_t kMomentBlockRows = 4096;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_cell(const std::string& cell, std::size_t line, std::size_t col) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw InputError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": '" + cell +
                     "' is not a finite number");
  }
  return v;
}

// Accumulates Σ_{rows in [lo,hi)} x^{⊗k} for k = 1..K into sums[k].
// Cholesky pivot relative to the variance below which the covariance counts as singular.
constexpr double kSingularPivot = 1e-12;

void accumulate_block(const Eigen::MatrixXd& x, std::size_t lo, std::size_t hi, std::size_t K,
                      std::vector<std::vector<double>>& sums) {
  const auto d = static_cast<std::size_t>(x.cols());
  std::vector<double> row(d), power, next;
  power.reserve(sums[K].size());
  next.reserve(sums[K].size());
  for (std::size_t i = lo; i < hi; ++i) {
    for (std::size_t j = 0; j < d; ++j) row[j] = x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    power.assign(1, 1.0);
    for (std::size_t k = 1; k <= K; ++k) {
      next.resize(power.size() * d);
      for (std::size_t e = 0; e < power.size(); ++e)
        for (std::size_t t = 0; t < d; ++t) next[e * d + t] = power[e] * row[t];
      power.swap(next);
      auto& s = sums[k];
      for (std::size_t e = 0; e < s.size(); ++e) s[e] += power[e];
    }
  }
}

}  // namespace

SampleMatrix::SampleMatrix(Eigen::MatrixXd data) : data_(std::move(data)) {
  if (data_.rows() == 0 || data_.cols() == 0) throw InputError("sample matrix is empty");
  if (!data_.allFinite()) throw InputError("sample matrix contains non-finite values");
}

SampleMatrix read_samples_csv(std::istream& in, bool has_header) {
  std::vector<double> values;
  std::size_t cols = 0, line_no = 0, rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    if (has_header && line_no == 1) continue;
    const auto cells = split_cells(line);
    if (cols == 0) cols = cells.size();
    if (cells.size() != cols) {
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(cols) + " columns, found " +
                       std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) values.push_back(parse_cell(cells[c], line_no, c + 1));
    ++rows;
  }
  if (rows == 0) throw InputError("no samples in input");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * cols + c];
  return SampleMatrix(std::move(m));
}

SampleMatrix read_samples_csv_file(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_samples_csv(in, has_header);
}

MomentSet sample_moments(const SampleMatrix& samples, std::size_t max_order, unsigned workers) {
  const std::size_t d = samples.dim();
  const std::size_t n = samples.rows();
  MomentSet m(d, max_order);
  if (max_order == 0) return m;
  checked_entries(d, max_order);

  const std::size_t blocks = (n + kMomentBlockRows - 1) / kMomentBlockRows;
  // partial[b][k] holds the block-b sum of x^{⊗k}
  std::vector<std::vector<std::vector<double>>> partial(blocks);
  auto run_block = [&](std::size_t b) {
    auto& sums = partial[b];
    sums.resize(max_order + 1);
    for (std::size_t k = 1; k <= max_order; ++k) sums[k].assign(checked_entries(d, k), 0.0);
    accumulate_block(samples.data(), b * kMomentBlockRows, std::min(n, (b + 1) * kMomentBlockRows), max_order, sums);
  };

  if (workers <= 1 || blocks <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t b = w; b < blocks; b += workers) run_block(b);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  for (std::size_t k = 1; k <= max_order; ++k) {
    std::vector<double> total(checked_entries(d, k), 0.0);
    for (std::size_t b = 0; b < blocks; ++b)
      for (std::size_t e = 0; e < total.size(); ++e) total[e] += partial[b][k][e];
    for (double& v : total) v /= static_cast<double>(n);
    // rounding depends on product order, so copy each entry from its sorted-index representative
    for (std::size_t e = 0; e < total.size(); ++e) {
      MultiIndex idx = decode(d, k, e);
      std::sort(idx.indices.begin(), idx.indices.end());
      total[e] = total[encode(idx)];
    }
    m.set(k, KronVector(d, k, std::move(total)));
  }
  return m;
}

Standardized standardize(const SampleMatrix& samples) {
  const std::size_t n = samples.rows(), d = samples.dim();
  if (n < d + 1) {
    throw InputError("standardize: " + std::to_string(n) + " samples are too few for dimension " + std::to_string(d) +
                     " (need at least d + 1)");
  }
  const Eigen::MatrixXd& x = samples.data();
  const Eigen::VectorXd mean = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - mean.transpose();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n);
  cov = 0.5 * (cov + cov.transpose()).eval();
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw NumericalError("standardize: sample covariance is not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  for (Eigen::Index i = 0; i < L.rows(); ++i) {
    if (!(L(i, i) * L(i, i) > kSingularPivot * cov(i, i))) {
      throw NumericalError("standardize: sample covariance is singular");
    }
  }
  const auto di = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd A = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(di, di));
  Eigen::VectorXd b = -A * mean;
  Eigen::MatrixXd z = centered * A.transpose();
  AffineStandardizer t = AffineMap::from(std::move(A), std::move(b));
  return Standardized{SampleMatrix(std::move(z)), std::move(t)};
}

FitResult fit_expansion(const SampleMatrix& samples, std::size_t max_order, const ReferenceSpec& reference) {
  if (max_order > kMaxOrderCap) {
    throw ContractError("fit_expansion: order " + std::to_string(max_order) + " exceeds cap " +
                        std::to_string(kMaxOrderCap));
  }
  Standardized s = standardize(samples);
  const MomentSet m = sample_moments(s.samples, max_order);
  CumulantSet c = cumulants_from_moments(m);

  const std::size_t d = samples.dim();
  ReferenceDensity ref = ReferenceDensity::gaussian(GaussianParams::standard(d));
  if (reference.kind == ReferenceDensity::Kind::gaussian_mixture) {
    if (!reference.mixture) throw ContractError("fit_expansion: mixture reference requires components");
    if (reference.mixture->dim() != d) throw InputError("fit_expansion: mixture dimension does not match the data");
    ref = *reference.mixture;
  }
  CumulantDelta delta = cumulant_delta(c, ref.cumulants(max_order));
  ExpansionModel model = make_expansion(delta, std::move(ref), std::move(s.transform));
  return FitResult{std::move(model), std::move(c), std::move(delta)};
}

}  // namespace kronstat
