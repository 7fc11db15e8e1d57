// kronstat: fit, evaluate and convert Gram-Charlier expansions, and run the
// self-check suite.
//
// Exit codes: 0 success, 2 usage or input error, 3 numerical error,
// 4 validation failure. Errors are reported on stderr as a JSON object.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kronstat/empirical.hpp"
#include "kronstat/errors.hpp"
#include "kronstat/serialization.hpp"
#include "kronstat/validation.hpp"

namespace {

using namespace kronstat;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitValidation = 4;

struct AxisSpec {
  double lo, hi;
  std::size_t n;
};

std::vector<AxisSpec> parse_grid(const std::string& text) {
  std::vector<AxisSpec> axes;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::vector<std::string> f;
    std::stringstream ps(part);
    std::string tok;
    while (std::getline(ps, tok, ':')) f.push_back(tok);
    if (f.size() != 3) throw InputError("grid axis '" + part + "' is not min:max:n");
    AxisSpec a{};
    try {
      std::size_t used = 0;
      a.lo = std::stod(f[0], &used);
      if (used != f[0].size()) throw std::invalid_argument(f[0]);
      a.hi = std::stod(f[1], &used);
      if (used != f[1].size()) throw std::invalid_argument(f[1]);
      const long n = std::stol(f[2], &used);
      if (used != f[2].size() || n < 1) throw std::invalid_argument(f[2]);
      a.n = static_cast<std::size_t>(n);
    } catch (const std::logic_error&) {
      throw InputError("grid axis '" + part + "' is not min:max:n");
    }
    if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || (a.n > 1 && !(a.hi > a.lo)))
      throw InputError("grid axis '" + part + "' needs finite min < max");
    axes.push_back(a);
  }
  if (axes.empty()) throw InputError("empty grid specification");
  return axes;
}

/// Cartesian product, last axis varying fastest.
Eigen::MatrixXd grid_points(std::vector<AxisSpec> axes, std::size_t dim) {
  if (axes.size() == 1 && dim > 1) axes.assign(dim, axes.front());
  if (axes.size() != dim) {
    throw InputError("grid has " + std::to_string(axes.size()) + " axes but the model dimension is " +
                     std::to_string(dim));
  }
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.n;
  if (total > entry_budget()) throw ResourceError("grid has more points than the entry budget allows");
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < total; ++r) {
    std::size_t rem = r;
    for (std::size_t j = dim; j-- > 0;) {
      const auto& a = axes[j];
      const std::size_t i = rem % a.n;
      rem /= a.n;
      pts(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
          a.n == 1 ? a.lo : a.lo + (a.hi - a.lo) * static_cast<double>(i) / static_cast<double>(a.n - 1);
    }
  }
  return pts;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw InputError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void emit_json(const std::string& path, const Json& j) {
  Output out(path);
  out.stream() << j.dump(2) << '\n';
}

ReferenceSpec parse_reference(const std::string& text) {
  ReferenceSpec spec;
  if (text == "gaussian") return spec;
  const std::string prefix = "mixture:";
  if (text.rfind(prefix, 0) == 0) {
    spec.kind = ReferenceDensity::Kind::gaussian_mixture;
    spec.mixture = reference_from_json(read_json_file(text.substr(prefix.size())));
    return spec;
  }
  throw InputError("--reference must be 'gaussian' or 'mixture:<file>'");
}

void check_order(std::size_t K) {
  if (K < 2 || K > kMaxOrderCap)
    throw InputError("--order must be between 2 and " + std::to_string(kMaxOrderCap) + ", got " + std::to_string(K));
}

Json norms(const std::vector<KronVector>& v) {
  Json j = Json::object();
  for (std::size_t k = 1; k < v.size(); ++k) {
    double s = 0.0;
    for (double e : v[k].values()) s += e * e;
    j[std::to_string(k)] = std::sqrt(s);
  }
  return j;
}

/// Evaluation grid for the negative-mass diagnostic, laid out in working
/// coordinates over [-5, 5]^d and mapped back to raw coordinates.
std::optional<Eigen::MatrixXd> diagnostic_points(const AffineMap& t) {
  const std::size_t d = t.dim();
  static const std::size_t per_axis[] = {0, 401, 101, 21, 11};
  if (d > 4) return std::nullopt;
  Eigen::MatrixXd z = grid_points({AxisSpec{-5.0, 5.0, per_axis[d]}}, d);
  const Eigen::MatrixXd Ainv = t.A.inverse();
  return ((z.rowwise() - t.b.transpose()) * Ainv.transpose()).eval();
}

struct FitArgs {
  std::string input, output, diagnostics, reference = "gaussian";
  std::size_t order = kDefaultMaxOrder;
  std::size_t dim = 0;
  bool header = false;
  std::uint64_t seed = 0;
};

int run_fit(const FitArgs& a) {
  check_order(a.order);
  const SampleMatrix samples = read_samples_csv_file(a.input, a.header);
  if (a.dim != 0 && samples.dim() != a.dim) {
    throw InputError("--dim " + std::to_string(a.dim) + " does not match " + std::to_string(samples.dim()) +
                     " data columns");
  }
  const FitResult fit = fit_expansion(samples, a.order, parse_reference(a.reference));
  emit_json(a.output, to_json(fit.model));

  if (!a.diagnostics.empty()) {
    Json diag{{"format", "kronstat.fit_diagnostics"},
              {"samples", samples.rows()},
              {"dim", samples.dim()},
              {"max_order", a.order},
              {"cumulant_norms", norms(fit.cumulants.vectors())},
              {"delta_norms", norms(fit.delta.vectors())},
              {"alpha_norms", norms(fit.model.alpha().vectors())}};
    if (auto pts = diagnostic_points(fit.model.transform())) {
      diag["negative_mass_fraction"] = negative_mass_fraction(fit.model, *pts);
      diag["negative_mass_grid"] = Json{{"working_range", {-5.0, 5.0}}, {"points", pts->rows()}};
    } else {
      diag["negative_mass_fraction"] = nullptr;
    }
    write_json_file(a.diagnostics, diag);
  }
  return 0;
}

struct EvalArgs {
  std::string input, output, grid, points;
  bool charfn = false, header = false;
  unsigned workers = 0;
};

int run_eval(const EvalArgs& a) {
  const ExpansionModel model = model_from_json(read_json_file(a.input));
  const std::size_t d = model.dim();
  if (a.grid.empty() == a.points.empty()) throw InputError("eval needs exactly one of --grid or --points");
  Eigen::MatrixXd pts;
  if (!a.grid.empty()) {
    pts = grid_points(parse_grid(a.grid), d);
  } else {
    pts = read_samples_csv_file(a.points, a.header).data();
    if (static_cast<std::size_t>(pts.cols()) != d) {
      throw InputError("points file has " + std::to_string(pts.cols()) + " columns but the model dimension is " +
                       std::to_string(d));
    }
  }

  Output out(a.output);
  std::ostream& os = out.stream();
  const std::string axis = a.charfn ? "lambda_" : "x_";
  for (std::size_t j = 0; j < d; ++j) os << axis << (j + 1) << ',';
  os << (a.charfn ? "re,im" : "f_hat") << '\n';

  std::vector<double> f;
  if (!a.charfn) f = ggc_density_many(model, pts, a.workers);
  for (Eigen::Index r = 0; r < pts.rows(); ++r) {
    for (Eigen::Index j = 0; j < pts.cols(); ++j) os << num(pts(r, j)) << ',';
    if (a.charfn) {
      const std::complex<double> v = model_char_fn(model, pts.row(r).transpose());
      os << num(v.real()) << ',' << num(v.imag()) << '\n';
    } else {
      os << num(f[static_cast<std::size_t>(r)]) << '\n';
    }
  }
  return 0;
}

struct ConvertArgs {
  std::string input, output, from, to;
};

int run_convert(const ConvertArgs& a) {
  const Json doc = read_json_file(a.input);
  std::string from = sequence_kind(doc);
  if (from.empty()) from = a.from;
  if (from.empty()) throw InputError("input has no 'kind'; pass --from");
  if (!a.from.empty() && a.from != from) throw InputError("--from " + a.from + " contradicts input kind '" + from + "'");
  std::string to = a.to;
  if (to.empty()) {
    if (from == "moments") to = "cumulants";
    else if (from == "cumulants") to = "moments";
    else if (from == "delta") to = "alpha";
    else if (from == "alpha") to = "delta";
  }
  auto warn = [](const std::string& msg) { std::cerr << Json{{"warning", msg}}.dump() << '\n'; };
  Json result;
  if (from == "moments" && to == "cumulants") {
    result = to_json(cumulants_from_moments(sequence_from_json<MomentTag>(doc, warn)));
  } else if (from == "cumulants" && to == "moments") {
    result = to_json(moments_from_cumulants(sequence_from_json<CumulantTag>(doc, warn)));
  } else if (from == "delta" && to == "alpha") {
    result = to_json(alpha_from_delta(sequence_from_json<DeltaTag>(doc, warn)));
  } else if (from == "alpha" && to == "delta") {
    result = to_json(delta_from_alpha(sequence_from_json<AlphaTag>(doc, warn)));
  } else {
    throw InputError("unsupported conversion '" + from + "' -> '" + to + "'");
  }
  emit_json(a.output, result);
  return 0;
}

struct ValidateArgs {
  std::string output, inject_fault;
  std::vector<std::string> only;
  std::uint64_t seed = ValidationOptions{}.seed;
};

int run_validate(const ValidateArgs& a) {
  ValidationOptions opt;
  opt.seed = a.seed;
  opt.inject_fault = a.inject_fault;
  for (const auto& s : a.only) {
    std::stringstream ss(s);
    std::string name;
    while (std::getline(ss, name, ','))
      if (!name.empty()) opt.only.push_back(name);
  }
  const auto results = run_validation(opt);
  const Json report = validation_report(results);
  emit_json(a.output, report);
  return report.at("pass").get<bool>() ? 0 : kExitValidation;
}

int fail(const char* kind, const std::string& message, int code) {
  std::cerr << Json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gram-Charlier density expansions with Kronecker-vector moments and cumulants"};
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit an expansion model to samples in a CSV file");
  fit_cmd->add_option("--input", fit.input, "Sample CSV, one observation per row")->required();
  fit_cmd->add_option("--output", fit.output, "Model JSON (stdout if omitted)");
  fit_cmd->add_option("--order", fit.order, "Truncation order K (2..10)");
  fit_cmd->add_option("--dim", fit.dim, "Expected number of columns");
  fit_cmd->add_option("--reference", fit.reference, "gaussian or mixture:<file>");
  fit_cmd->add_option("--diagnostics", fit.diagnostics, "Diagnostics JSON path");
  fit_cmd->add_option("--seed", fit.seed, "Accepted for symmetry with validate; fitting is deterministic");
  fit_cmd->add_flag("--header", fit.header, "First CSV line is a header");

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model on a grid or a list of points");
  eval_cmd->add_option("--input", ev.input, "Model JSON")->required();
  eval_cmd->add_option("--output", ev.output, "Output CSV (stdout if omitted)");
  eval_cmd->add_option("--grid", ev.grid, "min:max:n per axis, comma separated");
  eval_cmd->add_option("--points", ev.points, "CSV of evaluation points");
  eval_cmd->add_flag("--charfn", ev.charfn, "Evaluate the characteristic function instead");
  eval_cmd->add_flag("--header", ev.header, "Points CSV has a header line");
  eval_cmd->add_option("--workers", ev.workers, "Worker threads (0 = hardware)");

  ConvertArgs cv;
  auto* convert_cmd = app.add_subcommand("convert", "Convert between moments/cumulants and delta/alpha");
  convert_cmd->add_option("--input", cv.input, "Sequence JSON")->required();
  convert_cmd->add_option("--output", cv.output, "Output JSON (stdout if omitted)");
  convert_cmd->add_option("--from", cv.from, "Input kind when the file has none")
      ->check(CLI::IsMember({"moments", "cumulants", "delta", "alpha"}));
  convert_cmd->add_option("--to", cv.to, "Output kind")->check(CLI::IsMember({"moments", "cumulants", "delta", "alpha"}));

  ValidateArgs va;
  auto* validate_cmd = app.add_subcommand("validate", "Run the self-check suite");
  validate_cmd->add_option("--output", va.output, "Report JSON (stdout if omitted)");
  validate_cmd->add_option("--only", va.only, "Comma separated suites to run");
  validate_cmd->add_option("--seed", va.seed, "Random seed");
  validate_cmd->add_option("--inject-fault", va.inject_fault, "Harness self-test (golden)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage", e.what(), kExitUsage);
  }

  try {
    if (*fit_cmd) return run_fit(fit);
    if (*eval_cmd) return run_eval(ev);
    if (*convert_cmd) return run_convert(cv);
    if (*validate_cmd) return run_validate(va);
  } catch (const NumericalError& e) {
    return fail(e.kind(), e.what(), kExitNumerical);
  } catch (const Error& e) {
    return fail(e.kind(), e.what(), kExitUsage);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
  return kExitUsage;
}
