#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kronstat/cumulants.hpp"
#include "kronstat/empirical.hpp"
#include "kronstat/errors.hpp"
#include "kronstat/gauss_hermite.hpp"
#include "kronstat/kron_tensor.hpp"
#include "kronstat/serialization.hpp"
#include "kronstat/series.hpp"
#include "kronstat/validation.hpp"

namespace py = pybind11;
using namespace kronstat;

namespace {

py::array_t<double> to_array(const KronVector& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data().data());
}

// Sequences cross the boundary as JSON text; the Python layer turns them into dicts.
template <typename From, typename To, typename F>
std::string convert_json(const std::string& text, F f) {
  return to_json(f(sequence_from_json<From>(Json::parse(text)))).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Kronecker-vector moments, cumulants and Gram-Charlier expansions";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ContractError>(m, "ContractError", error);
  py::register_exception<ResourceError>(m, "ResourceError", error);
  py::register_exception<InputError>(m, "InputError", error);
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", error);
  py::register_exception<AccuracyError>(m, "AccuracyError", numerical);

  m.def("kron_power", [](const Eigen::VectorXd& x, std::size_t k) { return to_array(kron_power(x, k)); },
        py::arg("x"), py::arg("k"));
  m.def(
      "symmetrize",
      [](const std::vector<double>& v, std::size_t dim, std::size_t order) {
        return to_array(symmetrize(KronVector(dim, order, v)));
      },
      py::arg("v"), py::arg("dim"), py::arg("order"));

  m.def("hermite_scalar", &hermite_scalar, py::arg("n"), py::arg("x"));
  m.def("hermite_identity", [](const Eigen::VectorXd& x, std::size_t k) { return to_array(hermite_identity(x, k)); },
        py::arg("x"), py::arg("k"));
  m.def(
      "gaussian_pdf",
      [](const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
        return gaussian_pdf(x, GaussianParams(mean, cov));
      },
      py::arg("x"), py::arg("mean"), py::arg("cov"));

  m.def("_moments_from_cumulants", [](const std::string& s) {
    return convert_json<CumulantTag, MomentTag>(s, moments_from_cumulants);
  });
  m.def("_cumulants_from_moments", [](const std::string& s) {
    return convert_json<MomentTag, CumulantTag>(s, cumulants_from_moments);
  });
  m.def("_alpha_from_delta",
        [](const std::string& s) { return convert_json<DeltaTag, AlphaTag>(s, alpha_from_delta); });
  m.def("_delta_from_alpha",
        [](const std::string& s) { return convert_json<AlphaTag, DeltaTag>(s, delta_from_alpha); });

  m.def(
      "_sample_moments",
      [](const Eigen::MatrixXd& samples, std::size_t max_order) {
        return to_json(sample_moments(SampleMatrix(samples), max_order)).dump();
      },
      py::arg("samples"), py::arg("max_order"));

  m.def(
      "_fit",
      [](const Eigen::MatrixXd& samples, std::size_t max_order, const std::string& mixture) {
        ReferenceSpec spec;
        if (!mixture.empty()) {
          spec.kind = ReferenceDensity::Kind::gaussian_mixture;
          spec.mixture = reference_from_json(Json::parse(mixture));
        }
        py::gil_scoped_release release;
        return to_json(fit_expansion(SampleMatrix(samples), max_order, spec).model).dump();
      },
      py::arg("samples"), py::arg("max_order"), py::arg("mixture") = "");

  m.def(
      "_pdf",
      [](const std::string& model, const Eigen::MatrixXd& points) {
        const ExpansionModel em = model_from_json(Json::parse(model));
        return ggc_density_many(em, points);
      },
      py::arg("model"), py::arg("points"));

  m.def(
      "_char_fn",
      [](const std::string& model, const Eigen::VectorXd& lambda) {
        return model_char_fn(model_from_json(Json::parse(model)), lambda);
      },
      py::arg("model"), py::arg("lambda_"));

  m.def(
      "_validate",
      [](const std::vector<std::string>& only, std::uint64_t seed) {
        ValidationOptions options;
        options.only = only;
        options.seed = seed;
        py::gil_scoped_release release;
        return validation_report(run_validation(options)).dump();
      },
      py::arg("only") = std::vector<std::string>{}, py::arg("seed") = ValidationOptions{}.seed);
}
