#include "kronstat/serialization.hpp"

#include <fstream>

#include "kronstat/errors.hpp"

namespace kronstat {

namespace {

constexpr const char* kModelFormat = "kronstat.expansion_model";

template <class T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("field '") + key + "': " + e.what());
  }
}

std::vector<double> numbers(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw InputError(std::string(what) + " must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

Json to_json(const KronVector& v) {
  return Json{{"dim", v.dim()}, {"order", v.order()}, {"data", v.values()}};
}

KronVector kron_vector_from_json(const Json& j) {
  const auto dim = field<std::size_t>(j, "dim");
  const auto order = field<std::size_t>(j, "order");
  try {
    return KronVector(dim, order, numbers(j.at("data"), "data"));
  } catch (const ContractError& e) {
    throw InputError(e.what());
  }
}

Json to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(numbers(j[0], "matrix row").size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto row = numbers(j[static_cast<std::size_t>(i)], "matrix row");
    if (static_cast<Eigen::Index>(row.size()) != cols) throw InputError("matrix rows have unequal length");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = row[static_cast<std::size_t>(k)];
  }
  return m;
}

Json to_json(const Eigen::VectorXd& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Eigen::VectorXd vector_from_json(const Json& j) {
  const auto v = numbers(j, "vector");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

template <class Tag>
Json to_json(const TensorSequence<Tag>& s) {
  Json vectors = Json::object();
  for (std::size_t k = 0; k <= s.max_order(); ++k) vectors[std::to_string(k)] = s[k].values();
  return Json{{"kind", Tag::name}, {"dim", s.dim()}, {"max_order", s.max_order()}, {"vectors", std::move(vectors)}};
}

template <class Tag>
TensorSequence<Tag> sequence_from_json(const Json& j, const WarningSink& warn) {
  const std::string kind = sequence_kind(j);
  if (!kind.empty() && kind != Tag::name) {
    throw InputError("expected a '" + std::string(Tag::name) + "' document, found '" + kind + "'");
  }
  const auto dim = field<std::size_t>(j, "dim");
  const auto K = field<std::size_t>(j, "max_order");
  if (dim == 0) throw InputError("dim must be positive");
  if (K > kMaxOrderCap) throw InputError("max_order " + std::to_string(K) + " exceeds cap " + std::to_string(kMaxOrderCap));
  if (!j.contains("vectors") || !j.at("vectors").is_object()) throw InputError("missing object 'vectors'");
  const Json& vectors = j.at("vectors");
  TensorSequence<Tag> s(dim, K);
  for (std::size_t k = 0; k <= K; ++k) {
    const std::string key = std::to_string(k);
    if (!vectors.contains(key)) {
      if (k == 0) continue;
      throw InputError("missing order " + key);
    }
    try {
      s.set(k, KronVector(dim, k, numbers(vectors.at(key), "vector")));
    } catch (const ContractError& e) {
      throw InputError("order " + key + ": " + e.what());
    }
  }
  for (const auto& [key, _] : vectors.items()) {
    std::size_t k = 0;
    try {
      k = std::stoul(key);
    } catch (...) {
      throw InputError("unexpected key '" + key + "' in vectors");
    }
    if (k > K) throw InputError("order " + key + " exceeds max_order");
  }
  return symmetrized(s, warn);
}

std::string sequence_kind(const Json& j) {
  if (j.is_object() && j.contains("kind") && j.at("kind").is_string()) return j.at("kind").get<std::string>();
  return {};
}

template Json to_json(const MomentSet&);
template Json to_json(const CumulantSet&);
template Json to_json(const CumulantDelta&);
template Json to_json(const ExpansionCoefficients&);
template MomentSet sequence_from_json<MomentTag>(const Json&, const WarningSink&);
template CumulantSet sequence_from_json<CumulantTag>(const Json&, const WarningSink&);
template CumulantDelta sequence_from_json<DeltaTag>(const Json&, const WarningSink&);
template ExpansionCoefficients sequence_from_json<AlphaTag>(const Json&, const WarningSink&);

Json to_json(const GaussianParams& g) { return Json{{"mean", to_json(g.mean())}, {"cov", to_json(g.cov())}}; }

GaussianParams gaussian_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("mean") || !j.contains("cov")) throw InputError("Gaussian needs 'mean' and 'cov'");
  try {
    return GaussianParams(vector_from_json(j.at("mean")), matrix_from_json(j.at("cov")));
  } catch (const ContractError& e) {
    throw InputError(e.what());
  }
}

Json to_json(const ReferenceDensity& r) {
  if (r.kind() == ReferenceDensity::Kind::gaussian) {
    Json j = to_json(r.components().front().params);
    j["kind"] = "gaussian";
    return j;
  }
  Json comps = Json::array();
  for (const auto& c : r.components()) {
    Json e = to_json(c.params);
    e["weight"] = c.weight;
    comps.push_back(std::move(e));
  }
  return Json{{"kind", "gaussian_mixture"}, {"components", std::move(comps)}};
}

ReferenceDensity reference_from_json(const Json& j) {
  const auto kind = field<std::string>(j, "kind");
  if (kind == "gaussian") return ReferenceDensity::gaussian(gaussian_from_json(j));
  if (kind == "gaussian_mixture" || kind == "mixture") {
    if (!j.contains("components") || !j.at("components").is_array()) throw InputError("mixture needs 'components'");
    std::vector<ReferenceDensity::Component> comps;
    for (const auto& c : j.at("components")) comps.push_back({field<double>(c, "weight"), gaussian_from_json(c)});
    try {
      return ReferenceDensity::mixture(std::move(comps));
    } catch (const ContractError& e) {
      throw InputError(e.what());
    }
  }
  throw InputError("unsupported reference kind '" + kind + "'");
}

Json to_json(const AffineMap& t) {
  return Json{{"A", to_json(t.A)}, {"b", to_json(t.b)}, {"log_abs_det_A", t.log_abs_det_A}};
}

AffineMap affine_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("A") || !j.contains("b")) throw InputError("transform needs 'A' and 'b'");
  try {
    return AffineMap::from(matrix_from_json(j.at("A")), vector_from_json(j.at("b")));
  } catch (const ContractError& e) {
    throw InputError(e.what());
  }
}

Json to_json(const ExpansionModel& m) {
  return Json{{"format", kModelFormat},
              {"version", 1},
              {"dim", m.dim()},
              {"max_order", m.max_order()},
              {"alpha", to_json(m.alpha())},
              {"delta", to_json(delta_from_alpha(m.alpha()))},
              {"reference", to_json(m.reference())},
              {"transform", to_json(m.transform())}};
}

ExpansionModel model_from_json(const Json& j) {
  if (field<std::string>(j, "format") != kModelFormat) throw InputError("not an expansion model document");
  const auto dim = field<std::size_t>(j, "dim");
  const auto K = field<std::size_t>(j, "max_order");
  ExpansionCoefficients alpha = sequence_from_json<AlphaTag>(j.at("alpha"));
  if (alpha.dim() != dim || alpha.max_order() != K) throw InputError("alpha shape does not match dim/max_order");
  try {
    return ExpansionModel(std::move(alpha), reference_from_json(field<Json>(j, "reference")),
                          affine_from_json(field<Json>(j, "transform")));
  } catch (const ContractError& e) {
    throw InputError(e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace kronstat
