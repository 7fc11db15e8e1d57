#pragma once

// JSON forms of the library types. Tensors keep the flat row-major layout:
//   KronVector      {"dim": d, "order": k, "data": [...]}
//   sequences       {"kind": "moments", "dim": d, "max_order": K, "vectors": {"1": [...], ...}}
//   ExpansionModel  {"format": "kronstat.expansion_model", "version": 1, "dim", "max_order",
//                    "alpha": {...}, "delta": {...}, "reference": {...}, "transform": {...}}

#include <string>

#include "json.hpp"
#include "kronstat/cumulants.hpp"
#include "kronstat/series.hpp"

namespace kronstat {

using Json = nlohmann::json;

Json to_json(const KronVector& v);
KronVector kron_vector_from_json(const Json& j);

Json to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j);
Json to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j);

template <class Tag>
Json to_json(const TensorSequence<Tag>& s);

/// Parses a sequence; the "kind" field, when present, must match Tag.
/// Orders 2+ are symmetrized on ingestion, warnings go to `warn`.
template <class Tag>
TensorSequence<Tag> sequence_from_json(const Json& j, const WarningSink& warn = {});

/// "kind" of a sequence document, or an empty string when absent.
std::string sequence_kind(const Json& j);

Json to_json(const GaussianParams& g);
GaussianParams gaussian_from_json(const Json& j);

Json to_json(const ReferenceDensity& r);
ReferenceDensity reference_from_json(const Json& j);

Json to_json(const AffineMap& t);
AffineMap affine_from_json(const Json& j);

Json to_json(const ExpansionModel& m);
ExpansionModel model_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace kronstat
