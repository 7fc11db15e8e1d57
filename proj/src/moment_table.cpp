#include "kronstat/moment_table.hpp"

#include "json.hpp"
#include "kronstat/errors.hpp"

namespace kronstat {

namespace detail {
extern const char* const kMomentTableJson;
}

MomentTable parse_moment_table(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("moment table: ") + e.what());
  }
  const auto K = doc.at("max_order").get<std::size_t>();
  MomentTable table;
  table.terms.resize(K + 1);
  for (std::size_t k = 1; k <= K; ++k) {
    for (const auto& t : doc.at("orders").at(std::to_string(k))) {
      TableTerm term{t.at("coef").get<double>(), t.at("blocks").get<std::vector<std::size_t>>()};
      std::size_t total = 0;
      for (std::size_t b : term.blocks) total += b;
      if (total != k) {
        throw InputError("moment table: term of m(" + std::to_string(k) + ") has blocks summing to " +
                         std::to_string(total));
      }
      table.terms[k].push_back(std::move(term));
    }
  }
  return table;
}

const MomentTable& golden_moment_table() {
  static const MomentTable table = parse_moment_table(detail::kMomentTableJson);
  return table;
}

MomentSet moments_from_table(const CumulantSet& c, const MomentTable& table) {
  const std::size_t K = std::min(c.max_order(), table.max_order());
  MomentSet m(c.dim(), K);
  for (std::size_t k = 1; k <= K; ++k) {
    KronVector acc(c.dim(), k);
    for (const TableTerm& t : table.terms[k]) {
      KronVector prod = c[t.blocks.front()];
      for (std::size_t i = 1; i < t.blocks.size(); ++i) prod = kron_product(prod, c[t.blocks[i]]);
      acc += t.coef * symmetrize(prod);
    }
    m.set(k, std::move(acc));
  }
  return m;
}

}  // namespace kronstat
