#pragma once

// The explicit moment-in-terms-of-cumulants table for orders 1..6, shipped as
// data/moment_cumulant_table.json and compiled into the library.

#include <cstddef>
#include <string>
#include <vector>

#include "kronstat/cumulants.hpp"

namespace kronstat {

struct TableTerm {
  double coef;
  /// Cumulant orders of the Kronecker factors, in decreasing order.
  std::vector<std::size_t> blocks;
};

/// terms[k] lists the terms of m(k); terms[0] is empty.
struct MomentTable {
  std::vector<std::vector<TableTerm>> terms;

  std::size_t max_order() const { return terms.empty() ? 0 : terms.size() - 1; }
};

/// The compiled-in golden table.
const MomentTable& golden_moment_table();

MomentTable parse_moment_table(const std::string& json_text);

/// m(k) = Σ coef · Sym(c(b1) ⊗ c(b2) ⊗ ...), k = 1..min(K, table order).
MomentSet moments_from_table(const CumulantSet& c, const MomentTable& table);

}  // namespace kronstat
