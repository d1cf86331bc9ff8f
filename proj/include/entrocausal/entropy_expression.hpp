#pragma once

#include "entrocausal/inequality_system.hpp"

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace entrocausal {

// Name of the column holding H(names): "H(a,b,c)" with names sorted.
std::string joint_column(const std::set<std::string>& names);

// Parses a linear entropy relation over joint-entropy columns, e.g.
//   "I(C:D,E,F) <= H(D)"
//   "H(X0,Z0) = H(X0) + H(Z0)"
//   "2*H(A|B) - I(A:B|C) >= 0"
// Atoms: H(list), H(list|list), I(list:list), I(list:list|list); lists are
// comma separated system names. Terms take optional integer factors.
// Throws std::invalid_argument on syntax errors or columns missing from the system.
Row parse_relation(std::string_view text, const std::vector<std::string>& columns);

// Elemental Shannon inequalities over every ground set whose nonempty subsets
// all appear as joint columns; only maximal such ground sets are expanded.
InequalitySystem shannon_cone(const std::vector<std::string>& columns);

// Rows of the system not implied by the Shannon cone over the same columns;
// inequalities are taken modulo the system's own equalities.
std::vector<Row> non_shannon_rows(const InequalitySystem& system);

// Systems named in a joint column "H(a,b)"; empty for anything else.
std::set<std::string> column_systems(const std::string& column);

}  // namespace entrocausal
