#pragma once

#include "entrocausal/inequality_system.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace entrocausal {

class InvalidGenerator : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A permutation of system names; names not listed are fixed.
struct Permutation {
    std::map<std::string, std::string> image;

    const std::string& operator()(const std::string& name) const;
};

struct SymmetryGroup {
    std::vector<Permutation> generators;
};

// One generator per non-empty line in cycle notation, e.g.
//   (X0 X1)(Z0 Z1)
// '#' starts a comment. Throws InvalidGenerator on malformed cycles.
SymmetryGroup parse_generators(std::string_view text);
std::string format_generator(const Permutation& p);

// Column index permutation induced on entropy columns "H(a,b)" or "H(a|b)".
// Throws InvalidGenerator if an image column is missing.
std::vector<std::uint32_t> column_action(const std::vector<std::string>& columns, const Permutation& p);

Row permute(const Row& row, const std::vector<std::uint32_t>& action);

struct Orbit {
    Row representative;        // lexicographically smallest member
    std::vector<Row> members;  // rows of the system in the orbit, sorted
};

// Partitions the canonical rows of the system into orbits. Images of
// inequalities are reduced modulo the system's equalities before matching, so
// the partition is independent of how the equalities were written.
std::vector<Orbit> orbit_classify(const InequalitySystem& system, const SymmetryGroup& group);

// Every image of one row under the group, normalized, sorted.
std::vector<Row> row_orbit(const std::vector<std::string>& columns, const Row& row, const SymmetryGroup& group);

}  // namespace entrocausal
