#pragma once

#include "entrocausal/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace entrocausal {

enum class Relation { GreaterEqual, Equal };

using Term = std::pair<std::uint32_t, std::int64_t>;

// terms . x + constant  (>= 0 | = 0), terms sorted by column, no zeros.
struct Row {
    std::vector<Term> terms;
    std::int64_t constant = 0;
    Relation relation = Relation::GreaterEqual;

    bool empty() const { return terms.empty(); }
    std::int64_t coefficient(std::uint32_t column) const;
    auto operator<=>(const Row&) const = default;
};

struct InequalitySystem {
    std::vector<std::string> columns;
    std::vector<Row> rows;

    std::size_t width() const { return columns.size(); }
    std::size_t column(const std::string& name) const;  // throws std::out_of_range
    bool operator==(const InequalitySystem&) const = default;
};

class CoefficientOverflow : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

// Merges duplicate columns, drops zeros, divides by the gcd of all entries and
// makes the first coefficient of an equality positive.
void normalize(Row& row);

// Builds an integer row from rational coefficients (scaled by the lcm of denominators).
Row make_row(const std::map<std::uint32_t, Rational>& coefficients, const Rational& constant,
             Relation relation);

// Row for an all-zero left-hand side that is trivially satisfied.
bool trivially_true(const Row& row);
// Row with no terms that can never hold (e.g. 0 >= 1).
bool contradictory(const Row& row);

Rational evaluate(const Row& row, const std::vector<Rational>& point);
bool satisfied(const Row& row, const std::vector<Rational>& point);

// Canonical form: equalities in reduced echelon form (pivot = highest column,
// positive), inequalities reduced modulo the equalities, all rows normalized,
// sorted and deduplicated, trivially true rows dropped.
InequalitySystem canonicalize(const InequalitySystem& system);

// "+1*H(X) -1*H(X,Y) >= 0"
std::string format_row(const std::vector<std::string>& columns, const Row& row);

// Matrix layout: header "rel<TAB>col1<TAB>col2...", one line per row with the
// relation marker (">=" or "=") followed by integer coefficients; a nonzero
// constant is written as a trailing "const" column.
void write_tsv(std::ostream& out, const InequalitySystem& system);
InequalitySystem read_tsv(std::istream& in);

std::vector<std::int64_t> dense(const Row& row, std::size_t width);

}  // namespace entrocausal
