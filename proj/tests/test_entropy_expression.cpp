#include <doctest.h>

#include "entrocausal/entropy_expression.hpp"
#include "entrocausal/lp.hpp"

#include <stdexcept>

using namespace entrocausal;

namespace {

std::vector<std::string> all_joints(const std::vector<std::string>& names)
{
    std::vector<std::string> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << names.size()); ++mask) {
        std::set<std::string> s;
        for (std::size_t k = 0; k < names.size(); ++k)
            if (mask >> k & 1)
                s.insert(names[k]);
        out.push_back(joint_column(s));
    }
    return out;
}

}  // namespace

TEST_CASE("joint column names are sorted and parse back")
{
    CHECK(joint_column({"b", "a", "c"}) == "H(a,b,c)");
    CHECK(column_systems("H(a,b,c)") == std::set<std::string>{"a", "b", "c"});
    CHECK(column_systems("H(a|b)").empty());
    CHECK(column_systems("x").empty());
}

TEST_CASE("relations expand into joint entropies")
{
    auto cols = all_joints({"A", "B", "C"});
    auto col = [&](const std::string& n) {
        return static_cast<std::uint32_t>(std::find(cols.begin(), cols.end(), n) - cols.begin());
    };

    // I(A:B|C) >= 0 is H(A,C) + H(B,C) - H(A,B,C) - H(C) >= 0
    Row cmi = parse_relation("I(A:B|C) >= 0", cols);
    Row expected = make_row({{col("H(A,C)"), 1}, {col("H(B,C)"), 1}, {col("H(A,B,C)"), -1}, {col("H(C)"), -1}}, 0,
                            Relation::GreaterEqual);
    CHECK(cmi == expected);

    // Both orientations give the same row.
    CHECK(parse_relation("H(A|B) <= H(A)", cols) == parse_relation("H(A) >= H(A|B)", cols));
    CHECK(parse_relation("H(A) - H(A|B) >= 0", cols) == parse_relation("I(A:B) >= 0", cols));

    Row eq = parse_relation("H(A,B) = H(A) + H(B)", cols);
    CHECK(eq.relation == Relation::Equal);
    CHECK(eq.terms.size() == 3);

    Row scaled = parse_relation("2*H(A) >= H(B) + 1", cols);
    CHECK(scaled.constant != 0);
    CHECK(parse_relation("2H(A) >= 0", cols) == parse_relation("H(A) >= 0", cols));

    CHECK_THROWS_AS(parse_relation("H(A) >> 0", cols), std::invalid_argument);
    CHECK_THROWS_AS(parse_relation("H(D) >= 0", cols), std::invalid_argument);
    CHECK_THROWS_AS(parse_relation("I(A,B) >= 0", cols), std::invalid_argument);
    CHECK_THROWS_AS(parse_relation("H(A) >= 0 junk", cols), std::invalid_argument);
}

TEST_CASE("elemental Shannon inequalities have the textbook count")
{
    // n + C(n,2) 2^(n-2)
    CHECK(shannon_cone(all_joints({"A", "B"})).rows.size() == 3);
    CHECK(shannon_cone(all_joints({"A", "B", "C"})).rows.size() == 9);
    CHECK(shannon_cone(all_joints({"A", "B", "C", "D"})).rows.size() == 28);

    // Two disjoint ground sets with no joint columns across them.
    std::vector<std::string> cols = all_joints({"A", "B"});
    for (const auto& c : all_joints({"X", "Y"}))
        cols.push_back(c);
    CHECK(shannon_cone(cols).rows.size() == 6);
}

TEST_CASE("Shannon cone implies the standard consequences")
{
    auto cols = all_joints({"A", "B", "C"});
    auto cone = shannon_cone(cols);
    for (const char* text : {"H(A) >= 0", "I(A:B) >= 0", "H(A,B) <= H(A) + H(B)", "H(A,B,C) >= H(A,B)",
                             "I(A:B,C) >= I(A:B)", "H(A|B,C) <= H(A)"})
        CHECK_MESSAGE(implies(cone, parse_relation(text, cols)).implied, text);
    CHECK_FALSE(implies(cone, parse_relation("I(A:B) >= I(A:B|C)", cols)).implied);
    CHECK_FALSE(implies(cone, parse_relation("H(A) <= H(B)", cols)).implied);
}

TEST_CASE("non-Shannon rows are judged modulo the system's equalities")
{
    auto cols = all_joints({"A", "B", "C"});
    InequalitySystem sys;
    sys.columns = cols;
    sys.rows = shannon_cone(cols).rows;
    Row independent = parse_relation("I(A:B) = 0", cols);
    // Under I(A:B) = 0 this follows from I(A:B|C) >= 0; on its own it does not.
    Row consequence = parse_relation("I(A:B|C) >= I(A:B)", cols);
    Row extra = parse_relation("H(C) <= H(A)", cols);
    sys.rows.push_back(independent);
    sys.rows.push_back(consequence);
    sys.rows.push_back(extra);

    auto rows = non_shannon_rows(sys);
    REQUIRE(rows.size() == 2);
    CHECK(std::find(rows.begin(), rows.end(), independent) != rows.end());
    CHECK(std::find(rows.begin(), rows.end(), extra) != rows.end());
}
