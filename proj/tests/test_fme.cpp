#include <doctest.h>

#include "entrocausal/fme.hpp"
#include "entrocausal/lp.hpp"

#include "properties.hpp"

#include <random>
#include <sstream>

using namespace entrocausal;

using testing_support::random_system;

namespace {

Row row(std::vector<Term> terms, std::int64_t constant = 0, Relation rel = Relation::GreaterEqual)
{
    Row r{std::move(terms), constant, rel};
    normalize(r);
    return r;
}

}  // namespace

TEST_CASE("eliminating an absent column leaves rows unchanged")
{
    InequalitySystem sys{{"a", "b", "z"}, {row({{0, 1}, {1, -1}}), row({{1, 2}}, 1)}};
    auto out = eliminate(sys, std::vector<std::size_t>{0, 1});
    CHECK(out.columns == std::vector<std::string>{"a", "b"});
    InequalitySystem expect{{"a", "b"}, sys.rows};
    CHECK(out == canonicalize(expect));
}

TEST_CASE("projection of a simple cone")
{
    // x - y >= 0, y - z >= 0  =>  x - z >= 0 after removing y
    InequalitySystem sys{{"x", "y", "z"}, {row({{0, 1}, {1, -1}}), row({{1, 1}, {2, -1}})}};
    auto out = eliminate(sys, std::vector<std::string>{"x", "z"});
    REQUIRE(out.rows.size() == 1);
    CHECK(out.rows[0] == row({{0, 1}, {1, -1}}));
}

TEST_CASE("equalities are substituted")
{
    // y = x + z, y >= 0, z >= 0 => x + z >= 0 and nothing else on {x, z}
    InequalitySystem sys{{"x", "y", "z"},
                         {row({{0, 1}, {1, -1}, {2, 1}}, 0, Relation::Equal), row({{1, 1}}), row({{2, 1}})}};
    EliminationStats stats;
    auto out = eliminate(sys, std::vector<std::size_t>{0, 2}, {}, &stats);
    CHECK(stats.substitutions == 1);
    CHECK(stats.eliminations == 0);
    InequalitySystem expect{{"x", "z"}, {row({{0, 1}, {1, 1}}), row({{1, 1}})}};
    CHECK(equal_cones(out, expect));
    CHECK(out.rows.size() == 2);
}

TEST_CASE("infeasible input projects to an infeasible system")
{
    InequalitySystem sys{{"x", "y"}, {row({{0, 1}, {1, 1}}, 1), row({{0, -1}, {1, -1}}, -2)}};
    auto out = eliminate(sys, std::vector<std::size_t>{0});
    CHECK_FALSE(lp_feasible(out).feasible);
}

TEST_CASE("row budget raises with a sound partial system")
{
    InequalitySystem sys{{"k", "e"}, {row({{0, 1}})}};
    for (int i = 1; i <= 6; ++i) {
        sys.rows.push_back(row({{0, i}, {1, 1}}, i));
        sys.rows.push_back(row({{0, i}, {1, -1}}, i * 2));
    }
    EliminationBudget budget;
    budget.max_rows = 4;
    try {
        eliminate(sys, std::vector<std::size_t>{0}, budget);
        FAIL("budget should be exceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(BudgetExceeded::sound_only);
        CHECK(e.partial().columns == std::vector<std::string>{"k"});
        for (const auto& r : e.partial().rows)
            CHECK(implies(eliminate(sys, std::vector<std::size_t>{0}), r).implied);
    }
}

TEST_CASE("redundancy removal keeps one of two duplicates")
{
    InequalitySystem sys{{"x", "y"}, {row({{0, 1}}), row({{1, 1}}), row({{0, 1}, {1, 1}}), row({{0, 2}, {1, 1}})}};
    std::size_t removed = 0;
    auto out = remove_redundant(sys, 1, &removed);
    CHECK(removed == 2);
    CHECK(out.rows.size() == 2);
    CHECK(equal_cones(out, sys));
}

TEST_CASE("projection agrees with an LP oracle on random systems")
{
    auto report = testing_support::fme_vs_lp_suite(200);
    CHECK(report.cases == 200);
    CHECK_MESSAGE(report.ok(), report.first_failure);
}

TEST_CASE("canonicalization is idempotent and TSV round-trips")
{
    std::mt19937 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        auto sys = random_system(rng, 5, 8, trial % 2 == 0);
        auto once = canonicalize(sys);
        CHECK(canonicalize(once) == once);
        std::stringstream ss;
        write_tsv(ss, once);
        CHECK(read_tsv(ss) == once);
    }
}

TEST_CASE("threaded redundancy removal matches the sequential result")
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto sys = random_system(rng, 4, 12, true);
        CHECK(remove_redundant(sys, 4) == remove_redundant(sys, 1));
    }
}
