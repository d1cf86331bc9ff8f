#include <doctest.h>

#include "entrocausal/lp.hpp"

#include <random>

using namespace entrocausal;

namespace {

Row row(std::vector<Term> terms, std::int64_t constant = 0, Relation rel = Relation::GreaterEqual)
{
    return Row{std::move(terms), constant, rel};
}

// Vertex enumeration over a bounded two-variable system: every pair of rows
// taken as tight, solved by Cramer's rule, kept if feasible.
std::optional<Rational> vertex_minimum(const InequalitySystem& sys, const std::vector<Rational>& objective)
{
    std::optional<Rational> best;
    const auto& rows = sys.rows;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            Rational a = rows[i].coefficient(0), b = rows[i].coefficient(1);
            Rational c = rows[j].coefficient(0), d = rows[j].coefficient(1);
            Rational det = a * d - b * c;
            if (det == 0)
                continue;
            Rational e = -rows[i].constant, f = -rows[j].constant;
            std::vector<Rational> p{(e * d - b * f) / det, (a * f - e * c) / det};
            bool ok = true;
            for (const auto& r : rows)
                ok = ok && satisfied(r, p);
            if (!ok)
                continue;
            Rational v = objective[0] * p[0] + objective[1] * p[1];
            if (!best || v < *best)
                best = v;
        }
    return best;
}

}  // namespace

TEST_CASE("contradictory pair yields a unit Farkas certificate")
{
    InequalitySystem sys{{"x"}, {row({{0, 1}}), row({{0, -1}}, -1)}};
    auto r = lp_feasible(sys);
    CHECK_FALSE(r.feasible);
    REQUIRE(r.multipliers.size() == 2);
    CHECK(r.multipliers[0] == r.multipliers[1]);
    CHECK(r.multipliers[0] > 0);
    CHECK(verify_farkas(sys, {}, r.multipliers));
    CHECK_FALSE(verify_farkas(sys, {}, {Rational(1), Rational(2)}));
}

TEST_CASE("empty system is feasible at the origin")
{
    InequalitySystem sys{{"x", "y"}, {}};
    auto r = lp_feasible(sys);
    CHECK(r.feasible);
    CHECK(r.point == std::vector<Rational>{0, 0});
}

TEST_CASE("extra rows and equalities in feasibility")
{
    InequalitySystem sys{{"x", "y"}, {row({{0, 1}, {1, 1}}, -3, Relation::Equal), row({{1, 1}})}};
    RationalRow bound{{{0, Rational(1)}}, Rational(-5), Relation::GreaterEqual};
    auto r = lp_feasible(sys, {bound});
    CHECK_FALSE(r.feasible);
    CHECK(verify_farkas(sys, {bound}, r.multipliers));
    bound.constant = -2;
    auto s = lp_feasible(sys, {bound});
    REQUIRE(s.feasible);
    CHECK(s.point[0] + s.point[1] == 3);
    CHECK(s.point[0] >= 2);
}

TEST_CASE("Shannon cone on two variables implies monotonicity")
{
    // columns H(X), H(Y), H(X,Y)
    InequalitySystem sys{{"H(X)", "H(Y)", "H(X,Y)"},
                         {row({{2, 1}, {1, -1}}), row({{2, 1}, {0, -1}}),
                          row({{0, 1}, {1, 1}, {2, -1}})}};
    auto imp = implies(sys, row({{2, 1}, {0, -1}}));
    CHECK(imp.implied);
    auto sum = implies(sys, row({{0, 1}, {1, 1}, {2, -1}}));
    CHECK(sum.implied);
    // H(X) >= 0 follows from H(XY) >= H(Y) and H(X)+H(Y) >= H(XY).
    auto pos = implies(sys, row({{0, 1}}));
    CHECK(pos.implied);
    CHECK(verify_implication(sys, to_rational(row({{0, 1}})), pos));
    CHECK_FALSE(implies(sys, row({{0, 1}, {1, -1}})).implied);
}

TEST_CASE("a cone does not imply an affine bound")
{
    InequalitySystem sys{{"x"}, {row({{0, 1}})}};
    CHECK_FALSE(implies(sys, row({{0, 1}}, -1)).implied);
    CHECK(implies(sys, row({{0, 1}}, 1)).implied);
    auto eq = implies(InequalitySystem{{"x"}, {row({{0, 1}}, -2, Relation::Equal)}},
                      row({{0, 2}}, -4, Relation::Equal));
    CHECK(eq.implied);
}

TEST_CASE("infeasible systems imply everything")
{
    InequalitySystem sys{{"x"}, {row({{0, 1}}, 1, Relation::Equal), row({{0, 1}})}};
    CHECK(implies(sys, row({{0, 1}}, -100)).implied);
    CHECK(implies(sys, row({{0, -1}}, -100)).implied);
    CHECK_FALSE(lp_feasible(sys).feasible);
}

TEST_CASE("equal_cones compares generated sets")
{
    InequalitySystem a{{"x", "y"}, {row({{0, 1}}), row({{1, 1}})}};
    InequalitySystem b{{"x", "y"}, {row({{0, 1}}), row({{1, 1}}), row({{0, 1}, {1, 1}})}};
    CHECK(equal_cones(a, b));
    b.rows.push_back(row({{0, 1}, {1, -1}}));
    CHECK_FALSE(equal_cones(a, b));
}

TEST_CASE("minimize reports optimal, unbounded and infeasible")
{
    InequalitySystem sys{{"x"}, {row({{0, 1}}, -2)}};
    auto m = minimize(sys, {Rational(1)});
    CHECK(m.status == LpSolution::Status::Optimal);
    CHECK(m.value == 2);
    CHECK(m.point == std::vector<Rational>{2});
    CHECK(minimize(sys, {Rational(-1)}).status == LpSolution::Status::Unbounded);
    sys.rows.push_back(row({{0, -1}}, 1));
    CHECK(minimize(sys, {Rational(1)}).status == LpSolution::Status::Infeasible);
}

TEST_CASE("random bounded planar programs match vertex enumeration")
{
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coef(-5, 5);
    int optimal = 0;
    for (int trial = 0; trial < 300; ++trial) {
        InequalitySystem sys{{"x", "y"}, {}};
        // Box keeps everything bounded.
        sys.rows.push_back(row({{0, 1}}, 10));
        sys.rows.push_back(row({{0, -1}}, 10));
        sys.rows.push_back(row({{1, 1}}, 10));
        sys.rows.push_back(row({{1, -1}}, 10));
        int extra = 1 + trial % 6;
        for (int k = 0; k < extra; ++k) {
            Row r = row({{0, coef(rng)}, {1, coef(rng)}}, coef(rng) * 3);
            normalize(r);
            sys.rows.push_back(r);
        }
        std::vector<Rational> objective{Rational(coef(rng)), Rational(coef(rng))};
        auto oracle = vertex_minimum(sys, objective);
        auto m = minimize(sys, objective);
        auto f = lp_feasible(sys);
        CHECK(f.feasible == oracle.has_value());
        if (!oracle) {
            CHECK(m.status == LpSolution::Status::Infeasible);
            CHECK(verify_farkas(sys, {}, f.multipliers));
            continue;
        }
        ++optimal;
        REQUIRE(m.status == LpSolution::Status::Optimal);
        CHECK(m.value == *oracle);
        for (const auto& r : sys.rows)
            CHECK(satisfied(r, m.point));
        CHECK(objective[0] * m.point[0] + objective[1] * m.point[1] == m.value);
    }
    CHECK(optimal > 100);
}

TEST_CASE("standard form results verify independently")
{
    // min -u0 - u1 s.t. u0 + u2 = 4, u1 + u3 = 3, u0 + u1 + u4 = 5
    StandardForm lp;
    lp.rows = 3;
    lp.columns = {{{0, 1}, {2, 1}}, {{1, 1}, {2, 1}}, {{0, 1}}, {{1, 1}}, {{2, 1}}};
    lp.rhs = {4, 3, 5};
    lp.cost = {-1, -1, 0, 0, 0};
    auto s = solve_standard_form(lp);
    REQUIRE(s.status == LpSolution::Status::Optimal);
    CHECK(s.value == -5);
    CHECK(verify_solution(lp, s));
    auto tampered = s;
    tampered.value = -6;
    CHECK_FALSE(verify_solution(lp, tampered));

    lp.cost = {-1, 0, 0, 0, 0};
    lp.columns[4] = {{2, -1}};  // drops the third cap: u0 + u1 - u4 = 5
    lp.columns[0] = {{2, 1}};   // u0 no longer capped by row 0
    auto u = solve_standard_form(lp);
    CHECK(u.status == LpSolution::Status::Unbounded);
    CHECK(verify_solution(lp, u));
}
