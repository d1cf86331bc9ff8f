#pragma once

#include "entrocausal/inequality_system.hpp"
#include "entrocausal/rational.hpp"

#include <optional>
#include <vector>

namespace entrocausal {

// A row with rational data: terms . x + constant (>= 0 | = 0).
struct RationalRow {
    std::vector<std::pair<std::uint32_t, Rational>> terms;
    Rational constant = 0;
    Relation relation = Relation::GreaterEqual;
};

RationalRow to_rational(const Row& row);
Rational evaluate(const RationalRow& row, const std::vector<Rational>& point);

// Standard form: minimize c.u subject to M u = h, u >= 0.
struct StandardForm {
    std::size_t rows = 0;
    std::vector<std::vector<std::pair<std::uint32_t, Rational>>> columns;  // sparse, by row index
    std::vector<Rational> rhs;
    std::vector<Rational> cost;  // empty means all zero
};

struct LpSolution {
    enum class Status { Optimal, Infeasible, Unbounded };
    Status status = Status::Infeasible;
    std::vector<Rational> primal;  // Optimal / Unbounded: a feasible u
    std::vector<Rational> dual;    // Optimal: optimality multipliers; Infeasible: Farkas w with
                                   // M^T w <= 0 and h.w > 0
    std::vector<Rational> ray;     // Unbounded: r >= 0, M r = 0, c.r < 0
    Rational value = 0;
    bool exact_fallback = false;   // floating-point guide failed verification
};

// Floating-point revised simplex proposes a basis; the answer is recomputed
// and verified in exact arithmetic, with an exact simplex as fallback.
LpSolution solve_standard_form(const StandardForm& lp);

// Independent verification of a standard-form result.
bool verify_solution(const StandardForm& lp, const LpSolution& solution);

struct FeasibilityResult {
    bool feasible = false;
    std::vector<Rational> point;        // when feasible
    std::vector<Rational> multipliers;  // when infeasible: one per row (system rows, then extra)
};

FeasibilityResult lp_feasible(const InequalitySystem& system, const std::vector<RationalRow>& extra = {});

// Checks y >= 0 on inequality rows and sum_i y_i (row_i) == negative constant with zero terms.
bool verify_farkas(const InequalitySystem& system, const std::vector<RationalRow>& extra,
                   const std::vector<Rational>& multipliers);
bool verify_point(const InequalitySystem& system, const std::vector<RationalRow>& extra,
                  const std::vector<Rational>& point);

struct Implication {
    bool implied = false;
    bool system_infeasible = false;
    // candidate = sum_i multipliers_i * row_i + slack (slack >= 0 constant)
    std::vector<Rational> multipliers;
    Rational slack = 0;
};

// Whether every point of the system satisfies the candidate row.
Implication implies(const InequalitySystem& system, const Row& candidate);
Implication implies(const InequalitySystem& system, const RationalRow& candidate);
bool verify_implication(const InequalitySystem& system, const RationalRow& candidate,
                        const Implication& witness);

bool equal_cones(const InequalitySystem& a, const InequalitySystem& b);

struct Minimum {
    LpSolution::Status status = LpSolution::Status::Infeasible;
    Rational value = 0;
    std::vector<Rational> point;
};

Minimum minimize(const InequalitySystem& system, const std::vector<Rational>& objective);

}  // namespace entrocausal
