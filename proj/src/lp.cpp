#include "entrocausal/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

namespace entrocausal {

RationalRow to_rational(const Row& row)
{
    RationalRow r;
    for (const auto& [c, v] : row.terms)
        r.terms.emplace_back(c, Rational(static_cast<long>(v)));
    r.constant = Rational(static_cast<long>(row.constant));
    r.relation = row.relation;
    return r;
}

Rational evaluate(const RationalRow& row, const std::vector<Rational>& point)
{
    Rational v = row.constant;
    for (const auto& [c, a] : row.terms)
        v += a * point.at(c);
    return v;
}

namespace {

using SparseQ = std::vector<std::pair<std::uint32_t, Rational>>;

// ---------------------------------------------------------------------------
// Number traits for the templated simplex.

template <class T>
struct Num;

template <>
struct Num<double> {
    static constexpr bool exact = false;
    static double from(const Rational& q) { return q.get_d(); }
    static bool positive(double x) { return x > 1e-9; }
    static bool negative(double x) { return x < -1e-9; }
    static bool zero(double x) { return std::fabs(x) <= 1e-9; }
};

template <>
struct Num<Rational> {
    static constexpr bool exact = true;
    static Rational from(const Rational& q) { return q; }
    static bool positive(const Rational& x) { return sgn(x) > 0; }
    static bool negative(const Rational& x) { return sgn(x) < 0; }
    static bool zero(const Rational& x) { return sgn(x) == 0; }
};

// Revised simplex with a dense basis inverse. Rows with negative right-hand
// side are negated so that the artificial basis starts feasible; artificial
// variable i (index N + i) is the unit column e_i of the negated system.
template <class T>
class Simplex {
public:
    enum class Outcome { Optimal, Infeasible, Unbounded, GaveUp };

    explicit Simplex(const StandardForm& lp) : m_(lp.rows), n_(lp.columns.size())
    {
        sign_.assign(m_, 1);
        h_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            if (sgn(lp.rhs[i]) < 0)
                sign_[i] = -1;
            h_[i] = Num<T>::from(sign_[i] < 0 ? Rational(-lp.rhs[i]) : lp.rhs[i]);
        }
        cols_.resize(n_);
        for (std::size_t j = 0; j < n_; ++j)
            for (const auto& [i, v] : lp.columns[j])
                cols_[j].emplace_back(i, Num<T>::from(sign_[i] < 0 ? Rational(-v) : v));
        cost_.assign(n_, T(0));
        if (!lp.cost.empty())
            for (std::size_t j = 0; j < n_; ++j)
                cost_[j] = Num<T>::from(lp.cost[j]);
    }

    Outcome run(std::size_t max_iterations, double perturb = 0)
    {
        max_iterations_ = max_iterations;
        basis_.resize(m_);
        position_.assign(n_ + m_, -1);
        binv_.assign(m_ * m_, T(0));
        const std::vector<T> original = h_;
        if (perturb > 0) {
            // Phase one on a perturbed right-hand side avoids stalling on the
            // highly degenerate combination problems; the perturbation is
            // removed before the infeasibility test.
            std::mt19937 rng(12345);
            std::uniform_real_distribution<double> jitter(perturb, 2 * perturb);
            for (auto& x : h_)
                x += jitter(rng);
        }
        xb_ = h_;
        for (std::size_t i = 0; i < m_; ++i) {
            basis_[i] = n_ + i;
            position_[n_ + i] = static_cast<int>(i);
            binv_[i * m_ + i] = T(1);
        }
        phase_ = 1;
        Outcome o = iterate();
        if (o == Outcome::GaveUp)
            return o;
        if constexpr (!Num<T>::exact) {
            h_ = original;
            refactor();
            if (broken_)
                return Outcome::GaveUp;
        }
        T infeasibility(0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] >= n_)
                infeasibility += xb_[i];
        if (Num<T>::positive(infeasibility))
            return Outcome::Infeasible;
        drive_out_artificials();
        phase_ = 2;
        return iterate();
    }

    const std::vector<std::size_t>& basis() const { return basis_; }
    const std::vector<int>& sign() const { return sign_; }
    std::size_t entering() const { return entering_; }

private:
    T cost(std::size_t j) const
    {
        if (phase_ == 1)
            return j >= n_ ? T(1) : T(0);
        return j >= n_ ? T(0) : cost_[j];
    }

    std::vector<T> duals() const
    {
        std::vector<T> pi(m_, T(0));
        for (std::size_t i = 0; i < m_; ++i) {
            T cb = cost(basis_[i]);
            if (Num<T>::zero(cb) && !(Num<T>::exact && cb != 0))
                continue;
            const T* row = &binv_[i * m_];
            for (std::size_t k = 0; k < m_; ++k)
                pi[k] += cb * row[k];
        }
        return pi;
    }

    std::vector<T> ftran(std::size_t j) const
    {
        std::vector<T> alpha(m_, T(0));
        if (j >= n_) {
            std::size_t k = j - n_;
            for (std::size_t i = 0; i < m_; ++i)
                alpha[i] = binv_[i * m_ + k];
            return alpha;
        }
        for (const auto& [k, v] : cols_[j])
            for (std::size_t i = 0; i < m_; ++i) {
                const T& b = binv_[i * m_ + k];
                if (!(b == T(0)))
                    alpha[i] += b * v;
            }
        return alpha;
    }

    void pivot(std::size_t r, std::size_t j, const std::vector<T>& alpha)
    {
        T theta = xb_[r] / alpha[r];
        for (std::size_t i = 0; i < m_; ++i)
            if (i != r && !(alpha[i] == T(0)))
                xb_[i] -= theta * alpha[i];
        xb_[r] = theta;
        T inv = T(1) / alpha[r];
        T* prow = &binv_[r * m_];
        for (std::size_t k = 0; k < m_; ++k)
            if (!(prow[k] == T(0)))
                prow[k] *= inv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r || alpha[i] == T(0))
                continue;
            T f = alpha[i];
            T* row = &binv_[i * m_];
            for (std::size_t k = 0; k < m_; ++k)
                if (!(prow[k] == T(0)))
                    row[k] -= f * prow[k];
        }
        position_[basis_[r]] = -1;
        basis_[r] = j;
        position_[j] = static_cast<int>(r);
        if constexpr (!Num<T>::exact) {
            if (++since_refactor_ >= 60)
                refactor();
        }
    }

    void refactor()
    {
        if constexpr (!Num<T>::exact) {
            since_refactor_ = 0;
            Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_, m_);
            for (std::size_t i = 0; i < m_; ++i) {
                std::size_t j = basis_[i];
                if (j >= n_)
                    b(j - n_, i) = 1.0;
                else
                    for (const auto& [k, v] : cols_[j])
                        b(k, i) = v;
            }
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
            Eigen::MatrixXd inv = lu.inverse();
            if (!inv.allFinite()) {
                broken_ = true;
                return;
            }
            for (std::size_t i = 0; i < m_; ++i)
                for (std::size_t k = 0; k < m_; ++k)
                    binv_[i * m_ + k] = inv(i, k);
            for (std::size_t i = 0; i < m_; ++i) {
                double v = 0;
                for (std::size_t k = 0; k < m_; ++k)
                    v += inv(i, k) * h_[k];
                xb_[i] = std::fabs(v) < 1e-12 ? 0.0 : v;
            }
        }
    }

    Outcome iterate()
    {
        bool bland = false;
        std::size_t degenerate_run = 0;
        for (;;) {
            if (broken_ || ++iterations_ > max_iterations_)
                return Outcome::GaveUp;
            auto pi = duals();
            std::size_t enter = n_;
            T best(0);
            for (std::size_t j = 0; j < n_; ++j) {
                if (position_[j] >= 0)
                    continue;
                T d = cost(j);
                for (const auto& [k, v] : cols_[j])
                    d -= pi[k] * v;
                if (!Num<T>::negative(d))
                    continue;
                if (bland) {
                    enter = j;
                    break;
                }
                if (enter == n_ || d < best) {
                    enter = j;
                    best = d;
                }
            }
            if (enter == n_)
                return Outcome::Optimal;
            auto alpha = ftran(enter);
            std::size_t leave = m_;
            T best_ratio(0);
            for (std::size_t i = 0; i < m_; ++i) {
                // A zero-level artificial left in the basis must stay at zero.
                bool pinned = phase_ == 2 && basis_[i] >= n_ && !Num<T>::zero(alpha[i]);
                if (!pinned && !Num<T>::positive(alpha[i]))
                    continue;
                T ratio = pinned ? T(0) : xb_[i] / alpha[i];
                bool better = leave == m_;
                if (!better) {
                    if constexpr (Num<T>::exact) {
                        better = ratio < best_ratio
                                 || (ratio == best_ratio && basis_[i] < basis_[leave]);
                    } else {
                        better = ratio < best_ratio - 1e-12
                                 || (ratio <= best_ratio + 1e-12
                                     && (bland ? basis_[i] < basis_[leave]
                                               : std::fabs(alpha[i]) > std::fabs(alpha[leave])));
                    }
                }
                if (better) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == m_) {
                entering_ = enter;
                return Outcome::Unbounded;
            }
            if (Num<T>::zero(best_ratio)) {
                if (++degenerate_run > 30)
                    bland = true;
            } else {
                degenerate_run = 0;
            }
            pivot(leave, enter, alpha);
            if constexpr (!Num<T>::exact) {
                for (auto& x : xb_)
                    if (x < 0 && x > -1e-9)
                        x = 0;
            }
        }
    }

    void drive_out_artificials()
    {
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < n_)
                continue;
            const T* row = &binv_[r * m_];
            for (std::size_t j = 0; j < n_; ++j) {
                if (position_[j] >= 0)
                    continue;
                T a(0);
                for (const auto& [k, v] : cols_[j])
                    a += row[k] * v;
                bool usable;
                if constexpr (Num<T>::exact)
                    usable = a != 0;
                else
                    usable = std::fabs(a) > 1e-7;
                if (usable) {
                    pivot(r, j, ftran(j));
                    break;
                }
            }
        }
    }

    std::size_t m_, n_;
    std::vector<int> sign_;
    std::vector<T> h_;
    std::vector<std::vector<std::pair<std::uint32_t, T>>> cols_;
    std::vector<T> cost_;
    std::vector<std::size_t> basis_;
    std::vector<int> position_;
    std::vector<T> binv_;
    std::vector<T> xb_;
    int phase_ = 1;
    std::size_t iterations_ = 0;
    std::size_t max_iterations_ = 0;
    std::size_t since_refactor_ = 0;
    std::size_t entering_ = 0;
    bool broken_ = false;
};

// ---------------------------------------------------------------------------
// Exact sparse solve of a square system given by columns.

// Solves A x = rhs where column k of A is cols[k] (transpose=false), or
// A^T x = rhs (transpose=true). Returns nullopt when singular.
std::optional<std::vector<Rational>> sparse_solve(const std::vector<SparseQ>& cols,
                                                  std::vector<Rational> rhs, bool transpose)
{
    const std::size_t m = cols.size();
    std::vector<std::map<std::uint32_t, Rational>> rows(m);
    for (std::size_t k = 0; k < m; ++k)
        for (const auto& [i, v] : cols[k]) {
            if (v == 0)
                continue;
            if (transpose)
                rows[k][i] = v;
            else
                rows[i][static_cast<std::uint32_t>(k)] = v;
        }
    std::vector<std::set<std::uint32_t>> col_rows(m);
    for (std::size_t i = 0; i < m; ++i)
        for (const auto& [c, v] : rows[i])
            col_rows[c].insert(static_cast<std::uint32_t>(i));

    std::vector<bool> row_done(m, false), col_done(m, false);
    std::vector<std::pair<std::size_t, std::size_t>> order;
    for (std::size_t step = 0; step < m; ++step) {
        std::size_t best_col = m;
        for (std::size_t c = 0; c < m; ++c)
            if (!col_done[c] && (best_col == m || col_rows[c].size() < col_rows[best_col].size()))
                best_col = c;
        if (best_col == m || col_rows[best_col].empty())
            return std::nullopt;
        std::size_t best_row = m;
        for (auto r : col_rows[best_col])
            if (best_row == m || rows[r].size() < rows[best_row].size())
                best_row = r;
        const auto pivot_row = rows[best_row];
        const Rational pivot = pivot_row.at(static_cast<std::uint32_t>(best_col));
        std::vector<std::uint32_t> targets(col_rows[best_col].begin(), col_rows[best_col].end());
        for (auto r : targets) {
            if (r == best_row)
                continue;
            Rational f = rows[r].at(static_cast<std::uint32_t>(best_col)) / pivot;
            for (const auto& [c, v] : pivot_row) {
                auto& slot = rows[r][c];
                slot -= f * v;
                if (slot == 0) {
                    rows[r].erase(c);
                    col_rows[c].erase(r);
                } else {
                    col_rows[c].insert(r);
                }
            }
            rhs[r] -= f * rhs[best_row];
        }
        row_done[best_row] = true;
        col_done[best_col] = true;
        for (const auto& [c, v] : pivot_row)
            col_rows[c].erase(static_cast<std::uint32_t>(best_row));
        order.emplace_back(best_row, best_col);
    }
    std::vector<Rational> x(m);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        auto [r, c] = *it;
        Rational v = rhs[r];
        for (const auto& [k, a] : rows[r])
            if (k != c)
                v -= a * x[k];
        x[c] = v / rows[r].at(static_cast<std::uint32_t>(c));
    }
    return x;
}

Rational column_dot(const SparseQ& col, const std::vector<Rational>& w)
{
    Rational s = 0;
    for (const auto& [i, v] : col)
        s += v * w[i];
    return s;
}

// Rebuilds an exact solution from a basis reported by either simplex.
std::optional<LpSolution> reconstruct(const StandardForm& lp, const std::vector<std::size_t>& basis,
                                      std::size_t entering, int outcome)
{
    const std::size_t m = lp.rows, n = lp.columns.size();
    std::vector<SparseQ> bcols(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t j = basis[i];
        if (j >= n) {
            // Artificial for row j-n; its sign follows the row orientation.
            Rational s = sgn(lp.rhs[j - n]) < 0 ? -1 : 1;
            bcols[i] = {{static_cast<std::uint32_t>(j - n), s}};
        } else {
            bcols[i] = lp.columns[j];
        }
    }
    auto cost = [&](std::size_t j) -> Rational {
        if (j >= n || lp.cost.empty())
            return 0;
        return lp.cost[j];
    };

    LpSolution sol;
    if (outcome == 1) {
        // Phase-one optimum with positive infeasibility: duals of the phase-one costs.
        std::vector<Rational> cb(m);
        for (std::size_t i = 0; i < m; ++i)
            cb[i] = basis[i] >= n ? Rational(1) : Rational(0);
        auto w = sparse_solve(bcols, cb, true);
        if (!w)
            return std::nullopt;
        sol.status = LpSolution::Status::Infeasible;
        sol.dual = std::move(*w);
        return sol;
    }

    auto ub = sparse_solve(bcols, lp.rhs, false);
    if (!ub)
        return std::nullopt;
    sol.primal.assign(n, 0);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t j = basis[i];
        if (j >= n) {
            if ((*ub)[i] != 0)
                return std::nullopt;
        } else {
            sol.primal[j] = (*ub)[i];
        }
    }
    if (outcome == 0) {
        std::vector<Rational> cb(m);
        for (std::size_t i = 0; i < m; ++i)
            cb[i] = cost(basis[i]);
        auto pi = sparse_solve(bcols, cb, true);
        if (!pi)
            return std::nullopt;
        sol.status = LpSolution::Status::Optimal;
        sol.dual = std::move(*pi);
        sol.value = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (sol.primal[j] != 0)
                sol.value += cost(j) * sol.primal[j];
        return sol;
    }
    // Unbounded: direction along the entering column.
    auto d = sparse_solve(bcols, std::vector<Rational>(m, 0), false);
    std::vector<Rational> rhs(m, 0);
    for (const auto& [i, v] : lp.columns[entering])
        rhs[i] = v;
    auto dir = sparse_solve(bcols, rhs, false);
    if (!dir)
        return std::nullopt;
    sol.status = LpSolution::Status::Unbounded;
    sol.ray.assign(n, 0);
    sol.ray[entering] = 1;
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t j = basis[i];
        if (j >= n) {
            if ((*dir)[i] != 0)
                return std::nullopt;
        } else {
            sol.ray[j] = -(*dir)[i];
        }
    }
    (void)d;
    return sol;
}

template <class T>
std::optional<LpSolution> run_simplex(const StandardForm& lp, std::size_t max_iterations, double perturb = 0)
{
    Simplex<T> simplex(lp);
    auto outcome = simplex.run(max_iterations, perturb);
    int code;
    switch (outcome) {
    case Simplex<T>::Outcome::Optimal: code = 0; break;
    case Simplex<T>::Outcome::Infeasible: code = 1; break;
    case Simplex<T>::Outcome::Unbounded: code = 2; break;
    default: return std::nullopt;
    }
    return reconstruct(lp, simplex.basis(), simplex.entering(), code);
}

}  // namespace

bool verify_solution(const StandardForm& lp, const LpSolution& s)
{
    const std::size_t m = lp.rows, n = lp.columns.size();
    auto cost = [&](std::size_t j) -> Rational { return lp.cost.empty() ? Rational(0) : lp.cost[j]; };
    auto feasible = [&](const std::vector<Rational>& u, const std::vector<Rational>& h) {
        if (u.size() != n)
            return false;
        std::vector<Rational> mu(m, 0);
        for (std::size_t j = 0; j < n; ++j) {
            if (sgn(u[j]) < 0)
                return false;
            if (u[j] != 0)
                for (const auto& [i, v] : lp.columns[j])
                    mu[i] += v * u[j];
        }
        for (std::size_t i = 0; i < m; ++i)
            if (mu[i] != h[i])
                return false;
        return true;
    };
    switch (s.status) {
    case LpSolution::Status::Optimal: {
        if (!feasible(s.primal, lp.rhs) || s.dual.size() != m)
            return false;
        for (std::size_t j = 0; j < n; ++j)
            if (cost(j) - column_dot(lp.columns[j], s.dual) < 0)
                return false;
        Rational primal_value = 0, dual_value = 0;
        for (std::size_t j = 0; j < n; ++j)
            primal_value += cost(j) * s.primal[j];
        for (std::size_t i = 0; i < m; ++i)
            dual_value += lp.rhs[i] * s.dual[i];
        return primal_value == dual_value && primal_value == s.value;
    }
    case LpSolution::Status::Infeasible: {
        if (s.dual.size() != m)
            return false;
        for (std::size_t j = 0; j < n; ++j)
            if (column_dot(lp.columns[j], s.dual) > 0)
                return false;
        Rational hw = 0;
        for (std::size_t i = 0; i < m; ++i)
            hw += lp.rhs[i] * s.dual[i];
        return hw > 0;
    }
    case LpSolution::Status::Unbounded: {
        if (!feasible(s.primal, lp.rhs) || !feasible(s.ray, std::vector<Rational>(m, 0)))
            return false;
        Rational cr = 0;
        for (std::size_t j = 0; j < n; ++j)
            cr += cost(j) * s.ray[j];
        return cr < 0;
    }
    }
    return false;
}

LpSolution solve_standard_form(const StandardForm& lp)
{
    std::size_t limit = 50 * (lp.rows + lp.columns.size()) + 1000;
    // Perturbed runs rarely stall but can end on a basis that is slightly
    // infeasible for the true right-hand side; the plain run is the backup.
    for (double perturb : {1e-7, 1e-11, 0.0}) {
        auto guided = run_simplex<double>(lp, limit, perturb);
        if (guided && verify_solution(lp, *guided))
            return *guided;
    }
    auto exact = run_simplex<Rational>(lp, static_cast<std::size_t>(-1));
    if (!exact || !verify_solution(lp, *exact))
        throw std::logic_error("exact simplex failed to produce a verifiable answer");
    exact->exact_fallback = true;
    return *exact;
}

// ---------------------------------------------------------------------------
// System-level operations

namespace {

struct Combination {
    StandardForm lp;
    // For each standard-form column: source row and sign (+1 / -1).
    std::vector<std::pair<std::size_t, int>> source;
};

std::vector<RationalRow> all_rows(const InequalitySystem& system, const std::vector<RationalRow>& extra)
{
    std::vector<RationalRow> rows;
    rows.reserve(system.rows.size() + extra.size());
    for (const auto& r : system.rows)
        rows.push_back(to_rational(r));
    rows.insert(rows.end(), extra.begin(), extra.end());
    return rows;
}

// Columns are the rows (a_i, b_i) of the system; equalities appear twice with
// both signs. Row n of the standard form carries the constants.
Combination combination_lp(const std::vector<RationalRow>& rows, std::size_t width)
{
    Combination c;
    c.lp.rows = width + 1;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        for (int s : {1, -1}) {
            if (s < 0 && r.relation != Relation::Equal)
                break;
            SparseQ col;
            for (const auto& [k, v] : r.terms)
                if (v != 0)
                    col.emplace_back(k, s > 0 ? v : Rational(-v));
            if (r.constant != 0)
                col.emplace_back(static_cast<std::uint32_t>(width),
                                 s > 0 ? r.constant : Rational(-r.constant));
            c.lp.columns.push_back(std::move(col));
            c.source.emplace_back(i, s);
        }
    }
    return c;
}

std::vector<Rational> multipliers_of(const Combination& c, const std::vector<Rational>& u, std::size_t count)
{
    std::vector<Rational> y(count, 0);
    for (std::size_t j = 0; j < c.source.size(); ++j)
        if (u[j] != 0)
            y[c.source[j].first] += c.source[j].second * u[j];
    return y;
}

}  // namespace

FeasibilityResult lp_feasible(const InequalitySystem& system, const std::vector<RationalRow>& extra)
{
    auto rows = all_rows(system, extra);
    const std::size_t n = system.width();
    FeasibilityResult result;
    if (std::vector<Rational> origin(n, 0); verify_point(system, extra, origin)) {
        result.feasible = true;
        result.point = std::move(origin);
        return result;
    }
    auto c = combination_lp(rows, n);
    c.lp.rhs.assign(n + 1, 0);
    c.lp.rhs[n] = -1;
    auto sol = solve_standard_form(c.lp);
    if (sol.status == LpSolution::Status::Optimal) {
        result.feasible = false;
        result.multipliers = multipliers_of(c, sol.primal, rows.size());
        if (!verify_farkas(system, extra, result.multipliers))
            throw std::logic_error("Farkas certificate failed verification");
        return result;
    }
    // Farkas vector (x, t) of the combination LP: the point is x / t.
    const Rational& t = sol.dual[n];
    result.feasible = true;
    result.point.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        result.point[k] = sol.dual[k] / t;
    if (!verify_point(system, extra, result.point))
        throw std::logic_error("feasible point failed verification");
    return result;
}

bool verify_farkas(const InequalitySystem& system, const std::vector<RationalRow>& extra,
                   const std::vector<Rational>& y)
{
    auto rows = all_rows(system, extra);
    if (y.size() != rows.size())
        return false;
    std::map<std::uint32_t, Rational> sum;
    Rational constant = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (y[i] == 0)
            continue;
        if (rows[i].relation == Relation::GreaterEqual && y[i] < 0)
            return false;
        for (const auto& [k, v] : rows[i].terms)
            sum[k] += y[i] * v;
        constant += y[i] * rows[i].constant;
    }
    for (const auto& [k, v] : sum)
        if (v != 0)
            return false;
    return constant < 0;
}

bool verify_point(const InequalitySystem& system, const std::vector<RationalRow>& extra,
                  const std::vector<Rational>& point)
{
    if (point.size() != system.width())
        return false;
    for (const auto& r : all_rows(system, extra)) {
        Rational v = evaluate(r, point);
        if (r.relation == Relation::Equal ? v != 0 : v < 0)
            return false;
    }
    return true;
}

Implication implies(const InequalitySystem& system, const Row& candidate)
{
    return implies(system, to_rational(candidate));
}

Implication implies(const InequalitySystem& system, const RationalRow& candidate)
{
    if (candidate.relation == Relation::Equal) {
        RationalRow up = candidate, down = candidate;
        up.relation = down.relation = Relation::GreaterEqual;
        for (auto& [k, v] : down.terms)
            v = -v;
        down.constant = -down.constant;
        auto a = implies(system, up);
        if (!a.implied || a.system_infeasible)
            return a;
        auto b = implies(system, down);
        if (!b.implied)
            return b;
        // Combined witness: the difference of the two representations.
        Implication out;
        out.implied = true;
        out.multipliers.resize(a.multipliers.size());
        for (std::size_t i = 0; i < a.multipliers.size(); ++i)
            out.multipliers[i] = (a.multipliers[i] - b.multipliers[i]) / 2;
        out.slack = (a.slack - b.slack) / 2;
        return out;
    }
    auto rows = all_rows(system, {});
    const std::size_t n = system.width();
    auto c = combination_lp(rows, n);
    c.lp.columns.push_back({{static_cast<std::uint32_t>(n), Rational(1)}});  // slack
    c.lp.rhs.assign(n + 1, 0);
    for (const auto& [k, v] : candidate.terms)
        c.lp.rhs[k] += v;
    c.lp.rhs[n] = candidate.constant;
    auto sol = solve_standard_form(c.lp);
    Implication out;
    if (sol.status == LpSolution::Status::Optimal) {
        out.implied = true;
        out.multipliers = multipliers_of(c, sol.primal, rows.size());
        out.slack = sol.primal.back();
        if (!verify_implication(system, candidate, out))
            throw std::logic_error("implication witness failed verification");
        return out;
    }
    auto feas = lp_feasible(system);
    if (!feas.feasible) {
        out.implied = true;
        out.system_infeasible = true;
        out.multipliers = feas.multipliers;
    }
    return out;
}

bool verify_implication(const InequalitySystem& system, const RationalRow& candidate,
                        const Implication& w)
{
    if (!w.implied)
        return false;
    if (w.system_infeasible)
        return verify_farkas(system, {}, w.multipliers);
    if (w.multipliers.size() != system.rows.size())
        return false;
    std::map<std::uint32_t, Rational> sum;
    Rational constant = 0;
    for (std::size_t i = 0; i < system.rows.size(); ++i) {
        if (w.multipliers[i] == 0)
            continue;
        const auto& r = system.rows[i];
        if (r.relation == Relation::GreaterEqual && w.multipliers[i] < 0)
            return false;
        for (const auto& [k, v] : r.terms)
            sum[k] += w.multipliers[i] * v;
        constant += w.multipliers[i] * r.constant;
    }
    for (const auto& [k, v] : candidate.terms)
        sum[k] -= v;
    for (const auto& [k, v] : sum)
        if (v != 0)
            return false;
    if (candidate.relation == Relation::Equal)
        return constant + w.slack == candidate.constant && w.slack == 0;
    return w.slack >= 0 && constant + w.slack == candidate.constant;
}

bool equal_cones(const InequalitySystem& a, const InequalitySystem& b)
{
    if (a.columns != b.columns)
        throw std::invalid_argument("equal_cones needs systems over the same columns");
    for (const auto& r : a.rows)
        if (!implies(b, r).implied)
            return false;
    for (const auto& r : b.rows)
        if (!implies(a, r).implied)
            return false;
    return true;
}

Minimum minimize(const InequalitySystem& system, const std::vector<Rational>& objective)
{
    const std::size_t n = system.width();
    auto rows = all_rows(system, {});
    // Dual: minimize sum v_i b_i subject to sum v_i a_i = objective.
    Combination c;
    c.lp.rows = n;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int s : {1, -1}) {
            if (s < 0 && rows[i].relation != Relation::Equal)
                break;
            SparseQ col;
            for (const auto& [k, v] : rows[i].terms)
                col.emplace_back(k, s > 0 ? v : Rational(-v));
            c.lp.columns.push_back(std::move(col));
            c.lp.cost.push_back(s > 0 ? rows[i].constant : Rational(-rows[i].constant));
            c.source.emplace_back(i, s);
        }
    }
    c.lp.rhs = objective;
    c.lp.rhs.resize(n, 0);
    auto sol = solve_standard_form(c.lp);
    Minimum out;
    if (sol.status == LpSolution::Status::Optimal) {
        out.status = LpSolution::Status::Optimal;
        out.value = -sol.value;
        out.point.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            out.point[k] = -sol.dual[k];
        return out;
    }
    if (sol.status == LpSolution::Status::Unbounded) {
        out.status = LpSolution::Status::Infeasible;
        return out;
    }
    auto feas = lp_feasible(system);
    if (!feas.feasible) {
        out.status = LpSolution::Status::Infeasible;
        return out;
    }
    out.status = LpSolution::Status::Unbounded;
    out.point = feas.point;
    return out;
}

}  // namespace entrocausal
