#include "entrocausal/fme.hpp"

#include "entrocausal/lp.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <limits>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace entrocausal {

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body)
{
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    unsigned n = std::min<std::size_t>(threads, count);
    for (unsigned t = 0; t < n; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

namespace {

std::int64_t mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw CoefficientOverflow("coefficient overflow during elimination");
    return r;
}

std::int64_t add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw CoefficientOverflow("coefficient overflow during elimination");
    return r;
}

using History = std::vector<std::uint64_t>;

struct WorkRow {
    Row row;
    History history;  // original inequality rows this one was combined from
};

History unite(const History& a, const History& b)
{
    History out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] |= a[i];
    for (std::size_t i = 0; i < b.size(); ++i)
        out[i] |= b[i];
    return out;
}

std::size_t popcount(const History& h)
{
    std::size_t n = 0;
    for (auto w : h)
        n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

// a * p + b * q with a, b > 0 (or any sign when the result is an equality).
Row combine(const Row& p, std::int64_t a, const Row& q, std::int64_t b, Relation relation)
{
    Row out;
    out.relation = relation;
    auto i = p.terms.begin(), j = q.terms.begin();
    while (i != p.terms.end() || j != q.terms.end()) {
        if (j == q.terms.end() || (i != p.terms.end() && i->first < j->first)) {
            out.terms.emplace_back(i->first, mul(a, i->second));
            ++i;
        } else if (i == p.terms.end() || j->first < i->first) {
            out.terms.emplace_back(j->first, mul(b, j->second));
            ++j;
        } else {
            std::int64_t v = add(mul(a, i->second), mul(b, j->second));
            if (v != 0)
                out.terms.emplace_back(i->first, v);
            ++i;
            ++j;
        }
    }
    out.constant = add(mul(a, p.constant), mul(b, q.constant));
    normalize(out);
    return out;
}

struct TermsHash {
    std::size_t operator()(const std::vector<Term>& terms) const
    {
        std::size_t h = 0x9e3779b97f4a7c15ull;
        for (const auto& [c, v] : terms) {
            h ^= std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(c) << 32) ^ static_cast<std::uint64_t>(v))
                 + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

// Removes duplicates and keeps the tightest constant for identical left-hand sides.
void deduplicate(std::vector<WorkRow>& rows)
{
    std::unordered_map<std::vector<Term>, std::size_t, TermsHash> seen;
    std::vector<WorkRow> out;
    out.reserve(rows.size());
    for (auto& r : rows) {
        auto [it, inserted] = seen.emplace(r.row.terms, out.size());
        if (inserted) {
            out.push_back(std::move(r));
            continue;
        }
        auto& kept = out[it->second];
        if (r.row.constant < kept.row.constant)
            kept = std::move(r);
        else if (r.row.constant == kept.row.constant && popcount(r.history) < popcount(kept.history))
            kept.history = std::move(r.history);
    }
    rows = std::move(out);
}

// Indices (into `inequalities`) of rows implied by all the other rows.
std::vector<bool> redundant_rows(const std::vector<Row>& equalities, const std::vector<Row>& inequalities,
                                 std::size_t width, unsigned threads)
{
    const std::size_t n = inequalities.size();
    // The LPs only need the columns that still occur.
    std::vector<std::uint32_t> to(width, std::numeric_limits<std::uint32_t>::max());
    std::uint32_t active = 0;
    auto compress = [&](const Row& r) {
        Row out = r;
        for (auto& [c, v] : out.terms) {
            if (to[c] == std::numeric_limits<std::uint32_t>::max())
                to[c] = active++;
            c = to[c];
        }
        return out;
    };
    std::vector<Row> eqs, ineqs;
    for (const auto& r : equalities)
        eqs.push_back(compress(r));
    for (const auto& r : inequalities)
        ineqs.push_back(compress(r));
    for (auto* rows : {&eqs, &ineqs})
        for (auto& r : *rows)
            std::sort(r.terms.begin(), r.terms.end());
    auto without = [&](const std::vector<bool>& removed, std::size_t skip) {
        InequalitySystem sys;
        sys.columns.resize(active);
        sys.rows = eqs;
        for (std::size_t k = 0; k < n; ++k)
            if (k != skip && !removed[k])
                sys.rows.push_back(ineqs[k]);
        return sys;
    };
    std::vector<bool> none(n, false);
    std::vector<char> candidate(n, 0);
    parallel_for(n, threads, [&](std::size_t i) {
        candidate[i] = implies(without(none, i), ineqs[i]).implied ? 1 : 0;
    });
    // Mutually redundant rows cannot all go: confirm one at a time.
    std::vector<bool> removed(n, false);
    bool first = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (!candidate[i])
            continue;
        if (first || implies(without(removed, i), ineqs[i]).implied)
            removed[i] = true;
        first = false;
    }
    return removed;
}

class Eliminator {
public:
    Eliminator(const InequalitySystem& system, const std::vector<std::size_t>& keep,
               const EliminationBudget& budget, EliminationStats* stats)
        : system_(system), budget_(budget), stats_(stats ? stats : &local_stats_)
    {
        kept_.assign(system.width(), false);
        for (auto k : keep) {
            if (k >= system.width())
                throw std::out_of_range("kept column out of range");
            kept_[k] = true;
        }
        if (budget.wall_clock.count() > 0)
            deadline_ = std::chrono::steady_clock::now() + budget.wall_clock;
    }

    InequalitySystem run()
    {
        auto canon = canonicalize(system_);
        for (const auto& r : canon.rows) {
            if (contradictory(r))
                return finish_infeasible();
            if (r.relation == Relation::Equal) {
                equalities_.push_back(r);
            } else {
                WorkRow w{r, History((canon.rows.size() + 63) / 64, 0)};
                std::size_t id = inequalities_.size();
                w.history[id / 64] |= std::uint64_t{1} << (id % 64);
                inequalities_.push_back(std::move(w));
            }
        }
        if (!substitute_equalities())
            return finish_infeasible();
        std::size_t step = 0;
        for (;;) {
            check_clock();
            auto column = choose_column();
            if (!column)
                break;
            ++step;
            eliminate_column(*column, step);
            // LP pruning pays off once the rows have grown past the last pruned size.
            if (budget_.lp_redundancy && inequalities_.size() > 1
                && inequalities_.size() * 4 > pruned_size_ * 5 + 40) {
                // The pruned system is a fresh exact description, so the
                // ancestry count restarts from it.
                prune();
                restart_histories();
                step = 0;
                pruned_size_ = inequalities_.size();
            }
        }
        InequalitySystem out = assemble(false);
        if (budget_.lp_redundancy) {
            std::size_t removed = 0;
            out = remove_redundant(out, budget_.threads, &removed);
            stats_->lp_removed += removed;
        }
        return out;
    }

private:
    bool eliminated(std::uint32_t c) const { return !kept_[c]; }

    void check_clock() const
    {
        if (deadline_ && std::chrono::steady_clock::now() > *deadline_)
            throw BudgetExceeded("elimination wall-clock budget exceeded", assemble(true));
    }

    void check_rows(std::size_t count) const
    {
        if (count > budget_.max_rows)
            throw BudgetExceeded("elimination row budget exceeded (" + std::to_string(count) + " rows)",
                                 assemble(true));
    }

    // Equalities touching eliminated columns are solved for one of them and
    // substituted everywhere.
    bool substitute_equalities()
    {
        for (;;) {
            std::map<std::uint32_t, std::size_t> occurrences;
            for (const auto& w : inequalities_)
                for (const auto& [c, v] : w.row.terms)
                    ++occurrences[c];
            for (const auto& e : equalities_)
                for (const auto& [c, v] : e.terms)
                    ++occurrences[c];
            std::size_t best_eq = equalities_.size();
            std::uint32_t best_col = 0;
            std::pair<bool, std::size_t> best_key{true, std::numeric_limits<std::size_t>::max()};
            for (std::size_t i = 0; i < equalities_.size(); ++i)
                for (const auto& [c, v] : equalities_[i].terms) {
                    if (!eliminated(c))
                        continue;
                    std::pair<bool, std::size_t> key{v != 1 && v != -1, occurrences[c]};
                    if (key < best_key) {
                        best_key = key;
                        best_eq = i;
                        best_col = c;
                    }
                }
            if (best_eq == equalities_.size())
                return true;
            Row pivot = equalities_[best_eq];
            equalities_.erase(equalities_.begin() + static_cast<std::ptrdiff_t>(best_eq));
            std::int64_t pc = pivot.coefficient(best_col);
            // row' = |pc| * row - sign(pc) * a * pivot, so the multiplier on row stays positive.
            auto substitute = [&](const Row& r) {
                std::int64_t a = r.coefficient(best_col);
                if (a == 0)
                    return r;
                std::int64_t scale = pc > 0 ? pc : -pc;
                std::int64_t factor = pc > 0 ? -a : a;
                return combine(r, scale, pivot, factor, r.relation);
            };
            std::vector<Row> eqs;
            for (const auto& e : equalities_) {
                Row r = substitute(e);
                if (r.terms.empty()) {
                    if (r.constant != 0)
                        return false;
                    continue;
                }
                eqs.push_back(std::move(r));
            }
            equalities_ = std::move(eqs);
            std::vector<WorkRow> ineqs;
            for (auto& w : inequalities_) {
                Row r = substitute(w.row);
                if (trivially_true(r))
                    continue;
                if (contradictory(r))
                    return false;
                ineqs.push_back({std::move(r), std::move(w.history)});
            }
            inequalities_ = std::move(ineqs);
            deduplicate(inequalities_);
            ++stats_->substitutions;
        }
    }

    std::optional<std::uint32_t> choose_column() const
    {
        std::map<std::uint32_t, std::pair<std::size_t, std::size_t>> counts;
        for (const auto& w : inequalities_)
            for (const auto& [c, v] : w.row.terms)
                if (eliminated(c))
                    (v > 0 ? counts[c].first : counts[c].second)++;
        std::optional<std::uint32_t> best;
        std::size_t best_cost = 0;
        for (const auto& [c, pn] : counts) {
            std::size_t cost = pn.first * pn.second;
            if (!best || cost < best_cost) {
                best = c;
                best_cost = cost;
            }
        }
        return best;
    }

    void eliminate_column(std::uint32_t column, std::size_t step)
    {
        std::vector<WorkRow> next, positive, negative;
        for (auto& w : inequalities_) {
            std::int64_t v = w.row.coefficient(column);
            if (v > 0)
                positive.push_back(std::move(w));
            else if (v < 0)
                negative.push_back(std::move(w));
            else
                next.push_back(std::move(w));
        }
        check_rows(next.size() + positive.size() * negative.size() / 4);
        for (const auto& p : positive) {
            check_clock();
            std::int64_t pv = p.row.coefficient(column);
            for (const auto& q : negative) {
                History h = unite(p.history, q.history);
                if (popcount(h) > step + 1) {
                    ++stats_->combinations_skipped;
                    continue;
                }
                std::int64_t qv = q.row.coefficient(column);
                Row r = combine(p.row, -qv, q.row, pv, Relation::GreaterEqual);
                if (trivially_true(r))
                    continue;
                next.push_back({std::move(r), std::move(h)});
                if (next.size() > budget_.max_rows) {
                    inequalities_ = std::move(next);
                    check_rows(inequalities_.size());
                }
            }
        }
        deduplicate(next);
        inequalities_ = std::move(next);
        stats_->peak_rows = std::max(stats_->peak_rows, inequalities_.size());
        ++stats_->eliminations;
    }

    void restart_histories()
    {
        for (std::size_t i = 0; i < inequalities_.size(); ++i) {
            auto& h = inequalities_[i].history;
            h.assign((inequalities_.size() + 63) / 64, 0);
            h[i / 64] |= std::uint64_t{1} << (i % 64);
        }
    }

    void prune()
    {
        std::vector<Row> rows;
        rows.reserve(inequalities_.size());
        for (const auto& w : inequalities_)
            rows.push_back(w.row);
        auto removed = redundant_rows(equalities_, rows, system_.width(), budget_.threads);
        std::vector<WorkRow> kept;
        for (std::size_t i = 0; i < inequalities_.size(); ++i) {
            if (removed[i])
                ++stats_->lp_removed;
            else
                kept.push_back(std::move(inequalities_[i]));
        }
        inequalities_ = std::move(kept);
    }

    std::vector<std::uint32_t> remap() const
    {
        std::vector<std::uint32_t> to(system_.width(), std::numeric_limits<std::uint32_t>::max());
        std::uint32_t next = 0;
        for (std::size_t c = 0; c < system_.width(); ++c)
            if (kept_[c])
                to[c] = next++;
        return to;
    }

    InequalitySystem empty_output() const
    {
        InequalitySystem out;
        for (std::size_t c = 0; c < system_.width(); ++c)
            if (kept_[c])
                out.columns.push_back(system_.columns[c]);
        return out;
    }

    InequalitySystem finish_infeasible() const
    {
        auto out = empty_output();
        out.rows.push_back(Row{{}, 1, Relation::Equal});
        return out;
    }

    // Rows that mention only kept columns, renumbered. With `partial` set the
    // rows still containing eliminated columns are silently skipped.
    InequalitySystem assemble(bool partial) const
    {
        auto out = empty_output();
        auto to = remap();
        auto add_row = [&](const Row& r) {
            Row m;
            m.relation = r.relation;
            m.constant = r.constant;
            for (const auto& [c, v] : r.terms) {
                if (!kept_[c]) {
                    if (!partial)
                        throw std::logic_error("eliminated column survived elimination");
                    return;
                }
                m.terms.emplace_back(to[c], v);
            }
            out.rows.push_back(std::move(m));
        };
        for (const auto& e : equalities_)
            add_row(e);
        for (const auto& w : inequalities_)
            add_row(w.row);
        return canonicalize(out);
    }

    const InequalitySystem& system_;
    EliminationBudget budget_;
    EliminationStats local_stats_;
    EliminationStats* stats_;
    std::vector<bool> kept_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    std::vector<Row> equalities_;
    std::vector<WorkRow> inequalities_;
    std::size_t pruned_size_ = 0;
};

}  // namespace

InequalitySystem eliminate(const InequalitySystem& system, const std::vector<std::size_t>& keep,
                           const EliminationBudget& budget, EliminationStats* stats)
{
    return Eliminator(system, keep, budget, stats).run();
}

InequalitySystem eliminate(const InequalitySystem& system, const std::vector<std::string>& keep,
                           const EliminationBudget& budget, EliminationStats* stats)
{
    std::vector<std::size_t> idx;
    for (const auto& name : keep)
        idx.push_back(system.column(name));
    return eliminate(system, idx, budget, stats);
}

InequalitySystem remove_redundant(const InequalitySystem& system, unsigned threads, std::size_t* removed_count)
{
    auto canon = canonicalize(system);
    std::vector<Row> equalities, inequalities;
    for (const auto& r : canon.rows)
        (r.relation == Relation::Equal ? equalities : inequalities).push_back(r);
    if (inequalities.size() < 2 && equalities.empty()) {
        if (removed_count)
            *removed_count = 0;
        return canon;
    }
    auto removed = redundant_rows(equalities, inequalities, canon.width(), threads);
    InequalitySystem out;
    out.columns = canon.columns;
    out.rows = equalities;
    std::size_t count = 0;
    for (std::size_t i = 0; i < inequalities.size(); ++i) {
        if (removed[i])
            ++count;
        else
            out.rows.push_back(inequalities[i]);
    }
    if (removed_count)
        *removed_count = count;
    return canonicalize(out);
}

}  // namespace entrocausal
