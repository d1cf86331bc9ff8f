#include "properties.hpp"

#include "support.hpp"

#include "entrocausal/causal_graph.hpp"
#include "entrocausal/constraints.hpp"
#include "entrocausal/fme.hpp"
#include "entrocausal/lp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>

using namespace entrocausal;

namespace testing_support {

namespace {

// Optimum of an objective over kept columns, computed on the full system.
Minimum lift_minimum(const InequalitySystem& full, const std::vector<std::size_t>& keep,
                     const std::vector<Rational>& objective)
{
    std::vector<Rational> lifted(full.width(), 0);
    for (std::size_t k = 0; k < keep.size(); ++k)
        lifted[keep[k]] = objective[k];
    return minimize(full, lifted);
}

// Brute-force d-separation by enumerating all simple undirected paths.
bool path_oracle(const RandomDag& d, const std::set<int>& x, const std::set<int>& y, const std::set<int>& z)
{
    std::vector<std::vector<int>> out(d.n);
    for (auto [u, v] : d.edges)
        out[u].push_back(v);
    auto has_desc_in_z = [&](int k) {
        std::vector<bool> seen(d.n, false);
        std::vector<int> stack{k};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            if (seen[u])
                continue;
            seen[u] = true;
            if (z.count(u))
                return true;
            for (int v : out[u])
                stack.push_back(v);
        }
        return false;
    };
    auto edge = [&](int a, int b) {
        return std::find(d.edges.begin(), d.edges.end(), std::make_pair(a, b)) != d.edges.end();
    };
    bool open_path = false;
    std::vector<int> path;
    std::vector<bool> on_path(d.n, false);
    std::function<void(int)> walk = [&](int u) {
        if (open_path)
            return;
        if (y.count(u) && path.size() > 1) {
            bool blocked = false;
            for (std::size_t i = 1; i + 1 < path.size(); ++i) {
                int a = path[i - 1], k = path[i], b = path[i + 1];
                bool collider = edge(a, k) && edge(b, k);
                if (collider ? !has_desc_in_z(k) : z.count(k) > 0)
                    blocked = true;
            }
            if (!blocked)
                open_path = true;
            return;
        }
        for (int v = 0; v < d.n; ++v) {
            if (on_path[v] || !(edge(u, v) || edge(v, u)))
                continue;
            on_path[v] = true;
            path.push_back(v);
            walk(v);
            path.pop_back();
            on_path[v] = false;
        }
    };
    for (int s : x) {
        path = {s};
        on_path.assign(d.n, false);
        on_path[s] = true;
        walk(s);
    }
    return !open_path;
}

}  // namespace

InequalitySystem random_system(std::mt19937& rng, std::size_t width, std::size_t rows, bool cone)
{
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> pick(0, 9);
    InequalitySystem sys;
    for (std::size_t c = 0; c < width; ++c)
        sys.columns.push_back("v" + std::to_string(c));
    for (std::size_t i = 0; i < rows; ++i) {
        Row r;
        for (std::size_t c = 0; c < width; ++c)
            if (pick(rng) < 5)
                r.terms.emplace_back(static_cast<std::uint32_t>(c), coef(rng));
        r.constant = cone ? 0 : coef(rng) + 2;
        r.relation = pick(rng) == 0 ? Relation::Equal : Relation::GreaterEqual;
        normalize(r);
        if (!r.terms.empty())
            sys.rows.push_back(r);
    }
    return sys;
}

CausalStructure RandomDag::structure() const
{
    StructureBuilder b;
    for (int i = 0; i < n; ++i)
        b.node("N" + std::to_string(i), NodeKind::Observed);
    for (auto [u, v] : edges)
        b.edge("N" + std::to_string(u), "N" + std::to_string(v));
    return b.build();
}

RandomDag random_dag(std::mt19937& rng)
{
    RandomDag d;
    d.n = std::uniform_int_distribution<int>(2, 6)(rng);
    std::bernoulli_distribution coin(0.4);
    // Random relabelling so that edge direction is not tied to index order.
    std::vector<int> perm(d.n);
    for (int i = 0; i < d.n; ++i)
        perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < d.n; ++i)
        for (int j = i + 1; j < d.n; ++j)
            if (coin(rng))
                d.edges.emplace_back(perm[i], perm[j]);
    return d;
}

std::set<std::string> node_names(const std::set<int>& s)
{
    std::set<std::string> out;
    for (int i : s)
        out.insert("N" + std::to_string(i));
    return out;
}

bool random_triple(std::mt19937& rng, int n, std::set<int>& x, std::set<int>& y, std::set<int>& z)
{
    x.clear();
    y.clear();
    z.clear();
    std::uniform_int_distribution<int> role(0, 3);
    for (int i = 0; i < n; ++i) {
        switch (role(rng)) {
        case 0: x.insert(i); break;
        case 1: y.insert(i); break;
        case 2: z.insert(i); break;
        default: break;
        }
    }
    return !x.empty() && !y.empty();
}

SuiteReport fme_vs_lp_suite(int systems, std::uint32_t seed)
{
    SuiteReport report;
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> obj(-4, 4);
    for (int trial = 0; trial < systems; ++trial) {
        ++report.cases;
        std::size_t width = 2 + trial % 5;
        std::size_t rows = 3 + (trial * 7) % 10;
        bool cone = trial % 2 == 0;
        auto sys = random_system(rng, width, rows, cone);
        std::vector<std::size_t> keep;
        for (std::size_t c = 0; c < width; ++c)
            if (rng() % 2)
                keep.push_back(c);
        if (keep.empty())
            keep.push_back(0);
        EliminationBudget budget;
        budget.lp_redundancy = trial % 3 != 0;
        InequalitySystem projected = eliminate(sys, keep, budget);
        const std::string tag = "system " + std::to_string(trial);
        ++report.checks;
        if (projected.width() != keep.size() || canonicalize(projected) != projected) {
            report.fail(tag + ": projection is not canonical over the kept columns");
            continue;
        }

        bool feasible = lp_feasible(sys).feasible;
        ++report.checks;
        if (lp_feasible(projected).feasible != feasible)
            report.fail(tag + ": feasibility differs");
        if (!feasible)
            continue;
        for (int k = 0; k < 25; ++k) {
            std::vector<Rational> objective;
            for (std::size_t c = 0; c < keep.size(); ++c)
                objective.emplace_back(obj(rng));
            auto full = lift_minimum(sys, keep, objective);
            auto proj = minimize(projected, objective);
            ++report.checks;
            if (full.status != proj.status)
                report.fail(tag + ": LP status differs");
            else if (full.status == LpSolution::Status::Optimal && full.value != proj.value)
                report.fail(tag + ": optimum differs");
            // Soundness: the full optimum's restriction lies in the projection.
            if (full.status == LpSolution::Status::Optimal) {
                std::vector<Rational> restricted;
                for (auto c : keep)
                    restricted.push_back(full.point[c]);
                for (const auto& r : projected.rows) {
                    ++report.checks;
                    if (!satisfied(r, restricted))
                        report.fail(tag + ": projected row cuts off a feasible point");
                }
            }
        }
    }
    return report;
}

SuiteReport dseparation_suite(int dags, std::uint32_t seed)
{
    SuiteReport report;
    std::mt19937 rng(seed);
    for (int trial = 0; trial < dags; ++trial) {
        ++report.cases;
        auto d = random_dag(rng);
        auto s = d.structure();
        std::set<int> x, y, z;
        while (!random_triple(rng, d.n, x, y, z)) {
        }
        bool fast = d_separated(s, node_names(x), node_names(y), node_names(z));
        report.checks += 2;
        if (fast != path_oracle(d, x, y, z))
            report.fail("DAG " + std::to_string(trial) + ": disagrees with path enumeration");
        if (fast != d_separated(s, node_names(y), node_names(x), node_names(z)))
            report.fail("DAG " + std::to_string(trial) + ": not symmetric");
    }
    return report;
}

SuiteReport soundness_suite(int strategies_per_structure, std::uint32_t seed)
{
    SuiteReport report;
    std::mt19937 rng(seed);
    for (const auto& name : catalog_names()) {
        auto s = catalog(name);
        std::vector<ConstraintSystem> systems;
        for (auto theory : {Theory::Classical, Theory::Quantum, Theory::BoxWorld, Theory::GeneralGPT}) {
            GenerationOptions o;
            o.theory = theory;
            systems.push_back(generate(s, o));
        }
        for (int k = 0; k < strategies_per_structure; ++k) {
            ++report.cases;
            // Binary alphabets keep the joint table of the larger structures small.
            ClassicalModel model(s, rng, name == "bilocal" ? 2 : 3);
            for (const auto& sys : systems) {
                auto point = model.entropy_vector(sys);
                for (const auto& c : sys.constraints) {
                    double v = evaluate(c, point);
                    bool ok = c.relation == Relation::Equal ? std::fabs(v) < 1e-9 : v > -1e-9;
                    ++report.checks;
                    if (!ok)
                        report.fail(name + " " + std::string(theory_name(sys.table.theory())) + ": "
                                    + format_constraint(sys, c));
                }
            }
        }
    }
    return report;
}

}  // namespace testing_support
