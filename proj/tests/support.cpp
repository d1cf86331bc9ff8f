#include "support.hpp"

#include <cmath>

using namespace entrocausal;

namespace testing_support {

ClassicalModel::ClassicalModel(const CausalStructure& structure, std::mt19937& rng, int max_card)
    : structure_(structure)
{
    const std::size_t n = structure.size();
    std::uniform_int_distribution<int> card(2, max_card);
    std::uniform_int_distribution<int> weight(0, 4);
    card_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        card_[i] = card(rng);

    std::size_t states = 1;
    for (int c : card_)
        states *= static_cast<std::size_t>(c);

    // Conditional table per node: parent configuration -> distribution.
    std::vector<std::map<std::vector<int>, std::vector<Rational>>> tables(n);
    auto table_entry = [&](std::size_t node, const std::vector<int>& parents) -> const std::vector<Rational>& {
        auto& t = tables[node];
        auto it = t.find(parents);
        if (it != t.end())
            return it->second;
        std::vector<Rational> p(static_cast<std::size_t>(card_[node]));
        Rational total = 0;
        while (total == 0) {
            total = 0;
            for (auto& v : p) {
                v = weight(rng);
                total += v;
            }
        }
        for (auto& v : p)
            v /= total;
        return t.emplace(parents, std::move(p)).first->second;
    };

    joint_.assign(states, 0.0);
    std::vector<int> value(n);
    for (std::size_t s = 0; s < states; ++s) {
        std::size_t rest = s;
        for (std::size_t i = 0; i < n; ++i) {
            value[i] = static_cast<int>(rest % static_cast<std::size_t>(card_[i]));
            rest /= static_cast<std::size_t>(card_[i]);
        }
        Rational p = 1;
        for (std::size_t node : structure.topological_order()) {
            std::vector<int> pv;
            for (std::size_t q : structure.parents(node))
                pv.push_back(value[q]);
            p *= table_entry(node, pv)[static_cast<std::size_t>(value[node])];
            if (p == 0)
                break;
        }
        joint_[s] = p.get_d();
    }
}

double ClassicalModel::entropy(std::uint64_t nodes)
{
    if (nodes == 0)
        return 0.0;
    auto it = cache_.find(nodes);
    if (it != cache_.end())
        return it->second;
    std::map<std::size_t, double> marginal;
    const std::size_t n = card_.size();
    for (std::size_t s = 0; s < joint_.size(); ++s) {
        if (joint_[s] == 0)
            continue;
        std::size_t rest = s, key = 0, radix = 1;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t v = rest % static_cast<std::size_t>(card_[i]);
            rest /= static_cast<std::size_t>(card_[i]);
            if (nodes >> i & 1) {
                key += v * radix;
                radix *= static_cast<std::size_t>(card_[i]);
            }
        }
        marginal[key] += joint_[s];
    }
    double h = 0;
    for (const auto& [k, p] : marginal)
        if (p > 0)
            h -= p * std::log2(p);
    cache_[nodes] = h;
    return h;
}

std::vector<double> ClassicalModel::entropy_vector(const ConstraintSystem& system)
{
    auto nodes_of = [&](SystemSet set) {
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < system.table.size(); ++i)
            if (set >> i & 1)
                mask |= std::uint64_t{1} << system.table[i].node;
        return mask;
    };
    std::vector<double> out;
    out.reserve(system.variables.size());
    for (const auto& v : system.variables)
        out.push_back(entropy(nodes_of(v.front | v.back)) - entropy(nodes_of(v.back)));
    return out;
}

double evaluate(const LinearConstraint& c, const std::vector<double>& point)
{
    double v = 0;
    for (const auto& [col, k] : c.terms)
        v += static_cast<double>(k) * point[col];
    return v;
}

}  // namespace testing_support
