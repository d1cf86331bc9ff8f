#include "entrocausal/coexistence.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace entrocausal {

std::string_view theory_name(Theory theory)
{
    switch (theory) {
    case Theory::Classical: return "classical";
    case Theory::Quantum: return "quantum";
    case Theory::BoxWorld: return "boxworld";
    case Theory::GeneralGPT: return "gpt";
    }
    return "?";
}

std::optional<Theory> parse_theory(std::string_view text)
{
    if (text == "classical")
        return Theory::Classical;
    if (text == "quantum")
        return Theory::Quantum;
    if (text == "boxworld" || text == "box-world")
        return Theory::BoxWorld;
    if (text == "gpt" || text == "generalgpt")
        return Theory::GeneralGPT;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// SystemTable

SystemTable::SystemTable(const CausalStructure& structure, Theory theory)
    : structure_(structure), theory_(theory)
{
    for (std::size_t i = 0; i < structure.size(); ++i) {
        if (structure.observed(i) || theory == Theory::Classical) {
            SystemInfo info;
            info.id = {structure.name(i), {}};
            info.observed = structure.observed(i);
            info.classical = true;
            info.node = i;
            systems_.push_back(std::move(info));
        } else {
            for (const auto& sub : structure.subsystems_of(i)) {
                SystemInfo info;
                info.id = {sub.owner, sub.target};
                info.observed = false;
                info.classical = false;
                info.node = i;
                systems_.push_back(std::move(info));
            }
        }
    }
    for (auto& s : systems_)
        s.name = s.id.name();
    std::sort(systems_.begin(), systems_.end(),
              [](const SystemInfo& a, const SystemInfo& b) { return a.name < b.name; });
    if (systems_.size() > 64)
        throw std::length_error("more than 64 systems are not supported");
    for (std::size_t i = 0; i < systems_.size(); ++i) {
        if (systems_[i].classical)
            classical_ |= SystemSet{1} << i;
        if (systems_[i].observed)
            observed_ |= SystemSet{1} << i;
    }
}

std::optional<std::size_t> SystemTable::find(std::string_view name) const
{
    auto it = std::lower_bound(systems_.begin(), systems_.end(), name,
                               [](const SystemInfo& s, std::string_view n) { return s.name < n; });
    if (it == systems_.end() || it->name != name)
        return std::nullopt;
    return static_cast<std::size_t>(it - systems_.begin());
}

SystemSet SystemTable::node_bit(std::size_t node) const
{
    auto i = find(structure_.name(node));
    if (!i || systems_[*i].id.is_edge())
        throw std::logic_error("node '" + structure_.name(node) + "' is not a system");
    return SystemSet{1} << *i;
}

SystemSet SystemTable::edge_bit(std::size_t latent, const std::string& target) const
{
    auto i = find(structure_.name(latent) + "_" + target);
    if (!i || !systems_[*i].id.is_edge())
        throw std::logic_error("no subsystem " + structure_.name(latent) + "_" + target);
    return SystemSet{1} << *i;
}

std::string SystemTable::format(SystemSet set) const
{
    std::string out;
    for (std::size_t i = 0; i < systems_.size(); ++i)
        if (set >> i & 1) {
            if (!out.empty())
                out += ',';
            out += systems_[i].name;
        }
    return out;
}

SystemSet SystemTable::parse(std::string_view text) const
{
    SystemSet set = 0;
    while (!text.empty()) {
        auto comma = text.find(',');
        std::string_view item = text.substr(0, comma);
        while (!item.empty() && item.front() == ' ')
            item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ')
            item.remove_suffix(1);
        auto i = find(item);
        if (!i)
            throw std::invalid_argument("unknown system '" + std::string(item) + "'");
        set |= SystemSet{1} << *i;
        if (comma == std::string_view::npos)
            break;
        text.remove_prefix(comma + 1);
    }
    return set;
}

bool SystemTable::has_conflict(SystemSet set) const
{
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < systems_.size(); ++i)
        if ((set >> i & 1) && systems_[i].observed)
            nodes.push_back(systems_[i].node);
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = a + 1; b < nodes.size(); ++b)
            if (structure_.conflicting(nodes[a], nodes[b]))
                return true;
    return false;
}

// ---------------------------------------------------------------------------
// Variables

bool lexicographic_less(SystemSet a, SystemSet b)
{
    while (a != 0 && b != 0) {
        int la = std::countr_zero(a);
        int lb = std::countr_zero(b);
        if (la != lb)
            return la < lb;
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

bool canonical_less(const EntropyVariable& a, const EntropyVariable& b)
{
    if (set_size(a.front) != set_size(b.front))
        return set_size(a.front) < set_size(b.front);
    if (a.front != b.front)
        return lexicographic_less(a.front, b.front);
    if (set_size(a.back) != set_size(b.back))
        return set_size(a.back) < set_size(b.back);
    return lexicographic_less(a.back, b.back);
}

std::string format_variable(const SystemTable& table, const EntropyVariable& v)
{
    std::string out = "H(" + table.format(v.front);
    if (v.back)
        out += "|" + table.format(v.back);
    return out + ")";
}

EntropyVariable parse_variable(const SystemTable& table, std::string_view text)
{
    if (text.size() < 4 || text.substr(0, 2) != "H(" || text.back() != ')')
        throw std::invalid_argument("malformed entropy variable '" + std::string(text) + "'");
    text = text.substr(2, text.size() - 3);
    EntropyVariable v;
    auto bar = text.find('|');
    v.front = table.parse(text.substr(0, bar));
    if (bar != std::string_view::npos)
        v.back = table.parse(text.substr(bar + 1));
    if (v.front == 0 || (v.front & v.back))
        throw std::invalid_argument("malformed entropy variable '" + std::string(text) + "'");
    return v;
}

// ---------------------------------------------------------------------------
// Generation

namespace {

using NodeSet = std::uint64_t;

class Generator {
public:
    explicit Generator(const SystemTable& table) : table_(table), s_(table.structure())
    {
        if (s_.size() > 64)
            throw std::length_error("more than 64 nodes are not supported");
    }

    NodeSet initial() const
    {
        NodeSet g = 0;
        for (std::size_t i = 0; i < s_.size(); ++i)
            if (s_.parents(i).empty() && (!s_.observed(i) || !s_.is_split(i)))
                g |= NodeSet{1} << i;
        return g;
    }

    bool consumed(NodeSet g, std::size_t latent, const std::string& target) const
    {
        for (std::size_t m : s_.children(latent))
            if ((g >> m & 1) && s_.origin(m) == target)
                return true;
        return false;
    }

    SystemSet present(NodeSet g) const
    {
        SystemSet out = 0;
        for (std::size_t i = 0; i < s_.size(); ++i) {
            if (!(g >> i & 1))
                continue;
            if (s_.observed(i)) {
                out |= table_.node_bit(i);
                continue;
            }
            for (const auto& sub : s_.subsystems_of(i))
                if (!consumed(g, i, sub.target))
                    out |= table_.edge_bit(i, sub.target);
        }
        return out;
    }

    bool generable(NodeSet g, std::size_t n) const
    {
        if (g >> n & 1)
            return false;
        for (std::size_t p : s_.parents(n)) {
            if (!(g >> p & 1))
                return false;
            if (!s_.observed(p) && consumed(g, p, s_.origin(n)))
                return false;
        }
        if (s_.observed(n))
            for (std::size_t m = 0; m < s_.size(); ++m)
                if ((g >> m & 1) && s_.observed(m) && s_.conflicting(n, m))
                    return false;
        return true;
    }

    GenerationStep step(NodeSet g, std::size_t n) const
    {
        GenerationStep st;
        st.before = present(g);
        st.node = n;
        for (std::size_t p : s_.parents(n)) {
            if (s_.observed(p)) {
                st.inputs |= table_.node_bit(p);
            } else {
                st.consumed |= table_.edge_bit(p, s_.origin(n));
            }
        }
        st.inputs |= st.consumed;
        if (s_.observed(n)) {
            st.produced = table_.node_bit(n);
        } else {
            for (const auto& sub : s_.subsystems_of(n))
                st.produced |= table_.edge_bit(n, sub.target);
        }
        return st;
    }

    template <class Visit>
    void explore(Visit&& visit) const
    {
        std::unordered_set<NodeSet> seen;
        std::deque<NodeSet> queue{initial()};
        seen.insert(initial());
        while (!queue.empty()) {
            NodeSet g = queue.front();
            queue.pop_front();
            visit(g);
            for (std::size_t n = 0; n < s_.size(); ++n) {
                if (!generable(g, n))
                    continue;
                NodeSet next = g | NodeSet{1} << n;
                if (seen.insert(next).second)
                    queue.push_back(next);
            }
        }
    }

    const SystemTable& table_;
    const CausalStructure& s_;
};

}  // namespace

std::vector<SystemSet> generation_order(const SystemTable& table)
{
    if (table.theory() == Theory::Classical)
        return {table.all()};
    Generator gen(table);
    auto topo = table.structure().topological_order();
    NodeSet g = gen.initial();
    std::vector<SystemSet> states{gen.present(g)};
    for (;;) {
        auto it = std::find_if(topo.begin(), topo.end(),
                               [&](std::size_t n) { return gen.generable(g, n); });
        if (it == topo.end())
            break;
        g |= NodeSet{1} << *it;
        SystemSet state = gen.present(g);
        if (state != states.back())
            states.push_back(state);
    }
    return states;
}

std::vector<GenerationStep> generation_steps(const SystemTable& table)
{
    if (table.theory() == Theory::Classical)
        return {};
    Generator gen(table);
    std::set<GenerationStep> steps;
    gen.explore([&](NodeSet g) {
        for (std::size_t n = 0; n < table.structure().size(); ++n)
            if (gen.generable(g, n))
                steps.insert(gen.step(g, n));
    });
    return {steps.begin(), steps.end()};
}

std::vector<SystemSet> maximal_coexisting_sets(const SystemTable& table)
{
    if (table.theory() == Theory::Classical)
        return {table.all()};
    Generator gen(table);
    std::set<SystemSet> states;
    gen.explore([&](NodeSet g) { states.insert(gen.present(g)); });
    std::vector<SystemSet> maximal;
    for (SystemSet s : states) {
        bool dominated = std::any_of(states.begin(), states.end(),
                                     [&](SystemSet t) { return t != s && subset_of(s, t); });
        if (!dominated)
            maximal.push_back(s);
    }
    std::sort(maximal.begin(), maximal.end(), lexicographic_less);
    return maximal;
}

namespace {

template <class F>
void for_each_subset(SystemSet set, F&& f)
{
    for (SystemSet s = set; s != 0; s = (s - 1) & set)
        f(s);
}

std::vector<EntropyVariable> sorted_unique(std::set<EntropyVariable>& vars)
{
    std::vector<EntropyVariable> out(vars.begin(), vars.end());
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

}  // namespace

std::vector<EntropyVariable> enumerate_variables(const SystemTable& table)
{
    bool conditionals =
        table.theory() == Theory::BoxWorld || table.theory() == Theory::GeneralGPT;
    std::set<EntropyVariable> vars;
    for (SystemSet m : maximal_coexisting_sets(table)) {
        for_each_subset(m, [&](SystemSet front) {
            vars.insert({front, 0});
            if (!conditionals)
                return;
            for_each_subset(m & ~front, [&](SystemSet back) {
                if (!subset_of(front | back, table.classical()))
                    vars.insert({front, back});
            });
        });
    }
    return sorted_unique(vars);
}

std::vector<EntropyVariable> marginal_variables(const SystemTable& table)
{
    std::set<EntropyVariable> vars;
    for (SystemSet m : maximal_coexisting_sets(table))
        for_each_subset(m & table.observed(), [&](SystemSet s) {
            if (!table.has_conflict(s))
                vars.insert({s, 0});
        });
    return sorted_unique(vars);
}

std::vector<std::string> marginal_variable_names(const CausalStructure& structure)
{
    SystemTable table(structure, Theory::GeneralGPT);
    std::vector<std::string> out;
    for (const auto& v : marginal_variables(table))
        out.push_back(format_variable(table, v));
    return out;
}

}  // namespace entrocausal
