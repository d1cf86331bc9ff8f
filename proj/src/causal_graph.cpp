#include "entrocausal/causal_graph.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <sstream>

namespace entrocausal {

using Kind = StructureError::Kind;

bool valid_node_name(std::string_view name)
{
    if (name.empty())
        return false;
    auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(name[0]))
        return false;
    return std::all_of(name.begin() + 1, name.end(),
                       [&](char c) { return alpha(c) || digit(c) || c == '_'; });
}

// ---------------------------------------------------------------------------
// CausalStructure

bool CausalStructure::conflicting(std::size_t i, std::size_t j) const
{
    for (const auto& a : choices_[i])
        for (const auto& b : choices_[j])
            if (a.pivot == b.pivot && a.value != b.value)
                return true;
    return false;
}

std::optional<std::size_t> CausalStructure::find(std::string_view name) const
{
    auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name)
        return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
}

std::size_t CausalStructure::index(std::string_view name) const
{
    if (auto i = find(name))
        return *i;
    throw StructureError(Kind::UnknownNode, "unknown node '" + std::string(name) + "'",
                         std::string(name));
}

std::vector<std::pair<std::string, std::string>> CausalStructure::edges() const
{
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t u = 0; u < size(); ++u)
        for (std::size_t v : children_[u])
            out.emplace_back(names_[u], names_[v]);
    return out;
}

std::vector<std::size_t> CausalStructure::latent_parents(std::size_t i) const
{
    std::vector<std::size_t> out;
    for (std::size_t p : parents_[i])
        if (!observed(p))
            out.push_back(p);
    return out;
}

std::vector<Subsystem> CausalStructure::subsystems_of(std::size_t latent) const
{
    std::set<std::string> targets;
    for (std::size_t c : children_[latent])
        targets.insert(origins_[c]);
    std::vector<Subsystem> out;
    for (const auto& t : targets)
        out.push_back({names_[latent], t});
    return out;
}

std::vector<Subsystem> CausalStructure::subsystems() const
{
    std::vector<Subsystem> out;
    for (std::size_t i = 0; i < size(); ++i)
        if (!observed(i))
            for (auto& s : subsystems_of(i))
                out.push_back(std::move(s));
    return out;
}

std::vector<std::size_t> CausalStructure::topological_order() const
{
    std::vector<std::size_t> indegree(size());
    for (std::size_t i = 0; i < size(); ++i)
        indegree[i] = parents_[i].size();
    std::set<std::size_t> ready;
    for (std::size_t i = 0; i < size(); ++i)
        if (indegree[i] == 0)
            ready.insert(i);
    std::vector<std::size_t> order;
    while (!ready.empty()) {
        std::size_t u = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(u);
        for (std::size_t v : children_[u])
            if (--indegree[v] == 0)
                ready.insert(v);
    }
    return order;
}

// ---------------------------------------------------------------------------
// StructureBuilder

StructureBuilder& StructureBuilder::node(const std::string& name, NodeKind kind)
{
    nodes_.emplace_back(name, kind);
    return *this;
}

StructureBuilder& StructureBuilder::edge(const std::string& from, const std::string& to)
{
    edges_.emplace_back(from, to);
    return *this;
}

StructureBuilder& StructureBuilder::split(const std::string& node, const std::string& origin,
                                          std::vector<PivotChoice> choices)
{
    std::sort(choices.begin(), choices.end());
    splits_[node] = {origin, std::move(choices)};
    return *this;
}

CausalStructure StructureBuilder::build() const
{
    CausalStructure s;
    std::vector<std::pair<std::string, NodeKind>> nodes = nodes_;
    for (const auto& [name, kind] : nodes)
        if (!valid_node_name(name))
            throw StructureError(Kind::InvalidName, "invalid node name '" + name + "'", name);
    std::sort(nodes.begin(), nodes.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (nodes[i].first == nodes[i - 1].first)
            throw StructureError(Kind::DuplicateName, "duplicate node '" + nodes[i].first + "'",
                                 nodes[i].first);

    const std::size_t n = nodes.size();
    for (const auto& [name, kind] : nodes) {
        s.names_.push_back(name);
        s.kinds_.push_back(kind);
    }
    s.parents_.assign(n, {});
    s.children_.assign(n, {});
    s.origins_ = s.names_;
    s.choices_.assign(n, {});

    std::set<std::pair<std::size_t, std::size_t>> edge_set;
    for (const auto& [from, to] : edges_) {
        auto u = s.find(from);
        auto v = s.find(to);
        if (!u || !v)
            throw StructureError(Kind::DanglingEdge,
                                 "edge " + from + " -> " + to + " references unknown node '"
                                     + (u ? to : from) + "'",
                                 from + " -> " + to);
        if (*u == *v)
            throw StructureError(Kind::CycleDetected, "self-loop on '" + from + "'", from);
        edge_set.insert({*u, *v});
    }
    for (auto [u, v] : edge_set) {
        s.children_[u].push_back(v);
        s.parents_[v].push_back(u);
    }

    for (const auto& [node, info] : splits_) {
        auto i = s.find(node);
        if (!i)
            throw StructureError(Kind::UnknownNode, "split entry for unknown node '" + node + "'",
                                 node);
        if (!valid_node_name(info.first))
            throw StructureError(Kind::InvalidName, "invalid origin name '" + info.first + "'",
                                 info.first);
        s.origins_[*i] = info.first;
        s.choices_[*i] = info.second;
    }

    validate(s);
    return s;
}

void validate(const CausalStructure& s)
{
    auto order = s.topological_order();
    if (order.size() != s.size()) {
        // Walk parents inside the unsorted remainder until a node repeats.
        std::vector<bool> placed(s.size(), false);
        for (std::size_t i : order)
            placed[i] = true;
        std::size_t cur = 0;
        while (placed[cur])
            ++cur;
        std::vector<int> seen(s.size(), -1);
        for (int step = 0; seen[cur] < 0; ++step) {
            seen[cur] = step;
            for (std::size_t p : s.parents(cur))
                if (!placed[p]) {
                    cur = p;
                    break;
                }
        }
        throw StructureError(Kind::CycleDetected, "cycle through node '" + s.name(cur) + "'",
                             s.name(cur));
    }
    for (std::size_t i = 0; i < s.size(); ++i)
        if (!s.observed(i) && s.children(i).empty())
            throw StructureError(Kind::ChildlessLatent,
                                 "latent node '" + s.name(i) + "' has no outgoing edge", s.name(i));
    for (const auto& sub : s.subsystems())
        if (s.find(sub.name()))
            throw StructureError(Kind::NameCollision,
                                 "subsystem name '" + sub.name() + "' collides with a node",
                                 sub.name());
}

// ---------------------------------------------------------------------------
// Queries

namespace {

std::vector<bool> closure(const CausalStructure& s, std::size_t start, bool upward)
{
    std::vector<bool> seen(s.size(), false);
    std::deque<std::size_t> queue{start};
    while (!queue.empty()) {
        std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v : upward ? s.parents(u) : s.children(u))
            if (!seen[v]) {
                seen[v] = true;
                queue.push_back(v);
            }
    }
    return seen;
}

std::set<std::string> names_of(const CausalStructure& s, const std::vector<bool>& mask)
{
    std::set<std::string> out;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (mask[i])
            out.insert(s.name(i));
    return out;
}

std::vector<bool> index_mask(const CausalStructure& s, const std::set<std::string>& names)
{
    std::vector<bool> mask(s.size(), false);
    for (const auto& n : names)
        mask[s.index(n)] = true;
    return mask;
}

}  // namespace

std::set<std::string> ancestors(const CausalStructure& s, std::string_view node)
{
    return names_of(s, closure(s, s.index(node), true));
}

std::set<std::string> descendants(const CausalStructure& s, std::string_view node)
{
    return names_of(s, closure(s, s.index(node), false));
}

std::set<std::string> subsystem_descendants(const CausalStructure& s, const Subsystem& sub)
{
    std::size_t owner = s.index(sub.owner);
    std::set<std::string> out;
    for (std::size_t c : s.children(owner)) {
        if (s.origin(c) != sub.target)
            continue;
        out.insert(s.name(c));
        auto below = names_of(s, closure(s, c, false));
        out.insert(below.begin(), below.end());
    }
    return out;
}

bool d_separated(const CausalStructure& s, const std::set<std::string>& x,
                 const std::set<std::string>& y, const std::set<std::string>& z)
{
    auto in_x = index_mask(s, x);
    auto in_y = index_mask(s, y);
    auto in_z = index_mask(s, z);
    for (std::size_t i = 0; i < s.size(); ++i)
        if ((in_x[i] && in_y[i]) || (in_x[i] && in_z[i]) || (in_y[i] && in_z[i]))
            throw StructureError(Kind::OverlappingSets,
                                 "node '" + s.name(i) + "' appears in more than one set",
                                 s.name(i));

    // Nodes that are in z or have a descendant in z: colliders there are open.
    std::vector<bool> opens_collider(s.size(), false);
    for (std::size_t i = 0; i < s.size(); ++i)
        if (in_z[i]) {
            opens_collider[i] = true;
            auto up = closure(s, i, true);
            for (std::size_t j = 0; j < s.size(); ++j)
                if (up[j])
                    opens_collider[j] = true;
        }

    // Reachability over (node, arrived-from-child?) states.
    std::vector<std::array<bool, 2>> visited(s.size(), {false, false});
    std::deque<std::pair<std::size_t, bool>> queue;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (in_x[i])
            queue.emplace_back(i, true);
    while (!queue.empty()) {
        auto [u, from_child] = queue.front();
        queue.pop_front();
        if (visited[u][from_child])
            continue;
        visited[u][from_child] = true;
        if (in_y[u])
            return false;
        if (from_child) {
            if (in_z[u])
                continue;
            for (std::size_t p : s.parents(u))
                queue.emplace_back(p, true);
            for (std::size_t c : s.children(u))
                queue.emplace_back(c, false);
        } else {
            if (!in_z[u])
                for (std::size_t c : s.children(u))
                    queue.emplace_back(c, false);
            if (opens_collider[u])
                for (std::size_t p : s.parents(u))
                    queue.emplace_back(p, true);
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Transforms

namespace {

void copy_splits(const CausalStructure& s, std::size_t i, const std::string& new_name,
                 StructureBuilder& b, std::vector<PivotChoice> extra = {})
{
    std::vector<PivotChoice> choices = s.choices(i);
    choices.insert(choices.end(), extra.begin(), extra.end());
    if (!choices.empty())
        b.split(new_name, s.origin(i), std::move(choices));
}

}  // namespace

PostSelection post_select(const CausalStructure& s, std::string_view pivot_name, int values,
                          int first_label)
{
    std::size_t pivot = s.index(pivot_name);
    if (!s.observed(pivot))
        throw StructureError(Kind::NotObserved, "pivot '" + s.name(pivot) + "' is latent",
                             s.name(pivot));
    if (!s.parents(pivot).empty())
        throw StructureError(Kind::NotParentless, "pivot '" + s.name(pivot) + "' has parents",
                             s.name(pivot));
    if (values < 2)
        throw StructureError(Kind::InvalidCardinality,
                             "post-selection needs at least 2 values, got " + std::to_string(values),
                             s.name(pivot));

    auto below = closure(s, pivot, false);
    std::vector<bool> split(s.size(), false);
    for (std::size_t i = 0; i < s.size(); ++i)
        split[i] = below[i] && s.observed(i);

    auto alternative = [&](std::size_t i, int v) {
        return s.name(i) + "_" + s.name(pivot) + std::to_string(first_label + v);
    };

    PostSelection result;
    StructureBuilder b;
    result.mapping[s.name(pivot)] = {};
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i == pivot)
            continue;
        if (!split[i]) {
            b.node(s.name(i), s.kind(i));
            copy_splits(s, i, s.name(i), b);
            continue;
        }
        auto& replaced = result.mapping[s.name(i)];
        for (int v = 0; v < values; ++v) {
            std::string name = alternative(i, v);
            b.node(name, s.kind(i));
            copy_splits(s, i, name, b, {{s.name(pivot), first_label + v}});
            replaced.push_back(name);
        }
    }
    for (std::size_t u = 0; u < s.size(); ++u) {
        if (u == pivot)
            continue;
        for (std::size_t w : s.children(u)) {
            if (!split[u] && !split[w]) {
                b.edge(s.name(u), s.name(w));
            } else {
                for (int v = 0; v < values; ++v)
                    b.edge(split[u] ? alternative(u, v) : s.name(u),
                           split[w] ? alternative(w, v) : s.name(w));
            }
        }
    }
    result.structure = b.build();
    return result;
}

CausalStructure rename_nodes(const CausalStructure& s,
                             const std::map<std::string, std::string>& renames)
{
    for (const auto& [from, to] : renames)
        s.index(from);
    auto mapped = [&](const std::string& n) {
        auto it = renames.find(n);
        return it == renames.end() ? n : it->second;
    };
    StructureBuilder b;
    for (std::size_t i = 0; i < s.size(); ++i) {
        b.node(mapped(s.name(i)), s.kind(i));
        if (s.is_split(i))
            b.split(mapped(s.name(i)), s.origin(i), s.choices(i));
    }
    for (const auto& [u, v] : s.edges())
        b.edge(mapped(u), mapped(v));
    return b.build();
}

// ---------------------------------------------------------------------------
// Text format

namespace {

struct Token {
    std::string text;
    std::size_t column;
};

std::vector<Token> tokenize(const std::string& line)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
            ++i;
        out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

[[noreturn]] void parse_fail(std::size_t line, std::size_t column, const std::string& what)
{
    std::string where = std::to_string(line) + ":" + std::to_string(column);
    throw StructureError(Kind::ParseError, "parse error at " + where + ": " + what, where);
}

}  // namespace

CausalStructure parse_structure(std::string_view text)
{
    StructureBuilder b;
    bool any_node = false;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        auto tokens = tokenize(line);
        if (tokens.empty())
            continue;
        const auto& key = tokens[0];
        if (key.text == "node") {
            if (tokens.size() != 3)
                parse_fail(line_no, key.column, "expected 'node NAME observed|latent'");
            NodeKind kind;
            if (tokens[2].text == "observed")
                kind = NodeKind::Observed;
            else if (tokens[2].text == "latent")
                kind = NodeKind::Latent;
            else
                parse_fail(line_no, tokens[2].column, "unknown node kind '" + tokens[2].text + "'");
            if (!valid_node_name(tokens[1].text))
                parse_fail(line_no, tokens[1].column, "invalid node name '" + tokens[1].text + "'");
            b.node(tokens[1].text, kind);
            any_node = true;
        } else if (key.text == "edge") {
            if (tokens.size() != 4 || tokens[2].text != "->")
                parse_fail(line_no, key.column, "expected 'edge FROM -> TO'");
            b.edge(tokens[1].text, tokens[3].text);
        } else if (key.text == "split") {
            if (tokens.size() < 4)
                parse_fail(line_no, key.column, "expected 'split NODE ORIGIN PIVOT=VALUE ...'");
            std::vector<PivotChoice> choices;
            for (std::size_t t = 3; t < tokens.size(); ++t) {
                const auto& tok = tokens[t].text;
                auto eq = tok.find('=');
                if (eq == std::string::npos || eq == 0 || eq + 1 == tok.size())
                    parse_fail(line_no, tokens[t].column, "expected PIVOT=VALUE, got '" + tok + "'");
                int value = 0;
                try {
                    std::size_t used = 0;
                    value = std::stoi(tok.substr(eq + 1), &used);
                    if (used != tok.size() - eq - 1)
                        throw std::invalid_argument(tok);
                } catch (const std::exception&) {
                    parse_fail(line_no, tokens[t].column + eq + 1, "bad pivot value in '" + tok + "'");
                }
                choices.push_back({tok.substr(0, eq), value});
            }
            b.split(tokens[1].text, tokens[2].text, std::move(choices));
        } else {
            parse_fail(line_no, key.column, "unknown keyword '" + key.text + "'");
        }
    }
    if (!any_node)
        throw StructureError(Kind::EmptyStructure, "structure file declares no nodes");
    return b.build();
}

std::string serialize_structure(const CausalStructure& s)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < s.size(); ++i)
        out << "node " << s.name(i) << (s.observed(i) ? " observed" : " latent") << '\n';
    for (const auto& [u, v] : s.edges())
        out << "edge " << u << " -> " << v << '\n';
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!s.is_split(i))
            continue;
        out << "split " << s.name(i) << ' ' << s.origin(i);
        for (const auto& c : s.choices(i))
            out << ' ' << c.pivot << '=' << c.value;
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

CausalStructure make(const std::vector<std::string>& observed,
                     const std::vector<std::string>& latent,
                     const std::vector<std::pair<std::string, std::string>>& edges)
{
    StructureBuilder b;
    for (const auto& n : observed)
        b.node(n, NodeKind::Observed);
    for (const auto& n : latent)
        b.node(n, NodeKind::Latent);
    for (const auto& [u, v] : edges)
        b.edge(u, v);
    return b.build();
}

CausalStructure bilocal()
{
    return make({"A", "B", "C", "X", "Y", "Z"}, {"L1", "L2"},
                {{"L1", "X"}, {"L1", "Y"}, {"L2", "Y"}, {"L2", "Z"}, {"A", "X"}, {"B", "Y"},
                 {"C", "Z"}});
}

CausalStructure ic()
{
    return make({"X1", "X2", "Z", "Y", "R"}, {"A"},
                {{"X1", "X2"}, {"X1", "Z"}, {"X2", "Z"}, {"A", "Z"}, {"A", "Y"}, {"Z", "Y"},
                 {"R", "Y"}});
}

}  // namespace

const std::vector<std::string>& catalog_names()
{
    static const std::vector<std::string> names = {
        "instrumental", "fig2", "fig3a", "fig3b", "bilocal", "bilocal_postselected",
        "ic", "ic_postselected", "triangle"};
    return names;
}

CausalStructure catalog(std::string_view name)
{
    if (name == "instrumental")
        return make({"X", "Y", "Z"}, {"A"}, {{"X", "Z"}, {"Z", "Y"}, {"A", "Z"}, {"A", "Y"}});
    if (name == "fig2")
        return make({"C", "D", "E", "F"}, {"A", "B"},
                    {{"C", "D"}, {"D", "E"}, {"E", "F"}, {"A", "E"}, {"A", "F"}, {"B", "D"},
                     {"B", "F"}});
    if (name == "fig3a")
        return make({"C", "D", "E", "F"}, {"A", "B"},
                    {{"C", "D"}, {"D", "E"}, {"E", "F"}, {"A", "E"}, {"A", "D"}, {"B", "D"},
                     {"B", "F"}});
    if (name == "fig3b")
        return make({"C", "D", "E", "F"}, {"A", "B"},
                    {{"C", "F"}, {"D", "E"}, {"E", "F"}, {"A", "C"}, {"A", "F"}, {"B", "C"},
                     {"B", "E"}});
    if (name == "bilocal")
        return bilocal();
    if (name == "bilocal_postselected") {
        auto s = post_select(bilocal(), "A", 2).structure;
        s = post_select(s, "B", 2).structure;
        s = post_select(s, "C", 2).structure;
        return rename_nodes(s, {{"X_A0", "X0"}, {"X_A1", "X1"}, {"Y_B0", "Y0"}, {"Y_B1", "Y1"},
                                {"Z_C0", "Z0"}, {"Z_C1", "Z1"}});
    }
    if (name == "ic")
        return ic();
    if (name == "ic_postselected")
        return post_select(ic(), "R", 2, 1).structure;
    if (name == "triangle")
        return make({"A", "B", "C"}, {"LA", "LB", "LC"},
                    {{"LA", "B"}, {"LA", "C"}, {"LB", "A"}, {"LB", "C"}, {"LC", "A"}, {"LC", "B"}});
    throw StructureError(Kind::UnknownCatalogEntry,
                         "unknown catalog entry '" + std::string(name) + "'", std::string(name));
}

}  // namespace entrocausal
