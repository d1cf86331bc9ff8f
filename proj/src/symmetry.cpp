#include "entrocausal/symmetry.hpp"

#include "entrocausal/entropy_expression.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace entrocausal {

const std::string& Permutation::operator()(const std::string& name) const
{
    auto it = image.find(name);
    return it == image.end() ? name : it->second;
}

SymmetryGroup parse_generators(std::string_view text)
{
    SymmetryGroup group;
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        auto where = [&] { return "generator line " + std::to_string(number) + ": "; };
        Permutation p;
        std::set<std::string> seen;
        std::size_t pos = 0;
        bool any = false;
        while (pos < line.size()) {
            if (std::isspace(static_cast<unsigned char>(line[pos]))) {
                ++pos;
                continue;
            }
            if (line[pos] != '(')
                throw InvalidGenerator(where() + "expected '('");
            auto close = line.find(')', pos);
            if (close == std::string::npos)
                throw InvalidGenerator(where() + "unterminated cycle");
            std::istringstream cycle(line.substr(pos + 1, close - pos - 1));
            std::vector<std::string> names;
            for (std::string n; cycle >> n;) {
                if (!seen.insert(n).second)
                    throw InvalidGenerator(where() + "name " + n + " appears twice");
                names.push_back(n);
            }
            if (names.size() < 2)
                throw InvalidGenerator(where() + "cycle needs at least two names");
            for (std::size_t i = 0; i < names.size(); ++i)
                p.image[names[i]] = names[(i + 1) % names.size()];
            any = true;
            pos = close + 1;
        }
        if (any)
            group.generators.push_back(std::move(p));
    }
    return group;
}

std::string format_generator(const Permutation& p)
{
    std::string out;
    std::set<std::string> done;
    for (const auto& [start, next] : p.image) {
        if (done.count(start) || next == start)
            continue;
        out += '(';
        std::string at = start;
        bool first = true;
        do {
            if (!first)
                out += ' ';
            first = false;
            out += at;
            done.insert(at);
            at = p(at);
        } while (at != start);
        out += ')';
    }
    return out;
}

namespace {

// "H(a,b|c)" -> ({a,b},{c}); false for anything else.
bool split_column(const std::string& column, std::set<std::string>& front, std::set<std::string>& back)
{
    if (column.size() < 4 || column.compare(0, 2, "H(") != 0 || column.back() != ')')
        return false;
    std::string body = column.substr(2, column.size() - 3);
    auto bar = body.find('|');
    front = column_systems("H(" + body.substr(0, bar) + ")");
    back.clear();
    if (bar != std::string::npos)
        back = column_systems("H(" + body.substr(bar + 1) + ")");
    return !front.empty();
}

std::string join_column(const std::set<std::string>& front, const std::set<std::string>& back)
{
    std::string out = joint_column(front);
    if (back.empty())
        return out;
    out.pop_back();
    std::string rest = joint_column(back);
    return out + "|" + rest.substr(2);
}

}  // namespace

std::vector<std::uint32_t> column_action(const std::vector<std::string>& columns, const Permutation& p)
{
    std::unordered_map<std::string, std::uint32_t> index;
    for (std::size_t i = 0; i < columns.size(); ++i)
        index[columns[i]] = static_cast<std::uint32_t>(i);
    std::vector<std::uint32_t> action(columns.size());
    std::vector<bool> hit(columns.size(), false);
    for (std::size_t i = 0; i < columns.size(); ++i) {
        std::set<std::string> front, back;
        if (!split_column(columns[i], front, back)) {
            action[i] = static_cast<std::uint32_t>(i);
        } else {
            std::set<std::string> f, b;
            for (const auto& n : front)
                f.insert(p(n));
            for (const auto& n : back)
                b.insert(p(n));
            auto name = join_column(f, b);
            auto it = index.find(name);
            if (it == index.end())
                throw InvalidGenerator("generator " + format_generator(p) + " maps " + columns[i] + " to "
                                       + name + ", which is not a column");
            action[i] = it->second;
        }
        if (hit[action[i]])
            throw InvalidGenerator("generator " + format_generator(p) + " is not a bijection on the columns");
        hit[action[i]] = true;
    }
    return action;
}

Row permute(const Row& row, const std::vector<std::uint32_t>& action)
{
    Row out;
    out.constant = row.constant;
    out.relation = row.relation;
    for (const auto& [c, v] : row.terms)
        out.terms.emplace_back(action.at(c), v);
    std::sort(out.terms.begin(), out.terms.end());
    normalize(out);
    return out;
}

std::vector<Row> row_orbit(const std::vector<std::string>& columns, const Row& row, const SymmetryGroup& group)
{
    std::vector<std::vector<std::uint32_t>> actions;
    for (const auto& g : group.generators)
        actions.push_back(column_action(columns, g));
    Row start = row;
    normalize(start);
    std::set<Row> seen{start};
    std::vector<Row> queue{start};
    while (!queue.empty()) {
        Row r = std::move(queue.back());
        queue.pop_back();
        for (const auto& a : actions) {
            Row image = permute(r, a);
            if (seen.insert(image).second)
                queue.push_back(std::move(image));
        }
    }
    return {seen.begin(), seen.end()};
}

std::vector<Orbit> orbit_classify(const InequalitySystem& system, const SymmetryGroup& group)
{
    std::vector<std::vector<std::uint32_t>> actions;
    for (const auto& g : group.generators)
        actions.push_back(column_action(system.columns, g));

    InequalitySystem canonical = canonicalize(system);
    const auto& rows = canonical.rows;

    // Canonical equalities are in reduced echelon form with the pivot at the
    // highest column, so one pass per basis row reduces an image.
    std::vector<std::pair<std::uint32_t, std::map<std::uint32_t, Rational>>> basis;
    for (const auto& r : rows)
        if (r.relation == Relation::Equal && !r.terms.empty()) {
            std::map<std::uint32_t, Rational> coeffs;
            Rational lead(r.terms.back().second);
            for (const auto& [c, v] : r.terms)
                coeffs[c] = Rational(v) / lead;
            basis.emplace_back(r.terms.back().first, std::move(coeffs));
        }
    auto reduce = [&](const Row& image) {
        if (image.relation == Relation::Equal)
            return image;
        std::map<std::uint32_t, Rational> coeffs;
        for (const auto& [c, v] : image.terms)
            coeffs[c] = v;
        for (const auto& [pivot, b] : basis) {
            auto it = coeffs.find(pivot);
            if (it == coeffs.end())
                continue;
            Rational f = -it->second;
            for (const auto& [c, v] : b) {
                coeffs[c] += f * v;
                if (coeffs[c] == 0)
                    coeffs.erase(c);
            }
        }
        return make_row(coeffs, image.constant, image.relation);
    };

    std::map<Row, std::size_t> index;
    for (std::size_t i = 0; i < rows.size(); ++i)
        index[rows[i]] = i;
    std::vector<std::size_t> parent(rows.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i)
            i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& a : actions) {
            auto it = index.find(reduce(permute(rows[i], a)));
            if (it != index.end())
                parent[find(i)] = find(it->second);
        }

    std::map<std::size_t, std::vector<Row>> parts;
    for (std::size_t i = 0; i < rows.size(); ++i)
        parts[find(i)].push_back(rows[i]);
    std::vector<Orbit> out;
    for (auto& [root, members] : parts) {
        std::sort(members.begin(), members.end());
        out.push_back({members.front(), std::move(members)});
    }
    std::sort(out.begin(), out.end(), [](const Orbit& a, const Orbit& b) { return a.representative < b.representative; });
    return out;
}

}  // namespace entrocausal
