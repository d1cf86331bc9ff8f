#include "entrocausal/entropy_expression.hpp"

#include "entrocausal/lp.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

namespace entrocausal {

std::string joint_column(const std::set<std::string>& names)
{
    std::string out = "H(";
    bool first = true;
    for (const auto& n : names) {
        if (!first)
            out += ',';
        first = false;
        out += n;
    }
    return out + ")";
}

std::set<std::string> column_systems(const std::string& column)
{
    std::set<std::string> out;
    if (column.size() < 4 || column.compare(0, 2, "H(") != 0 || column.back() != ')'
        || column.find('|') != std::string::npos)
        return out;
    std::string body = column.substr(2, column.size() - 3);
    std::size_t start = 0;
    while (start <= body.size()) {
        auto comma = body.find(',', start);
        if (comma == std::string::npos)
            comma = body.size();
        out.insert(body.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

namespace {

class RelationParser {
public:
    RelationParser(std::string_view text, const std::vector<std::string>& columns)
        : text_(text)
    {
        for (std::size_t i = 0; i < columns.size(); ++i)
            index_[columns[i]] = static_cast<std::uint32_t>(i);
    }

    Row parse()
    {
        std::map<std::uint32_t, Rational> lhs, rhs;
        Rational lc = 0, rc = 0;
        expression(lhs, lc);
        skip();
        Relation relation;
        bool flip = false;
        if (consume("<="))
            flip = true, relation = Relation::GreaterEqual;
        else if (consume(">="))
            relation = Relation::GreaterEqual;
        else if (consume("="))
            relation = Relation::Equal;
        else
            fail("expected <=, >= or =");
        expression(rhs, rc);
        skip();
        if (pos_ != text_.size())
            fail("trailing input");
        // lhs - rhs >= 0, or rhs - lhs >= 0 for <=.
        std::map<std::uint32_t, Rational> total;
        for (const auto& [c, v] : lhs)
            total[c] += flip ? Rational(-v) : v;
        for (const auto& [c, v] : rhs)
            total[c] += flip ? v : Rational(-v);
        Rational constant = flip ? Rational(rc - lc) : Rational(lc - rc);
        return make_row(total, constant, relation);
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw std::invalid_argument("cannot parse '" + std::string(text_) + "' at offset "
                                    + std::to_string(pos_) + ": " + what);
    }

    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool consume(std::string_view token)
    {
        skip();
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    bool peek_digit()
    {
        skip();
        return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
    }

    Integer number()
    {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        return Integer(std::string(text_.substr(start, pos_ - start)));
    }

    std::set<std::string> names()
    {
        std::set<std::string> out;
        for (;;) {
            skip();
            std::size_t start = pos_;
            while (pos_ < text_.size()
                   && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            if (start == pos_)
                fail("expected a system name");
            out.insert(std::string(text_.substr(start, pos_ - start)));
            skip();
            if (!consume(","))
                return out;
        }
    }

    void add_joint(std::map<std::uint32_t, Rational>& acc, const std::set<std::string>& set, const Rational& f)
    {
        if (set.empty())
            return;
        auto name = joint_column(set);
        auto it = index_.find(name);
        if (it == index_.end())
            throw std::invalid_argument("no column " + name + " in the system");
        acc[it->second] += f;
    }

    static std::set<std::string> unite(std::set<std::string> a, const std::set<std::string>& b)
    {
        a.insert(b.begin(), b.end());
        return a;
    }

    void atom(std::map<std::uint32_t, Rational>& acc, const Rational& f)
    {
        if (consume("H(")) {
            auto a = names();
            std::set<std::string> c;
            if (consume("|"))
                c = names();
            if (!consume(")"))
                fail("expected )");
            add_joint(acc, unite(a, c), f);
            add_joint(acc, c, -f);
        } else if (consume("I(")) {
            auto a = names();
            if (!consume(":"))
                fail("expected :");
            auto b = names();
            std::set<std::string> c;
            if (consume("|"))
                c = names();
            if (!consume(")"))
                fail("expected )");
            // I(A:B|C) = H(AC) + H(BC) - H(ABC) - H(C)
            add_joint(acc, unite(a, c), f);
            add_joint(acc, unite(b, c), f);
            add_joint(acc, unite(unite(a, b), c), -f);
            add_joint(acc, c, -f);
        } else {
            fail("expected H( or I(");
        }
    }

    void expression(std::map<std::uint32_t, Rational>& acc, Rational& constant)
    {
        bool first = true;
        for (;;) {
            skip();
            Rational sign = 1;
            if (consume("+")) {
            } else if (consume("-")) {
                sign = -1;
            } else if (!first) {
                return;
            }
            first = false;
            if (peek_digit()) {
                Integer n = number();
                if (consume("*") || (skip(), pos_ < text_.size() && (text_[pos_] == 'H' || text_[pos_] == 'I')))
                    atom(acc, sign * Rational(n));
                else
                    constant += sign * Rational(n);
            } else {
                atom(acc, sign);
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::map<std::string, std::uint32_t> index_;
};

}  // namespace

Row parse_relation(std::string_view text, const std::vector<std::string>& columns)
{
    return RelationParser(text, columns).parse();
}

InequalitySystem shannon_cone(const std::vector<std::string>& columns)
{
    std::map<std::set<std::string>, std::uint32_t> index;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        auto s = column_systems(columns[i]);
        if (!s.empty())
            index[s] = static_cast<std::uint32_t>(i);
    }
    // Ground sets: columns all of whose nonempty subsets are columns too.
    auto closed = [&](const std::set<std::string>& g) {
        std::vector<std::string> items(g.begin(), g.end());
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << items.size()); ++mask) {
            std::set<std::string> sub;
            for (std::size_t k = 0; k < items.size(); ++k)
                if (mask >> k & 1)
                    sub.insert(items[k]);
            if (!index.count(sub))
                return false;
        }
        return true;
    };
    std::vector<std::set<std::string>> grounds;
    for (const auto& [s, c] : index)
        if (s.size() <= 20 && closed(s))
            grounds.push_back(s);
    std::vector<std::set<std::string>> maximal;
    for (const auto& g : grounds) {
        bool dominated = std::any_of(grounds.begin(), grounds.end(), [&](const auto& h) {
            return h.size() > g.size() && std::includes(h.begin(), h.end(), g.begin(), g.end());
        });
        if (!dominated)
            maximal.push_back(g);
    }
    InequalitySystem out;
    out.columns = columns;
    auto add = [&](const std::vector<std::pair<std::set<std::string>, int>>& parts) {
        std::map<std::uint32_t, Rational> coeffs;
        for (const auto& [set, f] : parts)
            if (!set.empty())
                coeffs[index.at(set)] += f;
        Row r = make_row(coeffs, 0, Relation::GreaterEqual);
        if (!r.terms.empty())
            out.rows.push_back(std::move(r));
    };
    for (const auto& g : maximal) {
        std::vector<std::string> items(g.begin(), g.end());
        const std::size_t n = items.size();
        auto subset = [&](std::uint64_t mask) {
            std::set<std::string> s;
            for (std::size_t k = 0; k < n; ++k)
                if (mask >> k & 1)
                    s.insert(items[k]);
            return s;
        };
        const std::uint64_t all = (std::uint64_t{1} << n) - 1;
        for (std::size_t x = 0; x < n; ++x)
            add({{subset(all), 1}, {subset(all & ~(std::uint64_t{1} << x)), -1}});
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = x + 1; y < n; ++y) {
                std::uint64_t rest = all & ~(std::uint64_t{1} << x) & ~(std::uint64_t{1} << y);
                for (std::uint64_t k = rest;; k = (k - 1) & rest) {
                    std::uint64_t bx = std::uint64_t{1} << x, by = std::uint64_t{1} << y;
                    add({{subset(k | bx), 1}, {subset(k | by), 1}, {subset(k | bx | by), -1}, {subset(k), -1}});
                    if (k == 0)
                        break;
                }
            }
    }
    std::sort(out.rows.begin(), out.rows.end());
    out.rows.erase(std::unique(out.rows.begin(), out.rows.end()), out.rows.end());
    return out;
}

std::vector<Row> non_shannon_rows(const InequalitySystem& system)
{
    auto shannon = shannon_cone(system.columns);
    // Inequalities are judged modulo the equalities the system itself states.
    auto with_equalities = shannon;
    for (const auto& r : system.rows)
        if (r.relation == Relation::Equal)
            with_equalities.rows.push_back(r);
    std::vector<Row> out;
    for (const auto& r : system.rows) {
        const auto& base = r.relation == Relation::Equal ? shannon : with_equalities;
        if (!implies(base, r).implied)
            out.push_back(r);
    }
    return out;
}

}  // namespace entrocausal
