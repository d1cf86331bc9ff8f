#include "entrocausal/inequality_system.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace entrocausal {

std::int64_t Row::coefficient(std::uint32_t column) const
{
    auto it = std::lower_bound(terms.begin(), terms.end(), column,
                               [](const Term& t, std::uint32_t c) { return t.first < c; });
    return it != terms.end() && it->first == column ? it->second : 0;
}

std::size_t InequalitySystem::column(const std::string& name) const
{
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end())
        throw std::out_of_range("unknown column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw CoefficientOverflow("coefficient overflow");
    return r;
}

}  // namespace

void normalize(Row& row)
{
    std::sort(row.terms.begin(), row.terms.end(),
              [](const Term& a, const Term& b) { return a.first < b.first; });
    std::vector<Term> merged;
    for (const auto& t : row.terms) {
        if (!merged.empty() && merged.back().first == t.first)
            merged.back().second = checked_add(merged.back().second, t.second);
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [](const Term& t) { return t.second == 0; });
    row.terms = std::move(merged);

    std::int64_t g = 0;
    for (const auto& t : row.terms)
        g = std::gcd(g, t.second);
    g = std::gcd(g, row.constant);
    if (row.terms.empty() && row.constant != 0) {
        // Constant-only rows are reduced to 0 >= -1 / 0 >= 1 / 0 = 1.
        row.constant = row.relation == Relation::Equal ? 1 : (row.constant > 0 ? 1 : -1);
        return;
    }
    if (g > 1) {
        for (auto& t : row.terms)
            t.second /= g;
        row.constant /= g;
    }
    if (row.relation == Relation::Equal && !row.terms.empty() && row.terms.front().second < 0) {
        for (auto& t : row.terms)
            t.second = -t.second;
        row.constant = -row.constant;
    }
}

Row make_row(const std::map<std::uint32_t, Rational>& coefficients, const Rational& constant,
             Relation relation)
{
    Integer scale = constant.get_den();
    for (const auto& [c, v] : coefficients)
        if (v != 0)
            mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), v.get_den_mpz_t());
    Integer g = 0;
    for (const auto& [c, v] : coefficients)
        if (v != 0) {
            Integer num = v.get_num() * (scale / v.get_den());
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
        }
    Integer cnum = constant.get_num() * (scale / constant.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), cnum.get_mpz_t());
    if (g == 0)
        g = 1;
    Row row;
    row.relation = relation;
    for (const auto& [c, v] : coefficients) {
        if (v == 0)
            continue;
        Integer num = v.get_num() * (scale / v.get_den()) / g;
        if (!fits_int64(num))
            throw CoefficientOverflow("coefficient does not fit in 64 bits");
        row.terms.emplace_back(c, to_int64(num));
    }
    Integer cn = cnum / g;
    if (!fits_int64(cn))
        throw CoefficientOverflow("constant does not fit in 64 bits");
    row.constant = to_int64(cn);
    normalize(row);
    return row;
}

bool trivially_true(const Row& row)
{
    if (!row.terms.empty())
        return false;
    return row.relation == Relation::Equal ? row.constant == 0 : row.constant >= 0;
}

bool contradictory(const Row& row)
{
    return row.terms.empty() && !trivially_true(row);
}

Rational evaluate(const Row& row, const std::vector<Rational>& point)
{
    Rational v = row.constant;
    for (const auto& [c, a] : row.terms)
        v += point.at(c) * a;
    return v;
}

bool satisfied(const Row& row, const std::vector<Rational>& point)
{
    Rational v = evaluate(row, point);
    return row.relation == Relation::Equal ? v == 0 : v >= 0;
}

namespace {

using SparseQ = std::map<std::uint32_t, Rational>;

void axpy(SparseQ& target, const Rational& factor, const SparseQ& source)
{
    for (const auto& [c, v] : source) {
        auto& slot = target[c];
        slot += factor * v;
        if (slot == 0)
            target.erase(c);
    }
}

}  // namespace

InequalitySystem canonicalize(const InequalitySystem& system)
{
    struct Basis {
        std::uint32_t pivot;
        SparseQ coeffs;
        Rational constant;
    };
    std::vector<Basis> basis;  // each with coefficient 1 at its pivot
    bool infeasible = false;

    auto reduce = [&](SparseQ& coeffs, Rational& constant) {
        for (const auto& b : basis) {
            auto it = coeffs.find(b.pivot);
            if (it == coeffs.end())
                continue;
            Rational f = -it->second;
            axpy(coeffs, f, b.coeffs);
            constant += f * b.constant;
        }
    };

    for (const auto& row : system.rows) {
        if (row.relation != Relation::Equal)
            continue;
        SparseQ coeffs;
        for (const auto& [c, v] : row.terms)
            coeffs[c] = v;
        Rational constant = row.constant;
        reduce(coeffs, constant);
        if (coeffs.empty()) {
            if (constant != 0)
                infeasible = true;
            continue;
        }
        std::uint32_t pivot = coeffs.rbegin()->first;
        Rational inv = 1 / coeffs.rbegin()->second;
        for (auto& [c, v] : coeffs)
            v *= inv;
        constant *= inv;
        for (auto& b : basis) {
            auto it = b.coeffs.find(pivot);
            if (it == b.coeffs.end())
                continue;
            Rational f = -it->second;
            axpy(b.coeffs, f, coeffs);
            b.constant += f * constant;
        }
        basis.push_back({pivot, std::move(coeffs), constant});
    }

    InequalitySystem out;
    out.columns = system.columns;
    for (const auto& b : basis)
        out.rows.push_back(make_row(b.coeffs, b.constant, Relation::Equal));
    for (const auto& row : system.rows) {
        if (row.relation == Relation::Equal)
            continue;
        SparseQ coeffs;
        for (const auto& [c, v] : row.terms)
            coeffs[c] = v;
        Rational constant = row.constant;
        reduce(coeffs, constant);
        Row r = make_row(coeffs, constant, Relation::GreaterEqual);
        if (trivially_true(r))
            continue;
        out.rows.push_back(std::move(r));
    }
    if (infeasible)
        out.rows.push_back(Row{{}, 1, Relation::Equal});
    std::sort(out.rows.begin(), out.rows.end());
    out.rows.erase(std::unique(out.rows.begin(), out.rows.end()), out.rows.end());
    return out;
}

std::string format_row(const std::vector<std::string>& columns, const Row& row)
{
    std::ostringstream out;
    bool first = true;
    for (const auto& [c, v] : row.terms) {
        if (!first)
            out << ' ';
        first = false;
        out << (v > 0 ? "+" : "") << v << '*' << columns.at(c);
    }
    if (row.constant != 0 || row.terms.empty()) {
        if (!first)
            out << ' ';
        out << (row.constant >= 0 ? "+" : "") << row.constant;
    }
    out << (row.relation == Relation::Equal ? " = 0" : " >= 0");
    return out.str();
}

std::vector<std::int64_t> dense(const Row& row, std::size_t width)
{
    std::vector<std::int64_t> out(width, 0);
    for (const auto& [c, v] : row.terms)
        out.at(c) = v;
    return out;
}

void write_tsv(std::ostream& out, const InequalitySystem& system)
{
    bool constants = std::any_of(system.rows.begin(), system.rows.end(),
                                 [](const Row& r) { return r.constant != 0; });
    out << "rel";
    for (const auto& c : system.columns)
        out << '\t' << c;
    if (constants)
        out << "\tconst";
    out << '\n';
    for (const auto& row : system.rows) {
        out << (row.relation == Relation::Equal ? "=" : ">=");
        for (auto v : dense(row, system.width()))
            out << '\t' << v;
        if (constants)
            out << '\t' << row.constant;
        out << '\n';
    }
}

InequalitySystem read_tsv(std::istream& in)
{
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ss(line);
        while (std::getline(ss, cell, '\t'))
            cells.push_back(cell);
        return cells;
    };
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("empty matrix file");
    auto header = split(line);
    if (header.empty() || header[0] != "rel")
        throw std::invalid_argument("matrix header must start with 'rel'");
    bool constants = header.back() == "const";
    InequalitySystem sys;
    sys.columns.assign(header.begin() + 1, header.end() - (constants ? 1 : 0));
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        auto cells = split(line);
        if (cells.size() != header.size())
            throw std::invalid_argument("matrix line " + std::to_string(line_no)
                                        + " has the wrong number of cells");
        Row row;
        if (cells[0] == ">=")
            row.relation = Relation::GreaterEqual;
        else if (cells[0] == "=")
            row.relation = Relation::Equal;
        else
            throw std::invalid_argument("matrix line " + std::to_string(line_no)
                                        + ": unknown relation '" + cells[0] + "'");
        for (std::size_t c = 0; c < sys.columns.size(); ++c) {
            std::int64_t v = std::stoll(cells[c + 1]);
            if (v != 0)
                row.terms.emplace_back(static_cast<std::uint32_t>(c), v);
        }
        if (constants)
            row.constant = std::stoll(cells.back());
        sys.rows.push_back(std::move(row));
    }
    return sys;
}

}  // namespace entrocausal
