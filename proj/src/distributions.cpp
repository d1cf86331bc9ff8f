#include "entrocausal/distributions.hpp"

#include "entrocausal/entropy_expression.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace entrocausal {

namespace {

using Kind = DistributionError::Kind;

class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t precision) { mpfr_init2(value, precision); }
    ~Mpfr() { mpfr_clear(value); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;

    Rational rational() const
    {
        Rational out;
        mpfr_get_q(out.get_mpq_t(), value);
        return out;
    }

    mpfr_t value;
};

// Bounds on -p log2 p = p (log2 q - log2 n) for p = n/q in [0, 1].
void term_bounds(const Rational& p, mpfr_prec_t precision, mpfr_t lower, mpfr_t upper)
{
    if (p <= 0 || p >= 1) {
        mpfr_set_zero(lower, 1);
        mpfr_set_zero(upper, 1);
        return;
    }
    Mpfr num(precision), den(precision), a(precision), b(precision), weight(precision);
    // Lower bound: log2 q rounded down, log2 n rounded up.
    mpfr_set_z(den.value, p.get_den_mpz_t(), MPFR_RNDD);
    mpfr_log2(a.value, den.value, MPFR_RNDD);
    mpfr_set_z(num.value, p.get_num_mpz_t(), MPFR_RNDU);
    mpfr_log2(b.value, num.value, MPFR_RNDU);
    mpfr_sub(a.value, a.value, b.value, MPFR_RNDD);
    if (mpfr_sgn(a.value) < 0)
        mpfr_set_zero(a.value, 1);
    mpfr_set_q(weight.value, p.get_mpq_t(), MPFR_RNDD);
    mpfr_mul(lower, a.value, weight.value, MPFR_RNDD);

    mpfr_set_z(den.value, p.get_den_mpz_t(), MPFR_RNDU);
    mpfr_log2(a.value, den.value, MPFR_RNDU);
    mpfr_set_z(num.value, p.get_num_mpz_t(), MPFR_RNDD);
    mpfr_log2(b.value, num.value, MPFR_RNDD);
    mpfr_sub(a.value, a.value, b.value, MPFR_RNDU);
    mpfr_set_q(weight.value, p.get_mpq_t(), MPFR_RNDU);
    mpfr_mul(upper, a.value, weight.value, MPFR_RNDU);
}

// Rational brackets around 1/e and the maximum of -p log2 p, which it attains there.
const Rational& inverse_e_lower()
{
    static const Rational v("3678794411/10000000000");
    return v;
}
const Rational& inverse_e_upper()
{
    static const Rational v("3678794412/10000000000");
    return v;
}
const Rational& peak_upper()
{
    static const Rational v("5307378455/10000000000");
    return v;
}

Rational floor_to_grid(const Rational& v, int bits)
{
    Integer scaled = v.get_num() << bits;
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), v.get_den_mpz_t());
    Rational out(q, Integer(1) << bits);
    out.canonicalize();
    return out;
}

Rational ceil_to_grid(const Rational& v, int bits)
{
    Integer scaled = v.get_num() << bits;
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), v.get_den_mpz_t());
    Rational out(q, Integer(1) << bits);
    out.canonicalize();
    return out;
}

std::vector<int> radix_digits(std::size_t index, const std::vector<FiniteVariable>& vars)
{
    std::vector<int> out(vars.size());
    for (std::size_t k = vars.size(); k-- > 0;) {
        out[k] = static_cast<int>(index % static_cast<std::size_t>(vars[k].cardinality));
        index /= static_cast<std::size_t>(vars[k].cardinality);
    }
    return out;
}

std::size_t alphabet_size(const std::vector<FiniteVariable>& vars)
{
    std::size_t n = 1;
    for (const auto& v : vars)
        n *= static_cast<std::size_t>(v.cardinality);
    return n;
}

}  // namespace

std::size_t ObservedDistribution::variable(std::string_view name) const
{
    for (std::size_t i = 0; i < variables.size(); ++i)
        if (variables[i].name == name)
            return i;
    throw DistributionError(Kind::UnknownComponent, "no variable " + std::string(name) + " in the distribution");
}

std::map<std::vector<int>, Rational> ObservedDistribution::marginal(const std::vector<std::size_t>& positions) const
{
    std::map<std::vector<int>, Rational> out;
    std::vector<int> key(positions.size());
    for (const auto& [outcome, p] : mass) {
        if (p == 0)
            continue;
        for (std::size_t k = 0; k < positions.size(); ++k)
            key[k] = outcome.at(positions[k]);
        out[key] += p;
    }
    return out;
}

const std::vector<FiniteVariable>& PostSelectedFamily::variables() const
{
    static const std::vector<FiniteVariable> none;
    return members.empty() ? none : members.begin()->second.variables;
}

PostSelectedFamily single(ObservedDistribution distribution)
{
    PostSelectedFamily family;
    family.members.emplace(std::vector<int>{}, std::move(distribution));
    return family;
}

void validate(const PostSelectedFamily& family)
{
    if (family.members.empty())
        throw DistributionError(Kind::ParseError, "distribution has no members");
    if (family.mass_error < 0)
        throw DistributionError(Kind::ParseError, "negative mass error");
    const auto& vars = family.variables();
    for (const auto& [key, member] : family.members) {
        if (key.size() != family.pivots.size())
            throw DistributionError(Kind::ParseError, "member key does not match the pivots");
        for (std::size_t k = 0; k < key.size(); ++k)
            if (key[k] < 0 || key[k] >= family.pivots[k].cardinality)
                throw DistributionError(Kind::ParseError, "pivot value out of range for " + family.pivots[k].name);
        if (member.variables != vars)
            throw DistributionError(Kind::ParseError, "members disagree on their variables");
        Rational total = 0;
        for (const auto& [outcome, p] : member.mass) {
            if (outcome.size() != vars.size())
                throw DistributionError(Kind::ParseError, "outcome has the wrong length");
            for (std::size_t k = 0; k < outcome.size(); ++k)
                if (outcome[k] < 0 || outcome[k] >= vars[k].cardinality)
                    throw DistributionError(Kind::ParseError, "outcome out of range for " + vars[k].name);
            if (p < 0)
                throw DistributionError(Kind::ParseError, "negative probability");
            total += p;
        }
        if (total != 1)
            throw DistributionError(Kind::NotNormalized, "probabilities sum to " + to_string(total) + ", not 1");
    }
}

Interval entropy_enclosure(const std::map<std::vector<int>, Rational>& pmf, int precision_bits,
                           const Rational& mass_error, std::size_t outcomes_per_mass)
{
    const int grid = precision_bits + 2;
    const mpfr_prec_t working = precision_bits + 64;
    Mpfr lower(working), upper(working), lo(working), hi(working), lo2(working), hi2(working);
    mpfr_set_zero(lower.value, 1);
    mpfr_set_zero(upper.value, 1);
    Rational slack = mass_error * static_cast<unsigned long>(outcomes_per_mass);
    Rational extra_upper = 0;
    for (const auto& [outcome, p] : pmf) {
        if (slack == 0) {
            term_bounds(p, working, lo.value, hi.value);
        } else {
            Rational a = std::max(Rational(0), Rational(p - slack));
            Rational b = std::min(Rational(1), Rational(p + slack));
            term_bounds(a, working, lo.value, hi.value);
            term_bounds(b, working, lo2.value, hi2.value);
            mpfr_min(lo.value, lo.value, lo2.value, MPFR_RNDD);
            mpfr_max(hi.value, hi.value, hi2.value, MPFR_RNDU);
            if (a <= inverse_e_upper() && b >= inverse_e_lower()) {
                // The peak lies inside the interval; add it exactly afterwards.
                mpfr_set_zero(hi.value, 1);
                extra_upper += peak_upper();
            }
        }
        mpfr_add(lower.value, lower.value, lo.value, MPFR_RNDD);
        mpfr_add(upper.value, upper.value, hi.value, MPFR_RNDU);
    }
    return {floor_to_grid(lower.rational(), grid), ceil_to_grid(upper.rational() + extra_upper, grid)};
}

EntropyEnclosure entropy_vector(const CausalStructure& structure, const PostSelectedFamily& family,
                                const std::vector<std::string>& components, int precision_bits)
{
    validate(family);
    const auto& vars = family.variables();
    EntropyEnclosure out;
    for (const auto& component : components) {
        auto nodes = column_systems(component);
        if (nodes.empty())
            throw DistributionError(Kind::UnknownComponent, "not a joint entropy: " + component);
        std::map<std::size_t, int> fixed;  // pivot position -> value
        std::vector<std::size_t> positions;
        for (const auto& name : nodes) {
            auto node = structure.find(name);
            if (!node || !structure.observed(*node))
                throw DistributionError(Kind::UnknownComponent,
                                        component + ": " + name + " is not an observed node");
            const auto& origin = structure.origin(*node);
            auto it = std::find_if(vars.begin(), vars.end(), [&](const auto& v) { return v.name == origin; });
            if (it == vars.end())
                throw DistributionError(Kind::UnknownComponent, component + ": no variable " + origin);
            auto pos = static_cast<std::size_t>(it - vars.begin());
            if (std::find(positions.begin(), positions.end(), pos) != positions.end())
                throw DistributionError(Kind::UnknownComponent, component + ": " + origin + " appears twice");
            positions.push_back(pos);
            for (const auto& choice : structure.choices(*node)) {
                auto pit = std::find_if(family.pivots.begin(), family.pivots.end(),
                                        [&](const auto& v) { return v.name == choice.pivot; });
                if (pit == family.pivots.end() || choice.value < 0 || choice.value >= pit->cardinality)
                    throw DistributionError(Kind::UnknownComponent, component + ": the distribution has no pivot value "
                                                                        + choice.pivot + "="
                                                                        + std::to_string(choice.value));
                auto pp = static_cast<std::size_t>(pit - family.pivots.begin());
                auto [fit, inserted] = fixed.emplace(pp, choice.value);
                if (!inserted && fit->second != choice.value)
                    throw DistributionError(Kind::UnknownComponent, component + ": conflicting pivot values");
            }
        }
        const std::map<std::vector<int>, Rational>* first = nullptr;
        std::map<std::vector<int>, Rational> chosen;
        for (const auto& [key, member] : family.members) {
            bool match = std::all_of(fixed.begin(), fixed.end(), [&](const auto& f) { return key[f.first] == f.second; });
            if (!match)
                continue;
            auto m = member.marginal(positions);
            if (!first) {
                chosen = std::move(m);
                first = &chosen;
            } else if (m != chosen) {
                throw DistributionError(Kind::InconsistentFamily,
                                        component + " differs between members that should share it");
            }
        }
        if (!first)
            throw DistributionError(Kind::UnknownComponent, component + ": no member has the required pivot values");

        std::size_t per_mass = 1;
        if (family.mass_error != 0) {
            // Every outcome may carry up to mass_error, including stored zeros.
            std::vector<FiniteVariable> kept;
            for (auto p : positions)
                kept.push_back(vars[p]);
            for (std::size_t i = 0; i < alphabet_size(kept); ++i)
                chosen.try_emplace(radix_digits(i, kept), 0);
            per_mass = alphabet_size(vars) / alphabet_size(kept);
        }
        out.components.push_back(component);
        out.values.push_back(entropy_enclosure(chosen, precision_bits, family.mass_error, per_mass));
    }
    return out;
}

PostSelectedFamily prbox_bilocal_strategy()
{
    // PR box: outputs (o1, o2) uniform subject to o1 xor o2 = u and v.
    auto box = [](int u, int v, int o1, int o2) {
        return (o1 ^ o2) == (u & v) ? Rational(1, 2) : Rational(0);
    };
    PostSelectedFamily family;
    family.pivots = {{"A", 2}, {"B", 2}, {"C", 2}};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                ObservedDistribution d;
                d.variables = {{"X", 2}, {"Y", 4}, {"Z", 2}};
                for (int x = 0; x < 2; ++x)
                    for (int y1 = 0; y1 < 2; ++y1)
                        for (int y2 = 0; y2 < 2; ++y2)
                            for (int z = 0; z < 2; ++z) {
                                // Setting into the left box first, its output into the right one.
                                Rational left_first = box(a, b, x, y1) * box(y1, c, y2, z);
                                // Setting into the right box first, its output into the left one.
                                Rational right_first = box(b, c, y2, z) * box(a, y2, x, y1);
                                Rational p = (left_first + right_first) / 2;
                                if (p != 0)
                                    d.mass[{x, 2 * y1 + y2, z}] = p;
                            }
                family.members.emplace(std::vector<int>{a, b, c}, std::move(d));
            }
    return family;
}

double singlet_pair_probability(double angle_a, double angle_b, int a, int b)
{
    double s = std::sin(angle_a - angle_b);
    return a == b ? 0.5 * s * s : 0.5 * (1 - s * s);
}

PostSelectedFamily singlet_bilocal_strategy(const Rational& x, int precision_bits)
{
    const mpfr_prec_t working = precision_bits + 48;
    // sin^2 of an angle given as a multiple of x, rounded to nearest; the
    // accumulated rounding error stays below 2^-(working - 6) for |angle| < 4.
    std::map<int, Rational> sin_squared;
    auto s2 = [&](int multiple) -> const Rational& {
        auto it = sin_squared.find(multiple);
        if (it != sin_squared.end())
            return it->second;
        Mpfr angle(working), s(working);
        Rational exact = x * multiple;
        mpfr_set_q(angle.value, exact.get_mpq_t(), MPFR_RNDN);
        mpfr_sin(s.value, angle.value, MPFR_RNDN);
        mpfr_sqr(s.value, s.value, MPFR_RNDN);
        return sin_squared.emplace(multiple, s.rational()).first->second;
    };
    if (abs(x) >= 1)
        throw std::invalid_argument("singlet strategy expects |x| < 1");
    auto pair = [&](int multiple_a, int multiple_b, int a, int b) {
        const Rational& s = s2(multiple_a - multiple_b);
        return a == b ? Rational(s / 2) : Rational((1 - s) / 2);
    };

    PostSelectedFamily family;
    family.pivots = {{"A", 2}, {"B", 2}, {"C", 2}};
    // Each pair mass is off by at most half the sin^2 error, a product of two by at most the full error.
    family.mass_error = Rational(1, Integer(1) << static_cast<unsigned long>(working - 6));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                const int x_angle = a == 0 ? 1 : 3;
                const int z_angle = c == 0 ? 0 : 2;
                const int y_left = b == 0 ? 0 : 2;
                ObservedDistribution d;
                d.variables = {{"X", 2}, {"Y", 4}, {"Z", 2}};
                for (int xo = 0; xo < 2; ++xo)
                    for (int y0 = 0; y0 < 2; ++y0)
                        for (int y1 = 0; y1 < 2; ++y1)
                            for (int zo = 0; zo < 2; ++zo) {
                                const int y_right = 2 * y0 + 1;
                                Rational p = pair(x_angle, y_left, xo, y0) * pair(y_right, z_angle, y1, zo);
                                if (p != 0)
                                    d.mass[{xo, 2 * y0 + y1, zo}] = p;
                            }
                family.members.emplace(std::vector<int>{a, b, c}, std::move(d));
            }
    return family;
}

namespace {

std::vector<FiniteVariable> parse_declarations(std::istringstream& words, int line)
{
    std::vector<FiniteVariable> out;
    std::set<std::string> seen;
    for (std::string w; words >> w;) {
        auto colon = w.find(':');
        if (colon == std::string::npos || colon == 0)
            throw DistributionError(Kind::ParseError, "line " + std::to_string(line) + ": expected NAME:CARD");
        FiniteVariable v{w.substr(0, colon), 0};
        try {
            v.cardinality = std::stoi(w.substr(colon + 1));
        } catch (const std::exception&) {
            throw DistributionError(Kind::ParseError, "line " + std::to_string(line) + ": bad cardinality in " + w);
        }
        if (v.cardinality < 1 || !valid_node_name(v.name) || !seen.insert(v.name).second)
            throw DistributionError(Kind::ParseError, "line " + std::to_string(line) + ": bad declaration " + w);
        out.push_back(v);
    }
    if (out.empty())
        throw DistributionError(Kind::ParseError, "line " + std::to_string(line) + ": empty declaration");
    return out;
}

std::vector<int> parse_values(const std::string& text, std::size_t expected, int line)
{
    std::istringstream in(text);
    std::vector<int> out;
    for (std::string w; in >> w;) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(w, &used));
            if (used != w.size())
                throw std::invalid_argument(w);
        } catch (const std::exception&) {
            throw DistributionError(Kind::ParseError, "line " + std::to_string(line) + ": bad value " + w);
        }
    }
    if (out.size() != expected)
        throw DistributionError(Kind::ParseError, "line " + std::to_string(line) + ": expected "
                                                      + std::to_string(expected) + " values");
    return out;
}

}  // namespace

PostSelectedFamily parse_distribution(std::string_view text)
{
    PostSelectedFamily family;
    std::vector<FiniteVariable> vars;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    bool data = false;
    while (std::getline(in, raw)) {
        ++line;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        std::istringstream words(raw);
        std::string head;
        if (!(words >> head))
            continue;
        if (head == "vars" || head == "pivot" || head == "error") {
            if (data)
                throw DistributionError(Kind::ParseError, "line " + std::to_string(line) + ": " + head
                                                              + " must precede the probabilities");
            if (head == "vars") {
                if (!vars.empty())
                    throw DistributionError(Kind::ParseError, "line " + std::to_string(line) + ": repeated vars");
                vars = parse_declarations(words, line);
            } else if (head == "pivot") {
                if (!family.pivots.empty())
                    throw DistributionError(Kind::ParseError, "line " + std::to_string(line) + ": repeated pivot");
                family.pivots = parse_declarations(words, line);
            } else {
                std::string value, rest;
                if (!(words >> value) || (words >> rest))
                    throw DistributionError(Kind::ParseError, "line " + std::to_string(line) + ": expected one value");
                try {
                    family.mass_error = parse_rational(value);
                } catch (const std::exception&) {
                    throw DistributionError(Kind::ParseError, "line " + std::to_string(line) + ": bad error bound");
                }
            }
            continue;
        }
        if (vars.empty())
            throw DistributionError(Kind::ParseError, "line " + std::to_string(line) + ": vars must come first");
        data = true;
        std::string body = raw;
        std::string pivot_part;
        auto bar = body.find('|');
        if (bar != std::string::npos) {
            pivot_part = body.substr(0, bar);
            body = body.substr(bar + 1);
        } else if (!family.pivots.empty()) {
            throw DistributionError(Kind::ParseError, "line " + std::to_string(line) + ": missing '|'");
        }
        auto key = parse_values(pivot_part, family.pivots.size(), line);
        auto last = body.find_last_not_of(" \t\r");
        auto start = body.find_last_of(" \t", last);
        if (last == std::string::npos || start == std::string::npos)
            throw DistributionError(Kind::ParseError, "line " + std::to_string(line) + ": expected outcome and mass");
        Rational p;
        try {
            p = parse_rational(body.substr(start + 1, last - start));
        } catch (const std::exception&) {
            throw DistributionError(Kind::ParseError, "line " + std::to_string(line) + ": bad probability");
        }
        auto outcome = parse_values(body.substr(0, start), vars.size(), line);
        auto& member = family.members[key];
        member.variables = vars;
        if (member.mass.count(outcome))
            throw DistributionError(Kind::ParseError, "line " + std::to_string(line) + ": repeated outcome");
        member.mass[outcome] = p;
    }
    if (vars.empty())
        throw DistributionError(Kind::ParseError, "missing vars line");
    validate(family);
    return family;
}

std::string serialize_distribution(const PostSelectedFamily& family)
{
    std::ostringstream out;
    auto declare = [&](const char* head, const std::vector<FiniteVariable>& vs) {
        out << head;
        for (const auto& v : vs)
            out << ' ' << v.name << ':' << v.cardinality;
        out << '\n';
    };
    declare("vars", family.variables());
    if (!family.pivots.empty())
        declare("pivot", family.pivots);
    if (family.mass_error != 0)
        out << "error " << to_string(family.mass_error) << '\n';
    for (const auto& [key, member] : family.members)
        for (const auto& [outcome, p] : member.mass) {
            if (p == 0)
                continue;
            for (int k : key)
                out << k << ' ';
            if (!family.pivots.empty())
                out << "| ";
            for (int v : outcome)
                out << v << ' ';
            out << to_string(p) << '\n';
        }
    return out.str();
}

}  // namespace entrocausal
