#include "entrocausal/certification.hpp"

#include "entrocausal/entropy_expression.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace entrocausal {

namespace {

using Kind = CertificationError::Kind;

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

std::vector<RationalRow> box_rows(const std::vector<std::size_t>& columns, const std::vector<Interval>& box,
                                  std::vector<std::string>* provenance = nullptr,
                                  const std::vector<std::string>* names = nullptr)
{
    std::vector<RationalRow> out;
    for (std::size_t k = 0; k < columns.size(); ++k) {
        auto c = static_cast<std::uint32_t>(columns[k]);
        const auto& iv = box[k];
        std::string name = names ? (*names)[k] : std::string();
        if (iv.point()) {
            out.push_back({{{c, Rational(1)}}, -iv.lower, Relation::Equal});
            if (provenance)
                provenance->push_back("pin " + name + " = " + to_string(iv.lower));
        } else {
            out.push_back({{{c, Rational(1)}}, -iv.lower, Relation::GreaterEqual});
            out.push_back({{{c, Rational(-1)}}, iv.upper, Relation::GreaterEqual});
            if (provenance) {
                provenance->push_back("pin " + name + " >= " + to_string(iv.lower));
                provenance->push_back("pin " + name + " <= " + to_string(iv.upper));
            }
        }
    }
    return out;
}

std::string format_terms(const std::vector<std::string>& columns, const RationalRow& row)
{
    std::string out;
    for (const auto& [c, v] : row.terms) {
        if (!out.empty())
            out += ' ';
        out += to_string(v) + "*" + columns.at(c);
    }
    return out;
}

std::vector<std::string> split_tabs(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto tab = line.find('\t', start);
        out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
        if (tab == std::string::npos)
            return out;
        start = tab + 1;
    }
}

Rational combination_constant(const std::vector<CertificateRow>& rows, bool& ok)
{
    std::map<std::uint32_t, Rational> sum;
    Rational constant = 0;
    ok = true;
    for (const auto& r : rows) {
        if (r.row.relation == Relation::GreaterEqual && r.multiplier < 0)
            ok = false;
        for (const auto& [c, v] : r.row.terms)
            sum[c] += r.multiplier * v;
        constant += r.multiplier * r.row.constant;
    }
    for (const auto& [c, v] : sum)
        if (v != 0)
            ok = false;
    return constant;
}

}  // namespace

EntropyPoint to_point(const EntropyEnclosure& enclosure)
{
    EntropyPoint out;
    for (std::size_t i = 0; i < enclosure.components.size(); ++i)
        out[enclosure.components[i]] = enclosure.values[i];
    return out;
}

EntropyPoint exact_point(const std::map<std::string, Rational>& values)
{
    EntropyPoint out;
    for (const auto& [name, v] : values)
        out[name] = {v, v};
    return out;
}

std::string_view verdict_name(Verdict verdict)
{
    switch (verdict) {
    case Verdict::Compatible:
        return "Inconclusive-Compatible";
    case Verdict::Incompatible:
        return "Incompatible";
    case Verdict::Inconclusive:
        return "Inconclusive";
    }
    return "?";
}

CertificationResult certify(const CausalStructure& structure, const GenerationOptions& options,
                            const EntropyPoint& point)
{
    ConstraintSystem cs = generate(structure, options);
    InequalitySystem system = cs.inequality_system();
    std::vector<std::size_t> marginal = cs.marginal_columns();

    std::vector<std::string> names;
    std::vector<Interval> box;
    std::set<std::string> expected;
    for (auto c : marginal) {
        names.push_back(system.columns[c]);
        expected.insert(system.columns[c]);
        auto it = point.find(system.columns[c]);
        if (it == point.end())
            throw CertificationError(Kind::DimensionMismatch, "no value for " + system.columns[c]);
        if (it->second.lower > it->second.upper)
            throw CertificationError(Kind::DimensionMismatch, "empty enclosure for " + system.columns[c]);
        box.push_back(it->second);
    }
    for (const auto& [name, iv] : point)
        if (!expected.count(name))
            throw CertificationError(Kind::DimensionMismatch, name + " is not a marginal component of the structure");

    // A box outside the observed Shannon cone cannot come from a distribution.
    {
        InequalitySystem observed = shannon_cone(names);
        std::vector<std::size_t> own(names.size());
        for (std::size_t k = 0; k < own.size(); ++k)
            own[k] = k;
        std::vector<Interval> widened;
        for (const auto& iv : box)
            widened.push_back(iv.point() ? iv : Interval{floor_to_grid(iv.lower, 32), ceil_to_grid(iv.upper, 32)});
        if (!lp_feasible(observed, box_rows(own, widened)).feasible)
            throw CertificationError(Kind::NonEntropicPoint,
                                     "the entropy values violate the Shannon inequalities of the observed variables");
    }

    CertificationResult result;
    result.columns = system.columns;
    result.pinned = point;
    for (auto f : resolve_families(options))
        result.notes.emplace_back(family_name(f));

    auto attempt = [&](const std::vector<Interval>& pinned_box) {
        std::vector<std::string> pin_provenance;
        auto pins = box_rows(marginal, pinned_box, &pin_provenance, &names);
        FeasibilityResult fr = lp_feasible(system, pins);
        if (fr.feasible) {
            result.point = std::move(fr.point);
            return false;
        }
        result.verdict = Verdict::Incompatible;
        for (std::size_t i = 0; i < fr.multipliers.size(); ++i) {
            if (fr.multipliers[i] == 0)
                continue;
            if (i < system.rows.size()) {
                const auto& c = cs.constraints[i];
                std::string provenance(family_name(c.family));
                if (!c.detail.empty())
                    provenance += " " + c.detail;
                result.certificate.push_back({to_rational(system.rows[i]), fr.multipliers[i], provenance});
            } else {
                std::size_t k = i - system.rows.size();
                result.certificate.push_back({pins[k], fr.multipliers[i], pin_provenance[k]});
            }
        }
        if (!verify_certificate(result.certificate))
            throw std::logic_error("incompatibility certificate failed verification");
        return true;
    };

    if (std::all_of(box.begin(), box.end(), [](const Interval& iv) { return iv.point(); })) {
        if (!attempt(box))
            result.verdict = Verdict::Compatible;
        return result;
    }
    // Enclosures of irrational entropies are too narrow for the floating-point
    // guide of the LP. Boxes widened outward to coarse dyadic grids still
    // contain the true point, so infeasibility of any of them is conclusive.
    for (int bits : {16, 24, 32}) {
        std::vector<Interval> widened;
        for (const auto& iv : box)
            widened.push_back({floor_to_grid(iv.lower, bits), ceil_to_grid(iv.upper, bits)});
        if (attempt(widened)) {
            result.notes.push_back("enclosure widened to multiples of 2^-" + std::to_string(bits));
            return result;
        }
    }
    result.verdict = Verdict::Inconclusive;
    result.notes.push_back("feasible for the enclosure widened to multiples of 2^-32");
    return result;
}

std::vector<ViolatedRow> violated_inequalities(const InequalitySystem& projected, const EntropyPoint& point)
{
    std::vector<const Interval*> values(projected.columns.size(), nullptr);
    for (std::size_t c = 0; c < projected.columns.size(); ++c) {
        auto it = point.find(projected.columns[c]);
        if (it != point.end())
            values[c] = &it->second;
    }
    std::vector<ViolatedRow> out;
    for (const auto& row : projected.rows) {
        Rational low = row.constant, high = row.constant;
        for (const auto& [c, v] : row.terms) {
            if (!values[c])
                throw CertificationError(Kind::DimensionMismatch, "no value for " + projected.columns[c]);
            const auto& iv = *values[c];
            if (v > 0) {
                low += v * iv.lower;
                high += v * iv.upper;
            } else {
                low += v * iv.upper;
                high += v * iv.lower;
            }
        }
        if (high < 0)
            out.push_back({row, high});
        else if (row.relation == Relation::Equal && low > 0)
            out.push_back({row, -low});
    }
    std::stable_sort(out.begin(), out.end(), [](const ViolatedRow& a, const ViolatedRow& b) { return a.slack < b.slack; });
    return out;
}

void write_certificate(std::ostream& out, const CertificationResult& result)
{
    out << "columns";
    for (const auto& c : result.columns)
        out << '\t' << c;
    out << '\n';
    for (const auto& r : result.certificate)
        out << "row\t" << to_string(r.multiplier) << '\t' << (r.row.relation == Relation::Equal ? "=" : ">=") << '\t'
            << to_string(r.row.constant) << '\t' << format_terms(result.columns, r.row) << '\t' << r.provenance << '\n';
    bool ok = false;
    out << "sum\t" << to_string(combination_constant(result.certificate, ok)) << '\n';
}

std::vector<CertificateRow> read_certificate(std::istream& in, std::vector<std::string>& columns)
{
    auto fail = [](int line, const std::string& what) {
        return CertificationError(Kind::MalformedCertificate,
                                  "certificate line " + std::to_string(line) + ": " + what);
    };
    std::vector<CertificateRow> rows;
    std::map<std::string, std::uint32_t> index;
    columns.clear();
    std::string line;
    int number = 0;
    bool have_columns = false, have_sum = false;
    Rational declared_sum;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty() || line[0] == '#')
            continue;
        auto fields = split_tabs(line);
        if (fields[0] == "columns") {
            if (have_columns)
                throw fail(number, "repeated columns line");
            have_columns = true;
            columns.assign(fields.begin() + 1, fields.end());
            for (std::size_t i = 0; i < columns.size(); ++i)
                index[columns[i]] = static_cast<std::uint32_t>(i);
        } else if (fields[0] == "row") {
            if (!have_columns)
                throw fail(number, "row before columns");
            if (fields.size() != 6)
                throw fail(number, "expected 6 fields");
            CertificateRow r;
            try {
                r.multiplier = parse_rational(fields[1]);
                r.row.constant = parse_rational(fields[3]);
            } catch (const std::exception&) {
                throw fail(number, "bad number");
            }
            if (fields[2] == "=")
                r.row.relation = Relation::Equal;
            else if (fields[2] == ">=")
                r.row.relation = Relation::GreaterEqual;
            else
                throw fail(number, "bad relation " + fields[2]);
            std::istringstream terms(fields[4]);
            for (std::string t; terms >> t;) {
                auto star = t.find('*');
                if (star == std::string::npos)
                    throw fail(number, "bad term " + t);
                auto it = index.find(t.substr(star + 1));
                if (it == index.end())
                    throw fail(number, "unknown column " + t.substr(star + 1));
                try {
                    r.row.terms.emplace_back(it->second, parse_rational(t.substr(0, star)));
                } catch (const std::exception&) {
                    throw fail(number, "bad coefficient in " + t);
                }
            }
            r.provenance = fields[5];
            rows.push_back(std::move(r));
        } else if (fields[0] == "sum") {
            if (fields.size() != 2)
                throw fail(number, "expected 2 fields");
            try {
                declared_sum = parse_rational(fields[1]);
            } catch (const std::exception&) {
                throw fail(number, "bad number");
            }
            have_sum = true;
        } else {
            throw fail(number, "unknown record " + fields[0]);
        }
    }
    if (!have_columns || !have_sum)
        throw CertificationError(Kind::MalformedCertificate, "certificate needs a columns and a sum line");
    bool ok = false;
    if (combination_constant(rows, ok) != declared_sum)
        throw CertificationError(Kind::SumMismatch, "declared sum does not match the rows");
    return rows;
}

bool verify_certificate(const std::vector<CertificateRow>& rows)
{
    bool ok = false;
    Rational constant = combination_constant(rows, ok);
    return ok && constant < 0;
}

bool verify_certificate(const std::vector<CertificateRow>& rows, const std::vector<std::string>& columns,
                        const CausalStructure& structure, const GenerationOptions& options)
{
    if (!verify_certificate(rows))
        return false;
    ConstraintSystem cs = generate(structure, options);
    InequalitySystem system = cs.inequality_system();
    if (system.columns != columns)
        return false;
    std::set<Row> present;
    for (auto r : system.rows) {
        normalize(r);
        present.insert(std::move(r));
    }
    std::set<std::size_t> marginal;
    for (auto c : cs.marginal_columns())
        marginal.insert(c);
    for (const auto& r : rows) {
        if (r.provenance.rfind("pin ", 0) == 0) {
            if (r.row.terms.size() != 1 || !marginal.count(r.row.terms[0].first))
                return false;
            continue;
        }
        std::map<std::uint32_t, Rational> coeffs;
        for (const auto& [c, v] : r.row.terms)
            coeffs[c] += v;
        Row integer = make_row(coeffs, r.row.constant, r.row.relation);
        if (!present.count(integer))
            return false;
    }
    return true;
}

}  // namespace entrocausal
