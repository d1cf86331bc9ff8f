// Command-line front end: analyze, certify, verify-certificate, catalog,
// postselect, orbits, variables.
#include "entrocausal/certification.hpp"
#include "entrocausal/constraints.hpp"
#include "entrocausal/entropy_expression.hpp"
#include "entrocausal/fme.hpp"
#include "entrocausal/symmetry.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace entrocausal;

namespace {

// Input problems (bad files, unknown names) end the process with exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// A catalog name, or a path to a structure file.
CausalStructure load_structure(const std::string& spec)
{
    if (std::filesystem::is_regular_file(spec))
        return parse_structure(slurp(spec));
    const auto& names = catalog_names();
    if (std::find(names.begin(), names.end(), spec) == names.end())
        throw InputError("'" + spec + "' is neither a structure file nor a catalog name");
    return catalog(spec);
}

struct TheoryFlags {
    std::string theory = "gpt";
    std::string variant = "positive-conditional";
    bool non_shannon = false;

    void add(CLI::App* cmd)
    {
        cmd->add_option("--theory", theory, "classical | quantum | boxworld | gpt")->capture_default_str();
        cmd->add_option("--quantum-variant", variant, "positive-conditional | weak-monotonicity")
            ->capture_default_str();
        cmd->add_flag("--non-shannon", non_shannon, "add Zhang-Yeung instances on classical variable sets");
    }

    GenerationOptions options() const
    {
        GenerationOptions o;
        auto t = parse_theory(theory);
        if (!t)
            throw InputError("unknown theory '" + theory + "'");
        o.theory = *t;
        if (variant == "positive-conditional")
            o.quantum_variant = QuantumVariant::PositiveConditional;
        else if (variant == "weak-monotonicity")
            o.quantum_variant = QuantumVariant::WeakMonotonicity;
        else
            throw InputError("unknown quantum variant '" + variant + "'");
        o.include_non_shannon = non_shannon;
        return o;
    }
};

// Columns kept by analyze: the observed marginal, the restricted information
// causality preset, or an explicit comma-separated list of column names.
std::vector<std::size_t> keep_columns(const ConstraintSystem& cs, const std::string& keep)
{
    if (keep == "observed")
        return cs.marginal_columns();
    std::vector<std::string> names;
    if (keep == "restricted7")
        names = {"H(X1)", "H(X2)", "H(Y_R1)", "H(Y_R2)", "H(Z)", "H(X1,Y_R1)", "H(X2,Y_R2)"};
    else {
        // "H(A),H(A,B)": split on commas outside parentheses.
        std::string item;
        int depth = 0;
        for (char ch : keep) {
            if (ch == '(')
                ++depth;
            if (ch == ')')
                --depth;
            if (ch == ',' && depth == 0) {
                names.push_back(item);
                item.clear();
            } else {
                item += ch;
            }
        }
        if (!item.empty())
            names.push_back(item);
    }
    auto columns = cs.column_names();
    std::vector<std::size_t> out;
    for (const auto& n : names) {
        auto it = std::find(columns.begin(), columns.end(), n);
        if (it == columns.end())
            throw InputError("--keep: no column " + n + (keep == "restricted7" ? " (restricted7 needs ic_postselected)" : ""));
        out.push_back(static_cast<std::size_t>(it - columns.begin()));
    }
    return out;
}

void print_orbits(std::ostream& out, const InequalitySystem& system, const SymmetryGroup& group, const std::string& prefix)
{
    auto orbits = orbit_classify(system, group);
    out << prefix << "orbits\t" << orbits.size() << '\n';
    for (const auto& o : orbits)
        out << prefix << "orbit\t" << o.members.size() << '\t' << format_row(system.columns, o.representative) << '\n';
}

// "0.1", "-3/40", "2" -> exact rational.
Rational parse_decimal(const std::string& text)
{
    auto dot = text.find('.');
    if (dot == std::string::npos)
        return parse_rational(text);
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    Rational r = parse_rational(digits.empty() || digits == "-" ? "0" : digits);
    Integer scale = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i)
        scale *= 10;
    r /= scale;
    return r;
}

PostSelectedFamily load_distribution(const std::string& spec, int precision)
{
    if (spec == "prbox-bilocal")
        return prbox_bilocal_strategy();
    if (spec.rfind("singlet-bilocal", 0) == 0) {
        Rational x(1, 10);
        if (auto colon = spec.find(':'); colon != std::string::npos) {
            try {
                x = parse_decimal(spec.substr(colon + 1));
            } catch (const std::exception&) {
                throw InputError("bad angle in '" + spec + "'");
            }
        }
        return singlet_bilocal_strategy(x, std::max(64, precision + 24));
    }
    return parse_distribution(slurp(spec));
}

unsigned default_threads()
{
    if (const char* env = std::getenv("CAUSAL_ENTROPY_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n > 0)
                return static_cast<unsigned>(n);
        } catch (const std::exception&) {
        }
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Entropic compatibility tests for causal structures in classical, quantum and generalised probabilistic theories"};
    app.require_subcommand(1);
    unsigned threads = default_threads();
    app.add_option("--threads", threads, "worker threads (default: CAUSAL_ENTROPY_THREADS or 1)");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "project the entropic constraints onto a marginal");
    std::string a_structure, a_keep = "observed", a_out, a_symmetry;
    double a_budget = 0;
    std::size_t a_max_rows = EliminationBudget{}.max_rows;
    bool a_summary = false, a_timing = false;
    TheoryFlags a_flags;
    analyze->add_option("structure", a_structure, "catalog name or structure file")->required();
    a_flags.add(analyze);
    analyze->add_option("--keep", a_keep, "observed | restricted7 | comma-separated column names")->capture_default_str();
    analyze->add_option("--budget", a_budget, "wall-clock limit in seconds (0: none)");
    analyze->add_option("--max-rows", a_max_rows, "row-count limit during elimination")->capture_default_str();
    analyze->add_option("--out", a_out, "write the matrix here instead of standard output");
    analyze->add_option("--symmetry", a_symmetry, "generator file; appends an orbit summary");
    analyze->add_flag("--summary", a_summary, "append the rows beyond the Shannon cone as comments");
    analyze->add_flag("--timing", a_timing, "print elimination statistics to standard error");

    // certify
    auto* cert = app.add_subcommand("certify", "decide whether a distribution's entropies meet the constraints");
    std::string c_structure, c_distribution, c_certificate, c_projected;
    int c_precision = 40;
    TheoryFlags c_flags;
    cert->add_option("structure", c_structure, "catalog name or structure file")->required();
    cert->add_option("distribution", c_distribution, "prbox-bilocal | singlet-bilocal[:x] | distribution file")->required();
    c_flags.add(cert);
    cert->add_option("--precision", c_precision, "enclosure width 2^-bits")->capture_default_str()->check(CLI::Range(8, 4096));
    cert->add_option("--certificate", c_certificate, "where to write the certificate when incompatible");
    cert->add_option("--projected", c_projected, "projected matrix whose violated rows are listed");

    // verify-certificate
    auto* verify = app.add_subcommand("verify-certificate", "re-check a certificate file by exact arithmetic");
    std::string v_file, v_structure;
    TheoryFlags v_flags;
    verify->add_option("certificate", v_file)->required();
    verify->add_option("--structure", v_structure, "also check every row against the generated system");
    v_flags.add(verify);

    auto* cat = app.add_subcommand("catalog", "list the built-in structures or print one");
    std::string cat_name;
    cat->add_option("name", cat_name);

    auto* post = app.add_subcommand("postselect", "split the descendants of a parentless node by its value");
    std::string p_structure;
    std::vector<std::string> p_pivots;
    int p_first = 0;
    post->add_option("structure", p_structure)->required();
    post->add_option("--pivot", p_pivots, "NAME:VALUES, repeatable")->required();
    post->add_option("--first-label", p_first, "label of the first value")->capture_default_str();

    auto* orb = app.add_subcommand("orbits", "group the rows of a matrix under a symmetry");
    std::string o_matrix, o_symmetry;
    bool o_members = false;
    orb->add_option("matrix", o_matrix)->required();
    orb->add_option("--symmetry", o_symmetry, "generator file")->required();
    orb->add_flag("--members", o_members, "list every member");

    auto* vars = app.add_subcommand("variables", "list the entropy variables of the generated system");
    std::string var_structure;
    bool var_marginal = false;
    TheoryFlags var_flags;
    vars->add_option("structure", var_structure)->required();
    var_flags.add(vars);
    vars->add_flag("--marginal", var_marginal, "observed components only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*analyze) {
            auto structure = load_structure(a_structure);
            auto cs = generate(structure, a_flags.options());
            auto system = cs.inequality_system();
            auto keep = keep_columns(cs, a_keep);
            EliminationBudget budget;
            budget.max_rows = a_max_rows;
            budget.threads = threads;
            budget.wall_clock = std::chrono::milliseconds(static_cast<long long>(a_budget * 1000));
            std::optional<SymmetryGroup> group;
            if (!a_symmetry.empty())
                group = parse_generators(slurp(a_symmetry));

            InequalitySystem projected;
            EliminationStats stats;
            int code = 0;
            auto start = std::chrono::steady_clock::now();
            try {
                projected = eliminate(system, keep, budget, &stats);
            } catch (const BudgetExceeded& e) {
                std::cerr << "warning: " << e.what()
                          << "; the output lists valid rows found so far and may miss facets\n";
                projected = canonicalize(e.partial());
                code = 2;
            }
            std::ofstream file;
            if (!a_out.empty()) {
                file.open(a_out);
                if (!file)
                    throw InputError("cannot write " + a_out);
            }
            std::ostream& out = a_out.empty() ? std::cout : file;
            write_tsv(out, projected);
            if (a_summary) {
                auto extra = non_shannon_rows(projected);
                out << "# rows\t" << projected.rows.size() << "\tbeyond Shannon\t" << extra.size() << '\n';
                for (const auto& r : extra)
                    out << "# " << format_row(projected.columns, r) << '\n';
            }
            if (group) {
                print_orbits(out, projected, *group, "# ");
                InequalitySystem beyond{projected.columns, non_shannon_rows(projected)};
                out << "# beyond Shannon\n";
                print_orbits(out, beyond, *group, "# ");
            }
            if (a_timing)
                std::cerr << "variables " << system.width() << " rows " << system.rows.size() << " substitutions "
                          << stats.substitutions << " eliminations " << stats.eliminations << " peak "
                          << stats.peak_rows << " lp-removed " << stats.lp_removed << " seconds "
                          << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << '\n';
            return code;
        }

        if (*cert) {
            auto structure = load_structure(c_structure);
            auto options = c_flags.options();
            auto family = load_distribution(c_distribution, c_precision);
            auto enclosure = entropy_vector(structure, family, marginal_variable_names(structure), c_precision);
            auto result = certify(structure, options, to_point(enclosure));
            std::cout << "theory\t" << theory_name(options.theory) << '\n';
            std::cout << "verdict\t" << verdict_name(result.verdict) << '\n';
            for (const auto& n : result.notes)
                std::cout << "note\t" << n << '\n';
            if (result.verdict == Verdict::Incompatible) {
                std::cout << "certificate rows\t" << result.certificate.size() << '\n';
                if (!c_certificate.empty()) {
                    std::ofstream f(c_certificate);
                    if (!f)
                        throw InputError("cannot write " + c_certificate);
                    write_certificate(f, result);
                }
            }
            if (!c_projected.empty()) {
                std::ifstream in(c_projected);
                if (!in)
                    throw InputError("cannot read " + c_projected);
                auto projected = read_tsv(in);
                for (const auto& v : violated_inequalities(projected, to_point(enclosure)))
                    std::cout << "violated\t" << to_string(v.slack) << '\t' << format_row(projected.columns, v.row)
                              << '\n';
            }
            return result.verdict == Verdict::Incompatible ? 1 : 0;
        }

        if (*verify) {
            std::ifstream in(v_file);
            if (!in)
                throw InputError("cannot read " + v_file);
            std::vector<std::string> columns;
            std::vector<CertificateRow> rows;
            try {
                rows = read_certificate(in, columns);
            } catch (const CertificationError& e) {
                if (e.kind() != CertificationError::Kind::SumMismatch)
                    throw;
                std::cout << "invalid\t" << e.what() << '\n';
                return 1;
            }
            bool ok = v_structure.empty()
                          ? verify_certificate(rows)
                          : verify_certificate(rows, columns, load_structure(v_structure), v_flags.options());
            std::cout << (ok ? "valid" : "invalid") << '\n';
            return ok ? 0 : 1;
        }

        if (*cat) {
            if (cat_name.empty()) {
                for (const auto& n : catalog_names())
                    std::cout << n << '\n';
            } else {
                std::cout << serialize_structure(load_structure(cat_name));
            }
            return 0;
        }

        if (*post) {
            auto structure = load_structure(p_structure);
            for (const auto& p : p_pivots) {
                auto colon = p.find(':');
                if (colon == std::string::npos)
                    throw InputError("--pivot expects NAME:VALUES");
                int values = 0;
                try {
                    values = std::stoi(p.substr(colon + 1));
                } catch (const std::exception&) {
                    throw InputError("bad value count in '" + p + "'");
                }
                structure = post_select(structure, p.substr(0, colon), values, p_first).structure;
            }
            std::cout << serialize_structure(structure);
            return 0;
        }

        if (*orb) {
            std::ifstream in(o_matrix);
            if (!in)
                throw InputError("cannot read " + o_matrix);
            auto system = read_tsv(in);
            auto group = parse_generators(slurp(o_symmetry));
            auto orbits = orbit_classify(system, group);
            std::cout << "orbits\t" << orbits.size() << '\n';
            for (const auto& o : orbits) {
                std::cout << "orbit\t" << o.members.size() << '\t' << format_row(system.columns, o.representative)
                          << '\n';
                if (o_members)
                    for (const auto& m : o.members)
                        std::cout << "member\t" << format_row(system.columns, m) << '\n';
            }
            return 0;
        }

        if (*vars) {
            auto structure = load_structure(var_structure);
            auto cs = generate(structure, var_flags.options());
            auto names = cs.column_names();
            if (var_marginal) {
                for (auto c : cs.marginal_columns())
                    std::cout << names[c] << '\n';
            } else {
                for (const auto& n : names)
                    std::cout << n << '\n';
            }
            return 0;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const StructureError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DistributionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const CertificationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const GenerationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidGenerator& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
