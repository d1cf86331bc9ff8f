#include "entrocausal/constraints.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace entrocausal {

using F = ConstraintFamily;

namespace {

const std::vector<std::pair<F, std::string_view>>& family_table()
{
    static const std::vector<std::pair<F, std::string_view>> table = {
        {F::ShannonClassicalSets, "ShannonClassicalSets"},
        {F::Positivity, "Positivity"},
        {F::PositivityConditional, "PositivityConditional"},
        {F::DataProcessing, "DataProcessing"},
        {F::Independence, "Independence"},
        {F::ClassicalSubsystem, "ClassicalSubsystem"},
        {F::Subadditivity, "Subadditivity"},
        {F::ChainLower, "ChainLower"},
        {F::ChainUpper, "ChainUpper"},
        {F::StrongSubadditivity, "StrongSubadditivity"},
        {F::WeakMonotonicity, "WeakMonotonicity"},
        {F::Purification, "Purification"},
        {F::MonotonicityEntangled, "MonotonicityEntangled"},
        {F::DSeparationObserved, "DSeparationObserved"},
        {F::NonShannonZY, "NonShannonZY"},
    };
    return table;
}

}  // namespace

std::string_view family_name(ConstraintFamily family)
{
    for (const auto& [f, name] : family_table())
        if (f == family)
            return name;
    return "?";
}

std::optional<ConstraintFamily> parse_family(std::string_view text)
{
    for (const auto& [f, name] : family_table())
        if (name == text)
            return f;
    return std::nullopt;
}

const std::vector<ConstraintFamily>& all_families()
{
    static const std::vector<ConstraintFamily> families = [] {
        std::vector<ConstraintFamily> out;
        for (const auto& [f, name] : family_table())
            out.push_back(f);
        return out;
    }();
    return families;
}

std::set<ConstraintFamily> applicable_families(Theory theory)
{
    switch (theory) {
    case Theory::Classical:
        return {F::ShannonClassicalSets, F::Positivity, F::Independence, F::DSeparationObserved,
                F::NonShannonZY};
    case Theory::Quantum:
        return {F::Positivity,       F::ShannonClassicalSets, F::StrongSubadditivity,
                F::PositivityConditional, F::DataProcessing, F::Independence,
                F::DSeparationObserved, F::WeakMonotonicity, F::MonotonicityEntangled,
                F::Purification,     F::NonShannonZY};
    case Theory::BoxWorld:
    case Theory::GeneralGPT: {
        std::set<ConstraintFamily> out = {F::Positivity,         F::ShannonClassicalSets,
                                          F::DataProcessing,     F::Independence,
                                          F::ClassicalSubsystem, F::ChainLower,
                                          F::ChainUpper,         F::DSeparationObserved,
                                          F::NonShannonZY};
        if (theory == Theory::BoxWorld)
            out.insert(F::Subadditivity);
        return out;
    }
    }
    return {};
}

std::set<ConstraintFamily> default_families(const GenerationOptions& options)
{
    std::set<ConstraintFamily> out = applicable_families(options.theory);
    out.erase(F::NonShannonZY);
    if (options.theory == Theory::Quantum) {
        out.erase(F::Purification);
        out.erase(options.quantum_variant == QuantumVariant::WeakMonotonicity
                      ? F::MonotonicityEntangled
                      : F::WeakMonotonicity);
    }
    if (options.theory == Theory::Classical)
        out.erase(F::Positivity);
    if (options.include_non_shannon)
        out.insert(F::NonShannonZY);
    return out;
}

std::set<ConstraintFamily> resolve_families(const GenerationOptions& options)
{
    if (!options.enabled_families)
        return default_families(options);
    auto applicable = applicable_families(options.theory);
    std::set<ConstraintFamily> out = *options.enabled_families;
    if (options.include_non_shannon)
        out.insert(F::NonShannonZY);
    for (auto f : out)
        if (!applicable.count(f))
            throw GenerationError("constraint family " + std::string(family_name(f))
                                  + " does not apply to theory "
                                  + std::string(theory_name(options.theory)));
    return out;
}

bool applicable_gpt_scope(const CausalStructure& s)
{
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.latent_parents(i).size() >= 2)
            return false;
    return true;
}

// ---------------------------------------------------------------------------

std::vector<std::string> ConstraintSystem::column_names() const
{
    std::vector<std::string> out;
    out.reserve(variables.size());
    for (const auto& v : variables)
        out.push_back(format_variable(table, v));
    return out;
}

std::optional<std::size_t> ConstraintSystem::column(const EntropyVariable& v) const
{
    auto it = std::lower_bound(variables.begin(), variables.end(), v, canonical_less);
    if (it == variables.end() || *it != v)
        return std::nullopt;
    return static_cast<std::size_t>(it - variables.begin());
}

InequalitySystem ConstraintSystem::inequality_system() const
{
    InequalitySystem out;
    out.columns = column_names();
    out.rows.reserve(constraints.size());
    for (const auto& c : constraints)
        out.rows.push_back(Row{c.terms, 0, c.relation});
    return out;
}

std::vector<std::size_t> ConstraintSystem::marginal_columns() const
{
    std::vector<std::size_t> out;
    for (const auto& v : marginal_variables(table))
        out.push_back(*column(v));
    return out;
}

std::string format_constraint(const ConstraintSystem& system, const LinearConstraint& c)
{
    std::ostringstream out;
    out << (c.relation == Relation::Equal ? "=" : ">=") << '\t';
    bool first = true;
    for (const auto& [col, v] : c.terms) {
        if (!first)
            out << ' ';
        first = false;
        out << v << '*' << format_variable(system.table, system.variables[col]);
    }
    out << "\t# " << family_name(c.family);
    if (!c.detail.empty())
        out << ": " << c.detail;
    return out.str();
}

// ---------------------------------------------------------------------------
// Generation

namespace {

template <class Fn>
void for_each_subset(SystemSet set, Fn&& fn)
{
    for (SystemSet s = set; s != 0; s = (s - 1) & set)
        fn(s);
}

struct KeyHash {
    std::size_t operator()(const std::pair<SystemSet, SystemSet>& k) const
    {
        return std::hash<SystemSet>()(k.first * 0x9E3779B97F4A7C15ULL ^ k.second);
    }
};

class Emitter {
public:
    Emitter(ConstraintSystem& sys) : sys_(sys), table_(sys.table)
    {
        for (std::size_t i = 0; i < sys.variables.size(); ++i)
            index_[{sys.variables[i].front, sys.variables[i].back}] = i;
        conditionals_ = table_.theory() == Theory::BoxWorld || table_.theory() == Theory::GeneralGPT;
    }

    using Expr = std::vector<std::pair<std::size_t, std::int64_t>>;

    std::size_t var(SystemSet front, SystemSet back = 0) const
    {
        auto it = index_.find({front, back});
        if (it == index_.end())
            throw std::logic_error("entropy component " + describe(front, back) + " is not a variable");
        return it->second;
    }

    // Adds coef * H(front | back), expanding conditionals where they are not variables.
    void add(Expr& e, std::int64_t coef, SystemSet front, SystemSet back = 0) const
    {
        if (front == 0)
            return;
        if (back == 0) {
            e.emplace_back(var(front), coef);
            return;
        }
        if (conditionals_ && !subset_of(front | back, table_.classical())) {
            e.emplace_back(var(front, back), coef);
            return;
        }
        e.emplace_back(var(front | back), coef);
        e.emplace_back(var(back), -coef);
    }

    void emit(Expr e, Relation rel, ConstraintFamily family, std::string detail)
    {
        Row row;
        row.relation = rel;
        for (const auto& [c, v] : e)
            row.terms.emplace_back(static_cast<std::uint32_t>(c), v);
        normalize(row);
        if (row.terms.empty())
            return;
        std::string key;
        key.reserve(row.terms.size() * 12 + 1);
        key.push_back(rel == Relation::Equal ? '=' : '>');
        for (const auto& [c, v] : row.terms) {
            key.append(reinterpret_cast<const char*>(&c), sizeof c);
            key.append(reinterpret_cast<const char*>(&v), sizeof v);
        }
        if (!seen_.insert(std::move(key)).second)
            return;
        sys_.constraints.push_back({std::move(row.terms), rel, family, std::move(detail)});
    }

    std::string describe(SystemSet front, SystemSet back = 0) const
    {
        std::string s = "H(" + table_.format(front);
        if (back)
            s += "|" + table_.format(back);
        return s + ")";
    }

    std::string set(SystemSet s) const { return s ? table_.format(s) : "-"; }

private:
    ConstraintSystem& sys_;
    const SystemTable& table_;
    std::unordered_map<std::pair<SystemSet, SystemSet>, std::size_t, KeyHash> index_;
    std::unordered_set<std::string> seen_;
    bool conditionals_ = false;
};

using Expr = Emitter::Expr;

class Generator {
public:
    Generator(ConstraintSystem& sys, const std::set<ConstraintFamily>& families)
        : sys_(sys), t_(sys.table), s_(sys.table.structure()), families_(families), out_(sys)
    {
        sets_ = maximal_coexisting_sets(t_);
        closure_.resize(t_.size());
        for (std::size_t i = 0; i < t_.size(); ++i) {
            std::size_t node = t_[i].node;
            std::uint64_t mask = std::uint64_t{1} << node;
            for (const auto& a : ancestors(s_, s_.name(node)))
                mask |= std::uint64_t{1} << s_.index(a);
            closure_[i] = mask;
        }
    }

    void run()
    {
        // Order fixes which provenance survives deduplication.
        static const std::vector<ConstraintFamily> order = {
            F::ShannonClassicalSets, F::Positivity,      F::StrongSubadditivity,
            F::PositivityConditional, F::MonotonicityEntangled, F::WeakMonotonicity,
            F::ClassicalSubsystem,   F::Subadditivity,   F::ChainLower,
            F::ChainUpper,           F::Independence,    F::DSeparationObserved,
            F::DataProcessing,       F::Purification,    F::NonShannonZY};
        for (auto f : order)
            if (families_.count(f))
                emit_family(f);
    }

private:
    bool classical(SystemSet s) const { return subset_of(s, t_.classical()); }

    std::uint64_t closure(SystemSet s) const
    {
        std::uint64_t m = 0;
        for (std::size_t i = 0; i < t_.size(); ++i)
            if (s >> i & 1)
                m |= closure_[i];
        return m;
    }

    void emit_family(ConstraintFamily f)
    {
        switch (f) {
        case F::ShannonClassicalSets: shannon(); break;
        case F::Positivity: positivity(); break;
        case F::StrongSubadditivity: strong_subadditivity(); break;
        case F::PositivityConditional: conditional_positivity(false); break;
        case F::MonotonicityEntangled: conditional_positivity(true); break;
        case F::WeakMonotonicity: weak_monotonicity(); break;
        case F::ClassicalSubsystem: classical_subsystem(); break;
        case F::Subadditivity: subadditivity(); break;
        case F::ChainLower: chain_lower(); break;
        case F::ChainUpper: chain_upper(); break;
        case F::Independence: independence(); break;
        case F::DSeparationObserved: d_separation(); break;
        case F::DataProcessing: data_processing(); break;
        case F::Purification: purification(); break;
        case F::NonShannonZY: zhang_yeung(); break;
        }
    }

    // I(i:j|K) >= 0 and H(i|M\i) >= 0 over the set m (elemental form).
    void elemental(SystemSet m, ConstraintFamily family, bool with_monotonicity)
    {
        if (with_monotonicity) {
            for (std::size_t i = 0; i < t_.size(); ++i) {
                SystemSet bit = SystemSet{1} << i;
                if (!(m & bit))
                    continue;
                Expr e;
                out_.add(e, 1, m);
                out_.add(e, -1, m & ~bit);
                out_.emit(std::move(e), Relation::GreaterEqual, family,
                          out_.describe(bit, m & ~bit) + " >= 0");
            }
        }
        for (std::size_t i = 0; i < t_.size(); ++i)
            for (std::size_t j = i + 1; j < t_.size(); ++j) {
                SystemSet bi = SystemSet{1} << i, bj = SystemSet{1} << j;
                if (!(m & bi) || !(m & bj))
                    continue;
                SystemSet rest = m & ~bi & ~bj;
                auto one = [&](SystemSet k) {
                    Expr e;
                    out_.add(e, 1, bi | k);
                    out_.add(e, 1, bj | k);
                    out_.add(e, -1, bi | bj | k);
                    out_.add(e, -1, k);
                    out_.emit(std::move(e), Relation::GreaterEqual, family,
                              "I(" + out_.set(bi) + ":" + out_.set(bj) + "|" + out_.set(k) + ") >= 0");
                };
                one(0);
                for_each_subset(rest, one);
            }
    }

    void shannon()
    {
        std::set<SystemSet> done;
        for (SystemSet m : sets_) {
            SystemSet c = m & t_.classical();
            if (c && done.insert(c).second)
                elemental(c, F::ShannonClassicalSets, true);
        }
    }

    void strong_subadditivity()
    {
        for (SystemSet m : sets_)
            elemental(m, F::StrongSubadditivity, false);
    }

    void positivity()
    {
        for (std::size_t i = 0; i < sys_.variables.size(); ++i) {
            const auto& v = sys_.variables[i];
            out_.emit({{i, 1}}, Relation::GreaterEqual, F::Positivity,
                      out_.describe(v.front, v.back) + " >= 0");
        }
    }

    // H(S|T) >= 0 for disjoint S, T in one set; the quantum template (6) covers
    // pairs with a classical side, (8) the remaining ones.
    void conditional_positivity(bool entangled)
    {
        auto family = entangled ? F::MonotonicityEntangled : F::PositivityConditional;
        for (SystemSet m : sets_)
            for_each_subset(m, [&](SystemSet a) {
                for_each_subset(m & ~a, [&](SystemSet b) {
                    bool cq = classical(a) || classical(b);
                    if (cq == entangled)
                        return;
                    Expr e;
                    out_.add(e, 1, a, b);
                    out_.emit(std::move(e), Relation::GreaterEqual, family,
                              out_.describe(a, b) + " >= 0");
                });
            });
    }

    void weak_monotonicity()
    {
        auto covered = [&](SystemSet x, SystemSet y) { return classical(x) || classical(y); };
        for (SystemSet m : sets_)
            for_each_subset(m, [&](SystemSet x) {
                SystemSet rest = m & ~x;
                for_each_subset(rest, [&](SystemSet y) {
                    for_each_subset(rest & ~y, [&](SystemSet z) {
                        if (!lexicographic_less(y, z))
                            return;
                        if (covered(x, y) && covered(x, z))
                            return;
                        Expr e;
                        out_.add(e, 1, x, y);
                        out_.add(e, 1, x, z);
                        out_.emit(std::move(e), Relation::GreaterEqual, F::WeakMonotonicity,
                                  out_.describe(x, y) + " + " + out_.describe(x, z) + " >= 0");
                    });
                });
            });
    }

    // H(AB|C) >= H(A|C), A and B classical.
    void classical_subsystem()
    {
        for (SystemSet m : sets_) {
            SystemSet c_part = m & t_.classical();
            for_each_subset(c_part, [&](SystemSet a) {
                for_each_subset(c_part & ~a, [&](SystemSet b) {
                    for_each_subset(m & ~a & ~b, [&](SystemSet c) {
                        if (classical(a | b | c))
                            return;
                        Expr e;
                        out_.add(e, 1, a | b, c);
                        out_.add(e, -1, a, c);
                        out_.emit(std::move(e), Relation::GreaterEqual, F::ClassicalSubsystem,
                                  out_.describe(a | b, c) + " >= " + out_.describe(a, c));
                    });
                });
            });
        }
    }

    void subadditivity()
    {
        for (SystemSet m : sets_)
            for_each_subset(m, [&](SystemSet a) {
                for_each_subset(m & ~a, [&](SystemSet b) {
                    if (!lexicographic_less(a, b) || classical(a | b))
                        return;
                    Expr e;
                    out_.add(e, 1, a);
                    out_.add(e, 1, b);
                    out_.add(e, -1, a | b);
                    out_.emit(std::move(e), Relation::GreaterEqual, F::Subadditivity,
                              out_.describe(a) + " + " + out_.describe(b) + " >= "
                                  + out_.describe(a | b));
                });
            });
    }

    // H(A|BC) >= H(AB|C) - H(B), A and B classical.
    void chain_lower()
    {
        for (SystemSet m : sets_) {
            SystemSet c_part = m & t_.classical();
            for_each_subset(c_part, [&](SystemSet a) {
                for_each_subset(c_part & ~a, [&](SystemSet b) {
                    for_each_subset(m & ~a & ~b, [&](SystemSet c) {
                        if (classical(a | b | c))
                            return;
                        Expr e;
                        out_.add(e, 1, a, b | c);
                        out_.add(e, -1, a | b, c);
                        out_.add(e, 1, b);
                        out_.emit(std::move(e), Relation::GreaterEqual, F::ChainLower,
                                  out_.describe(a, b | c) + " >= " + out_.describe(a | b, c) + " - "
                                      + out_.describe(b));
                    });
                });
            });
        }
    }

    // H(A|BC) <= H(AB|C) - H(B|C), B classical; equality when C is classical or empty.
    void chain_upper()
    {
        for (SystemSet m : sets_) {
            SystemSet c_part = m & t_.classical();
            for_each_subset(m, [&](SystemSet a) {
                for_each_subset(c_part & ~a, [&](SystemSet b) {
                    auto one = [&](SystemSet c) {
                        if (classical(a | b | c))
                            return;
                        Expr e;
                        out_.add(e, 1, a | b, c);
                        out_.add(e, -1, b, c);
                        out_.add(e, -1, a, b | c);
                        bool eq = classical(c);
                        out_.emit(std::move(e), eq ? Relation::Equal : Relation::GreaterEqual,
                                  F::ChainUpper,
                                  out_.describe(a, b | c) + (eq ? " = " : " <= ")
                                      + out_.describe(a | b, c) + " - " + out_.describe(b, c));
                    };
                    one(0);
                    for_each_subset(m & ~a & ~b, one);
                });
            });
        }
    }

    void independence()
    {
        bool conditionals = t_.theory() == Theory::BoxWorld || t_.theory() == Theory::GeneralGPT;
        for (SystemSet m : sets_)
            for_each_subset(m, [&](SystemSet a) {
                for_each_subset(m & ~a, [&](SystemSet b) {
                    if (!lexicographic_less(a, b) || (closure(a) & closure(b)))
                        return;
                    std::string what = out_.set(a) + " independent of " + out_.set(b);
                    if (!conditionals || classical(a | b)) {
                        Expr e;
                        out_.add(e, 1, a | b);
                        out_.add(e, -1, a);
                        out_.add(e, -1, b);
                        out_.emit(std::move(e), Relation::Equal, F::Independence, what);
                        return;
                    }
                    for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
                        Expr e;
                        out_.add(e, 1, x, y);
                        out_.add(e, -1, x);
                        out_.emit(std::move(e), Relation::Equal, F::Independence, what);
                    }
                });
            });
        if (t_.theory() == Theory::Classical)
            local_markov();
    }

    // Every node is independent of its non-descendants given its parents.
    void local_markov()
    {
        for (std::size_t n = 0; n < s_.size(); ++n) {
            SystemSet self = t_.node_bit(n);
            SystemSet parents = 0;
            for (std::size_t p : s_.parents(n))
                parents |= t_.node_bit(p);
            SystemSet others = 0;
            auto below = descendants(s_, s_.name(n));
            for (std::size_t j = 0; j < s_.size(); ++j)
                if (j != n && !below.count(s_.name(j)))
                    others |= t_.node_bit(j);
            if (others == parents)
                continue;
            Expr e;
            out_.add(e, 1, self, parents);
            out_.add(e, -1, self, others);
            out_.emit(std::move(e), Relation::Equal, F::Independence,
                      s_.name(n) + " independent of non-descendants given parents");
        }
    }

    void d_separation()
    {
        std::set<SystemSet> done;
        for (SystemSet m : sets_) {
            SystemSet obs = m & t_.observed();
            if (!done.insert(obs).second)
                continue;
            auto names = [&](SystemSet s) {
                std::set<std::string> out;
                for (std::size_t i = 0; i < t_.size(); ++i)
                    if (s >> i & 1)
                        out.insert(t_[i].name);
                return out;
            };
            for_each_subset(obs, [&](SystemSet x) {
                for_each_subset(obs & ~x, [&](SystemSet y) {
                    if (!lexicographic_less(x, y))
                        return;
                    auto one = [&](SystemSet z) {
                        if (!d_separated(s_, names(x), names(y), names(z)))
                            return;
                        Expr e;
                        out_.add(e, 1, x, z);
                        out_.add(e, -1, x, y | z);
                        out_.emit(std::move(e), Relation::Equal, F::DSeparationObserved,
                                  out_.set(x) + " d-separated from " + out_.set(y) + " given "
                                      + out_.set(z));
                    };
                    one(0);
                    for_each_subset(obs & ~x & ~y, one);
                });
            });
        }
    }

    // H(A|B) <= H(A|C) where C = (B \ consumed) + produced for one generation step.
    void data_processing()
    {
        for (const auto& st : generation_steps(t_)) {
            SystemSet free = st.before & ~st.inputs;
            auto with_extra = [&](SystemSet extra) {
                SystemSet b = st.inputs | extra;
                SystemSet c = (b & ~st.consumed) | st.produced;
                for_each_subset(st.before & ~b, [&](SystemSet a) {
                    Expr e;
                    out_.add(e, 1, a, c);
                    out_.add(e, -1, a, b);
                    out_.emit(std::move(e), Relation::GreaterEqual, F::DataProcessing,
                              out_.describe(a, b) + " <= " + out_.describe(a, c) + " (generating "
                                  + s_.name(st.node) + ")");
                });
            };
            with_extra(0);
            for_each_subset(free, with_extra);
        }
    }

    // Pure joint state for each parentless latent node whose subsystems coexist.
    void purification()
    {
        for (std::size_t n = 0; n < s_.size(); ++n) {
            if (s_.observed(n) || !s_.parents(n).empty())
                continue;
            SystemSet all = 0;
            for (const auto& sub : s_.subsystems_of(n))
                all |= t_.edge_bit(n, sub.target);
            bool together = std::any_of(sets_.begin(), sets_.end(),
                                        [&](SystemSet m) { return subset_of(all, m); });
            if (!together)
                continue;
            out_.emit({{out_.var(all), 1}}, Relation::Equal, F::Purification,
                      out_.describe(all) + " = 0");
            for_each_subset(all, [&](SystemSet part) {
                SystemSet rest = all & ~part;
                if (rest == 0 || !lexicographic_less(part, rest))
                    return;
                Expr e;
                out_.add(e, 1, part);
                out_.add(e, -1, rest);
                out_.emit(std::move(e), Relation::Equal, F::Purification,
                          out_.describe(part) + " = " + out_.describe(rest));
            });
        }
    }

    // I(A:B) <= 2I(A:B|C) + I(A:C|B) + I(B:C|A) + I(A:B|D) + I(C:D) over
    // ordered 4-tuples of jointly distributed observed variables.
    void zhang_yeung()
    {
        std::set<SystemSet> done;
        for (SystemSet m : sets_) {
            SystemSet obs = m & t_.observed();
            if (!done.insert(obs).second)
                continue;
            std::vector<SystemSet> bits;
            for (std::size_t i = 0; i < t_.size(); ++i)
                if (obs >> i & 1)
                    bits.push_back(SystemSet{1} << i);
            auto mi = [&](Expr& e, std::int64_t k, SystemSet x, SystemSet y, SystemSet z) {
                out_.add(e, k, x | z);
                out_.add(e, k, y | z);
                out_.add(e, -k, x | y | z);
                if (z)
                    out_.add(e, -k, z);
            };
            for (SystemSet a : bits)
                for (SystemSet b : bits)
                    for (SystemSet c : bits)
                        for (SystemSet d : bits) {
                            if (set_size(a | b | c | d) != 4 || t_.has_conflict(a | b | c | d))
                                continue;
                            Expr e;
                            mi(e, 2, a, b, c);
                            mi(e, 1, a, c, b);
                            mi(e, 1, b, c, a);
                            mi(e, 1, a, b, d);
                            mi(e, 1, c, d, 0);
                            mi(e, -1, a, b, 0);
                            out_.emit(std::move(e), Relation::GreaterEqual, F::NonShannonZY,
                                      "A=" + out_.set(a) + " B=" + out_.set(b) + " C=" + out_.set(c)
                                          + " D=" + out_.set(d));
                        }
        }
    }

    ConstraintSystem& sys_;
    const SystemTable& t_;
    const CausalStructure& s_;
    const std::set<ConstraintFamily>& families_;
    Emitter out_;
    std::vector<SystemSet> sets_;
    std::vector<std::uint64_t> closure_;
};

}  // namespace

ConstraintSystem generate(const CausalStructure& structure, const GenerationOptions& options)
{
    auto families = resolve_families(options);
    ConstraintSystem sys{SystemTable(structure, options.theory), {}, {}};
    sys.variables = enumerate_variables(sys.table);
    Generator gen(sys, families);
    gen.run();
    return sys;
}

}  // namespace entrocausal
