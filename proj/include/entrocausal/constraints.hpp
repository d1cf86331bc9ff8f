#pragma once

#include "entrocausal/coexistence.hpp"
#include "entrocausal/inequality_system.hpp"

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace entrocausal {

enum class ConstraintFamily {
    ShannonClassicalSets,
    Positivity,
    PositivityConditional,
    DataProcessing,
    Independence,
    ClassicalSubsystem,
    Subadditivity,
    ChainLower,
    ChainUpper,
    StrongSubadditivity,
    WeakMonotonicity,
    Purification,
    MonotonicityEntangled,
    DSeparationObserved,
    NonShannonZY,
};

std::string_view family_name(ConstraintFamily family);
std::optional<ConstraintFamily> parse_family(std::string_view text);
const std::vector<ConstraintFamily>& all_families();

enum class QuantumVariant { WeakMonotonicity, PositiveConditional };

struct GenerationOptions {
    Theory theory = Theory::GeneralGPT;
    QuantumVariant quantum_variant = QuantumVariant::PositiveConditional;
    bool include_non_shannon = false;
    // Unset means every family applicable to the theory and variant.
    std::optional<std::set<ConstraintFamily>> enabled_families;
};

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Families that make sense for a theory at all.
std::set<ConstraintFamily> applicable_families(Theory theory);
// Families switched on when enabled_families is unset.
std::set<ConstraintFamily> default_families(const GenerationOptions& options);
// Resolved family set; throws GenerationError (incompatible family) if a
// requested family does not apply to the theory.
std::set<ConstraintFamily> resolve_families(const GenerationOptions& options);

struct LinearConstraint {
    std::vector<Term> terms;  // variable index, coefficient; sorted; gcd-normalized
    Relation relation = Relation::GreaterEqual;
    ConstraintFamily family = ConstraintFamily::Positivity;
    std::string detail;
};

struct ConstraintSystem {
    SystemTable table;
    std::vector<EntropyVariable> variables;
    std::vector<LinearConstraint> constraints;

    std::vector<std::string> column_names() const;
    std::optional<std::size_t> column(const EntropyVariable& v) const;
    InequalitySystem inequality_system() const;
    // Indices of the observed marginal components among the variables.
    std::vector<std::size_t> marginal_columns() const;
};

ConstraintSystem generate(const CausalStructure& structure, const GenerationOptions& options);

// True iff no node has two or more latent parents (box-world results then
// cover every GPT).
bool applicable_gpt_scope(const CausalStructure& structure);

// "<relation>\t<coeff>*<variable> ...\t# <provenance>"
std::string format_constraint(const ConstraintSystem& system, const LinearConstraint& constraint);

}  // namespace entrocausal
