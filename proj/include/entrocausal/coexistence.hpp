#pragma once

#include "entrocausal/causal_graph.hpp"

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace entrocausal {

enum class Theory { Classical, Quantum, BoxWorld, GeneralGPT };

std::string_view theory_name(Theory theory);
// Accepts classical, quantum, boxworld, gpt (and generalgpt).
std::optional<Theory> parse_theory(std::string_view text);

// Bit i refers to system i of a SystemTable; at most 64 systems.
using SystemSet = std::uint64_t;

inline int set_size(SystemSet s) { return std::popcount(s); }
inline bool subset_of(SystemSet a, SystemSet b) { return (a & ~b) == 0; }

// Either an observed variable (target empty), a classical latent variable
// (Classical theory only, target empty) or an edge subsystem owner_target.
struct SystemId {
    std::string node;
    std::string target;

    bool is_edge() const { return !target.empty(); }
    std::string name() const { return is_edge() ? node + "_" + target : node; }
    auto operator<=>(const SystemId&) const = default;
};

struct SystemInfo {
    SystemId id;
    std::string name;
    bool observed = false;
    bool classical = false;
    std::size_t node = 0;  // index of the observed node or owning latent node
};

class SystemTable {
public:
    SystemTable(const CausalStructure& structure, Theory theory);

    const CausalStructure& structure() const { return structure_; }
    Theory theory() const { return theory_; }
    std::size_t size() const { return systems_.size(); }
    const SystemInfo& operator[](std::size_t i) const { return systems_[i]; }

    SystemSet all() const { return size() == 64 ? ~SystemSet{0} : (SystemSet{1} << size()) - 1; }
    SystemSet classical() const { return classical_; }
    SystemSet observed() const { return observed_; }

    std::optional<std::size_t> find(std::string_view name) const;
    // Bit of an observed node or classical latent node (by node index).
    SystemSet node_bit(std::size_t node) const;
    // Bit of the subsystem latent -> target (target is an origin name).
    SystemSet edge_bit(std::size_t latent, const std::string& target) const;

    // Comma-separated system names in canonical (lexicographic) order.
    std::string format(SystemSet set) const;
    SystemSet parse(std::string_view comma_separated) const;

    // Observed systems in the set whose nodes stem from different values of a pivot.
    bool has_conflict(SystemSet set) const;

private:
    CausalStructure structure_;
    Theory theory_;
    std::vector<SystemInfo> systems_;
    SystemSet classical_ = 0;
    SystemSet observed_ = 0;
};

struct EntropyVariable {
    SystemSet front = 0;
    SystemSet back = 0;

    bool conditional() const { return back != 0; }
    auto operator<=>(const EntropyVariable&) const = default;
};

// Canonical order: front size, front lexicographic, back size, back lexicographic.
bool canonical_less(const EntropyVariable& a, const EntropyVariable& b);
bool lexicographic_less(SystemSet a, SystemSet b);

// "H(A_Y,X|Z)"
std::string format_variable(const SystemTable& table, const EntropyVariable& v);
EntropyVariable parse_variable(const SystemTable& table, std::string_view text);

// One node generation: 'before' is the joint state the map acts on,
// 'consumed' the subsystems destroyed and 'produced' the new systems.
struct GenerationStep {
    SystemSet before = 0;
    SystemSet consumed = 0;
    SystemSet inputs = 0;  // consumed subsystems plus observed parents
    SystemSet produced = 0;
    std::size_t node = 0;

    SystemSet after() const { return (before & ~consumed) | produced; }
    auto operator<=>(const GenerationStep&) const = default;
};

// States along the deterministic timeline (smallest topological node first).
std::vector<SystemSet> generation_order(const SystemTable& table);

// Every step out of every reachable state, deduplicated and sorted.
std::vector<GenerationStep> generation_steps(const SystemTable& table);

std::vector<SystemSet> maximal_coexisting_sets(const SystemTable& table);

std::vector<EntropyVariable> enumerate_variables(const SystemTable& table);

// Observed-only unconditional components that occur jointly in some coexisting set.
std::vector<EntropyVariable> marginal_variables(const SystemTable& table);
std::vector<std::string> marginal_variable_names(const CausalStructure& structure);

}  // namespace entrocausal
