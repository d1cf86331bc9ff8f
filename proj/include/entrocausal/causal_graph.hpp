#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace entrocausal {

enum class NodeKind { Observed, Latent };

class StructureError : public std::runtime_error {
public:
    enum class Kind {
        CycleDetected,
        DanglingEdge,
        DuplicateName,
        InvalidName,
        ChildlessLatent,
        NameCollision,
        UnknownNode,
        OverlappingSets,
        NotParentless,
        NotObserved,
        InvalidCardinality,
        ParseError,
        EmptyStructure,
        UnknownCatalogEntry,
    };

    StructureError(Kind kind, const std::string& message, std::string element = {})
        : std::runtime_error(message), kind_(kind), element_(std::move(element))
    {
    }

    Kind kind() const { return kind_; }
    // Offending node, edge or line reference.
    const std::string& element() const { return element_; }

private:
    Kind kind_;
    std::string element_;
};

// One value of a post-selection pivot that a split node is conditioned on.
struct PivotChoice {
    std::string pivot;
    int value = 0;

    auto operator<=>(const PivotChoice&) const = default;
};

// The share of a latent node that travels along its edges towards one child.
// For post-selected structures the target is the original (unsplit) child, so
// the alternatives X|A=0 and X|A=1 compete for the same subsystem.
struct Subsystem {
    std::string owner;
    std::string target;

    std::string name() const { return owner + "_" + target; }
    auto operator<=>(const Subsystem&) const = default;
};

class StructureBuilder;

// Immutable DAG; nodes are indexed in lexicographic name order.
class CausalStructure {
public:
    CausalStructure() = default;

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_[i]; }
    NodeKind kind(std::size_t i) const { return kinds_[i]; }
    bool observed(std::size_t i) const { return kinds_[i] == NodeKind::Observed; }
    const std::vector<std::size_t>& parents(std::size_t i) const { return parents_[i]; }
    const std::vector<std::size_t>& children(std::size_t i) const { return children_[i]; }

    // Name of the node this one was split from (its own name if never split).
    const std::string& origin(std::size_t i) const { return origins_[i]; }
    const std::vector<PivotChoice>& choices(std::size_t i) const { return choices_[i]; }
    bool is_split(std::size_t i) const { return !choices_[i].empty(); }
    // True when the two nodes stem from different values of a shared pivot.
    bool conflicting(std::size_t i, std::size_t j) const;

    std::optional<std::size_t> find(std::string_view name) const;
    std::size_t index(std::string_view name) const;  // throws UnknownNode

    const std::vector<std::string>& names() const { return names_; }
    std::vector<std::pair<std::string, std::string>> edges() const;
    std::vector<std::size_t> latent_parents(std::size_t i) const;

    // Subsystems owned by a latent node, one per distinct original child.
    std::vector<Subsystem> subsystems_of(std::size_t latent) const;
    std::vector<Subsystem> subsystems() const;

    // Deterministic topological order (smallest name first among ready nodes).
    std::vector<std::size_t> topological_order() const;

    bool operator==(const CausalStructure&) const = default;

private:
    friend class StructureBuilder;

    std::vector<std::string> names_;
    std::vector<NodeKind> kinds_;
    std::vector<std::vector<std::size_t>> parents_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<std::string> origins_;
    std::vector<std::vector<PivotChoice>> choices_;
};

class StructureBuilder {
public:
    StructureBuilder& node(const std::string& name, NodeKind kind);
    StructureBuilder& edge(const std::string& from, const std::string& to);
    StructureBuilder& split(const std::string& node, const std::string& origin,
                            std::vector<PivotChoice> choices);

    // Validates and freezes; throws StructureError.
    CausalStructure build() const;

private:
    std::vector<std::pair<std::string, NodeKind>> nodes_;
    std::vector<std::pair<std::string, std::string>> edges_;
    std::map<std::string, std::pair<std::string, std::vector<PivotChoice>>> splits_;
};

bool valid_node_name(std::string_view name);

// Re-checks every structural invariant. Structures produced by the builder
// always pass; kept as an explicit entry point for callers.
void validate(const CausalStructure& structure);

std::set<std::string> ancestors(const CausalStructure& structure, std::string_view node);
std::set<std::string> descendants(const CausalStructure& structure, std::string_view node);

// Nodes downstream of a subsystem: every node derived from its target plus
// all their descendants.
std::set<std::string> subsystem_descendants(const CausalStructure& structure, const Subsystem& sub);

bool d_separated(const CausalStructure& structure, const std::set<std::string>& x,
                 const std::set<std::string>& y, const std::set<std::string>& z);

struct PostSelection {
    CausalStructure structure;
    // Every removed node mapped to its replacements (empty for the pivot).
    std::map<std::string, std::vector<std::string>> mapping;
};

// Split nodes are named "<node>_<pivot><label>" with labels first_label,
// first_label+1, ...
PostSelection post_select(const CausalStructure& structure, std::string_view pivot, int values,
                          int first_label = 0);

CausalStructure rename_nodes(const CausalStructure& structure,
                             const std::map<std::string, std::string>& renames);

CausalStructure parse_structure(std::string_view text);
std::string serialize_structure(const CausalStructure& structure);

const std::vector<std::string>& catalog_names();
CausalStructure catalog(std::string_view name);

}  // namespace entrocausal
