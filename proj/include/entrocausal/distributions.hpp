#pragma once

#include "entrocausal/causal_graph.hpp"
#include "entrocausal/rational.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace entrocausal {

class DistributionError : public std::runtime_error {
public:
    enum class Kind { ParseError, NotNormalized, UnknownComponent, InconsistentFamily };

    DistributionError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct FiniteVariable {
    std::string name;
    int cardinality = 2;

    bool operator==(const FiniteVariable&) const = default;
};

// Joint pmf over observed variables; outcomes absent from the map have mass 0.
struct ObservedDistribution {
    std::vector<FiniteVariable> variables;
    std::map<std::vector<int>, Rational> mass;

    std::size_t variable(std::string_view name) const;  // throws UnknownComponent
    // Marginal over the given variable positions, keyed by their values.
    std::map<std::vector<int>, Rational> marginal(const std::vector<std::size_t>& positions) const;
    bool operator==(const ObservedDistribution&) const = default;
};

// One distribution per combination of pivot values. A family without pivots
// holds a single member under the empty key.
struct PostSelectedFamily {
    std::vector<FiniteVariable> pivots;
    std::map<std::vector<int>, ObservedDistribution> members;
    // Bound on |stored - true| for every outcome mass of every member; nonzero
    // when the masses are rational approximations of irrational values.
    Rational mass_error = 0;

    const std::vector<FiniteVariable>& variables() const;
    bool operator==(const PostSelectedFamily&) const = default;
};

PostSelectedFamily single(ObservedDistribution distribution);

// Throws NotNormalized (mass must sum to exactly 1 in every member) or
// ParseError (outcome out of range, negative mass, mismatched members).
void validate(const PostSelectedFamily& family);

struct Interval {
    Rational lower;
    Rational upper;

    Rational width() const { return upper - lower; }
    bool point() const { return lower == upper; }
};

struct EntropyEnclosure {
    std::vector<std::string> components;  // joint columns "H(a,b)"
    std::vector<Interval> values;         // bits, dyadic endpoints
};

// Outward-rounded enclosure of -sum p log2 p for an exact pmf whose masses may
// each be off by up to mass_error.
Interval entropy_enclosure(const std::map<std::vector<int>, Rational>& pmf, int precision_bits,
                           const Rational& mass_error = 0, std::size_t outcomes_per_mass = 1);

// Components name structure nodes; split nodes are looked up through their
// origin variable in the member selected by their pivot choices. Pivots no
// component node depends on may take any value, and every choice must give
// the same marginal. Throws UnknownComponent or InconsistentFamily.
EntropyEnclosure entropy_vector(const CausalStructure& structure, const PostSelectedFamily& family,
                                const std::vector<std::string>& components, int precision_bits = 40);

// Two PR boxes shared by the outer parties and the middle one. The middle
// party feeds its setting into one box chosen uniformly at random and the
// output of that box into the other; it reports both outputs, encoded as
// 2*(first box) + (second box). Pivots A, B, C; variables X, Y, Z.
PostSelectedFamily prbox_bilocal_strategy();

// Two singlets measured in the basis {cos t|0> + sin t|1>, sin t|0> - cos t|1>}.
// Angles: X x or 3x, Z 0 or 2x, the middle party 0 or 2x on the left singlet
// and then (2 y0 + 1) x on the right one, with y0 its first outcome. Masses are
// rational approximations whose error is recorded in mass_error.
PostSelectedFamily singlet_bilocal_strategy(const Rational& x, int precision_bits = 64);

// Outcome probability for a singlet measured at two angles: half sin^2 of the
// difference for equal outcomes and half cos^2 otherwise (floating point).
double singlet_pair_probability(double angle_a, double angle_b, int a, int b);

// Format:
//   vars NAME:CARD ...
//   pivot NAME:CARD ...          (optional)
//   error NUM/DEN                (optional mass_error)
//   <pivot values> | <outcome values> NUM/DEN
// '#' starts a comment; without pivots the leading "|" is optional.
PostSelectedFamily parse_distribution(std::string_view text);
std::string serialize_distribution(const PostSelectedFamily& family);

}  // namespace entrocausal
