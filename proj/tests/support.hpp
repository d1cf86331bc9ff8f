#pragma once

#include "entrocausal/constraints.hpp"

#include <map>
#include <random>
#include <vector>

namespace testing_support {

// A classical model on a DAG: random rational conditional tables, joint
// distribution enumerated exactly over all nodes.
class ClassicalModel {
public:
    ClassicalModel(const entrocausal::CausalStructure& structure, std::mt19937& rng, int max_card = 3);

    // Shannon entropy (bits) of the marginal on a set of node indices (bit mask).
    double entropy(std::uint64_t nodes);

    // Entropy vector for the variables of a generated system. Latent
    // subsystems are copies of their source variable and conditional
    // components follow the chain rule.
    std::vector<double> entropy_vector(const entrocausal::ConstraintSystem& system);

    const std::vector<int>& cardinalities() const { return card_; }

private:
    const entrocausal::CausalStructure& structure_;
    std::vector<int> card_;
    std::vector<double> joint_;  // mixed radix over nodes, node 0 least significant
    std::map<std::uint64_t, double> cache_;
};

double evaluate(const entrocausal::LinearConstraint& c, const std::vector<double>& point);

}  // namespace testing_support
