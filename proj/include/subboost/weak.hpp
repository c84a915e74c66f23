#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "subboost/data.hpp"
#include "subboost/distribution.hpp"
#include "subboost/hypothesis.hpp"
#include "subboost/rng.hpp"

namespace subboost {

// Thrown when a learner cannot reach sample error <= 1/2 - gamma.
class weak_learning_violation : public std::runtime_error {
public:
    weak_learning_violation(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error(achieved_error) {}
    double achieved_error;
};

struct WeakLearnerSpec {
    double gamma = 0.1;   // advantage in (0, 1/2)
    std::size_t vc_dim = 1;
    bool deterministic = true;
};

// Weak learner contract: train on a sample sequence (duplicates allowed,
// uniform weighting) and return a hypothesis. `deterministic` learners
// must ignore the RngStream.
struct WeakLearner {
    WeakLearnerSpec spec;
    std::function<Hypothesis(const std::vector<LabeledExample>&, RngStream&)> train;
};

/// ERM axis-aligned threshold stump under uniform weights, ties broken by
/// (lowest feature, lowest threshold, orientation +1 first).
Hypothesis train_stump(const std::vector<LabeledExample>& sample);

/// Weighted ERM stump, same candidate grid and tie-break order.
Hypothesis train_stump_weighted(const std::vector<LabeledExample>& sample,
                                const std::vector<double>& weights);

/// Hypothesis agreeing with `target` on the first ceil((1/2+gamma)*|sample|)
/// positions and disagreeing on the remaining feature vectors.
Hypothesis train_planted(const std::vector<LabeledExample>& sample,
                         const Hypothesis& target, double gamma);

double weighted_error(const Hypothesis& h, const Dataset& data,
                      const WeightDistribution& dist);

/// Misclassified fraction under uniform weighting of the sequence.
double sample_error(const Hypothesis& h, const std::vector<LabeledExample>& sample);

/// VC dimension declared for dim-p stump classes (upper bound, used only
/// inside the subsample-size formula).
std::size_t stump_vc_dim(std::size_t dim);

WeakLearner make_stump_learner(double gamma, std::size_t dim);
WeakLearner make_planted_learner(double gamma, Hypothesis target);

} // namespace subboost
