#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "subboost/rng.hpp"

namespace subboost {

// Probability distribution over dataset positions. Weights are
// non-negative and sum to 1 within 1e-12.
class WeightDistribution {
public:
    explicit WeightDistribution(std::vector<double> weights);

    std::size_t size() const { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    const std::vector<double>& weights() const { return weights_; }

    static constexpr double kSumTolerance = 1e-12;

private:
    std::vector<double> weights_;
};

WeightDistribution uniform_distribution(std::size_t n);

/// Z = sum(raw), weights = raw / Z. Throws std::domain_error on all-zero
/// or non-finite input.
std::pair<WeightDistribution, double> normalize(const std::vector<double>& raw);

/// m i.i.d. draws (with replacement) by inverse CDF over a cumulative
/// array; order preserved as drawn.
std::vector<std::size_t> draw_iid(const WeightDistribution& dist, std::size_t m,
                                  RngStream& rng);

} // namespace subboost
