#include "subboost/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subboost {

WeightDistribution::WeightDistribution(std::vector<double> weights)
    : weights_(std::move(weights)) {
    if (weights_.empty())
        throw std::invalid_argument("WeightDistribution: empty weight vector");
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0))
            throw std::invalid_argument("WeightDistribution: negative or NaN weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
        throw std::invalid_argument("WeightDistribution: weights do not sum to 1");
}

WeightDistribution uniform_distribution(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_distribution: n must be >= 1");
    return WeightDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

std::pair<WeightDistribution, double> normalize(const std::vector<double>& raw) {
    if (raw.empty()) throw std::domain_error("normalize: empty input");
    double z = 0.0;
    for (double v : raw) {
        if (!std::isfinite(v) || v < 0.0)
            throw std::domain_error("normalize: non-finite or negative weight");
        z += v;
    }
    if (z <= 0.0) throw std::domain_error("normalize: all weights zero");
    std::vector<double> weights(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) weights[i] = raw[i] / z;
    // guard against rounding in the division pushing the sum outside tolerance
    double sum = 0.0;
    for (double w : weights) sum += w;
    if (std::abs(sum - 1.0) > WeightDistribution::kSumTolerance)
        for (auto& w : weights) w /= sum;
    return {WeightDistribution(std::move(weights)), z};
}

std::vector<std::size_t> draw_iid(const WeightDistribution& dist, std::size_t m,
                                  RngStream& rng) {
    if (m == 0) throw std::invalid_argument("draw_iid: m must be >= 1");
    const auto& w = dist.weights();
    std::vector<double> cum(w.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc += w[i];
        cum[i] = acc;
    }
    cum.back() = std::max(cum.back(), 1.0); // absorb rounding at the top

    std::vector<std::size_t> out(m);
    for (std::size_t j = 0; j < m; ++j) {
        double u = rng.next_double();
        auto it = std::upper_bound(cum.begin(), cum.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - cum.begin());
        if (idx >= w.size()) idx = w.size() - 1;
        out[j] = idx;
    }
    return out;
}

} // namespace subboost
