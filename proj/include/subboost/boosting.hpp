#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "subboost/data.hpp"
#include "subboost/distribution.hpp"
#include "subboost/weak.hpp"

namespace subboost {

enum class ViolationPolicy { WarnContinue, Abort };

enum class TraceLevel {
    Light,    // per-round Z, eps, violation flag only
    Standard, // + subsample indices (enough to encode/reconstruct)
    Full      // + distribution snapshots and prediction vectors
};

struct BoostConfig {
    double gamma = 0.1;          // in (0, 1/2)
    double delta = 0.1;          // in (0, 1)
    std::size_t upper_bound_n = 0; // N; 0 means "use n"
    double a_const = 4.0;        // constant in the subsample-size formula
    std::size_t m_override = 0;  // 0: use the formula
    std::size_t k_override = 0;  // 0: use the formula
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    ViolationPolicy policy = ViolationPolicy::WarnContinue;
    TraceLevel trace_level = TraceLevel::Full;
};

// Weighted vote over base hypotheses; subsampled boosting uses unit
// weights (f = (1/K) sum h_k), AdaBoost uses its adaptive alphas.
class VotingClassifier {
public:
    VotingClassifier(std::vector<Hypothesis> hypotheses, std::vector<double> weights);

    std::size_t size() const { return hypotheses_.size(); }
    const std::vector<Hypothesis>& hypotheses() const { return hypotheses_; }
    const std::vector<double>& weights() const { return weights_; }
    bool unit_weights() const { return unit_weights_; }

    /// Normalized vote y-less score in [-1, 1]: sum w h(x) / sum |w|.
    double score(const std::vector<double>& x) const;

    /// sign(score), with sign(0) defined as +1.
    int predict(const std::vector<double>& x) const;

private:
    std::vector<Hypothesis> hypotheses_;
    std::vector<double> weights_;
    double weight_mass_ = 0.0;
    bool unit_weights_ = true;
};

double margin(const VotingClassifier& vc, const LabeledExample& example);

struct BoostRound {
    std::vector<std::size_t> indices; // subsample S_k (Standard and Full)
    Hypothesis hypothesis;
    double z = 0.0;                  // normalizer Z_k
    double eps = 0.0;                // weighted error under D_k before update
    bool violation = false;          // learner missed its advantage on S_k
    std::vector<double> dist;        // D_k snapshot (Full)
    std::vector<std::int8_t> preds;  // h_k(x_i) over the dataset (Full)
};

struct BoostTrace {
    BoostConfig config;       // resolved: upper_bound_n, m, K filled in
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t rounds_k = 0;
    double alpha = 0.0;
    std::vector<BoostRound> rounds;
    std::vector<long long> scores; // sum_k h_k(x_i), exact integers
};

/// alpha = (1/2) ln((1/2 + gamma/2) / (1/2 - gamma/2)); satisfies alpha <= 2 gamma.
double alpha_of(double gamma);

/// m = ceil(a * gamma^-2 * (d + ln(1/gamma))), at least 1.
std::size_t subsample_size(double gamma, std::size_t d, double a_const);

/// K = ceil(32 * (gamma^-2 * ln(N/delta) + 1)).
std::size_t ensemble_size(double gamma, std::size_t upper_bound_n, double delta);

struct BoostResult {
    VotingClassifier classifier;
    BoostTrace trace;
};

// Per-round view handed to an observer while the run is in flight; all
// references are invalidated when the callback returns.
struct RoundView {
    std::size_t round = 0; // 1-based
    const std::vector<std::size_t>& indices;
    const std::vector<double>& dist;       // D_k before the update
    const std::vector<std::int8_t>& preds; // h_k over the dataset
    const Hypothesis& hypothesis;
    double z;
    double eps;
    bool violation;
};

using RoundObserver = std::function<void(const RoundView&)>;

/// Subsampled boosting: K rounds of draw-subsample / train-uniform /
/// fixed-alpha exponential reweighting. Bit-reproducible per (seed, stream).
BoostResult sampled_boost(const Dataset& data, const WeakLearner& learner,
                          const BoostConfig& config,
                          const RoundObserver& observer = nullptr);

struct AdaBoostResult {
    VotingClassifier classifier;
    std::vector<double> round_errors;
    std::vector<double> alphas;
    bool early_stopped = false;
};

/// Classic AdaBoost baseline: weighted ERM stumps on the full sample,
/// adaptive alpha_t = (1/2) ln((1-eps_t)/eps_t).
AdaBoostResult adaboost(const Dataset& data, std::size_t rounds);

/// Training error of the voting classifier on its data.
double training_error(const VotingClassifier& vc, const Dataset& data);

/// Scores for many 1-D points of a unit-weight all-stump ensemble,
/// computed by a threshold sweep; falls back to direct evaluation.
std::vector<double> ensemble_scores(const VotingClassifier& vc,
                                    const std::vector<std::vector<double>>& xs);

} // namespace subboost
