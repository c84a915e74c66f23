#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "subboost/boosting.hpp"
#include "subboost/data.hpp"

namespace subboost {

/// Canonical stump grid over a dataset: per feature, midpoints between
/// consecutive sorted distinct values plus -inf/+inf sentinels, both
/// orientations.
std::vector<Hypothesis> stump_grid(const Dataset& data);

/// True iff for every h in hclass the D-weighted disagreement with the
/// labels and the uniform disagreement over the sample differ by <= eps.
bool is_eps_approximation(const std::vector<std::size_t>& sample,
                          const Dataset& data,
                          const std::vector<Hypothesis>& hclass,
                          const WeightDistribution& dist, double eps);

/// Relative residual | sum_i exp(-alpha y_i sum_k h_k(x_i)) - n prod Z_k | / RHS,
/// evaluated in the log domain.
double telescoping_check(const BoostTrace& trace, const Dataset& data, double alpha);

/// max_k | Z_k - (eps_k e^alpha + (1 - eps_k) e^-alpha) | with eps_k the
/// D_k-weighted error of h_k, distributions replayed from the trace.
double zk_check(const BoostTrace& trace, const Dataset& data);

struct MarginAuditReport {
    std::size_t n_seeds = 0;
    double gamma = 0.0;
    double margin_threshold = 0.0; // gamma / 128
    std::vector<double> min_margins;
    double fraction_meeting_threshold = 0.0;
    double fraction_zero_train_error = 0.0;
    double approx_failure_budget = 0.0; // gamma^2 K / 16
    std::vector<std::size_t> approx_failures_per_run;
    double fraction_over_budget = 0.0;
    double max_telescoping_residual = 0.0;
    double max_zk_deviation = 0.0;
    nlohmann::json to_json() const;
};

/// n_seeds boosting runs on distinct streams; records min margins, the
/// gamma/2-approximation failure count per run against the stump grid,
/// and the proof-identity residuals.
MarginAuditReport margin_audit(const Dataset& data, const WeakLearner& learner,
                               const BoostConfig& config, std::size_t n_seeds);

struct StabilityReport {
    std::string instance;
    std::size_t n = 0, m = 0, rounds_k = 0;
    std::size_t subsequence_size = 0;
    std::size_t trials = 0;
    std::size_t conditional_accepted = 0;
    bool exact = false; // enumerated instead of sampled
    double tv_distance = 0.0;
    double chi_square = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
    bool inconclusive = false;
    bool pass = false;
    nlohmann::json to_json() const;
};

/// Tests the stability equality: law of Exec(S',N) versus the law of
/// Exec(S,N) conditioned on all subsamples landing in S'. Exact
/// enumeration for K=1 instances with small outcome spaces, two-sample
/// chi-square plus TV distance otherwise.
StabilityReport stability_test(const Dataset& data,
                               const std::vector<std::size_t>& subsequence,
                               const WeakLearner& learner, const BoostConfig& config,
                               std::size_t trials);

/// Fraction of seeded runs whose reconstructed predictor misclassifies at
/// least one training example.
double failure_rate_estimate(const Dataset& data, const WeakLearner& learner,
                             const BoostConfig& config, std::size_t trials);

} // namespace subboost
