#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "subboost/boosting.hpp"
#include "subboost/data.hpp"

namespace subboost {

struct TaskSpec {
    std::string generator = "interval"; // "threshold" | "interval"
    std::size_t n_train = 100;
    std::size_t n_test = 1000;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    double band = 0.02; // excluded width around each decision boundary
};

struct Task {
    Dataset train;
    Dataset test;
    Hypothesis target;
};

/// 1-D threshold-at-zero task; realizable by a single stump.
Task gen_threshold_task(const TaskSpec& spec);

/// 1-D alternating -,+,-,+ quarters of [-1,1]; the best single stump has
/// error about 1/4, so stumps are genuinely weak learners here.
Task gen_interval_task(const TaskSpec& spec);

Task gen_task(const TaskSpec& spec);

/// Advantage (1/2 - error) of the ERM stump on a fresh probe sample.
double measure_stump_advantage(const TaskSpec& spec, std::size_t probe_size);

struct CurvePoint {
    std::string algorithm;
    std::size_t n = 0;
    std::size_t trial = 0;
    double train_error = 0.0;
    double test_error = 0.0;
    double min_margin = 0.0;
    double wall_ms = 0.0;
    std::string error; // non-empty if this point failed
};

struct SweepConfig {
    std::string task = "interval";
    std::vector<std::string> algorithms = {"sampled", "adaboost"};
    std::vector<std::size_t> n_grid = {100, 300};
    std::size_t trials = 5;
    std::uint64_t master_seed = 0;
    double delta = 0.1;
    double a_const = 4.0;
    std::size_t k_cap = 20000;
    std::size_t adaboost_rounds = 200;
    double bound_c = 1.0;
};

std::vector<CurvePoint> learning_curve(const SweepConfig& config);

nlohmann::json compare_report(const std::vector<CurvePoint>& points,
                              const SweepConfig& config);

std::string points_to_csv(const std::vector<CurvePoint>& points);
std::vector<CurvePoint> points_from_csv(const std::string& text);

} // namespace subboost
