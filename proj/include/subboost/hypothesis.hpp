#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace subboost {

struct StumpParams {
    std::size_t feature = 0;
    double threshold = 0.0;
    int orientation = 1; // +1: predict +1 above the threshold
};

class HypothesisImpl;

// Pure {-1,+1}-valued predictor with a serializable description.
// Value type; cheap to copy (shared immutable impl).
class Hypothesis {
public:
    Hypothesis() = default;
    explicit Hypothesis(std::shared_ptr<const HypothesisImpl> impl)
        : impl_(std::move(impl)) {}

    bool valid() const { return impl_ != nullptr; }
    int predict(const std::vector<double>& x) const;
    nlohmann::json describe() const;

    /// Stump parameters, or nullptr for non-stump hypotheses.
    const StumpParams* as_stump() const;

    friend bool operator==(const Hypothesis& a, const Hypothesis& b);

    static Hypothesis from_json(const nlohmann::json& j);

    /// Axis-aligned threshold stump: orientation * sign(x[feature] - threshold),
    /// with points at the threshold on the low side.
    static Hypothesis stump(std::size_t feature, double threshold, int orientation);

    /// 1-D piecewise-constant concept: label starts at `leftmost_label` and
    /// flips at each boundary (boundaries strictly increasing).
    static Hypothesis interval_concept(std::size_t feature,
                                       std::vector<double> boundaries,
                                       int leftmost_label);

    /// Agrees with `target` except on the listed feature vectors.
    static Hypothesis planted(std::vector<std::vector<double>> flipped,
                              Hypothesis target);

private:
    std::shared_ptr<const HypothesisImpl> impl_;
};

} // namespace subboost
