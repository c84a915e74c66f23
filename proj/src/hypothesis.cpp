#include "subboost/hypothesis.hpp"

#include <algorithm>
#include <stdexcept>

#include "subboost/serialize.hpp"

namespace subboost {

class HypothesisImpl {
public:
    virtual ~HypothesisImpl() = default;
    virtual int predict(const std::vector<double>& x) const = 0;
    virtual nlohmann::json describe() const = 0;
    virtual const StumpParams* as_stump() const { return nullptr; }
};

namespace {

class StumpImpl final : public HypothesisImpl {
public:
    StumpImpl(std::size_t feature, double threshold, int orientation)
        : params_{feature, threshold, orientation} {
        if (orientation != 1 && orientation != -1)
            throw std::invalid_argument("stump: orientation must be -1 or +1");
    }

    int predict(const std::vector<double>& x) const override {
        if (params_.feature >= x.size())
            throw std::invalid_argument("stump: feature index out of range");
        int side = x[params_.feature] > params_.threshold ? 1 : -1;
        return params_.orientation * side;
    }

    nlohmann::json describe() const override {
        return {{"type", "stump"},
                {"feature", params_.feature},
                {"threshold", hex_double(params_.threshold)},
                {"orientation", params_.orientation}};
    }

    const StumpParams* as_stump() const override { return &params_; }

private:
    StumpParams params_;
};

class IntervalImpl final : public HypothesisImpl {
public:
    IntervalImpl(std::size_t feature, std::vector<double> boundaries, int leftmost)
        : feature_(feature), boundaries_(std::move(boundaries)), leftmost_(leftmost) {
        if (leftmost != 1 && leftmost != -1)
            throw std::invalid_argument("interval: leftmost label must be -1 or +1");
        if (!std::is_sorted(boundaries_.begin(), boundaries_.end()))
            throw std::invalid_argument("interval: boundaries must be increasing");
    }

    int predict(const std::vector<double>& x) const override {
        if (feature_ >= x.size())
            throw std::invalid_argument("interval: feature index out of range");
        std::size_t crossed = static_cast<std::size_t>(
            std::upper_bound(boundaries_.begin(), boundaries_.end(), x[feature_]) -
            boundaries_.begin());
        return (crossed % 2 == 0) ? leftmost_ : -leftmost_;
    }

    nlohmann::json describe() const override {
        nlohmann::json b = nlohmann::json::array();
        for (double v : boundaries_) b.push_back(hex_double(v));
        return {{"type", "interval"},
                {"feature", feature_},
                {"boundaries", b},
                {"leftmost", leftmost_}};
    }

private:
    std::size_t feature_;
    std::vector<double> boundaries_;
    int leftmost_;
};

class PlantedImpl final : public HypothesisImpl {
public:
    PlantedImpl(std::vector<std::vector<double>> flipped, Hypothesis target)
        : flipped_(std::move(flipped)), target_(std::move(target)) {
        if (!target_.valid())
            throw std::invalid_argument("planted: missing target");
        std::sort(flipped_.begin(), flipped_.end());
        flipped_.erase(std::unique(flipped_.begin(), flipped_.end()), flipped_.end());
    }

    int predict(const std::vector<double>& x) const override {
        int t = target_.predict(x);
        bool flip = std::binary_search(flipped_.begin(), flipped_.end(), x);
        return flip ? -t : t;
    }

    nlohmann::json describe() const override {
        nlohmann::json flips = nlohmann::json::array();
        for (const auto& x : flipped_) {
            nlohmann::json v = nlohmann::json::array();
            for (double d : x) v.push_back(hex_double(d));
            flips.push_back(v);
        }
        return {{"type", "planted"},
                {"flipped", flips},
                {"target", target_.describe()}};
    }

private:
    std::vector<std::vector<double>> flipped_;
    Hypothesis target_;
};

} // namespace

int Hypothesis::predict(const std::vector<double>& x) const {
    if (!impl_) throw std::logic_error("Hypothesis: empty");
    return impl_->predict(x);
}

nlohmann::json Hypothesis::describe() const {
    if (!impl_) throw std::logic_error("Hypothesis: empty");
    return impl_->describe();
}

const StumpParams* Hypothesis::as_stump() const {
    return impl_ ? impl_->as_stump() : nullptr;
}

bool operator==(const Hypothesis& a, const Hypothesis& b) {
    if (a.impl_ == b.impl_) return true;
    if (!a.impl_ || !b.impl_) return false;
    return a.describe() == b.describe();
}

Hypothesis Hypothesis::stump(std::size_t feature, double threshold, int orientation) {
    return Hypothesis(std::make_shared<StumpImpl>(feature, threshold, orientation));
}

Hypothesis Hypothesis::interval_concept(std::size_t feature,
                                        std::vector<double> boundaries,
                                        int leftmost_label) {
    return Hypothesis(
        std::make_shared<IntervalImpl>(feature, std::move(boundaries), leftmost_label));
}

Hypothesis Hypothesis::planted(std::vector<std::vector<double>> flipped,
                               Hypothesis target) {
    return Hypothesis(std::make_shared<PlantedImpl>(std::move(flipped), std::move(target)));
}

Hypothesis Hypothesis::from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "stump") {
        return stump(j.at("feature").get<std::size_t>(),
                     parse_hex_double(j.at("threshold").get<std::string>()),
                     j.at("orientation").get<int>());
    }
    if (type == "interval") {
        std::vector<double> boundaries;
        for (const auto& b : j.at("boundaries"))
            boundaries.push_back(parse_hex_double(b.get<std::string>()));
        return interval_concept(j.at("feature").get<std::size_t>(),
                                std::move(boundaries), j.at("leftmost").get<int>());
    }
    if (type == "planted") {
        std::vector<std::vector<double>> flips;
        for (const auto& xv : j.at("flipped")) {
            std::vector<double> x;
            for (const auto& d : xv) x.push_back(parse_hex_double(d.get<std::string>()));
            flips.push_back(std::move(x));
        }
        return planted(std::move(flips), from_json(j.at("target")));
    }
    throw std::invalid_argument("Hypothesis::from_json: unknown type " + type);
}

} // namespace subboost
