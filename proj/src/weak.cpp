#include "subboost/weak.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace subboost {

namespace {

struct Point {
    double value;
    int y;
    double w;
};

} // namespace

Hypothesis train_stump_weighted(const std::vector<LabeledExample>& sample,
                                const std::vector<double>& weights) {
    if (sample.empty()) throw std::invalid_argument("train_stump: empty sample");
    if (weights.size() != sample.size())
        throw std::invalid_argument("train_stump: weight count mismatch");
    const std::size_t dim = sample[0].x.size();
    if (dim == 0) throw std::invalid_argument("train_stump: zero-dimensional sample");

    double total_pos = 0.0, total = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        if (sample[i].y == 1) total_pos += weights[i];
        total += weights[i];
    }
    const double total_neg = total - total_pos;
    const double inf = std::numeric_limits<double>::infinity();

    double best_err = inf;
    StumpParams best;

    // Tie-break total order: lowest feature, lowest threshold, +1 first.
    for (std::size_t f = 0; f < dim; ++f) {
        std::vector<Point> pts(sample.size());
        for (std::size_t i = 0; i < sample.size(); ++i)
            pts[i] = {sample[i].x[f], sample[i].y, weights[i]};
        std::sort(pts.begin(), pts.end(),
                  [](const Point& a, const Point& b) { return a.value < b.value; });

        // error of "+1 above t"; at t = -inf everything is predicted +1
        double err_plus = total_neg;
        auto consider = [&](double threshold, double ep) {
            if (ep < best_err) {
                best_err = ep;
                best = {f, threshold, 1};
            }
            double em = total - ep;
            if (em < best_err) {
                best_err = em;
                best = {f, threshold, -1};
            }
        };
        consider(-inf, err_plus);

        std::size_t i = 0;
        while (i < pts.size()) {
            const double v = pts[i].value;
            while (i < pts.size() && pts[i].value == v) {
                err_plus += pts[i].y == 1 ? pts[i].w : -pts[i].w;
                ++i;
            }
            double threshold = (i < pts.size())
                                   ? v + (pts[i].value - v) / 2.0
                                   : inf;
            consider(threshold, err_plus);
        }
    }
    return Hypothesis::stump(best.feature, best.threshold, best.orientation);
}

Hypothesis train_stump(const std::vector<LabeledExample>& sample) {
    return train_stump_weighted(sample, std::vector<double>(sample.size(), 1.0));
}

Hypothesis train_planted(const std::vector<LabeledExample>& sample,
                         const Hypothesis& target, double gamma) {
    if (sample.empty()) throw std::invalid_argument("train_planted: empty sample");
    const std::size_t m = sample.size();
    auto cutoff = static_cast<std::size_t>(
        std::ceil((0.5 + gamma) * static_cast<double>(m)));
    cutoff = std::min(cutoff, m);

    // agree on the first `cutoff` positions; flip the remaining feature
    // vectors unless they also occur in the agreement prefix
    std::vector<std::vector<double>> agree;
    agree.reserve(cutoff);
    for (std::size_t i = 0; i < cutoff; ++i) agree.push_back(sample[i].x);
    std::sort(agree.begin(), agree.end());

    std::vector<std::vector<double>> flips;
    for (std::size_t i = cutoff; i < m; ++i)
        if (!std::binary_search(agree.begin(), agree.end(), sample[i].x))
            flips.push_back(sample[i].x);
    return Hypothesis::planted(std::move(flips), target);
}

double weighted_error(const Hypothesis& h, const Dataset& data,
                      const WeightDistribution& dist) {
    if (dist.size() != data.size())
        throw std::invalid_argument("weighted_error: distribution/dataset size mismatch");
    double err = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i)
        if (h.predict(data[i].x) != data[i].y) err += dist[i];
    return err;
}

double sample_error(const Hypothesis& h, const std::vector<LabeledExample>& sample) {
    if (sample.empty()) throw std::invalid_argument("sample_error: empty sample");
    std::size_t wrong = 0;
    for (const auto& e : sample)
        if (h.predict(e.x) != e.y) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(sample.size());
}

std::size_t stump_vc_dim(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("stump_vc_dim: dim must be >= 1");
    if (dim == 1) return 2;
    std::size_t bits = static_cast<std::size_t>(std::ceil(std::log2(2.0 * dim)));
    return bits + 2;
}

WeakLearner make_stump_learner(double gamma, std::size_t dim) {
    WeakLearner learner;
    learner.spec = {gamma, stump_vc_dim(dim), true};
    learner.train = [](const std::vector<LabeledExample>& sample, RngStream&) {
        return train_stump(sample);
    };
    return learner;
}

WeakLearner make_planted_learner(double gamma, Hypothesis target) {
    WeakLearner learner;
    learner.spec = {gamma, 1, true};
    learner.train = [gamma, target = std::move(target)](
                        const std::vector<LabeledExample>& sample, RngStream&) {
        return train_planted(sample, target, gamma);
    };
    return learner;
}

} // namespace subboost
