#include "subboost/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subboost {

VotingClassifier::VotingClassifier(std::vector<Hypothesis> hypotheses,
                                   std::vector<double> weights)
    : hypotheses_(std::move(hypotheses)), weights_(std::move(weights)) {
    if (hypotheses_.empty())
        throw std::invalid_argument("VotingClassifier: empty ensemble");
    if (weights_.size() != hypotheses_.size())
        throw std::invalid_argument("VotingClassifier: weight count mismatch");
    for (double w : weights_) {
        weight_mass_ += std::abs(w);
        if (w != 1.0) unit_weights_ = false;
    }
    if (!(weight_mass_ > 0.0))
        throw std::invalid_argument("VotingClassifier: zero weight mass");
}

double VotingClassifier::score(const std::vector<double>& x) const {
    double s = 0.0;
    for (std::size_t k = 0; k < hypotheses_.size(); ++k)
        s += weights_[k] * hypotheses_[k].predict(x);
    return s / weight_mass_;
}

int VotingClassifier::predict(const std::vector<double>& x) const {
    return score(x) >= 0.0 ? 1 : -1; // sign(0) := +1
}

double margin(const VotingClassifier& vc, const LabeledExample& example) {
    return example.y * vc.score(example.x);
}

double alpha_of(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("alpha_of: gamma must be in (0, 1)");
    return 0.5 * std::log((0.5 + gamma / 2.0) / (0.5 - gamma / 2.0));
}

std::size_t subsample_size(double gamma, std::size_t d, double a_const) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("subsample_size: gamma must be in (0, 1)");
    if (d == 0) throw std::invalid_argument("subsample_size: d must be >= 1");
    if (!(a_const > 0.0))
        throw std::invalid_argument("subsample_size: a must be positive");
    double m = std::ceil(a_const * (static_cast<double>(d) + std::log(1.0 / gamma)) /
                         (gamma * gamma));
    return std::max<std::size_t>(1, static_cast<std::size_t>(m));
}

std::size_t ensemble_size(double gamma, std::size_t upper_bound_n, double delta) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("ensemble_size: gamma must be positive");
    if (upper_bound_n == 0)
        throw std::invalid_argument("ensemble_size: N must be >= 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("ensemble_size: delta must be in (0, 1)");
    double k = std::ceil(
        32.0 * (std::log(static_cast<double>(upper_bound_n) / delta) / (gamma * gamma) +
                1.0));
    return std::max<std::size_t>(1, static_cast<std::size_t>(k));
}

namespace {

void validate_config(const BoostConfig& c, std::size_t n) {
    if (!(c.gamma > 0.0 && c.gamma < 0.5))
        throw std::invalid_argument("BoostConfig: gamma must be in (0, 1/2)");
    if (!(c.delta > 0.0 && c.delta < 1.0))
        throw std::invalid_argument("BoostConfig: delta must be in (0, 1)");
    if (c.upper_bound_n != 0 && c.upper_bound_n < n)
        throw std::invalid_argument("BoostConfig: N must be >= n");
    if (!(c.a_const > 0.0))
        throw std::invalid_argument("BoostConfig: a_const must be positive");
}

} // namespace

BoostResult sampled_boost(const Dataset& data, const WeakLearner& learner,
                          const BoostConfig& config, const RoundObserver& observer) {
    const std::size_t n = data.size();
    validate_config(config, n);

    BoostConfig resolved = config;
    if (resolved.upper_bound_n == 0) resolved.upper_bound_n = n;
    const double alpha = alpha_of(resolved.gamma);
    const std::size_t m =
        resolved.m_override ? resolved.m_override
                            : subsample_size(resolved.gamma, learner.spec.vc_dim,
                                             resolved.a_const);
    const std::size_t rounds_k =
        resolved.k_override ? resolved.k_override
                            : ensemble_size(resolved.gamma, resolved.upper_bound_n,
                                            resolved.delta);
    resolved.m_override = m;
    resolved.k_override = rounds_k;

    RngStream rng(resolved.seed, resolved.stream);
    WeightDistribution dist = uniform_distribution(n);
    const double e_up = std::exp(alpha);
    const double e_down = std::exp(-alpha);

    BoostTrace trace;
    trace.config = resolved;
    trace.n = n;
    trace.m = m;
    trace.rounds_k = rounds_k;
    trace.alpha = alpha;
    trace.rounds.reserve(rounds_k);
    trace.scores.assign(n, 0);

    std::vector<Hypothesis> hypotheses;
    hypotheses.reserve(rounds_k);
    std::vector<double> raw(n);
    std::vector<std::int8_t> preds(n);
    std::vector<LabeledExample> sample(m);

    for (std::size_t k = 0; k < rounds_k; ++k) {
        std::vector<std::size_t> indices = draw_iid(dist, m, rng);
        for (std::size_t j = 0; j < m; ++j) sample[j] = data[indices[j]];

        Hypothesis h = learner.train(sample, rng);
        const double serr = sample_error(h, sample);
        const bool violation = serr > 0.5 - resolved.gamma + 1e-12;
        if (violation && resolved.policy == ViolationPolicy::Abort)
            throw weak_learning_violation(
                "sampled_boost: weak learner missed its advantage at round " +
                    std::to_string(k + 1),
                serr);

        double eps = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int p = h.predict(data[i].x);
            preds[i] = static_cast<std::int8_t>(p);
            if (p != data[i].y) eps += dist[i];
            raw[i] = dist[i] * (p == data[i].y ? e_down : e_up);
        }
        auto [next, z] = normalize(raw);

        if (observer)
            observer(RoundView{k + 1, indices, dist.weights(), preds, h, z, eps,
                               violation});

        BoostRound round;
        round.hypothesis = h;
        round.z = z;
        round.eps = eps;
        round.violation = violation;
        if (resolved.trace_level != TraceLevel::Light) round.indices = indices;
        if (resolved.trace_level == TraceLevel::Full) {
            round.dist = dist.weights();
            round.preds = preds;
        }
        trace.rounds.push_back(std::move(round));

        for (std::size_t i = 0; i < n; ++i) trace.scores[i] += preds[i];
        hypotheses.push_back(std::move(h));
        dist = std::move(next);
    }

    VotingClassifier vc(std::move(hypotheses),
                        std::vector<double>(rounds_k, 1.0));
    return {std::move(vc), std::move(trace)};
}

AdaBoostResult adaboost(const Dataset& data, std::size_t rounds) {
    if (rounds == 0) throw std::invalid_argument("adaboost: rounds must be >= 1");
    const std::size_t n = data.size();
    std::vector<double> dist(n, 1.0 / static_cast<double>(n));

    AdaBoostResult result{VotingClassifier({Hypothesis::stump(0, 0, 1)}, {1.0}), {}, {}, false};
    std::vector<Hypothesis> hypotheses;
    std::vector<double> alphas;

    for (std::size_t t = 0; t < rounds; ++t) {
        Hypothesis h = train_stump_weighted(data.examples(), dist);
        double eps = 0.0;
        std::vector<std::int8_t> preds(n);
        for (std::size_t i = 0; i < n; ++i) {
            int p = h.predict(data[i].x);
            preds[i] = static_cast<std::int8_t>(p);
            if (p != data[i].y) eps += dist[i];
        }
        result.round_errors.push_back(eps);
        if (eps == 0.0) {
            // perfect hypothesis: keep it with unit weight and stop
            hypotheses.push_back(std::move(h));
            alphas.push_back(1.0);
            result.early_stopped = true;
            break;
        }
        if (eps >= 0.5)
            throw weak_learning_violation(
                "adaboost: round error >= 1/2 at round " + std::to_string(t + 1), eps);

        double alpha = 0.5 * std::log((1.0 - eps) / eps);
        hypotheses.push_back(std::move(h));
        alphas.push_back(alpha);

        double z = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dist[i] *= std::exp(-alpha * data[i].y * preds[i]);
            z += dist[i];
        }
        for (auto& w : dist) w /= z;
    }
    result.alphas = alphas;
    result.classifier = VotingClassifier(std::move(hypotheses), std::move(alphas));
    return result;
}

double training_error(const VotingClassifier& vc, const Dataset& data) {
    std::size_t wrong = 0;
    for (const auto& e : data.examples())
        if (vc.predict(e.x) != e.y) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(data.size());
}

std::vector<double> ensemble_scores(const VotingClassifier& vc,
                                    const std::vector<std::vector<double>>& xs) {
    const std::size_t k = vc.size();
    bool all_stumps = vc.unit_weights();
    if (all_stumps)
        for (const auto& h : vc.hypotheses())
            if (!h.as_stump()) { all_stumps = false; break; }

    std::vector<double> out(xs.size());
    if (!all_stumps) {
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = vc.score(xs[i]);
        return out;
    }

    // unit-weight stump ensembles: per-feature threshold sweep with exact
    // integer prefix sums of orientations
    std::size_t dim = 0;
    for (const auto& h : vc.hypotheses())
        dim = std::max(dim, h.as_stump()->feature + 1);

    struct Thr { double t; int o; };
    std::vector<std::vector<Thr>> by_feature(dim);
    for (const auto& h : vc.hypotheses()) {
        const auto* s = h.as_stump();
        by_feature[s->feature].push_back({s->threshold, s->orientation});
    }
    std::vector<std::vector<double>> thresholds(dim);
    std::vector<std::vector<long long>> prefix(dim);
    std::vector<long long> feature_total(dim, 0);
    for (std::size_t f = 0; f < dim; ++f) {
        auto& v = by_feature[f];
        std::sort(v.begin(), v.end(), [](const Thr& a, const Thr& b) { return a.t < b.t; });
        thresholds[f].resize(v.size());
        prefix[f].resize(v.size() + 1, 0);
        for (std::size_t j = 0; j < v.size(); ++j) {
            thresholds[f][j] = v[j].t;
            prefix[f][j + 1] = prefix[f][j] + v[j].o;
            feature_total[f] += v[j].o;
        }
    }

    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto& x = xs[i];
        if (x.size() < dim)
            throw std::invalid_argument("ensemble_scores: point dimension too small");
        long long vote = 0;
        for (std::size_t f = 0; f < dim; ++f) {
            if (thresholds[f].empty()) continue;
            // stumps with threshold < x[f] vote +orientation, the rest vote -o
            auto below = static_cast<std::size_t>(
                std::lower_bound(thresholds[f].begin(), thresholds[f].end(), x[f]) -
                thresholds[f].begin());
            vote += 2 * prefix[f][below] - feature_total[f];
        }
        out[i] = static_cast<double>(vote) / static_cast<double>(k);
    }
    return out;
}

} // namespace subboost
