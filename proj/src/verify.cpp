#include "subboost/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

#include "subboost/compress.hpp"
#include "subboost/serialize.hpp"

namespace subboost {

std::vector<Hypothesis> stump_grid(const Dataset& data) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<Hypothesis> grid;
    for (std::size_t f = 0; f < data.dim(); ++f) {
        std::vector<double> values;
        values.reserve(data.size());
        for (const auto& e : data.examples()) values.push_back(e.x[f]);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());

        std::vector<double> thresholds;
        thresholds.push_back(-inf);
        for (std::size_t i = 1; i < values.size(); ++i)
            thresholds.push_back(values[i - 1] + (values[i] - values[i - 1]) / 2.0);
        thresholds.push_back(inf);
        for (double t : thresholds) {
            grid.push_back(Hypothesis::stump(f, t, 1));
            grid.push_back(Hypothesis::stump(f, t, -1));
        }
    }
    return grid;
}

bool is_eps_approximation(const std::vector<std::size_t>& sample, const Dataset& data,
                          const std::vector<Hypothesis>& hclass,
                          const WeightDistribution& dist, double eps) {
    if (hclass.empty())
        throw std::invalid_argument("is_eps_approximation: empty hypothesis class");
    if (sample.empty())
        throw std::invalid_argument("is_eps_approximation: empty sample");
    if (dist.size() != data.size())
        throw std::invalid_argument("is_eps_approximation: distribution size mismatch");
    for (std::size_t i : sample)
        if (i >= data.size())
            throw std::invalid_argument("is_eps_approximation: index out of range");

    for (const auto& h : hclass) {
        double true_err = 0.0;
        std::vector<std::int8_t> wrong(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) {
            wrong[i] = h.predict(data[i].x) != data[i].y;
            if (wrong[i]) true_err += dist[i];
        }
        std::size_t miss = 0;
        for (std::size_t i : sample) miss += wrong[i];
        double emp = static_cast<double>(miss) / static_cast<double>(sample.size());
        if (std::abs(true_err - emp) > eps) return false;
    }
    return true;
}

namespace {

// Predictions of every round hypothesis over the dataset, reusing the
// trace's stored vectors when present.
std::vector<std::vector<std::int8_t>> round_predictions(const BoostTrace& trace,
                                                        const Dataset& data) {
    std::vector<std::vector<std::int8_t>> preds(trace.rounds.size());
    for (std::size_t k = 0; k < trace.rounds.size(); ++k) {
        if (trace.rounds[k].preds.size() == data.size()) {
            preds[k] = trace.rounds[k].preds;
        } else {
            preds[k].resize(data.size());
            for (std::size_t i = 0; i < data.size(); ++i)
                preds[k][i] = static_cast<std::int8_t>(
                    trace.rounds[k].hypothesis.predict(data[i].x));
        }
    }
    return preds;
}

double logsumexp(const std::vector<double>& v) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : v) mx = std::max(mx, x);
    double s = 0.0;
    for (double x : v) s += std::exp(x - mx);
    return mx + std::log(s);
}

} // namespace

double telescoping_check(const BoostTrace& trace, const Dataset& data, double alpha) {
    const std::size_t n = data.size();
    std::vector<long long> scores;
    if (trace.scores.size() == n) {
        scores = trace.scores;
    } else {
        scores.assign(n, 0);
        auto preds = round_predictions(trace, data);
        for (const auto& p : preds)
            for (std::size_t i = 0; i < n; ++i) scores[i] += p[i];
    }

    // both sides evaluated in the log domain; exponents reach +-K*alpha
    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i)
        terms[i] = -alpha * data[i].y * static_cast<double>(scores[i]);
    double log_lhs = logsumexp(terms);

    double log_rhs = std::log(static_cast<double>(n));
    for (const auto& r : trace.rounds) log_rhs += std::log(r.z);

    return std::abs(std::expm1(log_lhs - log_rhs));
}

double zk_check(const BoostTrace& trace, const Dataset& data) {
    const std::size_t n = data.size();
    const double e_up = std::exp(trace.alpha);
    const double e_down = std::exp(-trace.alpha);
    auto preds = round_predictions(trace, data);

    // replay the weight recursion exactly as the boosting loop computes it
    WeightDistribution dist = uniform_distribution(n);
    std::vector<double> raw(n);
    double max_dev = 0.0;
    for (std::size_t k = 0; k < trace.rounds.size(); ++k) {
        double eps = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            bool correct = preds[k][i] == data[i].y;
            if (!correct) eps += dist[i];
            raw[i] = dist[i] * (correct ? e_down : e_up);
        }
        double closed = eps * e_up + (1.0 - eps) * e_down;
        max_dev = std::max(max_dev, std::abs(trace.rounds[k].z - closed));
        dist = normalize(raw).first;
    }
    return max_dev;
}

nlohmann::json MarginAuditReport::to_json() const {
    nlohmann::json margins = nlohmann::json::array();
    for (double m : min_margins) margins.push_back(hex_double(m));
    return {{"schema_version", 1},
            {"report", "margin_audit"},
            {"n_seeds", n_seeds},
            {"gamma", hex_double(gamma)},
            {"margin_threshold", hex_double(margin_threshold)},
            {"min_margins", margins},
            {"fraction_meeting_threshold", fraction_meeting_threshold},
            {"fraction_zero_train_error", fraction_zero_train_error},
            {"approx_failure_budget", approx_failure_budget},
            {"approx_failures_per_run", approx_failures_per_run},
            {"fraction_over_budget", fraction_over_budget},
            {"max_telescoping_residual", max_telescoping_residual},
            {"max_zk_deviation", max_zk_deviation}};
}

MarginAuditReport margin_audit(const Dataset& data, const WeakLearner& learner,
                               const BoostConfig& config, std::size_t n_seeds) {
    if (n_seeds == 0) throw std::invalid_argument("margin_audit: n_seeds must be >= 1");
    const std::size_t n = data.size();

    auto grid = stump_grid(data);
    std::vector<std::vector<std::int8_t>> wrong(grid.size(),
                                                std::vector<std::int8_t>(n));
    for (std::size_t h = 0; h < grid.size(); ++h)
        for (std::size_t i = 0; i < n; ++i)
            wrong[h][i] = grid[h].predict(data[i].x) != data[i].y;

    MarginAuditReport report;
    report.n_seeds = n_seeds;
    report.gamma = config.gamma;
    report.margin_threshold = config.gamma / 128.0;

    std::size_t meeting = 0, zero_err = 0, over_budget = 0;
    std::vector<std::size_t> counts(n);

    for (std::size_t s = 0; s < n_seeds; ++s) {
        BoostConfig cfg = config;
        cfg.stream = config.stream + s;
        cfg.trace_level = TraceLevel::Light; // per-round data consumed in flight

        // count rounds whose subsample fails to be a gamma/2-approximation
        std::size_t failures = 0;
        const double eps_target = cfg.gamma / 2.0;
        auto on_round = [&](const RoundView& view) {
            std::fill(counts.begin(), counts.end(), 0);
            for (std::size_t i : view.indices) ++counts[i];
            const double m_d = static_cast<double>(view.indices.size());
            for (std::size_t h = 0; h < grid.size(); ++h) {
                double true_err = 0.0;
                double miss = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (wrong[h][i]) {
                        true_err += view.dist[i];
                        miss += static_cast<double>(counts[i]);
                    }
                }
                if (std::abs(true_err - miss / m_d) > eps_target) {
                    ++failures;
                    return;
                }
            }
        };

        auto result = sampled_boost(data, learner, cfg, on_round);
        const auto& trace = result.trace;
        const double k = static_cast<double>(trace.rounds_k);
        report.approx_failure_budget = cfg.gamma * cfg.gamma * k / 16.0;

        double min_margin = 1.0;
        bool all_correct = true;
        for (std::size_t i = 0; i < n; ++i) {
            double mg = data[i].y * static_cast<double>(trace.scores[i]) / k;
            min_margin = std::min(min_margin, mg);
            int pred = trace.scores[i] >= 0 ? 1 : -1;
            if (pred != data[i].y) all_correct = false;
        }
        report.min_margins.push_back(min_margin);
        if (min_margin >= report.margin_threshold) ++meeting;
        if (all_correct) ++zero_err;
        report.approx_failures_per_run.push_back(failures);
        if (static_cast<double>(failures) > report.approx_failure_budget) ++over_budget;

        report.max_telescoping_residual =
            std::max(report.max_telescoping_residual,
                     telescoping_check(trace, data, trace.alpha));
        report.max_zk_deviation = std::max(report.max_zk_deviation, zk_check(trace, data));
    }

    const double runs = static_cast<double>(n_seeds);
    report.fraction_meeting_threshold = static_cast<double>(meeting) / runs;
    report.fraction_zero_train_error = static_cast<double>(zero_err) / runs;
    report.fraction_over_budget = static_cast<double>(over_budget) / runs;
    return report;
}

nlohmann::json StabilityReport::to_json() const {
    return {{"schema_version", 1},
            {"report", "stability"},
            {"instance", instance},
            {"n", n},
            {"m", m},
            {"K", rounds_k},
            {"subsequence_size", subsequence_size},
            {"trials", trials},
            {"conditional_accepted", conditional_accepted},
            {"exact", exact},
            {"tv_distance", tv_distance},
            {"chi_square", chi_square},
            {"dof", dof},
            {"p_value", p_value},
            {"inconclusive", inconclusive},
            {"pass", pass}};
}

namespace {

struct ArmCounts {
    std::map<std::vector<std::size_t>, std::array<std::size_t, 2>> cells;
    std::size_t totals[2] = {0, 0};

    void add(int arm, const std::vector<std::size_t>& outcome) {
        auto& cell = cells.try_emplace(outcome, std::array<std::size_t, 2>{0, 0})
                         .first->second;
        ++cell[arm];
        ++totals[arm];
    }
};

} // namespace

StabilityReport stability_test(const Dataset& data,
                               const std::vector<std::size_t>& subsequence,
                               const WeakLearner& learner, const BoostConfig& config,
                               std::size_t trials) {
    if (!learner.spec.deterministic)
        throw std::logic_error("stability_test: learner must be deterministic");
    if (subsequence.empty())
        throw std::invalid_argument("stability_test: empty subsequence");
    if (!std::is_sorted(subsequence.begin(), subsequence.end()))
        throw std::invalid_argument("stability_test: subsequence must be increasing");
    for (std::size_t i : subsequence)
        if (i >= data.size())
            throw std::invalid_argument("stability_test: subsequence index out of range");

    const std::size_t n = data.size();
    Dataset sub = data.subsequence(subsequence);

    BoostConfig cfg = config;
    if (cfg.upper_bound_n == 0) cfg.upper_bound_n = n;
    cfg.trace_level = TraceLevel::Standard;
    const std::size_t m = cfg.m_override
                              ? cfg.m_override
                              : subsample_size(cfg.gamma, learner.spec.vc_dim, cfg.a_const);
    const std::size_t rounds_k =
        cfg.k_override ? cfg.k_override
                       : ensemble_size(cfg.gamma, cfg.upper_bound_n, cfg.delta);
    cfg.m_override = m;
    cfg.k_override = rounds_k;

    StabilityReport report;
    report.n = n;
    report.m = m;
    report.rounds_k = rounds_k;
    report.subsequence_size = subsequence.size();

    std::set<std::size_t> member(subsequence.begin(), subsequence.end());

    // K = 1: the subsample law is exactly uniform(S)^m, so the conditional
    // law can be enumerated and compared to uniform(S')^m without sampling.
    double outcomes = std::pow(static_cast<double>(n), static_cast<double>(m));
    if (rounds_k == 1 && outcomes <= 64.0) {
        report.exact = true;
        std::vector<std::size_t> tuple(m, 0);
        std::map<std::vector<std::size_t>, double> cond, fresh;
        double accepted_mass = 0.0;
        const std::size_t total = static_cast<std::size_t>(outcomes);
        const double p_each = 1.0 / outcomes;
        for (std::size_t code = 0; code < total; ++code) {
            std::size_t c = code;
            bool inside = true;
            for (std::size_t j = 0; j < m; ++j) {
                tuple[j] = c % n;
                c /= n;
                if (!member.count(tuple[j])) inside = false;
            }
            if (inside) {
                cond[tuple] += p_each;
                accepted_mass += p_each;
                ++report.conditional_accepted;
            }
        }
        for (auto& [key, p] : cond) p /= accepted_mass;

        const std::size_t ns = subsequence.size();
        const double sub_outcomes = std::pow(static_cast<double>(ns),
                                             static_cast<double>(m));
        const std::size_t sub_total = static_cast<std::size_t>(sub_outcomes);
        for (std::size_t code = 0; code < sub_total; ++code) {
            std::size_t c = code;
            for (std::size_t j = 0; j < m; ++j) {
                tuple[j] = subsequence[c % ns];
                c /= ns;
            }
            fresh[tuple] += 1.0 / sub_outcomes;
        }

        double tv = 0.0;
        for (const auto& [key, p] : cond) {
            auto it = fresh.find(key);
            tv += std::abs(p - (it == fresh.end() ? 0.0 : it->second));
        }
        for (const auto& [key, p] : fresh)
            if (!cond.count(key)) tv += p;
        report.tv_distance = tv / 2.0;
        report.p_value = 1.0;
        report.pass = report.tv_distance <= 1e-12;
        return report;
    }

    // statistical two-sample comparison; retry once on zero acceptances
    for (int attempt = 0; attempt < 2; ++attempt) {
        const std::size_t budget = attempt == 0 ? trials : trials * 4;
        report.trials = budget;
        report.conditional_accepted = 0;
        ArmCounts arm;

        for (std::size_t t = 0; t < budget; ++t) {
            BoostConfig run_cfg = cfg;
            run_cfg.stream = cfg.stream + t;
            auto result = sampled_boost(data, learner, run_cfg);
            std::vector<std::size_t> outcome;
            outcome.reserve(rounds_k * m);
            bool inside = true;
            for (const auto& r : result.trace.rounds)
                for (std::size_t i : r.indices) {
                    outcome.push_back(i);
                    if (!member.count(i)) inside = false;
                }
            if (inside) {
                arm.add(0, outcome);
                ++report.conditional_accepted;
            }
        }
        for (std::size_t t = 0; t < budget; ++t) {
            BoostConfig run_cfg = cfg;
            run_cfg.stream = cfg.stream + budget + t;
            auto result = sampled_boost(sub, learner, run_cfg);
            std::vector<std::size_t> outcome;
            outcome.reserve(rounds_k * m);
            for (const auto& r : result.trace.rounds)
                for (std::size_t i : r.indices) outcome.push_back(subsequence[i]);
            arm.add(1, outcome);
        }

        if (report.conditional_accepted == 0) {
            if (attempt == 0) continue;
            report.inconclusive = true;
            report.pass = true;
            return report;
        }

        const double n1 = static_cast<double>(arm.totals[0]);
        const double n2 = static_cast<double>(arm.totals[1]);
        const double k1 = std::sqrt(n2 / n1), k2 = std::sqrt(n1 / n2);
        double chi = 0.0, tv = 0.0;
        std::size_t cells = 0;
        for (const auto& [key, cell] : arm.cells) {
            const double o1 = static_cast<double>(cell[0]);
            const double o2 = static_cast<double>(cell[1]);
            if (o1 + o2 == 0.0) continue;
            ++cells;
            const double d = k1 * o1 - k2 * o2;
            chi += d * d / (o1 + o2);
            tv += std::abs(o1 / n1 - o2 / n2);
        }
        report.chi_square = chi;
        report.dof = cells > 1 ? cells - 1 : 0;
        report.tv_distance = tv / 2.0;
        if (report.dof == 0) {
            report.p_value = 1.0;
        } else {
            boost::math::chi_squared dist_chi(static_cast<double>(report.dof));
            report.p_value = boost::math::cdf(boost::math::complement(dist_chi, chi));
        }
        report.pass = report.p_value > 0.001;
        return report;
    }
    return report; // unreachable
}

double failure_rate_estimate(const Dataset& data, const WeakLearner& learner,
                             const BoostConfig& config, std::size_t trials) {
    if (trials == 0)
        throw std::invalid_argument("failure_rate_estimate: trials must be >= 1");
    std::size_t failed = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        BoostConfig cfg = config;
        cfg.stream = config.stream + t;
        if (cfg.trace_level == TraceLevel::Light) cfg.trace_level = TraceLevel::Standard;
        auto result = sampled_boost(data, learner, cfg);
        auto predictor = reconstruct(encode(result.trace, data), learner);
        for (const auto& e : data.examples())
            if (predictor.predict(e.x) != e.y) {
                ++failed;
                break;
            }
    }
    return static_cast<double>(failed) / static_cast<double>(trials);
}

} // namespace subboost
