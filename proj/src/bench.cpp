#include "subboost/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "subboost/compress.hpp"
#include "subboost/serialize.hpp"
#include "subboost/verify.hpp"

namespace subboost {

namespace {

Hypothesis threshold_target() { return Hypothesis::stump(0, 0.0, 1); }

Hypothesis interval_target() {
    // alternating -,+,-,+ quarters of [-1,1]
    return Hypothesis::interval_concept(0, {-0.5, 0.0, 0.5}, -1);
}

std::vector<double> task_boundaries(const std::string& generator) {
    if (generator == "threshold") return {0.0};
    if (generator == "interval") return {-0.5, 0.0, 0.5};
    throw std::invalid_argument("unknown task generator: " + generator);
}

Dataset generate_points(const Hypothesis& target, const std::vector<double>& boundaries,
                        std::size_t n, double band, RngStream& rng) {
    std::set<double> seen;
    std::vector<LabeledExample> examples;
    examples.reserve(n);
    std::size_t attempts = 0;
    const std::size_t max_attempts = 1000 * n + 1000;
    while (examples.size() < n) {
        if (++attempts > max_attempts)
            throw std::runtime_error("task generation: could not draw enough "
                                     "duplicate-free points");
        double x = 2.0 * rng.next_double() - 1.0;
        bool near_boundary = false;
        for (double b : boundaries)
            if (std::abs(x - b) < band) { near_boundary = true; break; }
        if (near_boundary) continue;
        if (!seen.insert(x).second) continue;
        LabeledExample e;
        e.x = {x};
        e.y = target.predict(e.x);
        examples.push_back(std::move(e));
    }
    return Dataset(std::move(examples));
}

Task gen_task_impl(const TaskSpec& spec, const Hypothesis& target) {
    if (spec.n_train == 0 || spec.n_test == 0)
        throw std::invalid_argument("TaskSpec: n_train and n_test must be >= 1");
    auto boundaries = task_boundaries(spec.generator);
    RngStream train_rng(spec.seed, spec.stream * 8 + 1);
    RngStream test_rng(spec.seed, spec.stream * 8 + 2);
    Task task{generate_points(target, boundaries, spec.n_train, spec.band, train_rng),
              generate_points(target, boundaries, spec.n_test, spec.band, test_rng),
              target};
    return task;
}

} // namespace

Task gen_threshold_task(const TaskSpec& spec) {
    TaskSpec s = spec;
    s.generator = "threshold";
    return gen_task_impl(s, threshold_target());
}

Task gen_interval_task(const TaskSpec& spec) {
    TaskSpec s = spec;
    s.generator = "interval";
    return gen_task_impl(s, interval_target());
}

Task gen_task(const TaskSpec& spec) {
    if (spec.generator == "threshold") return gen_threshold_task(spec);
    if (spec.generator == "interval") return gen_interval_task(spec);
    throw std::invalid_argument("unknown task generator: " + spec.generator);
}

double measure_stump_advantage(const TaskSpec& spec, std::size_t probe_size) {
    auto boundaries = task_boundaries(spec.generator);
    Hypothesis target =
        spec.generator == "threshold" ? threshold_target() : interval_target();
    RngStream probe_rng(spec.seed, spec.stream * 8 + 3);
    Dataset probe = generate_points(target, boundaries, probe_size, spec.band, probe_rng);
    Hypothesis stump = train_stump(probe.examples());
    return 0.5 - sample_error(stump, probe.examples());
}

namespace {

double error_from_scores(const std::vector<double>& scores, const Dataset& data) {
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        int pred = scores[i] >= 0.0 ? 1 : -1;
        if (pred != data[i].y) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(data.size());
}

std::vector<std::vector<double>> feature_rows(const Dataset& data) {
    std::vector<std::vector<double>> xs;
    xs.reserve(data.size());
    for (const auto& e : data.examples()) xs.push_back(e.x);
    return xs;
}

CurvePoint run_point(const SweepConfig& config, const std::string& algorithm,
                     std::size_t n, std::size_t trial, double gamma) {
    CurvePoint point;
    point.algorithm = algorithm;
    point.n = n;
    point.trial = trial;

    std::size_t alg_index = algorithm == "sampled" ? 1 : 2;
    TaskSpec spec;
    spec.generator = config.task;
    spec.n_train = n;
    spec.n_test = 10 * n;
    spec.seed = config.master_seed;
    spec.stream = (alg_index * 1000003ULL + n) * 1000003ULL + trial;

    auto started = std::chrono::steady_clock::now();
    try {
        Task task = gen_task(spec);
        auto train_xs = feature_rows(task.train);
        auto test_xs = feature_rows(task.test);

        if (algorithm == "sampled") {
            BoostConfig bc;
            bc.gamma = gamma;
            bc.delta = config.delta;
            bc.a_const = config.a_const;
            bc.seed = config.master_seed;
            bc.stream = spec.stream + 7;
            bc.trace_level = TraceLevel::Light;
            std::size_t formula_k = ensemble_size(gamma, n, config.delta);
            bc.k_override = std::min(formula_k, config.k_cap);
            auto learner = make_stump_learner(gamma, task.train.dim());
            auto result = sampled_boost(task.train, learner, bc);

            auto train_scores = ensemble_scores(result.classifier, train_xs);
            auto test_scores = ensemble_scores(result.classifier, test_xs);
            point.train_error = error_from_scores(train_scores, task.train);
            point.test_error = error_from_scores(test_scores, task.test);
            double mn = 1.0;
            for (std::size_t i = 0; i < task.train.size(); ++i)
                mn = std::min(mn, task.train[i].y * train_scores[i]);
            point.min_margin = mn;
        } else if (algorithm == "adaboost") {
            auto result = adaboost(task.train, config.adaboost_rounds);
            point.train_error = training_error(result.classifier, task.train);
            point.test_error = training_error(result.classifier, task.test);
            double mn = 1.0;
            for (const auto& e : task.train.examples())
                mn = std::min(mn, margin(result.classifier, e));
            point.min_margin = mn;
        } else {
            throw std::invalid_argument("unknown algorithm: " + algorithm);
        }
    } catch (const std::exception& ex) {
        point.error = ex.what(); // recorded, never aborts the sweep
    }
    point.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - started)
                        .count();
    return point;
}

} // namespace

std::vector<CurvePoint> learning_curve(const SweepConfig& config) {
    if (config.n_grid.empty())
        throw std::invalid_argument("learning_curve: empty n grid");
    if (config.algorithms.empty())
        throw std::invalid_argument("learning_curve: no algorithms");
    if (config.trials == 0)
        throw std::invalid_argument("learning_curve: trials must be >= 1");

    // gamma for the subsampled runs: half of the measured ERM stump
    // advantage on a large probe (the learner must actually achieve it)
    TaskSpec probe;
    probe.generator = config.task;
    probe.seed = config.master_seed;
    double advantage = measure_stump_advantage(probe, 10000);
    double gamma = std::clamp(advantage / 2.0, 0.01, 0.49);

    std::vector<CurvePoint> points;
    for (const auto& algorithm : config.algorithms)
        for (std::size_t n : config.n_grid)
            for (std::size_t trial = 0; trial < config.trials; ++trial)
                points.push_back(run_point(config, algorithm, n, trial, gamma));
    return points;
}

namespace {

struct Quartiles {
    double q1 = 0, median = 0, q3 = 0;
};

Quartiles quartiles(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t s = v.size();
    Quartiles q;
    q.median = (v[(s - 1) / 2] + v[s / 2]) / 2.0;
    q.q1 = v[(s - 1) / 4];
    q.q3 = v[(3 * (s - 1)) / 4];
    return q;
}

} // namespace

nlohmann::json compare_report(const std::vector<CurvePoint>& points,
                              const SweepConfig& config) {
    if (points.empty())
        throw std::invalid_argument("compare_report: no curve points");

    TaskSpec probe;
    probe.generator = config.task;
    probe.seed = config.master_seed;
    double advantage = measure_stump_advantage(probe, 10000);
    double gamma = std::clamp(advantage / 2.0, 0.01, 0.49);
    const std::size_t d = stump_vc_dim(1);

    std::map<std::string, std::map<std::size_t, std::vector<const CurvePoint*>>> groups;
    for (const auto& p : points) groups[p.algorithm][p.n].push_back(&p);

    nlohmann::json series = nlohmann::json::object();
    nlohmann::json wall = nlohmann::json::object();
    for (const auto& [algorithm, by_n] : groups) {
        nlohmann::json rows = nlohmann::json::array();
        nlohmann::json wall_rows = nlohmann::json::array();
        for (const auto& [n, group] : by_n) {
            std::vector<double> test, train, margins, walls;
            std::size_t failed = 0;
            for (const auto* p : group) {
                if (!p->error.empty()) { ++failed; continue; }
                test.push_back(p->test_error);
                train.push_back(p->train_error);
                margins.push_back(p->min_margin);
                walls.push_back(p->wall_ms);
            }
            nlohmann::json row = {{"n", n},
                                  {"trials", group.size()},
                                  {"failed", failed}};
            if (!test.empty()) {
                auto qt = quartiles(test);
                auto qr = quartiles(train);
                auto qm = quartiles(margins);
                row["test_error"] = {{"median", qt.median}, {"q1", qt.q1}, {"q3", qt.q3}};
                row["train_error"] = {{"median", qr.median}, {"q1", qr.q1}, {"q3", qr.q3}};
                row["min_margin"] = {{"median", qm.median}, {"q1", qm.q1}, {"q3", qm.q3}};
            }
            if (n > d) {
                auto bound = bound_theorem1(gamma, d, n, config.delta, config.bound_c);
                row["theorem_bound"] = {{"value", bound.value},
                                        {"winner", bound.winner}};
            }
            rows.push_back(row);
            if (!walls.empty())
                wall_rows.push_back({{"n", n}, {"median_ms", quartiles(walls).median}});
        }
        series[algorithm] = rows;
        wall[algorithm] = wall_rows;
    }

    nlohmann::json core = {{"schema_version", 1},
                           {"report", "compare"},
                           {"task", config.task},
                           {"gamma", hex_double(gamma)},
                           {"delta", hex_double(config.delta)},
                           {"master_seed", config.master_seed},
                           {"series", series}};
    // wall-clock timings are excluded from the determinism hash
    core["determinism_hash"] = hash_hex(core.dump());
    core["wall_ms"] = wall;
    return core;
}

std::string points_to_csv(const std::vector<CurvePoint>& points) {
    std::ostringstream out;
    out.precision(17);
    out << "algorithm,n,trial,train_error,test_error,min_margin,wall_ms,error\n";
    for (const auto& p : points) {
        out << p.algorithm << "," << p.n << "," << p.trial << "," << p.train_error
            << "," << p.test_error << "," << p.min_margin << "," << p.wall_ms << ","
            << p.error << "\n";
    }
    return out.str();
}

std::vector<CurvePoint> points_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("points_from_csv: empty input");
    std::vector<CurvePoint> points;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string cur;
        for (char c : line) {
            if (c == ',') { fields.push_back(cur); cur.clear(); }
            else if (c != '\r') cur.push_back(c);
        }
        fields.push_back(cur);
        if (fields.size() != 8)
            throw std::invalid_argument("points_from_csv: bad row: " + line);
        CurvePoint p;
        p.algorithm = fields[0];
        p.n = std::stoull(fields[1]);
        p.trial = std::stoull(fields[2]);
        p.train_error = std::stod(fields[3]);
        p.test_error = std::stod(fields[4]);
        p.min_margin = std::stod(fields[5]);
        p.wall_ms = std::stod(fields[6]);
        p.error = fields[7];
        points.push_back(std::move(p));
    }
    return points;
}

} // namespace subboost
