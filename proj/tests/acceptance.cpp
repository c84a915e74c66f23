// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failed criteria. All tolerances are pinned here, not configurable.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "subboost/bench.hpp"
#include "subboost/compress.hpp"
#include "subboost/serialize.hpp"
#include "subboost/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace subboost;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::cout << "criterion " << criterion << ": " << (pass ? "PASS" : "FAIL")
              << " - " << detail << std::endl;
    if (!pass) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

Dataset planted_data(std::size_t n, const Hypothesis& target) {
    std::vector<LabeledExample> ex;
    for (std::size_t i = 0; i < n; ++i) {
        double x = -0.95 + 1.9 * double(i) / double(n);
        ex.push_back({{x}, target.predict({x})});
    }
    return Dataset(ex);
}

// --- criterion 1: reconstruction identity -------------------------------

std::vector<BoostResult> g_c1_results; // kept for criterion 3
Dataset* g_c1_data = nullptr;

void criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    TaskSpec spec;
    spec.generator = "interval";
    spec.n_train = 80;
    spec.n_test = 1000;
    static Task task = gen_task(spec);
    g_c1_data = &task.train;
    auto learner = make_stump_learner(0.12, 1);

    std::size_t mismatches = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        BoostConfig cfg;
        cfg.gamma = 0.12;
        cfg.k_override = 150;
        cfg.m_override = 12;
        cfg.stream = s;
        auto result = sampled_boost(task.train, learner, cfg);
        auto predictor = reconstruct(encode(result.trace, task.train), learner);
        for (const auto& e : task.train.examples())
            mismatches += predictor.predict(e.x) != result.classifier.predict(e.x);
        for (const auto& e : task.test.examples())
            mismatches += predictor.predict(e.x) != result.classifier.predict(e.x);
        g_c1_results.push_back(std::move(result));
    }
    report(1, mismatches == 0,
           "reconstruction identity: " + std::to_string(mismatches) +
               " mismatches over 20 runs x (80 train + 1000 probe) points [" +
               std::to_string(elapsed_s(t0)) + " s]");
}

// --- criteria 2 + 3: margin guarantee and proof identities ---------------

double g_c23_max_tele = 0.0;
double g_c23_max_zk = 0.0;

void criteria2and3() {
    auto t0 = std::chrono::steady_clock::now();
    auto target = Hypothesis::interval_concept(0, {-0.5, 0.0, 0.5}, -1);
    auto data = planted_data(50, target);

    bool pass2 = true;
    std::string detail2;
    for (double gamma : {0.1, 0.25}) {
        BoostConfig cfg;
        cfg.gamma = gamma;
        cfg.delta = 0.1;            // formula K, uncapped, N = n
        auto learner = make_planted_learner(gamma, target);
        auto audit = margin_audit(data, learner, cfg, 100);
        g_c23_max_tele = std::max(g_c23_max_tele, audit.max_telescoping_residual);
        g_c23_max_zk = std::max(g_c23_max_zk, audit.max_zk_deviation);
        bool ok = audit.fraction_meeting_threshold >= 1.0 - 0.1 - 0.09;
        pass2 = pass2 && ok;
        detail2 += "gamma=" + std::to_string(gamma) + " fraction=" +
                   std::to_string(audit.fraction_meeting_threshold) + " ";
    }
    report(2, pass2,
           "margin >= gamma/128 over 100 seeds (threshold 0.81): " + detail2 +
               "[" + std::to_string(elapsed_s(t0)) + " s]");

    // identities on every criterion-1 trace plus the audited runs above
    std::size_t failures = 0;
    double max_tele = g_c23_max_tele, max_zk = g_c23_max_zk;
    if (g_c23_max_tele > 1e-9 || g_c23_max_zk > 1e-12) ++failures;
    for (const auto& r : g_c1_results) {
        double tele = telescoping_check(r.trace, *g_c1_data, r.trace.alpha);
        double zk = zk_check(r.trace, *g_c1_data);
        max_tele = std::max(max_tele, tele);
        max_zk = std::max(max_zk, zk);
        if (tele > 1e-9 || zk > 1e-12) ++failures;
    }
    g_c1_results.clear();
    report(3, failures == 0,
           "proof identities on all criteria-1/2 traces: max telescoping " +
               std::to_string(max_tele) + " (<= 1e-9), max Z_k deviation " +
               std::to_string(max_zk) + " (<= 1e-12)");
}

// --- criterion 4: stability ---------------------------------------------

void criterion4() {
    auto t0 = std::chrono::steady_clock::now();
    auto target = Hypothesis::interval_concept(0, {-0.5, 0.0, 0.5}, -1);
    auto stump = make_stump_learner(0.25, 1);

    bool pass = true;
    std::string detail;
    for (std::size_t n : {2, 3, 4}) {
        auto data = planted_data(n, target);
        std::vector<std::size_t> sub(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) sub[i] = i;
        BoostConfig cfg;
        cfg.gamma = 0.25;
        cfg.m_override = 1;
        cfg.k_override = 1;
        auto r = stability_test(data, sub, stump, cfg, 1000);
        pass = pass && r.exact && r.tv_distance == 0.0 && r.pass;
        detail += "k1-n" + std::to_string(n) + " tv=" +
                  std::to_string(r.tv_distance) + " ";
    }

    auto data3 = planted_data(3, target);
    auto planted = make_planted_learner(0.25, target);
    BoostConfig cfg;
    cfg.gamma = 0.25;
    cfg.m_override = 1;
    cfg.k_override = 2;
    auto r = stability_test(data3, {0, 1}, planted, cfg, 100000);
    pass = pass && !r.inconclusive && r.p_value > 0.001 && r.pass;
    detail += "k2-planted p=" + std::to_string(r.p_value);
    report(4, pass, "stability (exact K=1 family, chi-square K=2 family): " +
                        detail + " [" + std::to_string(elapsed_s(t0)) + " s]");
}

// --- criterion 5: failure probability -----------------------------------

void criterion5() {
    auto t0 = std::chrono::steady_clock::now();
    auto target = Hypothesis::interval_concept(0, {-0.5, 0.0, 0.5}, -1);
    auto data = planted_data(50, target);
    BoostConfig cfg;
    cfg.gamma = 0.25; // criterion-2 configuration, gamma = 0.25 arm
    cfg.delta = 0.1;
    auto learner = make_planted_learner(0.25, target);
    double rate = failure_rate_estimate(data, learner, cfg, 1000);
    report(5, rate <= 0.1 + 0.03,
           "reconstruction failure rate over 1000 runs: " + std::to_string(rate) +
               " (<= 0.13) [" + std::to_string(elapsed_s(t0)) + " s]");
}

// --- criterion 6: brute-force oracles -----------------------------------

double brute_force_best_stump_error(const std::vector<LabeledExample>& sample) {
    const double inf = std::numeric_limits<double>::infinity();
    const std::size_t dim = sample[0].x.size();
    double best = 2.0;
    for (std::size_t f = 0; f < dim; ++f) {
        std::vector<double> values;
        for (const auto& e : sample) values.push_back(e.x[f]);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        std::vector<double> thresholds{-inf, inf};
        for (std::size_t i = 1; i < values.size(); ++i)
            thresholds.push_back((values[i - 1] + values[i]) / 2.0);
        for (double t : thresholds)
            for (int o : {1, -1}) {
                std::size_t wrong = 0;
                for (const auto& e : sample)
                    if (o * (e.x[f] > t ? 1 : -1) != e.y) ++wrong;
                best = std::min(best, double(wrong) / double(sample.size()));
            }
    }
    return best;
}

bool brute_force_eps_approx(const std::vector<std::size_t>& sample,
                            const Dataset& data,
                            const std::vector<Hypothesis>& hclass,
                            const WeightDistribution& dist, double eps) {
    for (const auto& h : hclass) {
        double true_err = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i)
            if (h.predict(data[i].x) != data[i].y) true_err += dist[i];
        std::size_t miss = 0;
        for (std::size_t i : sample)
            if (h.predict(data[i].x) != data[i].y) ++miss;
        if (std::abs(true_err - double(miss) / double(sample.size())) > eps)
            return false;
    }
    return true;
}

void criterion6() {
    RngStream rng(123, 0);
    std::size_t stump_disagree = 0, eps_disagree = 0;
    for (int t = 0; t < 200; ++t) {
        std::size_t n = 2 + std::size_t(rng.next_double() * 11);
        std::size_t dim = 1 + std::size_t(rng.next_double() * 2);
        std::vector<LabeledExample> ex;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> x(dim);
            x[0] = double(i) + rng.next_double() * 0.5;
            for (std::size_t f = 1; f < dim; ++f)
                x[f] = rng.next_double() * 2.0 - 1.0;
            ex.push_back({x, rng.next_double() < 0.5 ? -1 : 1});
        }

        double erm = sample_error(train_stump(ex), ex);
        if (erm != brute_force_best_stump_error(ex)) ++stump_disagree;

        Dataset data(ex);
        auto grid = stump_grid(data);
        std::vector<double> raw(n);
        for (auto& v : raw) v = 0.05 + rng.next_double();
        auto dist = normalize(raw).first;
        std::vector<std::size_t> sample(1 + std::size_t(rng.next_double() * n));
        for (auto& i : sample) i = std::size_t(rng.next_double() * n);
        double eps = rng.next_double() * 0.5;
        if (is_eps_approximation(sample, data, grid, dist, eps) !=
            brute_force_eps_approx(sample, data, grid, dist, eps))
            ++eps_disagree;
    }
    report(6, stump_disagree == 0 && eps_disagree == 0,
           "brute-force agreement over 200 instances: train_stump " +
               std::to_string(stump_disagree) + " disagreements, "
               "is_eps_approximation " + std::to_string(eps_disagree));
}

// --- criterion 7: learning-curve sanity ---------------------------------

void criterion7() {
    auto t0 = std::chrono::steady_clock::now();
    SweepConfig cfg;
    cfg.task = "interval";
    cfg.algorithms = {"sampled"};
    cfg.n_grid = {100, 300, 1000, 3000};
    cfg.trials = 20;
    auto points = learning_curve(cfg);

    std::size_t zero_train = 0, total = 0, failed = 0;
    std::vector<double> medians;
    for (std::size_t n : cfg.n_grid) {
        std::vector<double> test;
        for (const auto& p : points) {
            if (p.n != n) continue;
            if (!p.error.empty()) { ++failed; continue; }
            test.push_back(p.test_error);
            ++total;
            if (p.train_error == 0.0) ++zero_train;
        }
        std::sort(test.begin(), test.end());
        medians.push_back((test[(test.size() - 1) / 2] + test[test.size() / 2]) /
                          2.0);
    }
    std::size_t inversions = 0;
    std::string curve;
    for (std::size_t i = 0; i < medians.size(); ++i) {
        if (i > 0 && medians[i] > medians[i - 1]) ++inversions;
        curve += std::to_string(medians[i]) + " ";
    }
    bool pass = failed == 0 && inversions <= 1 &&
                double(zero_train) / double(total) >= 0.9;
    report(7, pass,
           "interval-task medians over n grid: " + curve + "(" +
               std::to_string(inversions) + " inversions, zero-train fraction " +
               std::to_string(double(zero_train) / double(total)) + ") [" +
               std::to_string(elapsed_s(t0)) + " s]");
}

// --- criterion 8: replay determinism ------------------------------------

std::string file_hash(const fs::path& p) { return hash_hex(read_file(p.string())); }

void criterion8() {
    const std::string cli = SUBBOOST_CLI_PATH;
    fs::path base = fs::temp_directory_path() / "subboost_acceptance";
    fs::remove_all(base);
    fs::create_directories(base);
    auto run = [&](const std::string& args) {
        return std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
    };

    bool pass = true;
    // train, then replay from the echoed config
    fs::path t1 = base / "t1", t2 = base / "t2";
    pass = pass && run("train --task interval --n 60 --gamma 0.2 --k-override 80 "
                       "--seed 5 --out " + t1.string()) == 0;
    pass = pass && run("--replay " + (t1 / "config-echo.json").string() +
                       " --replay-out " + t2.string()) == 0;
    pass = pass && file_hash(t1 / "model.json") == file_hash(t2 / "model.json");
    pass = pass && file_hash(t1 / "metrics.json") == file_hash(t2 / "metrics.json");

    // curve, then replay; everything except wall-clock timings must agree
    fs::path c1 = base / "c1", c2 = base / "c2";
    pass = pass && run("curve --task interval --grid 50,100 --trials 2 "
                       "--k-cap 100 --out " + c1.string()) == 0;
    pass = pass && run("--replay " + (c1 / "config-echo.json").string() +
                       " --replay-out " + c2.string()) == 0;
    auto hash_of = [](const fs::path& p) {
        return json::parse(read_file(p.string()))["determinism_hash"]
            .get<std::string>();
    };
    pass = pass && hash_of(c1 / "report.json") == hash_of(c2 / "report.json");
    auto sans_wall = [](const fs::path& p) {
        auto points = points_from_csv(read_file(p.string()));
        for (auto& pt : points) pt.wall_ms = 0.0;
        return points_to_csv(points);
    };
    pass = pass && sans_wall(c1 / "points.csv") == sans_wall(c2 / "points.csv");

    report(8, pass, "config-echo replay reproduces byte-identical artifacts");
}

} // namespace

int main() {
    criterion1();
    criteria2and3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    std::cout << (g_failures == 0 ? "ACCEPTANCE: all criteria passed"
                                  : "ACCEPTANCE: " + std::to_string(g_failures) +
                                        " criteria failed")
              << std::endl;
    return g_failures;
}
