#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "subboost/bench.hpp"
#include "subboost/boosting.hpp"
#include "subboost/compress.hpp"
#include "subboost/serialize.hpp"
#include "subboost/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace subboost;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDataset = 3;
constexpr int kExitWeakLearning = 4;
constexpr int kExitIdentity = 5;

struct TrainOptions {
    std::string data_path;
    std::string task;          // "threshold" | "interval" (when data_path empty)
    std::size_t n = 100;
    std::size_t probe_n = 1000;
    std::string learner = "stump";
    double gamma = 0.1;
    double delta = 0.1;
    std::size_t upper_bound_n = 0;
    double a_const = 4.0;
    std::size_t k_override = 0;
    std::size_t m_override = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::string policy = "warn";
    std::string out = ".";

    json to_json() const {
        return {{"data", data_path},   {"task", task},
                {"n", n},              {"probe_n", probe_n},
                {"learner", learner},  {"gamma", hex_double(gamma)},
                {"delta", hex_double(delta)}, {"upper_bound_n", upper_bound_n},
                {"a_const", hex_double(a_const)}, {"k_override", k_override},
                {"m_override", m_override}, {"seed", seed},
                {"stream", stream},    {"policy", policy}};
    }

    static TrainOptions from_json(const json& j) {
        TrainOptions o;
        o.data_path = j.at("data").get<std::string>();
        o.task = j.at("task").get<std::string>();
        o.n = j.at("n").get<std::size_t>();
        o.probe_n = j.at("probe_n").get<std::size_t>();
        o.learner = j.at("learner").get<std::string>();
        o.gamma = parse_hex_double(j.at("gamma").get<std::string>());
        o.delta = parse_hex_double(j.at("delta").get<std::string>());
        o.upper_bound_n = j.at("upper_bound_n").get<std::size_t>();
        o.a_const = parse_hex_double(j.at("a_const").get<std::string>());
        o.k_override = j.at("k_override").get<std::size_t>();
        o.m_override = j.at("m_override").get<std::size_t>();
        o.seed = j.at("seed").get<std::uint64_t>();
        o.stream = j.at("stream").get<std::uint64_t>();
        o.policy = j.at("policy").get<std::string>();
        return o;
    }
};

std::string default_out() {
    const char* env = std::getenv("SUBBOOST_OUT");
    return env && *env ? env : ".";
}

void add_train_flags(CLI::App* cmd, TrainOptions& o) {
    cmd->add_option("--data", o.data_path, "CSV dataset path");
    cmd->add_option("--task", o.task, "synthetic task: threshold|interval");
    cmd->add_option("--n", o.n, "synthetic training-set size");
    cmd->add_option("--probe-n", o.probe_n, "synthetic probe-set size");
    cmd->add_option("--learner", o.learner, "stump|planted");
    cmd->add_option("--gamma", o.gamma, "weak-learner advantage");
    cmd->add_option("--delta", o.delta, "failure probability");
    cmd->add_option("--upper-bound-n", o.upper_bound_n, "N (0: use n)");
    cmd->add_option("--a-const", o.a_const, "subsample-size constant a");
    cmd->add_option("--k-override", o.k_override, "explicit K (0: formula)");
    cmd->add_option("--m-override", o.m_override, "explicit m (0: formula)");
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--stream", o.stream, "RNG stream id");
    cmd->add_option("--policy", o.policy, "weak-learning violation policy: warn|abort");
    cmd->add_option("--out", o.out, "output directory");
}

struct TrainInputs {
    Dataset data;
    Dataset probe;   // empty-allowed only via has_probe
    bool has_probe = false;
    WeakLearner learner;
};

TrainInputs prepare_inputs(const TrainOptions& o) {
    if (!o.data_path.empty()) {
        Dataset data = load_csv(o.data_path);
        if (o.learner != "stump")
            throw std::invalid_argument("planted learner requires --task (known target)");
        return {data, data, false, make_stump_learner(o.gamma, data.dim())};
    }
    if (o.task.empty())
        throw std::invalid_argument("one of --data or --task is required");
    TaskSpec spec;
    spec.generator = o.task;
    spec.n_train = o.n;
    spec.n_test = o.probe_n;
    spec.seed = o.seed;
    spec.stream = o.stream;
    Task task = gen_task(spec);
    WeakLearner learner = o.learner == "planted"
                              ? make_planted_learner(o.gamma, task.target)
                              : make_stump_learner(o.gamma, task.train.dim());
    return {task.train, task.test, true, learner};
}

BoostConfig boost_config(const TrainOptions& o) {
    BoostConfig cfg;
    cfg.gamma = o.gamma;
    cfg.delta = o.delta;
    cfg.upper_bound_n = o.upper_bound_n;
    cfg.a_const = o.a_const;
    cfg.k_override = o.k_override;
    cfg.m_override = o.m_override;
    cfg.seed = o.seed;
    cfg.stream = o.stream;
    cfg.policy = o.policy == "abort" ? ViolationPolicy::Abort
                                     : ViolationPolicy::WarnContinue;
    cfg.trace_level = TraceLevel::Standard;
    if (o.policy != "warn" && o.policy != "abort")
        throw std::invalid_argument("--policy must be warn or abort");
    return cfg;
}

void write_echo(const std::string& out, const std::string& command, const json& args) {
    json echo = {{"command", command}, {"args", args}};
    write_file((fs::path(out) / "config-echo.json").string(), echo.dump(2) + "\n");
}

int cmd_train(const TrainOptions& o) {
    fs::create_directories(o.out);
    write_echo(o.out, "train", o.to_json());

    TrainInputs inputs = prepare_inputs(o);
    BoostConfig cfg = boost_config(o);
    auto result = sampled_boost(inputs.data, inputs.learner, cfg);

    double min_margin = 1.0;
    std::size_t violations = 0;
    for (const auto& e : inputs.data.examples())
        min_margin = std::min(min_margin, margin(result.classifier, e));
    for (const auto& r : result.trace.rounds) violations += r.violation;

    std::string model = model_to_json(result.classifier).dump(2) + "\n";
    std::string trace = trace_to_ndjson(result.trace);
    json metrics = {{"train_error", training_error(result.classifier, inputs.data)},
                    {"min_margin", hex_double(min_margin)},
                    {"K", result.trace.rounds_k},
                    {"m", result.trace.m},
                    {"alpha", hex_double(result.trace.alpha)},
                    {"gamma", hex_double(cfg.gamma)},
                    {"violations", violations},
                    {"model_hash", hash_hex(model)},
                    {"trace_hash", hash_hex(trace)}};
    write_file((fs::path(o.out) / "model.json").string(), model);
    write_file((fs::path(o.out) / "trace.ndjson").string(), trace);
    write_file((fs::path(o.out) / "metrics.json").string(), metrics.dump(2) + "\n");
    if (inputs.has_probe)
        save_csv(inputs.data, (fs::path(o.out) / "train.csv").string());

    std::cout << "train: K=" << result.trace.rounds_k << " m=" << result.trace.m
              << " train_error=" << metrics["train_error"].get<double>()
              << " model_hash=" << metrics["model_hash"].get<std::string>() << "\n";
    return kExitOk;
}

int cmd_compress_check(const TrainOptions& o) {
    fs::create_directories(o.out);
    write_echo(o.out, "compress-check", o.to_json());

    TrainInputs inputs = prepare_inputs(o);
    BoostConfig cfg = boost_config(o);
    auto result = sampled_boost(inputs.data, inputs.learner, cfg);
    auto seq = encode(result.trace, inputs.data);
    auto predictor = reconstruct(seq, inputs.learner);

    std::size_t mismatches = 0;
    for (const auto& e : inputs.data.examples())
        if (predictor.predict(e.x) != result.classifier.predict(e.x)) ++mismatches;
    std::size_t probe_checked = 0;
    if (inputs.has_probe) {
        for (const auto& e : inputs.probe.examples()) {
            if (predictor.predict(e.x) != result.classifier.predict(e.x)) ++mismatches;
            ++probe_checked;
        }
    }
    json report = {{"schema_version", 1},
                   {"report", "compress-check"},
                   {"K", seq.rounds_k},
                   {"m", seq.m},
                   {"compression_size", compression_size(seq)},
                   {"train_points", inputs.data.size()},
                   {"probe_points", probe_checked},
                   {"mismatches", mismatches},
                   {"pass", mismatches == 0}};
    write_file((fs::path(o.out) / "compress-check.json").string(),
               report.dump(2) + "\n");
    std::cout << "compress-check: mismatches=" << mismatches
              << " size=" << compression_size(seq) << "/" << seq.elements.size()
              << "\n";
    return mismatches == 0 ? kExitOk : kExitIdentity;
}

struct AuditOptions {
    std::string trace_path;
    std::size_t seeds = 20;
    TrainOptions run; // fresh-run configuration; run.data_path doubles as
                      // the dataset for --trace mode

    json to_json() const {
        return {{"trace", trace_path}, {"seeds", seeds}, {"run", run.to_json()}};
    }
};

int cmd_audit(const AuditOptions& o) {
    fs::create_directories(o.run.out);
    write_echo(o.run.out, "audit", o.to_json());

    constexpr double kTelescopingThreshold = 1e-9;
    constexpr double kZkThreshold = 1e-12;

    if (!o.trace_path.empty()) {
        if (o.run.data_path.empty())
            throw std::invalid_argument("--trace requires --data");
        Dataset data = load_csv(o.run.data_path);
        BoostTrace trace = trace_from_ndjson(read_file(o.trace_path));
        double tele = telescoping_check(trace, data, trace.alpha);
        double zk = zk_check(trace, data);
        bool ok = tele <= kTelescopingThreshold && zk <= kZkThreshold;
        json report = {{"schema_version", 1},
                       {"report", "trace_audit"},
                       {"telescoping_residual", tele},
                       {"zk_deviation", zk},
                       {"pass", ok}};
        write_file((fs::path(o.run.out) / "audit.json").string(),
                   report.dump(2) + "\n");
        std::cout << "audit: telescoping=" << tele << " zk=" << zk
                  << (ok ? " pass" : " FAIL") << "\n";
        return ok ? kExitOk : kExitIdentity;
    }

    TrainInputs inputs = prepare_inputs(o.run);
    BoostConfig cfg = boost_config(o.run);
    auto report = margin_audit(inputs.data, inputs.learner, cfg, o.seeds);
    bool ok = report.max_telescoping_residual <= kTelescopingThreshold &&
              report.max_zk_deviation <= kZkThreshold;
    json doc = report.to_json();
    doc["pass"] = ok;
    write_file((fs::path(o.run.out) / "audit.json").string(), doc.dump(2) + "\n");
    std::cout << "audit: seeds=" << o.seeds << " fraction_meeting="
              << report.fraction_meeting_threshold
              << " telescoping=" << report.max_telescoping_residual
              << " zk=" << report.max_zk_deviation << (ok ? " pass" : " FAIL")
              << "\n";
    return ok ? kExitOk : kExitIdentity;
}

struct StabilityOptions {
    std::string suite = "k1-family";
    std::size_t trials = 100000;
    std::uint64_t seed = 0;
    std::string out = ".";

    json to_json() const {
        return {{"suite", suite}, {"trials", trials}, {"seed", seed}};
    }
};

Dataset line_dataset(std::size_t n) {
    // evenly spaced 1-D points labeled by the interval target
    Hypothesis target = Hypothesis::interval_concept(0, {-0.5, 0.0, 0.5}, -1);
    std::vector<LabeledExample> examples;
    for (std::size_t i = 0; i < n; ++i) {
        LabeledExample e;
        e.x = {-0.9 + 1.8 * static_cast<double>(i) / static_cast<double>(n)};
        e.y = target.predict(e.x);
        examples.push_back(std::move(e));
    }
    return Dataset(std::move(examples));
}

int cmd_stability(const StabilityOptions& o) {
    fs::create_directories(o.out);
    write_echo(o.out, "stability", o.to_json());

    struct Instance {
        std::string name;
        std::size_t n, sub, rounds_k;
        std::string learner;
    };
    std::vector<Instance> instances;
    if (o.suite == "k1-family") {
        for (std::size_t n : {2, 3, 4})
            instances.push_back({"k1-n" + std::to_string(n), n, n - 1, 1, "stump"});
        instances.push_back({"k1-n4-half", 4, 2, 1, "stump"});
    } else if (o.suite == "k2-family") {
        instances.push_back({"k2-planted", 3, 2, 2, "planted"});
    } else {
        throw std::invalid_argument("unknown suite: " + o.suite);
    }

    bool all_pass = true;
    bool any_inconclusive = false;
    for (const auto& inst : instances) {
        Dataset data = line_dataset(inst.n);
        std::vector<std::size_t> sub(inst.sub);
        for (std::size_t i = 0; i < inst.sub; ++i) sub[i] = i;
        WeakLearner learner =
            inst.learner == "planted"
                ? make_planted_learner(0.25,
                                       Hypothesis::interval_concept(0, {-0.5, 0.0, 0.5}, -1))
                : make_stump_learner(0.25, 1);
        BoostConfig cfg;
        cfg.gamma = 0.25;
        cfg.delta = 0.1;
        cfg.seed = o.seed;
        cfg.m_override = 1;
        cfg.k_override = inst.rounds_k;
        auto report = stability_test(data, sub, learner, cfg, o.trials);
        report.instance = inst.name;
        write_file((fs::path(o.out) / ("stability-" + inst.name + ".json")).string(),
                   report.to_json().dump(2) + "\n");
        std::cout << "stability " << inst.name << ": tv=" << report.tv_distance
                  << " p=" << report.p_value
                  << (report.exact ? " (exact)" : "")
                  << (report.inconclusive ? " INCONCLUSIVE"
                                          : (report.pass ? " pass" : " FAIL"))
                  << "\n";
        all_pass = all_pass && report.pass;
        any_inconclusive = any_inconclusive || report.inconclusive;
    }
    if (any_inconclusive)
        std::cout << "stability: warning: inconclusive instances present\n";
    return all_pass ? kExitOk : 1;
}

struct CurveOptions {
    SweepConfig sweep;
    std::string grid_text = "100,300";
    std::string algorithms_text = "sampled,adaboost";
    std::string out = ".";

    json to_json() const {
        return {{"task", sweep.task},
                {"grid", grid_text},
                {"algorithms", algorithms_text},
                {"trials", sweep.trials},
                {"master_seed", sweep.master_seed},
                {"delta", hex_double(sweep.delta)},
                {"a_const", hex_double(sweep.a_const)},
                {"k_cap", sweep.k_cap},
                {"adaboost_rounds", sweep.adaboost_rounds},
                {"bound_c", hex_double(sweep.bound_c)}};
    }
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') { if (!cur.empty()) out.push_back(cur); cur.clear(); }
        else cur.push_back(c);
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

void resolve_sweep(CurveOptions& o) {
    o.sweep.n_grid.clear();
    for (const auto& tok : split_list(o.grid_text))
        o.sweep.n_grid.push_back(std::stoull(tok));
    o.sweep.algorithms = split_list(o.algorithms_text);
}

int cmd_curve(CurveOptions o) {
    fs::create_directories(o.out);
    write_echo(o.out, "curve", o.to_json());
    resolve_sweep(o);
    auto points = learning_curve(o.sweep);
    auto report = compare_report(points, o.sweep);
    write_file((fs::path(o.out) / "points.csv").string(), points_to_csv(points));
    write_file((fs::path(o.out) / "report.json").string(), report.dump(2) + "\n");
    std::cout << "curve: points=" << points.size()
              << " determinism_hash=" << report["determinism_hash"].get<std::string>()
              << "\n";
    return kExitOk;
}

struct CompareOptions {
    std::string points_path;
    CurveOptions curve; // for task/delta/bound context

    json to_json() const {
        json j = curve.to_json();
        j["points"] = points_path;
        return j;
    }
};

int cmd_compare(CompareOptions o) {
    fs::create_directories(o.curve.out);
    write_echo(o.curve.out, "compare", o.to_json());
    resolve_sweep(o.curve);
    auto points = points_from_csv(read_file(o.points_path));
    auto report = compare_report(points, o.curve.sweep);
    write_file((fs::path(o.curve.out) / "report.json").string(),
               report.dump(2) + "\n");
    std::cout << "compare: determinism_hash="
              << report["determinism_hash"].get<std::string>() << "\n";
    return kExitOk;
}

int replay(const std::string& echo_path, const std::string& out_override) {
    auto echo = json::parse(read_file(echo_path));
    const std::string command = echo.at("command").get<std::string>();
    const json& args = echo.at("args");
    std::string out = out_override.empty() ? default_out() : out_override;
    if (command == "train" || command == "compress-check") {
        TrainOptions o = TrainOptions::from_json(args);
        o.out = out;
        return command == "train" ? cmd_train(o) : cmd_compress_check(o);
    }
    if (command == "stability") {
        StabilityOptions o;
        o.suite = args.at("suite").get<std::string>();
        o.trials = args.at("trials").get<std::size_t>();
        o.seed = args.at("seed").get<std::uint64_t>();
        o.out = out;
        return cmd_stability(o);
    }
    if (command == "curve") {
        CurveOptions o;
        o.sweep.task = args.at("task").get<std::string>();
        o.grid_text = args.at("grid").get<std::string>();
        o.algorithms_text = args.at("algorithms").get<std::string>();
        o.sweep.trials = args.at("trials").get<std::size_t>();
        o.sweep.master_seed = args.at("master_seed").get<std::uint64_t>();
        o.sweep.delta = parse_hex_double(args.at("delta").get<std::string>());
        o.sweep.a_const = parse_hex_double(args.at("a_const").get<std::string>());
        o.sweep.k_cap = args.at("k_cap").get<std::size_t>();
        o.sweep.adaboost_rounds = args.at("adaboost_rounds").get<std::size_t>();
        o.sweep.bound_c = parse_hex_double(args.at("bound_c").get<std::string>());
        o.out = out;
        return cmd_curve(o);
    }
    throw std::invalid_argument("replay: unsupported command " + command);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"subsampled boosting toolkit"};
    app.require_subcommand(0, 1);

    std::string replay_path, replay_out;
    app.add_option("--replay", replay_path, "re-run a saved config-echo.json");
    app.add_option("--replay-out", replay_out, "output directory for --replay");

    TrainOptions train_opts;
    train_opts.out = default_out();
    auto* train_cmd = app.add_subcommand("train", "run subsampled boosting");
    add_train_flags(train_cmd, train_opts);

    TrainOptions cc_opts;
    cc_opts.out = default_out();
    auto* cc_cmd = app.add_subcommand(
        "compress-check", "encode, reconstruct, compare predictions pointwise");
    add_train_flags(cc_cmd, cc_opts);

    AuditOptions audit_opts;
    audit_opts.run.out = default_out();
    auto* audit_cmd = app.add_subcommand("audit", "margin audit and proof identities");
    audit_cmd->add_option("--trace", audit_opts.trace_path, "stored trace.ndjson");
    audit_cmd->add_option("--seeds", audit_opts.seeds, "fresh-run seed count");
    add_train_flags(audit_cmd, audit_opts.run);

    StabilityOptions stab_opts;
    stab_opts.out = default_out();
    auto* stab_cmd = app.add_subcommand("stability", "stability test suites");
    stab_cmd->add_option("--suite", stab_opts.suite, "k1-family|k2-family");
    stab_cmd->add_option("--trials", stab_opts.trials, "trials per arm");
    stab_cmd->add_option("--seed", stab_opts.seed, "RNG seed");
    stab_cmd->add_option("--out", stab_opts.out, "output directory");

    CurveOptions curve_opts;
    curve_opts.out = default_out();
    auto* curve_cmd = app.add_subcommand("curve", "learning-curve sweep");
    curve_cmd->add_option("--task", curve_opts.sweep.task, "threshold|interval");
    curve_cmd->add_option("--grid", curve_opts.grid_text, "comma-separated n values");
    curve_cmd->add_option("--algorithms", curve_opts.algorithms_text,
                          "comma-separated: sampled,adaboost");
    curve_cmd->add_option("--trials", curve_opts.sweep.trials, "trials per point");
    curve_cmd->add_option("--master-seed", curve_opts.sweep.master_seed, "master seed");
    curve_cmd->add_option("--delta", curve_opts.sweep.delta, "failure probability");
    curve_cmd->add_option("--a-const", curve_opts.sweep.a_const, "constant a");
    curve_cmd->add_option("--k-cap", curve_opts.sweep.k_cap, "ensemble-size cap");
    curve_cmd->add_option("--adaboost-rounds", curve_opts.sweep.adaboost_rounds,
                          "baseline rounds");
    curve_cmd->add_option("--bound-c", curve_opts.sweep.bound_c, "bound constant C");
    curve_cmd->add_option("--out", curve_opts.out, "output directory");

    CompareOptions compare_opts;
    compare_opts.curve.out = default_out();
    auto* compare_cmd = app.add_subcommand("compare", "aggregate stored curve points");
    compare_cmd->add_option("--points", compare_opts.points_path, "points.csv path")
        ->required();
    compare_cmd->add_option("--task", compare_opts.curve.sweep.task, "task name");
    compare_cmd->add_option("--delta", compare_opts.curve.sweep.delta, "delta");
    compare_cmd->add_option("--bound-c", compare_opts.curve.sweep.bound_c, "C");
    compare_cmd->add_option("--out", compare_opts.curve.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (!replay_path.empty()) return replay(replay_path, replay_out);
        if (train_cmd->parsed()) return cmd_train(train_opts);
        if (cc_cmd->parsed()) return cmd_compress_check(cc_opts);
        if (audit_cmd->parsed()) return cmd_audit(audit_opts);
        if (stab_cmd->parsed()) return cmd_stability(stab_opts);
        if (curve_cmd->parsed()) return cmd_curve(curve_opts);
        if (compare_cmd->parsed()) return cmd_compare(compare_opts);
        std::cerr << app.help();
        return kExitConfig;
    } catch (const weak_learning_violation& e) {
        std::cerr << "error: " << e.what() << " (achieved error " << e.achieved_error
                  << ")\n";
        return kExitWeakLearning;
    } catch (const std::invalid_argument& e) {
        std::string what = e.what();
        bool dataset_issue = what.find("cannot open") == std::string::npos &&
                             (what.rfind("Dataset:", 0) == 0 ||
                              what.find("CSV") != std::string::npos ||
                              what.find("label") != std::string::npos ||
                              what.find("csv") != std::string::npos);
        std::cerr << "error: " << what << "\n";
        return dataset_issue ? kExitDataset : kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
