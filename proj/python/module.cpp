// Python bindings for the main operations: dataset handling, boosting,
// compression round trips, audits and the sample-size formulas.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "subboost/bench.hpp"
#include "subboost/compress.hpp"
#include "subboost/serialize.hpp"
#include "subboost/verify.hpp"

namespace py = pybind11;
using namespace subboost;

namespace {

Dataset make_dataset(const std::vector<std::vector<double>>& xs,
                     const std::vector<int>& ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("xs and ys must have equal length");
    std::vector<LabeledExample> ex;
    ex.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) ex.push_back({xs[i], ys[i]});
    return Dataset(std::move(ex));
}

WeakLearner resolve_learner(const std::string& name, double gamma,
                            const Dataset& data) {
    if (name == "stump") return make_stump_learner(gamma, data.dim());
    throw std::invalid_argument("unknown learner: " + name);
}

struct Model {
    BoostResult result;

    int predict(const std::vector<double>& x) const {
        return result.classifier.predict(x);
    }
    double score(const std::vector<double>& x) const {
        return result.classifier.score(x);
    }
    double train_error(const Dataset& data) const {
        return training_error(result.classifier, data);
    }
    double min_margin(const Dataset& data) const {
        double m = 1.0;
        for (const auto& e : data.examples())
            m = std::min(m, margin(result.classifier, e));
        return m;
    }
    std::string model_json() const {
        return model_to_json(result.classifier).dump();
    }
    std::string trace_ndjson() const { return trace_to_ndjson(result.trace); }
};

} // namespace

PYBIND11_MODULE(_subboost, m) {
    m.doc() = "subsampled boosting: training, compression, verification";

    py::register_exception<weak_learning_violation>(m, "WeakLearningViolation");

    py::class_<Dataset>(m, "Dataset")
        .def(py::init(&make_dataset), py::arg("xs"), py::arg("ys"))
        .def("__len__", &Dataset::size)
        .def_property_readonly("dim", &Dataset::dim)
        .def("example",
             [](const Dataset& d, std::size_t i) {
                 if (i >= d.size()) throw py::index_error();
                 return py::make_tuple(d[i].x, d[i].y);
             })
        .def_static("load_csv", &load_csv, py::arg("path"))
        .def("save_csv",
             [](const Dataset& d, const std::string& path) { save_csv(d, path); },
             py::arg("path"));

    py::class_<Model>(m, "Model")
        .def("predict", &Model::predict, py::arg("x"))
        .def("score", &Model::score, py::arg("x"))
        .def("train_error", &Model::train_error, py::arg("data"))
        .def("min_margin", &Model::min_margin, py::arg("data"))
        .def("model_json", &Model::model_json)
        .def("trace_ndjson", &Model::trace_ndjson)
        .def_property_readonly(
            "k", [](const Model& m_) { return m_.result.trace.rounds_k; })
        .def_property_readonly(
            "m", [](const Model& m_) { return m_.result.trace.m; })
        .def_property_readonly(
            "alpha", [](const Model& m_) { return m_.result.trace.alpha; })
        .def_property_readonly("violations", [](const Model& m_) {
            std::size_t v = 0;
            for (const auto& r : m_.result.trace.rounds) v += r.violation;
            return v;
        });

    m.def(
        "train",
        [](const Dataset& data, double gamma, double delta,
           const std::string& learner, std::size_t k_override,
           std::size_t m_override, std::uint64_t seed, std::uint64_t stream,
           double a_const, std::size_t upper_bound_n, bool abort_on_violation) {
            BoostConfig cfg;
            cfg.gamma = gamma;
            cfg.delta = delta;
            cfg.k_override = k_override;
            cfg.m_override = m_override;
            cfg.seed = seed;
            cfg.stream = stream;
            cfg.a_const = a_const;
            cfg.upper_bound_n = upper_bound_n;
            cfg.policy = abort_on_violation ? ViolationPolicy::Abort
                                            : ViolationPolicy::WarnContinue;
            auto wl = resolve_learner(learner, gamma, data);
            return Model{sampled_boost(data, wl, cfg)};
        },
        py::arg("data"), py::arg("gamma") = 0.1, py::arg("delta") = 0.1,
        py::arg("learner") = "stump", py::arg("k_override") = 0,
        py::arg("m_override") = 0, py::arg("seed") = 0, py::arg("stream") = 0,
        py::arg("a_const") = 4.0, py::arg("upper_bound_n") = 0,
        py::arg("abort_on_violation") = false);

    m.def(
        "compress_check",
        [](const Model& model, const Dataset& data,
           const std::vector<std::vector<double>>& probes) {
            auto learner = make_stump_learner(model.result.trace.config.gamma,
                                              data.dim());
            auto seq = encode(model.result.trace, data);
            auto predictor = reconstruct(seq, learner);
            std::size_t mismatches = 0;
            for (const auto& e : data.examples())
                mismatches += predictor.predict(e.x) != model.predict(e.x);
            for (const auto& x : probes)
                mismatches += predictor.predict(x) != model.predict(x);
            py::dict out;
            out["mismatches"] = mismatches;
            out["compression_size"] = compression_size(seq);
            out["sequence_length"] = seq.elements.size();
            out["pass"] = mismatches == 0;
            return out;
        },
        py::arg("model"), py::arg("data"),
        py::arg("probes") = std::vector<std::vector<double>>{});

    m.def(
        "audit",
        [](const Model& model, const Dataset& data) {
            py::dict out;
            out["telescoping_residual"] =
                telescoping_check(model.result.trace, data,
                                  model.result.trace.alpha);
            out["zk_deviation"] = zk_check(model.result.trace, data);
            return out;
        },
        py::arg("model"), py::arg("data"));

    m.def("alpha_of", &alpha_of, py::arg("gamma"));
    m.def("subsample_size", &subsample_size, py::arg("gamma"), py::arg("d"),
          py::arg("a_const") = 4.0);
    m.def("ensemble_size", &ensemble_size, py::arg("gamma"),
          py::arg("upper_bound_n"), py::arg("delta"));

    m.def(
        "bound_genstable",
        [](std::size_t s, std::size_t n, double beta, double C) {
            auto b = bound_genstable(s, n, beta, C);
            py::dict out;
            out["headline"] = b.headline;
            out["proof_exact"] = b.proof_exact;
            return out;
        },
        py::arg("s"), py::arg("n"), py::arg("beta"), py::arg("C") = 1.0);

    m.def(
        "bound_theorem1",
        [](double gamma, std::size_t d, std::size_t n, double delta, double C) {
            auto b = bound_theorem1(gamma, d, n, delta, C);
            py::dict out;
            out["value"] = b.value;
            out["first_branch"] = b.first_branch;
            out["second_branch"] = b.second_branch;
            out["winner"] = b.winner;
            return out;
        },
        py::arg("gamma"), py::arg("d"), py::arg("n"), py::arg("delta") = 0.1,
        py::arg("C") = 1.0);

    m.def(
        "gen_task",
        [](const std::string& generator, std::size_t n_train, std::size_t n_test,
           std::uint64_t seed) {
            TaskSpec spec;
            spec.generator = generator;
            spec.n_train = n_train;
            spec.n_test = n_test;
            spec.seed = seed;
            auto task = gen_task(spec);
            return py::make_tuple(task.train, task.test);
        },
        py::arg("generator") = "interval", py::arg("n_train") = 100,
        py::arg("n_test") = 1000, py::arg("seed") = 0);
}
