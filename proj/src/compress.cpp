#include "subboost/compress.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "subboost/serialize.hpp"

namespace subboost {

CompressionSequence encode(const BoostTrace& trace, const Dataset& data) {
    CompressionSequence seq;
    seq.rounds_k = trace.rounds.size();
    seq.m = trace.m;
    seq.elements.reserve(seq.rounds_k * seq.m);
    for (const auto& round : trace.rounds) {
        if (round.indices.size() != trace.m)
            throw std::invalid_argument("encode: trace round without full index record");
        for (std::size_t i : round.indices) {
            if (i >= data.size())
                throw std::invalid_argument("encode: subsample index out of range");
            seq.elements.push_back(data[i]);
        }
    }
    return seq;
}

VotingClassifier reconstruct(const CompressionSequence& seq, const WeakLearner& learner) {
    if (!learner.spec.deterministic)
        throw std::logic_error("reconstruct: learner must be deterministic");
    if (seq.m == 0 || seq.elements.size() % seq.m != 0)
        throw std::invalid_argument("reconstruct: length not divisible by group width");
    const std::size_t k = seq.elements.size() / seq.m;
    if (k == 0) throw std::invalid_argument("reconstruct: empty sequence");

    RngStream unused(0, 0); // deterministic learners ignore it
    std::vector<Hypothesis> hypotheses;
    hypotheses.reserve(k);
    for (std::size_t g = 0; g < k; ++g) {
        std::vector<LabeledExample> group(seq.elements.begin() + g * seq.m,
                                          seq.elements.begin() + (g + 1) * seq.m);
        hypotheses.push_back(learner.train(group, unused));
    }
    return VotingClassifier(std::move(hypotheses), std::vector<double>(k, 1.0));
}

std::size_t compression_size(const CompressionSequence& seq) {
    std::vector<std::pair<std::vector<double>, int>> keys;
    keys.reserve(seq.elements.size());
    for (const auto& e : seq.elements) keys.emplace_back(e.x, e.y);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys.size();
}

bool contained_in(const CompressionSequence& seq, const Dataset& data) {
    for (const auto& e : seq.elements) {
        std::size_t i = data.find(e.x);
        if (i == Dataset::npos || data[i].y != e.y) return false;
    }
    return true;
}

GenStableBound bound_genstable(std::size_t s, std::size_t n, double beta, double C) {
    if (s == 0) throw std::invalid_argument("bound_genstable: s must be >= 1");
    if (n == 0) throw std::invalid_argument("bound_genstable: n must be >= 1");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("bound_genstable: beta must be in (0, 1)");
    if (!(C > 0.0)) throw std::invalid_argument("bound_genstable: C must be positive");
    const double sd = static_cast<double>(s), nd = static_cast<double>(n);
    GenStableBound b;
    b.headline = C * (sd + std::log(1.0 / beta)) / nd;
    b.proof_exact = 2.0 * (sd * std::log(4.0) + std::log(2.0 / beta)) / nd;
    return b;
}

VotingBound bound_theorem1(double gamma, std::size_t d, std::size_t n, double delta,
                           double C) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("bound_theorem1: gamma must be in (0, 1)");
    if (d == 0 || n == 0)
        throw std::invalid_argument("bound_theorem1: d and n must be >= 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("bound_theorem1: delta must be in (0, 1)");
    if (n <= d)
        throw std::invalid_argument("bound_theorem1: requires n > d");
    const double dd = static_cast<double>(d), nd = static_cast<double>(n);
    VotingBound b;
    b.first_branch = (dd + std::log(1.0 / gamma)) * std::log(nd / delta) /
                     (std::pow(gamma, 4) * nd);
    b.second_branch = dd * std::log(nd / dd) * std::log(nd) / (gamma * gamma * nd) +
                      std::log(1.0 / delta) / nd;
    b.winner = b.first_branch <= b.second_branch ? 1 : 2;
    b.value = C * std::min(b.first_branch, b.second_branch);
    return b;
}

std::string compression_to_json(const CompressionSequence& seq) {
    nlohmann::json examples = nlohmann::json::array();
    for (const auto& e : seq.elements) {
        nlohmann::json x = nlohmann::json::array();
        for (double v : e.x) x.push_back(hex_double(v));
        examples.push_back({{"x", x}, {"y", e.y}});
    }
    nlohmann::json j = {{"K", seq.rounds_k}, {"m", seq.m}, {"examples", examples}};
    return j.dump();
}

CompressionSequence compression_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    CompressionSequence seq;
    seq.rounds_k = j.at("K").get<std::size_t>();
    seq.m = j.at("m").get<std::size_t>();
    for (const auto& ej : j.at("examples")) {
        LabeledExample e;
        for (const auto& v : ej.at("x"))
            e.x.push_back(parse_hex_double(v.get<std::string>()));
        e.y = ej.at("y").get<int>();
        seq.elements.push_back(std::move(e));
    }
    if (seq.elements.size() != seq.rounds_k * seq.m)
        throw std::invalid_argument("compression_from_json: shape mismatch");
    return seq;
}

} // namespace subboost
