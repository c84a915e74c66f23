#include "subboost/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace subboost {

std::string hex_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return buf;
}

double parse_hex_double(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw std::invalid_argument("parse_hex_double: bad value '" + s + "'");
    return v;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string hash_hex(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

nlohmann::json dataset_to_json(const Dataset& data) {
    nlohmann::json examples = nlohmann::json::array();
    for (const auto& e : data.examples()) {
        nlohmann::json x = nlohmann::json::array();
        for (double v : e.x) x.push_back(hex_double(v));
        examples.push_back({{"x", x}, {"y", e.y}});
    }
    return {{"dim", data.dim()}, {"examples", examples}};
}

Dataset dataset_from_json(const nlohmann::json& j) {
    std::vector<LabeledExample> examples;
    for (const auto& ej : j.at("examples")) {
        LabeledExample e;
        for (const auto& v : ej.at("x"))
            e.x.push_back(parse_hex_double(v.get<std::string>()));
        e.y = ej.at("y").get<int>();
        examples.push_back(std::move(e));
    }
    return Dataset(std::move(examples));
}

nlohmann::json model_to_json(const VotingClassifier& vc) {
    nlohmann::json hyps = nlohmann::json::array();
    nlohmann::json weights = nlohmann::json::array();
    for (const auto& h : vc.hypotheses()) hyps.push_back(h.describe());
    for (double w : vc.weights()) weights.push_back(hex_double(w));
    return {{"type", "voting"}, {"weights", weights}, {"hypotheses", hyps}};
}

VotingClassifier model_from_json(const nlohmann::json& j) {
    std::vector<Hypothesis> hyps;
    std::vector<double> weights;
    for (const auto& hj : j.at("hypotheses")) hyps.push_back(Hypothesis::from_json(hj));
    for (const auto& w : j.at("weights"))
        weights.push_back(parse_hex_double(w.get<std::string>()));
    return VotingClassifier(std::move(hyps), std::move(weights));
}

std::string trace_to_ndjson(const BoostTrace& trace) {
    std::ostringstream out;
    nlohmann::json header = {{"n", trace.n},
                             {"m", trace.m},
                             {"K", trace.rounds_k},
                             {"alpha", hex_double(trace.alpha)},
                             {"gamma", hex_double(trace.config.gamma)},
                             {"delta", hex_double(trace.config.delta)},
                             {"upper_bound_n", trace.config.upper_bound_n},
                             {"seed", trace.config.seed},
                             {"stream", trace.config.stream}};
    out << header.dump() << "\n";
    for (std::size_t k = 0; k < trace.rounds.size(); ++k) {
        const auto& r = trace.rounds[k];
        nlohmann::json line = {{"round", k + 1},
                               {"indices", r.indices},
                               {"hypothesis", r.hypothesis.describe()},
                               {"z", hex_double(r.z)},
                               {"eps", hex_double(r.eps)},
                               {"violation", r.violation}};
        out << line.dump() << "\n";
    }
    return out.str();
}

BoostTrace trace_from_ndjson(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("trace_from_ndjson: empty input");
    auto header = nlohmann::json::parse(line);
    BoostTrace trace;
    trace.n = header.at("n").get<std::size_t>();
    trace.m = header.at("m").get<std::size_t>();
    trace.rounds_k = header.at("K").get<std::size_t>();
    trace.alpha = parse_hex_double(header.at("alpha").get<std::string>());
    trace.config.gamma = parse_hex_double(header.at("gamma").get<std::string>());
    trace.config.delta = parse_hex_double(header.at("delta").get<std::string>());
    trace.config.upper_bound_n = header.at("upper_bound_n").get<std::size_t>();
    trace.config.seed = header.at("seed").get<std::uint64_t>();
    trace.config.stream = header.at("stream").get<std::uint64_t>();
    trace.config.m_override = trace.m;
    trace.config.k_override = trace.rounds_k;
    trace.config.trace_level = TraceLevel::Standard;

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        BoostRound r;
        r.indices = j.at("indices").get<std::vector<std::size_t>>();
        r.hypothesis = Hypothesis::from_json(j.at("hypothesis"));
        r.z = parse_hex_double(j.at("z").get<std::string>());
        r.eps = parse_hex_double(j.at("eps").get<std::string>());
        r.violation = j.at("violation").get<bool>();
        trace.rounds.push_back(std::move(r));
    }
    if (trace.rounds.size() != trace.rounds_k)
        throw std::invalid_argument("trace_from_ndjson: round count mismatch");
    return trace;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("read_file: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("write_file: cannot open " + path);
    out << content;
}

} // namespace subboost
