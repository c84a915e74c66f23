#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "subboost/boosting.hpp"
#include "subboost/data.hpp"

namespace subboost {

/// Bit-exact text encoding of a double ("%a" hex-float, plus inf/nan).
std::string hex_double(double v);
double parse_hex_double(const std::string& s);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hash_hex(const std::string& bytes);

nlohmann::json dataset_to_json(const Dataset& data);
Dataset dataset_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const VotingClassifier& vc);
VotingClassifier model_from_json(const nlohmann::json& j);

/// Newline-delimited JSON, one round per line: index sequence, hypothesis,
/// Z_k (hex-float), eps_k (hex-float), violation flag. First line is a header.
std::string trace_to_ndjson(const BoostTrace& trace);

/// Rebuilds a Standard-level trace (no distribution snapshots; those are
/// replayed on demand by the verifiers).
BoostTrace trace_from_ndjson(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace subboost
