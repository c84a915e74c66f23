#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "subboost/boosting.hpp"
#include "subboost/data.hpp"

namespace subboost {

// Concatenation S_1 o ... o S_K of the per-round subsamples, stored by
// value (the scheme is index-free).
struct CompressionSequence {
    std::vector<LabeledExample> elements; // length rounds_k * m
    std::size_t rounds_k = 0;
    std::size_t m = 0;
};

/// Encode a trace as the concatenated subsamples, round order, drawn order.
CompressionSequence encode(const BoostTrace& trace, const Dataset& data);

/// Partition into K groups of m, retrain the (deterministic) learner on
/// each with the uniform distribution, return the majority vote.
VotingClassifier reconstruct(const CompressionSequence& seq, const WeakLearner& learner);

/// Number of distinct labeled examples in the sequence.
std::size_t compression_size(const CompressionSequence& seq);

/// True iff every element of seq appears in data (the containment relation).
bool contained_in(const CompressionSequence& seq, const Dataset& data);

struct GenStableBound {
    double headline = 0.0;    // C * (s + ln(1/beta)) / n
    double proof_exact = 0.0; // 2 * (s ln 4 + ln(2/beta)) / n
};

GenStableBound bound_genstable(std::size_t s, std::size_t n, double beta, double C);

struct VotingBound {
    double value = 0.0;
    double first_branch = 0.0;  // (d + ln(1/gamma)) ln(n/delta) / (gamma^4 n)
    double second_branch = 0.0; // d ln(n/d) ln(n) / (gamma^2 n) + ln(1/delta)/n
    int winner = 1;             // 1 or 2
};

VotingBound bound_theorem1(double gamma, std::size_t d, std::size_t n,
                           double delta, double C);

std::string compression_to_json(const CompressionSequence& seq);
CompressionSequence compression_from_json(const std::string& text);

} // namespace subboost
