#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "subboost/bench.hpp"
#include "subboost/compress.hpp"
#include "subboost/serialize.hpp"

using namespace subboost;

namespace {

BoostResult seeded_run(const Dataset& data, const WeakLearner& learner,
                       double gamma, std::size_t k, std::size_t m,
                       std::uint64_t stream) {
    BoostConfig cfg;
    cfg.gamma = gamma;
    cfg.k_override = k;
    cfg.m_override = m;
    cfg.stream = stream;
    return sampled_boost(data, learner, cfg);
}

} // namespace

TEST_CASE("encode concatenates subsamples in drawn order") {
    Dataset data({{{-1.0}, -1}, {{1.0}, 1}});

    BoostTrace trace;
    trace.n = 2;
    trace.m = 2;
    trace.rounds_k = 1;
    trace.rounds.resize(1);
    trace.rounds[0].indices = {0, 0};
    auto seq = encode(trace, data);
    REQUIRE(seq.elements.size() == 2);
    CHECK(seq.elements[0] == data[0]);
    CHECK(seq.elements[1] == data[0]); // repetition preserved
    CHECK(seq.rounds_k == 1);
    CHECK(seq.m == 2);
    CHECK(compression_size(seq) == 1);

    trace.m = 1;
    trace.rounds_k = 2;
    trace.rounds.resize(2);
    trace.rounds[0].indices = {1};
    trace.rounds[1].indices = {0};
    auto seq2 = encode(trace, data);
    REQUIRE(seq2.elements.size() == 2);
    CHECK(seq2.elements[0] == data[1]); // round order
    CHECK(seq2.elements[1] == data[0]);
    CHECK(contained_in(seq2, data));

    trace.rounds[1].indices = {7};
    CHECK_THROWS_AS(encode(trace, data), std::invalid_argument);
}

TEST_CASE("encoded output is always contained in the source data") {
    TaskSpec spec;
    spec.generator = "interval";
    spec.n_train = 30;
    auto task = gen_task(spec);
    auto learner = make_stump_learner(0.2, 1);
    auto result = seeded_run(task.train, learner, 0.2, 20, 5, 0);
    auto seq = encode(result.trace, task.train);
    CHECK(contained_in(seq, task.train));
    CHECK(compression_size(seq) <= seq.elements.size());
    CHECK(compression_size(seq) <= task.train.size());
}

TEST_CASE("reconstruct of a single separable group is that stump") {
    CompressionSequence seq;
    seq.elements = {{{-1.0}, -1}, {{1.0}, 1}};
    seq.rounds_k = 1;
    seq.m = 2;
    auto learner = make_stump_learner(0.25, 1);
    auto predictor = reconstruct(seq, learner);
    auto h = train_stump(seq.elements);
    for (double x : {-2.0, -0.5, 0.0, 0.5, 2.0})
        CHECK(predictor.predict({x}) == h.predict({x}));
}

TEST_CASE("reconstruct contract errors") {
    CompressionSequence seq;
    seq.elements = {{{-1.0}, -1}, {{1.0}, 1}};
    seq.rounds_k = 1;
    seq.m = 2;

    WeakLearner randomized = make_stump_learner(0.25, 1);
    randomized.spec.deterministic = false;
    CHECK_THROWS_AS(reconstruct(seq, randomized), std::logic_error);

    seq.m = 3; // 2 elements not divisible into groups of 3
    CHECK_THROWS_AS(reconstruct(seq, make_stump_learner(0.25, 1)),
                    std::invalid_argument);
}

TEST_CASE("encode-then-reconstruct reproduces sign(f) pointwise") {
    TaskSpec spec;
    spec.generator = "interval";
    spec.n_train = 60;
    spec.n_test = 1000;
    auto task = gen_task(spec);
    auto learner = make_stump_learner(0.12, 1);

    for (std::uint64_t s = 0; s < 5; ++s) {
        auto result = seeded_run(task.train, learner, 0.12, 80, 10, s);
        auto predictor = reconstruct(encode(result.trace, task.train), learner);
        for (const auto& e : task.train.examples())
            CHECK(predictor.predict(e.x) == result.classifier.predict(e.x));
        for (const auto& e : task.test.examples())
            CHECK(predictor.predict(e.x) == result.classifier.predict(e.x));
    }
}

TEST_CASE("compression_size distinct counting") {
    CompressionSequence seq;
    seq.elements.assign(6, {{0.5}, 1});
    seq.rounds_k = 3;
    seq.m = 2;
    CHECK(compression_size(seq) == 1);

    seq.elements.clear();
    for (int i = 0; i < 6; ++i) seq.elements.push_back({{double(i)}, 1});
    CHECK(compression_size(seq) == 6);
}

TEST_CASE("bound_genstable") {
    auto b = bound_genstable(1, 2, 2.0 / std::exp(2.0), 1.0);
    // 2 (s ln4 + ln(2/beta)) / n with ln(2/beta) = ln(e^2) = 2
    CHECK(b.proof_exact ==
          doctest::Approx(std::log(4.0) + 2.0).epsilon(1e-12));
    CHECK(bound_genstable(1, 2, 0.1, 1.0).headline ==
          doctest::Approx((1.0 + std::log(10.0)) / 2.0).epsilon(1e-12));

    // decreasing in n, increasing in s
    CHECK(bound_genstable(5, 200, 0.1, 1.0).headline <
          bound_genstable(5, 100, 0.1, 1.0).headline);
    CHECK(bound_genstable(6, 100, 0.1, 1.0).headline >
          bound_genstable(5, 100, 0.1, 1.0).headline);
    CHECK(bound_genstable(6, 100, 0.1, 1.0).proof_exact >
          bound_genstable(5, 100, 0.1, 1.0).proof_exact);

    CHECK_THROWS_AS(bound_genstable(1, 2, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bound_genstable(1, 2, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("bound_theorem1") {
    // large n at moderate gamma: first branch (single log) wins
    auto big = bound_theorem1(0.5, 2, 100000, 0.1, 1.0);
    CHECK(big.winner == 1);
    CHECK(big.value == doctest::Approx(big.first_branch));

    // small gamma: second branch (gamma^-2) beats first (gamma^-4)
    auto tiny = bound_theorem1(0.01, 2, 10000, 0.1, 1.0);
    CHECK(tiny.winner == 2);
    CHECK(tiny.value == doctest::Approx(tiny.second_branch));

    auto once = bound_theorem1(0.2, 2, 500, 0.1, 1.0);
    auto twice = bound_theorem1(0.2, 2, 500, 0.1, 2.0);
    CHECK(twice.value == doctest::Approx(2.0 * once.value).epsilon(1e-12));

    CHECK_THROWS_AS(bound_theorem1(0.2, 10, 10, 0.1, 1.0), std::invalid_argument);
}

TEST_CASE("compression sequence json round trip is bit exact") {
    CompressionSequence seq;
    seq.elements = {{{0.1, -0.25}, 1}, {{1.0 / 3.0, 2.0}, -1},
                    {{0.1, -0.25}, 1}, {{-7.5, 1e-300}, -1}};
    seq.rounds_k = 2;
    seq.m = 2;
    auto text = compression_to_json(seq);
    auto back = compression_from_json(text);
    CHECK(back.rounds_k == seq.rounds_k);
    CHECK(back.m == seq.m);
    REQUIRE(back.elements.size() == seq.elements.size());
    for (std::size_t i = 0; i < seq.elements.size(); ++i)
        CHECK(back.elements[i] == seq.elements[i]);
    CHECK(compression_to_json(back) == text);
}
