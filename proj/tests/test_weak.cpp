#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "subboost/weak.hpp"

using namespace subboost;

namespace {

// Independent oracle: enumerate every candidate stump (all features,
// -inf / midpoint / +inf thresholds, both orientations) and return the
// minimum achievable uniform error.
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
                for (const auto& e : sample) {
                    int pred = o * (e.x[f] > t ? 1 : -1);
                    if (pred != e.y) ++wrong;
                }
                best = std::min(best, double(wrong) / double(sample.size()));
            }
    }
    return best;
}

std::vector<LabeledExample> random_sample(RngStream& rng, std::size_t n,
                                          std::size_t dim) {
    std::vector<LabeledExample> sample(n);
    for (auto& e : sample) {
        e.x.resize(dim);
        for (auto& v : e.x) v = rng.next_double() * 2.0 - 1.0;
        e.y = rng.next_double() < 0.5 ? -1 : 1;
    }
    return sample;
}

} // namespace

TEST_CASE("train_stump on a separable pair") {
    auto h = train_stump({{{-1.0}, -1}, {{1.0}, 1}});
    const auto* s = h.as_stump();
    REQUIRE(s != nullptr);
    CHECK(s->feature == 0);
    CHECK(s->threshold == 0.0);
    CHECK(s->orientation == 1);
    CHECK(sample_error(h, {{{-1.0}, -1}, {{1.0}, 1}}) == 0.0);
}

TEST_CASE("train_stump fits any single example") {
    for (double x : {-3.0, 0.0, 2.5})
        for (int y : {-1, 1}) {
            std::vector<LabeledExample> s = {{{x}, y}};
            CHECK(sample_error(train_stump(s), s) == 0.0);
        }
}

TEST_CASE("alternating four-point sample has best stump error 1/4") {
    std::vector<LabeledExample> s = {
        {{-2.0}, -1}, {{-1.0}, 1}, {{1.0}, -1}, {{2.0}, 1}};
    CHECK(brute_force_best_stump_error(s) == 0.25);
    CHECK(sample_error(train_stump(s), s) == 0.25);
}

TEST_CASE("train_stump picks the informative feature in 2-D") {
    // feature 0 carries no signal, feature 1 separates
    std::vector<LabeledExample> s = {
        {{0.3, -1.0}, -1}, {{0.1, -0.5}, -1}, {{0.2, 0.5}, 1}, {{0.4, 1.0}, 1}};
    auto h = train_stump(s);
    const auto* st = h.as_stump();
    REQUIRE(st != nullptr);
    CHECK(st->feature == 1);
    CHECK(sample_error(h, s) == 0.0);
}

TEST_CASE("train_stump matches the brute-force oracle on random instances") {
    RngStream rng(17, 0);
    for (int t = 0; t < 200; ++t) {
        std::size_t n = 1 + std::size_t(rng.next_double() * 50);
        std::size_t dim = 1 + std::size_t(rng.next_double() * 3);
        auto s = random_sample(rng, n, dim);
        CHECK(sample_error(train_stump(s), s) ==
              doctest::Approx(brute_force_best_stump_error(s)).epsilon(1e-12));
    }
}

TEST_CASE("train_stump is deterministic") {
    RngStream rng(23, 0);
    auto s = random_sample(rng, 20, 2);
    CHECK(train_stump(s).describe() == train_stump(s).describe());
    CHECK(train_stump(s) == train_stump(s));
}

TEST_CASE("train_planted") {
    auto target = Hypothesis::stump(0, 0.0, 1);

    SUBCASE("gamma 1/2 reproduces the target") {
        std::vector<LabeledExample> s;
        for (int i = 0; i < 10; ++i)
            s.push_back({{i - 4.5}, target.predict({i - 4.5})});
        auto h = train_planted(s, target, 0.5);
        for (const auto& e : s) CHECK(h.predict(e.x) == target.predict(e.x));
        CHECK(sample_error(h, s) == 0.0);
    }

    SUBCASE("size 10 at gamma 0.1 agrees on at least 6 points") {
        std::vector<LabeledExample> s;
        for (int i = 0; i < 10; ++i)
            s.push_back({{i - 4.5}, target.predict({i - 4.5})});
        auto h = train_planted(s, target, 0.1);
        int agree = 0;
        for (const auto& e : s)
            if (h.predict(e.x) == target.predict(e.x)) ++agree;
        CHECK(agree >= 6);
        CHECK(sample_error(h, s) <= 0.4);
    }

    SUBCASE("single example is always fit") {
        std::vector<LabeledExample> s = {{{0.7}, target.predict({0.7})}};
        CHECK(sample_error(train_planted(s, target, 0.05), s) == 0.0);
    }

    SUBCASE("error at most 1/2 - gamma over all sizes") {
        for (double gamma : {0.05, 0.1, 0.25, 0.45})
            for (std::size_t n = 1; n <= 100; ++n) {
                std::vector<LabeledExample> s;
                for (std::size_t i = 0; i < n; ++i) {
                    double x = double(i) * 0.125 - 6.0;
                    s.push_back({{x}, target.predict({x})});
                }
                CHECK(sample_error(train_planted(s, target, gamma), s) <=
                      0.5 - gamma + 1e-12);
            }
    }

    SUBCASE("duplicate feature vectors in the tail never hurt") {
        // the flip set skips x's that already occur in the agreement prefix
        std::vector<LabeledExample> s = {
            {{1.0}, 1}, {{2.0}, 1}, {{1.0}, 1}, {{1.0}, 1}};
        auto h = train_planted(s, target, 0.1);
        CHECK(sample_error(h, s) <= 0.4);
    }
}

TEST_CASE("weighted_error") {
    Dataset pos({{{1.0}, 1}, {{2.0}, 1}});
    Dataset neg({{{1.0}, -1}, {{2.0}, -1}});
    auto always_plus = Hypothesis::stump(
        0, -std::numeric_limits<double>::infinity(), 1);
    auto u = uniform_distribution(2);
    CHECK(weighted_error(always_plus, pos, u) == 0.0);
    CHECK(weighted_error(always_plus, neg, u) == 1.0);

    Dataset mixed({{{1.0}, 1}, {{2.0}, -1}});
    WeightDistribution d({0.2, 0.8});
    CHECK(weighted_error(always_plus, mixed, d) == 0.8);

    CHECK_THROWS_AS(weighted_error(always_plus, mixed, uniform_distribution(3)),
                    std::invalid_argument);
}

TEST_CASE("uniform weighted_error equals misclassification fraction") {
    RngStream rng(31, 0);
    for (int t = 0; t < 50; ++t) {
        auto raw = random_sample(rng, 10 + t % 20, 2);
        // de-duplicate x's so Dataset accepts the sample
        std::vector<LabeledExample> uniq;
        for (auto& e : raw) {
            bool dup = false;
            for (const auto& o : uniq) dup = dup || o.x == e.x;
            if (!dup) uniq.push_back(e);
        }
        Dataset data(uniq);
        auto h = train_stump(uniq);
        CHECK(weighted_error(h, data, uniform_distribution(data.size())) ==
              doctest::Approx(sample_error(h, uniq)).epsilon(1e-15));
    }
}

TEST_CASE("stump vc dimension declarations") {
    CHECK(stump_vc_dim(1) == 2);
    CHECK(stump_vc_dim(2) == 4);  // ceil(log2(4)) + 2
    CHECK(stump_vc_dim(8) == 6);  // ceil(log2(16)) + 2
    CHECK_THROWS_AS(stump_vc_dim(0), std::invalid_argument);
}

TEST_CASE("learner factories") {
    auto stump = make_stump_learner(0.1, 1);
    CHECK(stump.spec.deterministic);
    CHECK(stump.spec.vc_dim == 2);
    auto planted = make_planted_learner(0.25, Hypothesis::stump(0, 0.0, 1));
    CHECK(planted.spec.deterministic);
    CHECK(planted.spec.vc_dim == 1);

    RngStream rng(1, 0);
    std::vector<LabeledExample> s = {{{-1.0}, -1}, {{1.0}, 1}};
    CHECK(sample_error(stump.train(s, rng), s) == 0.0);
    CHECK(sample_error(planted.train(s, rng), s) == 0.0);
}
