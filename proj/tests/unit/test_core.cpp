#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "gazeforge/core.hpp"
#include "gazeforge/error.hpp"
#include "oracles.hpp"

using namespace gazeforge;

TEST_CASE("label codes and names round-trip") {
    for (auto l : {MovementLabel::Fixation, MovementLabel::Saccade, MovementLabel::SmoothPursuit, MovementLabel::Noise}) {
        CHECK(parse_label_code(label_code(l)) == l);
        CHECK(parse_label_name(label_name(l)) == l);
    }
    CHECK(label_code(MovementLabel::SmoothPursuit) == "SP");
    CHECK(label_name(MovementLabel::SmoothPursuit) == "smooth_pursuit");
    CHECK_FALSE(parse_label_code("fix").has_value());
    CHECK_FALSE(parse_label_name("FIX").has_value());
    CHECK_FALSE(parse_label_code("").has_value());
}

TEST_CASE("engine follows the standard mt19937_64 sequence") {
    // The standard fixes the 10000th output of a default-seeded engine.
    RandomSource rng(5489u);
    std::uint64_t v = 0;
    for (int i = 0; i < 10000; ++i) v = rng.next_u64();
    CHECK(v == 9981545732273789042ull);
}

TEST_CASE("uniform uses the top 53 bits") {
    RandomSource rng(99);
    std::mt19937_64 ref(99);
    for (int i = 0; i < 1000; ++i) {
        const double expect = static_cast<double>(ref() >> 11) / 9007199254740992.0;
        const double u = rng.uniform();
        CHECK(u == expect);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("same seed, same stream; different seed, different stream") {
    RandomSource a(1), b(1), c(2);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        differs |= x != c.uniform();
    }
    CHECK(differs);
}

TEST_CASE("normal draws have unit moments") {
    RandomSource rng(3);
    std::vector<double> v(200000);
    for (auto& x : v) x = rng.normal();
    const double n = static_cast<double>(v.size());
    CHECK(std::abs(oracle::mean(v)) < 4.0 / std::sqrt(n));
    CHECK(std::abs(oracle::sample_std(v) - 1.0) < 0.01);
}

TEST_CASE("index is uniform over [0, n)") {
    RandomSource rng(11);
    const std::size_t k = 7;
    const int trials = 70000;
    std::vector<int> hist(k, 0);
    for (int i = 0; i < trials; ++i) {
        const auto j = rng.index(k);
        REQUIRE(j < k);
        ++hist[j];
    }
    double chi2 = 0.0;
    const double e = static_cast<double>(trials) / static_cast<double>(k);
    for (int h : hist) chi2 += (h - e) * (h - e) / e;
    CHECK(chi2 < 22.46);  // 6 dof, p = 0.001
}

TEST_CASE("derived streams are deterministic and distinct") {
    auto a = RandomSource::derived(5, 1, 2);
    auto b = RandomSource::derived(5, 1, 2);
    CHECK(a.next_u64() == b.next_u64());
    std::set<std::uint64_t> firsts;
    for (std::uint64_t i = 0; i < 20; ++i) {
        for (std::uint64_t j = 0; j < 20; ++j) firsts.insert(RandomSource::derived(5, i, j).next_u64());
    }
    CHECK(firsts.size() == 400);
    CHECK(RandomSource::derived(5, 1, 2).next_u64() != RandomSource::derived(5, 2, 1).next_u64());
}

TEST_CASE("bounded draws stay inside their bounds") {
    RandomSource rng(17);
    const auto u = BoundedDistribution::uniform(2.0, 5.0);
    const auto n = BoundedDistribution::normal(2.0, 5.0, 3.0);
    bool hit_lo = false, hit_hi = false;
    for (int i = 0; i < 20000; ++i) {
        const double a = sample_bounded(u, rng);
        CHECK(a >= 2.0);
        CHECK(a < 5.0);
        const double b = sample_bounded(n, rng);
        CHECK(b >= 2.0);
        CHECK(b <= 5.0);
        hit_lo |= b == 2.0;
        hit_hi |= b == 5.0;
    }
    // A wide normal is clamped, so both bounds are reached.
    CHECK(hit_lo);
    CHECK(hit_hi);
    CHECK(sample_bounded(BoundedDistribution::fixed(4.25), rng) == 4.25);
}

TEST_CASE("normal draws centre on the midpoint") {
    RandomSource rng(23);
    std::vector<double> v(50000);
    for (auto& x : v) x = sample_bounded(BoundedDistribution::normal(10.0, 30.0, 2.0), rng);
    CHECK(std::abs(oracle::mean(v) - 20.0) < 0.05);
    CHECK(std::abs(oracle::sample_std(v) - 2.0) < 0.05);
}

TEST_CASE("invalid distributions are rejected") {
    RandomSource rng(1);
    CHECK_THROWS_AS(sample_bounded(BoundedDistribution::uniform(3.0, 1.0), rng), ParameterError);
    CHECK_THROWS_AS(sample_bounded(BoundedDistribution::normal(0.0, 1.0, -1.0), rng), ParameterError);
    CHECK_THROWS_AS(sample_bounded(BoundedDistribution::uniform(0.0, INFINITY), rng), ParameterError);
    CHECK_THROWS_AS(sample_bounded(BoundedDistribution::uniform(NAN, 1.0), rng), ParameterError);
    CHECK_THROWS_WITH_AS(BoundedDistribution::uniform(3.0, 1.0).validate("saccade.duration"),
                         doctest::Contains("saccade.duration"), ParameterError);
}

TEST_CASE("normalized position") {
    const auto d = BoundedDistribution::uniform(10.0, 20.0);
    CHECK(normalized_position(d, 10.0) == 0.0);
    CHECK(normalized_position(d, 15.0) == doctest::Approx(0.5));
    CHECK(normalized_position(d, 20.0) == 1.0);
    CHECK(normalized_position(BoundedDistribution::fixed(3.0), 3.0) == 0.0);
    CHECK(uniform_from_unit(d, 0.25) == 12.5);
}

TEST_CASE("label runs split at every label change") {
    using L = MovementLabel;
    const std::vector<L> labels{L::Fixation, L::Fixation, L::Saccade, L::Noise, L::Saccade, L::Saccade};
    const auto runs = label_runs(labels, [](L l) { return l; });
    REQUIRE(runs.size() == 4);
    CHECK(runs[0].begin == 0);
    CHECK(runs[0].end == 2);
    CHECK(runs[1].label == L::Saccade);
    CHECK(runs[2].label == L::Noise);
    CHECK(runs[3].length() == 2);
    CHECK(label_runs(std::vector<L>{}, [](L l) { return l; }).empty());
}

TEST_CASE("profile append and duration") {
    VelocityProfile a{1000.0, {{1.0, MovementLabel::Fixation}}};
    VelocityProfile b{1000.0, {{2.0, MovementLabel::Saccade}, {3.0, MovementLabel::Saccade}}};
    a.append(b);
    CHECK(a.size() == 3);
    CHECK(a.duration() == doctest::Approx(0.003));
}
