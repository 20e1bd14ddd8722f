#include <doctest.h>

#include <cmath>

#include "gazeforge/error.hpp"
#include "gazeforge/resampler.hpp"
#include "oracles.hpp"

using namespace gazeforge;
using L = MovementLabel;

namespace {

VelocityProfile profile_of(std::vector<double> v, double rate, L label = L::Fixation) {
    VelocityProfile p{rate, {}};
    for (double x : v) p.samples.push_back({x, label});
    return p;
}

VelocityProfile random_profile(std::size_t n, RandomSource& rng) {
    VelocityProfile p{1000.0, {}};
    for (std::size_t i = 0; i < n; ++i) p.samples.push_back({rng.uniform() * 100.0, static_cast<L>(rng.index(3))});
    return p;
}

}  // namespace

TEST_CASE("hand oracle: six samples at 6 Hz to 2 Hz") {
    RandomSource rng(1);
    const auto out = resample(profile_of({1, 2, 3, 4, 5, 6}, 6.0), RateSpec{BoundedDistribution::fixed(2.0)}, rng);
    REQUIRE(out.size() == 2);
    CHECK(out.samples[0].velocity == 2.0);
    CHECK(out.samples[1].velocity == 5.0);
    CHECK(out.samples[0].t == 0.5);
    CHECK(out.samples[1].t == 1.0);
}

TEST_CASE("one second at 1000 Hz gives 60 samples at k/60") {
    RandomSource rng(2);
    const auto out = resample(profile_of(std::vector<double>(1000, 7.0), 1000.0), RateSpec{}, rng);
    REQUIRE(out.size() == 60);
    for (std::size_t k = 0; k < 60; ++k) CHECK(out.samples[k].t == static_cast<double>(k + 1) / 60.0);
}

TEST_CASE("constant signals are preserved exactly") {
    RandomSource rng(3);
    for (const auto& rate : {BoundedDistribution::fixed(60.0), BoundedDistribution::fixed(333.0),
                             BoundedDistribution::uniform(50.0, 70.0), BoundedDistribution::normal(30.0, 900.0, 100.0),
                             BoundedDistribution::fixed(1000.0)}) {
        const auto out = resample(profile_of(std::vector<double>(2345, 12.375), 1000.0), RateSpec{rate}, rng);
        REQUIRE_FALSE(out.empty());
        for (const auto& s : out.samples) CHECK(s.velocity == 12.375);
    }
}

TEST_CASE("global mean is preserved when windows tile the profile") {
    RandomSource rng(4);
    for (double r : {100.0, 125.0, 250.0, 500.0, 1000.0}) {
        const auto prof = random_profile(2000, rng);
        const auto out = resample(prof, RateSpec{BoundedDistribution::fixed(r)}, rng);
        std::vector<double> in, res;
        for (const auto& s : prof.samples) in.push_back(s.velocity);
        for (const auto& s : out.samples) res.push_back(s.velocity);
        CHECK(out.size() == static_cast<std::size_t>(2.0 * r));
        CHECK(std::abs(oracle::mean(res) - oracle::mean(in)) <= 1e-9 * oracle::mean(in));
    }
}

TEST_CASE("dynamic rates keep gaps inside the rate bounds") {
    for (auto kind : {DistKind::Uniform, DistKind::Normal}) {
        RandomSource rng(5);
        RateSpec spec{BoundedDistribution{kind, 50.0, 70.0, kind == DistKind::Normal ? 5.0 : 0.0}};
        const auto out = resample(profile_of(std::vector<double>(100000, 1.0), 1000.0), spec, rng);
        double prev = 0.0;
        for (const auto& s : out.samples) {
            const double dt = s.t - prev;
            CHECK(dt >= 1.0 / 70.0 - 1e-12);
            CHECK(dt <= 1.0 / 50.0 + 1e-12);
            prev = s.t;
        }
        const double mean_rate = static_cast<double>(out.size()) / out.samples.back().t;
        CHECK(std::abs(mean_rate - 60.0) / 60.0 < 0.02);
        CHECK(100.0 - out.samples.back().t <= 1.0 / 50.0);
    }
}

TEST_CASE("labels follow the window majority, ties to the latest sample") {
    RandomSource rng(6);
    VelocityProfile p{4.0, {{1, L::Fixation}, {1, L::Fixation}, {1, L::Saccade}, {1, L::Saccade},
                             {1, L::Fixation}, {1, L::Saccade}, {1, L::Saccade}, {1, L::SmoothPursuit}}};
    const auto out = resample(p, RateSpec{BoundedDistribution::fixed(1.0)}, rng);
    REQUIRE(out.size() == 2);
    CHECK(out.samples[0].label == L::Saccade);  // 2-2 tie, latest is S
    CHECK(out.samples[1].label == L::Saccade);  // S wins 2-1-1
}

TEST_CASE("segment boundaries move by less than one output period") {
    RandomSource rng(7);
    VelocityProfile p{1000.0, {}};
    for (int i = 0; i < 300; ++i) p.samples.push_back({1.0, L::Fixation});
    for (int i = 0; i < 50; ++i) p.samples.push_back({300.0, L::Saccade});
    for (int i = 0; i < 650; ++i) p.samples.push_back({1.0, L::Fixation});
    const auto out = resample(p, RateSpec{}, rng);
    double first_s = -1.0, last_s = -1.0;
    for (const auto& s : out.samples) {
        if (s.label != L::Saccade) continue;
        if (first_s < 0) first_s = s.t;
        last_s = s.t;
    }
    REQUIRE(first_s > 0);
    CHECK(std::abs(first_s - 0.300) <= 1.0 / 60.0);
    CHECK(std::abs(last_s - 0.350) <= 1.0 / 60.0);
}

TEST_CASE("invalid inputs") {
    RandomSource rng(8);
    CHECK_THROWS_AS(resample(VelocityProfile{}, RateSpec{}, rng), ParameterError);
    const auto p = profile_of({1, 2, 3}, 100.0);
    CHECK_THROWS_AS(resample(p, RateSpec{BoundedDistribution::fixed(200.0)}, rng), ParameterError);
    CHECK_THROWS_AS(resample(p, RateSpec{BoundedDistribution::fixed(0.0)}, rng), ParameterError);
    CHECK_THROWS_AS(resample(p, RateSpec{BoundedDistribution::uniform(80.0, 40.0)}, rng), ParameterError);
}

TEST_CASE("short profiles give no samples") {
    RandomSource rng(9);
    CHECK(resample(profile_of({1, 2}, 1000.0), RateSpec{}, rng).empty());
}
