#include <doctest.h>

#include <cmath>
#include <set>

#include "gazeforge/error.hpp"
#include "gazeforge/noise.hpp"
#include "oracles.hpp"

using namespace gazeforge;
using L = MovementLabel;

namespace {

SampledSignal ramp(std::size_t n) {
    SampledSignal s;
    for (std::size_t i = 0; i < n; ++i) {
        s.samples.push_back({static_cast<double>(i + 1) / 60.0, static_cast<double>(i % 50), L::Fixation});
    }
    return s;
}

std::size_t noise_labels(const SampledSignal& s) {
    std::size_t k = 0;
    for (const auto& x : s.samples) k += x.label == L::Noise;
    return k;
}

}  // namespace

TEST_CASE("ten percent of 600 samples is exactly 60") {
    RandomSource rng(1);
    NoiseSpec spec;
    spec.fraction = 0.10;
    const auto out = inject_noise(ramp(600), spec, rng);
    CHECK(noise_labels(out) == 60);
}

TEST_CASE("noise count is round(fraction * N) for any input") {
    RandomSource rng(2);
    for (int trial = 0; trial < 300; ++trial) {
        NoiseSpec spec;
        spec.fraction = rng.uniform();
        spec.location = rng.index(2) == 0 ? DistKind::Uniform : DistKind::Normal;
        spec.burst_length = 1 + rng.index(5);
        const std::size_t n = 1 + rng.index(400);
        const auto idx = select_noise_indices(spec, n, rng);
        CHECK(idx.size() == static_cast<std::size_t>(std::llround(spec.fraction * static_cast<double>(n))));
        const std::set<std::size_t> unique(idx.begin(), idx.end());
        CHECK(unique.size() == idx.size());
        for (auto i : idx) CHECK(i < n);
    }
    NoiseSpec all;
    all.fraction = 1.0;
    CHECK(select_noise_indices(all, 500, rng).size() == 500);
}

TEST_CASE("zero fraction passes the signal through untouched") {
    RandomSource rng(3);
    const auto in = ramp(600);
    CHECK(inject_noise(in, NoiseSpec{}, rng).samples == in.samples);
}

TEST_CASE("replace and add modes") {
    RandomSource rng(4);
    NoiseSpec spec;
    spec.fraction = 0.2;
    spec.magnitude = BoundedDistribution::uniform(100.0, 200.0);
    const auto in = ramp(500);
    const auto rep = inject_noise(in, spec, rng);
    spec.mode = NoiseMode::Add;
    const auto add = inject_noise(in, spec, rng);
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (rep.samples[i].label == L::Noise) {
            CHECK(rep.samples[i].velocity >= 100.0);
            CHECK(rep.samples[i].velocity < 200.0);
        } else {
            CHECK(rep.samples[i] == in.samples[i]);
        }
        if (add.samples[i].label == L::Noise) {
            const double d = add.samples[i].velocity - in.samples[i].velocity;
            CHECK(d >= 100.0 - 1e-9);
            CHECK(d < 200.0 + 1e-9);
        }
        CHECK(add.samples[i].t == in.samples[i].t);
    }
}

TEST_CASE("uniform placement covers the signal evenly") {
    RandomSource rng(5);
    NoiseSpec spec;
    spec.fraction = 0.01;
    std::vector<int> bins(10, 0);
    int total = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        for (auto i : select_noise_indices(spec, 1000, rng)) {
            ++bins[i / 100];
            ++total;
        }
    }
    double chi2 = 0.0;
    const double e = total / 10.0;
    for (int b : bins) chi2 += (b - e) * (b - e) / e;
    CHECK(chi2 < 27.88);  // 9 dof, p = 0.001
}

TEST_CASE("normal placement centres on the configured position") {
    RandomSource rng(6);
    NoiseSpec spec;
    spec.fraction = 0.001;
    spec.location = DistKind::Normal;
    spec.location_center = 0.3;
    spec.location_std = 0.05;
    std::vector<double> pos;
    for (int trial = 0; trial < 5000; ++trial) {
        for (auto i : select_noise_indices(spec, 10000, rng)) pos.push_back(static_cast<double>(i));
    }
    CHECK(std::abs(oracle::mean(pos) - 3000.0) < 20.0);
    CHECK(std::abs(oracle::sample_std(pos) - 500.0) < 20.0);
}

TEST_CASE("bursts are contiguous") {
    RandomSource rng(7);
    NoiseSpec spec;
    spec.fraction = 0.05;
    spec.burst_length = 5;
    const auto idx = select_noise_indices(spec, 2000, rng);
    REQUIRE(idx.size() == 100);
    std::set<std::size_t> s(idx.begin(), idx.end());
    std::size_t runs = 0;
    for (auto i : s) runs += i == 0 || !s.count(i - 1);
    CHECK(runs <= 20);
}

TEST_CASE("noise spec validation") {
    RandomSource rng(8);
    NoiseSpec bad;
    bad.fraction = 1.5;
    CHECK_THROWS_AS(select_noise_indices(bad, 10, rng), ParameterError);
    bad.fraction = 0.1;
    bad.burst_length = 0;
    CHECK_THROWS_AS(select_noise_indices(bad, 10, rng), ParameterError);
    bad.burst_length = 1;
    bad.magnitude = BoundedDistribution::uniform(5.0, 1.0);
    CHECK_THROWS_AS(select_noise_indices(bad, 10, rng), ParameterError);
}
