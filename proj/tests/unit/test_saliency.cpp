#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>

#include "gazeforge/error.hpp"
#include "gazeforge/saliency.hpp"
#include "oracles.hpp"

using namespace gazeforge;

namespace {

using C = std::complex<double>;

// O(N^2) two-dimensional DFT; sign -1 forward, +1 backward (unscaled).
std::vector<C> naive_dft(const std::vector<C>& in, std::size_t w, std::size_t h, int sign) {
    std::vector<C> out(w * h);
    for (std::size_t v = 0; v < h; ++v) {
        for (std::size_t u = 0; u < w; ++u) {
            C acc{0, 0};
            for (std::size_t y = 0; y < h; ++y) {
                for (std::size_t x = 0; x < w; ++x) {
                    const double ph = sign * 2.0 * std::numbers::pi *
                                      (static_cast<double>(u * x) / w + static_cast<double>(v * y) / h);
                    acc += in[y * w + x] * C(std::cos(ph), std::sin(ph));
                }
            }
            out[v * w + u] = acc;
        }
    }
    return out;
}

// Spectral residual on an image already 64 px wide, written from the
// textbook steps with a naive transform.
Grid reference_raw(const Grid& img) {
    const std::size_t w = img.width, h = img.height, n = w * h;
    std::vector<C> f(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        f[i] = img.values[i];
        total += std::abs(img.values[i]);
    }
    const auto F = naive_dft(f, w, h, -1);
    const double floor = 1e-10 * total;
    std::vector<double> la(n);
    for (std::size_t i = 0; i < n; ++i) la[i] = std::log(std::max(std::abs(F[i]), floor));
    std::vector<C> R(n, C{0, 0});
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const std::size_t i = y * w + x;
            if (i == 0 || std::abs(F[i]) <= floor) continue;
            double box = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) box += la[((y + h + dy) % h) * w + (x + w + dx) % w];
            }
            R[i] = std::exp(la[i] - box / 9.0) * F[i] / std::abs(F[i]);
        }
    }
    const auto r = naive_dft(R, w, h, +1);
    Grid raw(w, h);
    for (std::size_t i = 0; i < n; ++i) raw.values[i] = std::norm(r[i] / static_cast<double>(n));
    // 3x3 binomial smoothing, edges replicated.
    Grid out(w, h);
    const double k[3] = {0.25, 0.5, 0.25};
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const auto xx = static_cast<std::size_t>(std::clamp<long>(static_cast<long>(x) + dx, 0, w - 1));
                    const auto yy = static_cast<std::size_t>(std::clamp<long>(static_cast<long>(y) + dy, 0, h - 1));
                    acc += k[dx + 1] * k[dy + 1] * raw.at(xx, yy);
                }
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

std::set<std::pair<std::size_t, std::size_t>> as_set(const TargetSet& t) {
    std::set<std::pair<std::size_t, std::size_t>> s;
    for (const auto& p : t.points) s.emplace(static_cast<std::size_t>(p.x), static_cast<std::size_t>(p.y));
    return s;
}

}  // namespace

TEST_CASE("local maxima with no suppression equal the exhaustive scan") {
    std::mt19937_64 eng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const Grid g = oracle::random_grid(32, 32, eng, trial % 2 == 0);
        const auto found = local_maxima(g, 0.0, 0.0);
        const auto expect = oracle::strict_maxima(g, 0.0);
        CHECK(as_set(found) == std::set<std::pair<std::size_t, std::size_t>>(expect.begin(), expect.end()));
        CHECK(found.size() == expect.size());
        for (std::size_t i = 1; i < found.size(); ++i) CHECK(found.points[i - 1].weight >= found.points[i].weight);
    }
}

TEST_CASE("suppression keeps points apart and explains every removal") {
    std::mt19937_64 eng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const Grid g = oracle::random_grid(40, 30, eng);
        const double d = 1.0 + static_cast<double>(trial % 8);
        const auto kept = local_maxima(g, d, 0.2);
        for (std::size_t i = 0; i < kept.size(); ++i) {
            CHECK(kept.points[i].weight >= 0.2);
            for (std::size_t j = i + 1; j < kept.size(); ++j) {
                CHECK(std::hypot(kept.points[i].x - kept.points[j].x, kept.points[i].y - kept.points[j].y) >= d);
            }
        }
        for (const auto& [x, y] : oracle::strict_maxima(g, 0.2)) {
            const bool is_kept = as_set(kept).count({x, y}) > 0;
            if (is_kept) continue;
            const bool explained = std::any_of(kept.points.begin(), kept.points.end(), [&](const Target& k) {
                return std::hypot(k.x - static_cast<double>(x), k.y - static_cast<double>(y)) < d &&
                       k.weight >= g.at(x, y);
            });
            CHECK(explained);
        }
    }
}

TEST_CASE("plateaus are not maxima") {
    Grid g(10, 10, 0.5);
    CHECK(local_maxima(g, 0.0, 0.0).empty());
    g.at(3, 4) = 0.9;
    const auto t = local_maxima(g, 0.0, 0.0);
    REQUIRE(t.size() == 1);
    CHECK(t.points[0] == Target{3.0, 4.0, 0.9});
    CHECK_THROWS_AS(local_maxima(g, -1.0, 0.0), ParameterError);
}

TEST_CASE("spectral residual matches a naive-DFT reference") {
    std::mt19937_64 eng(3);
    const Grid img = oracle::random_grid(64, 16, eng);
    const Grid got = spectral_residual_raw(img);
    const Grid ref = reference_raw(img);
    REQUIRE(got.width == 64);
    REQUIRE(got.height == 16);
    double top = 0.0;
    for (double v : ref.values) top = std::max(top, v);
    for (std::size_t i = 0; i < ref.values.size(); ++i) CHECK(std::abs(got.values[i] - ref.values[i]) <= 1e-9 * top);
}

TEST_CASE("an impulse is localised") {
    for (auto [x, y] : {std::pair{40, 25}, std::pair{100, 70}, std::pair{12, 80}, std::pair{64, 48}}) {
        Grid img(128, 96, 0.0);
        img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = 1.0;
        const Grid map = spectral_residual(img);
        const auto it = std::max_element(map.values.begin(), map.values.end());
        const auto idx = static_cast<std::size_t>(it - map.values.begin());
        const double px = static_cast<double>(idx % map.width), py = static_cast<double>(idx / map.width);
        CHECK(std::hypot(px - x, py - y) <= 3.0);
    }
}

TEST_CASE("flat images have an all-zero map") {
    for (double c : {0.0, 0.5, 1.0}) {
        const Grid raw = spectral_residual_raw(Grid(80, 60, c));
        for (double v : raw.values) CHECK(std::abs(v) <= 1e-6);
        const Grid map = spectral_residual(Grid(80, 60, c));
        for (double v : map.values) CHECK(v == 0.0);
    }
}

TEST_CASE("saliency maps are normalised, input-sized and deterministic") {
    std::mt19937_64 eng(4);
    const Grid img = oracle::random_grid(150, 90, eng);
    const Grid a = spectral_residual(img);
    const Grid b = spectral_residual(img);
    CHECK(a.width == 150);
    CHECK(a.height == 90);
    CHECK(a.values == b.values);
    CHECK(*std::max_element(a.values.begin(), a.values.end()) == 1.0);
    CHECK(*std::min_element(a.values.begin(), a.values.end()) >= 0.0);
}

TEST_CASE("tiny or non-finite images are rejected") {
    CHECK_THROWS_AS(spectral_residual(Grid(4, 4, 0.0)), ParameterError);
    Grid bad(16, 16, 0.0);
    bad.at(1, 1) = NAN;
    CHECK_THROWS_AS(spectral_residual(bad), ParameterError);
}

TEST_CASE("resize: area average down, bilinear up") {
    Grid g(4, 2);
    g.values = {1, 3, 5, 7, 2, 4, 6, 8};
    const Grid half = resize(g, 2, 1);
    CHECK(half.values[0] == doctest::Approx(2.5));
    CHECK(half.values[1] == doctest::Approx(6.5));

    Grid line(2, 1);
    line.values = {0.0, 4.0};
    const Grid up = resize(line, 4, 1);
    CHECK(up.values[0] == doctest::Approx(0.0));
    CHECK(up.values[1] == doctest::Approx(1.0));
    CHECK(up.values[2] == doctest::Approx(3.0));
    CHECK(up.values[3] == doctest::Approx(4.0));

    const Grid flat = resize(Grid(7, 5, 0.3), 19, 3);
    for (double v : flat.values) CHECK(v == doctest::Approx(0.3));
    CHECK(resize(g, 4, 2).values == g.values);
    CHECK_THROWS_AS(resize(Grid{}, 3, 3), ParameterError);
}

TEST_CASE("jittered targets interleave originals and displaced copies") {
    RandomSource rng(5);
    TargetSet t{50, 40, {{10, 10, 0.9}, {0, 0, 0.5}, {49, 39, 0.2}}};
    const auto j = jitter_targets(t, 4.0, rng);
    REQUIRE(j.size() == 6);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(j.points[2 * i] == t.points[i]);
        const auto& c = j.points[2 * i + 1];
        CHECK(c.weight == t.points[i].weight);
        CHECK(std::hypot(c.x - t.points[i].x, c.y - t.points[i].y) <= 4.0);
        CHECK(c.x >= 0.0);
        CHECK(c.x <= 49.0);
        CHECK(c.y >= 0.0);
        CHECK(c.y <= 39.0);
    }
    const auto same = jitter_targets(t, 0.0, rng);
    for (std::size_t i = 0; i < 3; ++i) CHECK(same.points[2 * i + 1] == t.points[i]);
    CHECK_THROWS_AS(jitter_targets(t, -1.0, rng), ParameterError);
}
