#include "gazeforge/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gazeforge/error.hpp"

namespace gazeforge {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

std::string_view label_code(MovementLabel label) {
    switch (label) {
        case MovementLabel::Fixation: return "FIX";
        case MovementLabel::Saccade: return "SACC";
        case MovementLabel::SmoothPursuit: return "SP";
        case MovementLabel::Noise: return "NOISE";
    }
    return "?";
}

std::optional<MovementLabel> parse_label_code(std::string_view code) {
    if (code == "FIX") return MovementLabel::Fixation;
    if (code == "SACC") return MovementLabel::Saccade;
    if (code == "SP") return MovementLabel::SmoothPursuit;
    if (code == "NOISE") return MovementLabel::Noise;
    return std::nullopt;
}

std::string_view label_name(MovementLabel label) {
    switch (label) {
        case MovementLabel::Fixation: return "fixation";
        case MovementLabel::Saccade: return "saccade";
        case MovementLabel::SmoothPursuit: return "smooth_pursuit";
        case MovementLabel::Noise: return "noise";
    }
    return "?";
}

std::optional<MovementLabel> parse_label_name(std::string_view name) {
    if (name == "fixation") return MovementLabel::Fixation;
    if (name == "saccade") return MovementLabel::Saccade;
    if (name == "smooth_pursuit") return MovementLabel::SmoothPursuit;
    if (name == "noise") return MovementLabel::Noise;
    return std::nullopt;
}

void BoundedDistribution::validate(std::string_view field) const {
    auto fail = [&](std::string_view what) {
        std::ostringstream os;
        os << field << ": " << what << " (min=" << min << ", max=" << max << ", std=" << std << ")";
        throw ParameterError(os.str());
    };
    if (!std::isfinite(min) || !std::isfinite(max)) fail("bounds must be finite");
    if (min > max) fail("min must not exceed max");
    if (kind == DistKind::Normal && (!std::isfinite(std) || std < 0.0)) fail("std must be >= 0");
}

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double RandomSource::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomSource::normal() {
    // 1 - u lies in (0, 1], so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t RandomSource::index(std::size_t n) {
    const auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return std::min(i, n - 1);
}

RandomSource RandomSource::derived(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t state = seed;
    std::uint64_t mixed = splitmix64(state);
    state ^= a * 0xD1B54A32D192ED03ull;
    mixed ^= splitmix64(state);
    state ^= b * 0x8CB92BA72F3D8DD7ull;
    mixed ^= splitmix64(state);
    return RandomSource(mixed);
}

double uniform_from_unit(const BoundedDistribution& dist, double u) {
    return dist.min + u * (dist.max - dist.min);
}

double sample_bounded(const BoundedDistribution& dist, RandomSource& rng) {
    dist.validate("distribution");
    if (dist.kind == DistKind::Uniform) {
        return uniform_from_unit(dist, rng.uniform());
    }
    const double v = dist.midpoint() + dist.std * rng.normal();
    return std::clamp(v, dist.min, dist.max);
}

double normalized_position(const BoundedDistribution& dist, double value) {
    if (dist.max <= dist.min) return 0.0;
    return std::clamp((value - dist.min) / (dist.max - dist.min), 0.0, 1.0);
}

void VelocityProfile::append(const VelocityProfile& other) {
    samples.insert(samples.end(), other.samples.begin(), other.samples.end());
}

}  // namespace gazeforge
