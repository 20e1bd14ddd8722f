#include "gazeforge/noise.hpp"

#include <algorithm>
#include <cmath>

#include "gazeforge/error.hpp"

namespace gazeforge {

namespace {

// Consecutive collisions tolerated before falling back to the nearest free
// index; keeps dense selections (fraction near 1) bounded in time.
constexpr int kMaxRedraws = 100;

std::size_t draw_location(const NoiseSpec& spec, std::size_t n, RandomSource& rng) {
    if (spec.location == DistKind::Uniform) return rng.index(n);
    const double count = static_cast<double>(n);
    const double pos = std::round(spec.location_center * count + spec.location_std * count * rng.normal());
    return static_cast<std::size_t>(std::clamp(pos, 0.0, count - 1.0));
}

std::size_t nearest_free(const std::vector<bool>& taken, std::size_t from) {
    for (std::size_t d = 1; d < taken.size(); ++d) {
        if (from >= d && !taken[from - d]) return from - d;
        if (from + d < taken.size() && !taken[from + d]) return from + d;
    }
    return from;
}

}  // namespace

void NoiseSpec::validate() const {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw ParameterError("noise.fraction must be in [0, 1]");
    if (!(location_std >= 0.0) || !std::isfinite(location_center)) {
        throw ParameterError("noise.location_std must be >= 0 and noise.location_center finite");
    }
    if (burst_length < 1) throw ParameterError("noise.burst_length must be >= 1");
    magnitude.validate("noise.magnitude");
}

std::size_t noise_count(double fraction, std::size_t n) {
    return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

std::vector<std::size_t> select_noise_indices(const NoiseSpec& spec, std::size_t n, RandomSource& rng) {
    spec.validate();
    const std::size_t k = std::min(n, noise_count(spec.fraction, n));
    std::vector<std::size_t> picked;
    picked.reserve(k);
    std::vector<bool> taken(n, false);

    while (picked.size() < k) {
        std::size_t start = draw_location(spec, n, rng);
        for (int attempt = 0; taken[start]; ++attempt) {
            if (attempt == kMaxRedraws) {
                start = nearest_free(taken, start);
                break;
            }
            start = draw_location(spec, n, rng);
        }
        for (std::size_t i = start; i < n && i - start < spec.burst_length && !taken[i] && picked.size() < k; ++i) {
            taken[i] = true;
            picked.push_back(i);
        }
    }
    return picked;
}

SampledSignal inject_noise(const SampledSignal& signal, const NoiseSpec& spec, RandomSource& rng) {
    SampledSignal out = signal;
    const std::vector<std::size_t> picked = select_noise_indices(spec, signal.size(), rng);
    for (std::size_t i : picked) {
        const double m = sample_bounded(spec.magnitude, rng);
        auto& s = out.samples[i];
        s.velocity = spec.mode == NoiseMode::Replace ? m : std::max(0.0, s.velocity + m);
        s.label = MovementLabel::Noise;
    }
    return out;
}

}  // namespace gazeforge
