#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace gazeforge {

enum class MovementLabel : std::uint8_t { Fixation, Saccade, SmoothPursuit, Noise };

/// Short code used in CSV files: FIX, SACC, SP, NOISE.
std::string_view label_code(MovementLabel label);
std::optional<MovementLabel> parse_label_code(std::string_view code);
/// Lower-case name used in config files: fixation, saccade, smooth_pursuit, noise.
std::string_view label_name(MovementLabel label);
std::optional<MovementLabel> parse_label_name(std::string_view name);

enum class DistKind : std::uint8_t { Uniform, Normal };

/// A clamped random quantity. Normal draws are centred on the midpoint of
/// [min, max] and clamped into it, so every draw consumes a fixed number of
/// unit draws.
struct BoundedDistribution {
    DistKind kind = DistKind::Uniform;
    double min = 0.0;
    double max = 0.0;
    double std = 0.0;

    static BoundedDistribution uniform(double lo, double hi) { return {DistKind::Uniform, lo, hi, 0.0}; }
    static BoundedDistribution normal(double lo, double hi, double sd) { return {DistKind::Normal, lo, hi, sd}; }
    static BoundedDistribution fixed(double v) { return {DistKind::Uniform, v, v, 0.0}; }

    double midpoint() const { return 0.5 * (min + max); }
    double width() const { return max - min; }

    /// Throws ParameterError naming `field` when min > max, std < 0 or a
    /// bound is not finite.
    void validate(std::string_view field) const;
};

/// Seeded source of randomness.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The unit-uniform and unit-normal transforms are implemented here
/// rather than through <random> distributions, which are implementation
/// defined. Not thread-safe; give each concurrent run its own instance.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed = 0);

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform();
    /// Standard normal via Box-Muller; consumes exactly two uniform draws.
    double normal();
    /// Uniform integer in [0, n). n must be > 0.
    std::size_t index(std::size_t n);

    /// Independent stream derived from (seed, a, b) by SplitMix64 mixing.
    static RandomSource derived(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Maps a unit draw u in [0,1) through a Uniform distribution. Exposed so that
/// callers needing the normalised position of a draw can reuse it.
double uniform_from_unit(const BoundedDistribution& dist, double u);

/// One draw from `dist`, validated first.
double sample_bounded(const BoundedDistribution& dist, RandomSource& rng);

/// Position of `value` inside [dist.min, dist.max] as a fraction in [0,1];
/// 0 for degenerate bounds.
double normalized_position(const BoundedDistribution& dist, double value);

struct VelocitySample {
    double velocity = 0.0;  // deg/s, >= 0
    MovementLabel label = MovementLabel::Fixation;

    friend bool operator==(const VelocitySample&, const VelocitySample&) = default;
};

/// Uniformly sampled velocity magnitude signal at `base_rate` Hz.
struct VelocityProfile {
    double base_rate = 1000.0;
    std::vector<VelocitySample> samples;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    double duration() const { return static_cast<double>(samples.size()) / base_rate; }

    void append(const VelocityProfile& other);
};

/// Timestamped velocity sample as emitted by the resampler and read from
/// velocity CSV files.
struct SignalSample {
    double t = 0.0;  // seconds
    double velocity = 0.0;
    MovementLabel label = MovementLabel::Fixation;

    friend bool operator==(const SignalSample&, const SignalSample&) = default;
};

struct SampledSignal {
    std::vector<SignalSample> samples;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

/// Half-open index range [begin, end) of a run of identical labels.
struct LabelRun {
    MovementLabel label;
    std::size_t begin;
    std::size_t end;

    std::size_t length() const { return end - begin; }
};

/// Splits a label sequence into maximal runs.
template <typename Range, typename Proj>
std::vector<LabelRun> label_runs(const Range& items, Proj label_of) {
    std::vector<LabelRun> runs;
    std::size_t i = 0;
    for (const auto& item : items) {
        const MovementLabel label = label_of(item);
        if (runs.empty() || runs.back().label != label) {
            runs.push_back({label, i, i + 1});
        } else {
            runs.back().end = i + 1;
        }
        ++i;
    }
    return runs;
}

}  // namespace gazeforge
