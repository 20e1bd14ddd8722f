#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <variant>
#include <vector>

#include "gazeforge/core.hpp"

namespace gazeforge {

struct FixationObserved {
    double mean_velocity = 0.0;
    double std = 0.0;
};

struct SaccadeObserved {
    double peak_velocity = 0.0;
    std::size_t peak_index = 0;
};

struct PursuitObserved {
    double mean_velocity = 0.0;
    double std = 0.0;
};

using ObservedParams = std::variant<FixationObserved, SaccadeObserved, PursuitObserved>;

/// What the simulator is told about one real segment.
struct SegmentDescriptor {
    MovementLabel label = MovementLabel::Fixation;
    std::size_t begin = 0;  // index of the first sample in the source sequence
    std::size_t length = 0;
    ObservedParams params;
};

/// One descriptor per label run; Noise runs are skipped. Fixations and
/// pursuits report sample mean and std (n-1 denominator), saccades their
/// maximum and its first index.
std::vector<SegmentDescriptor> extract_descriptors(std::span<const VelocitySample> samples);

struct SimulatedSegment {
    VelocityProfile profile;
    /// Set when the saccade peak position could not be reproduced to within
    /// one sample and the nearest attainable shape was used instead.
    bool fallback = false;
    double skewness = 0.0;  // saccades only
};

/// Regenerates a segment of exactly d.length samples from its descriptor.
/// Fixations and pursuits use the observed mean with Normal fluctuation of
/// the observed std (no pursuit onset); saccades use a jitter-free Gamma
/// profile whose skewness is bisected until the peak lands on peak_index.
SimulatedSegment simulate_from_descriptor(const SegmentDescriptor& d, RandomSource& rng, double base_rate = 1000.0);

/// Elementwise (sim_i - real_i)^2. Throws ParameterError on length mismatch.
std::vector<double> squared_error(std::span<const double> sim, std::span<const double> real);

struct ErrorStats {
    std::size_t count = 0;
    double mean = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double whisker_low = 0.0;   // smallest value >= q1 - 1.5 IQR
    double whisker_high = 0.0;  // largest value <= q3 + 1.5 IQR
    double min = 0.0;
    double max = 0.0;
};

/// Summary of a non-empty sample; quartiles by linear interpolation between
/// order statistics.
ErrorStats summarize(std::vector<double> values);

struct ErrorSummary {
    std::map<MovementLabel, ErrorStats> stats;
    std::map<MovementLabel, std::vector<double>> pooled;  // every per-sample squared error
    std::size_t fallbacks = 0;
};

/// Simulates every segment `repeats` times and pools the per-sample squared
/// errors by movement type. Each simulation draws from a stream derived from
/// (one draw of rng, segment index, repeat index).
ErrorSummary evaluate_dataset(std::span<const VelocitySample> real, std::size_t repeats, RandomSource& rng);

}  // namespace gazeforge
