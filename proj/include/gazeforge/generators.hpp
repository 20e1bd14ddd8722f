#pragma once

#include <cstddef>
#include <vector>

#include "gazeforge/core.hpp"

namespace gazeforge {

// Consistency distributions describe per-sample velocity fluctuation. When
// min >= 0 the bounds are an amplitude and each sample receives a perturbation
// drawn from the same kind over [-max, +max]; negative min means the bounds
// are already signed and are used as given.

struct FixationParams {
    BoundedDistribution duration = BoundedDistribution::uniform(0.2, 0.4);  // s
    double base_velocity = 0.0;                                             // deg/s
    BoundedDistribution consistency = BoundedDistribution::uniform(0.0, 1.0);

    void validate() const;
};

struct SaccadeParams {
    BoundedDistribution duration = BoundedDistribution::uniform(0.03, 0.08);
    BoundedDistribution peak_velocity = BoundedDistribution::uniform(300.0, 500.0);
    BoundedDistribution skewness = BoundedDistribution::uniform(0.5, 1.5);
    BoundedDistribution consistency = BoundedDistribution::fixed(0.0);

    void validate() const;
};

enum class PursuitTrend { Constant, LinearIncreasing, LinearDecreasing };

struct PursuitParams {
    BoundedDistribution duration = BoundedDistribution::uniform(0.3, 0.6);
    BoundedDistribution velocity = BoundedDistribution::uniform(10.0, 30.0);
    BoundedDistribution onset_duration = BoundedDistribution::uniform(0.05, 0.1);
    PursuitTrend trend = PursuitTrend::Constant;
    BoundedDistribution trend_end_velocity = BoundedDistribution::uniform(10.0, 30.0);
    BoundedDistribution consistency = BoundedDistribution::fixed(0.0);

    void validate() const;
};

/// Draws the signed per-sample perturbation described by a consistency
/// distribution.
double draw_perturbation(const BoundedDistribution& consistency, RandomSource& rng);

/// Sample count for a segment lasting `seconds` at `rate` Hz.
std::size_t segment_samples(double seconds, double rate);

// --- fixation ---------------------------------------------------------------

VelocityProfile render_fixation(std::size_t n, double base_velocity, const BoundedDistribution& consistency,
                                double base_rate, RandomSource& rng);

VelocityProfile gen_fixation(const FixationParams& p, double base_rate, RandomSource& rng);

// --- saccade ----------------------------------------------------------------

/// Upper tail mass cut off when mapping the Gamma density onto a segment.
inline constexpr double kSaccadeTailMass = 1e-5;

/// Gamma shape for a profile skewness s: k = (2/s)^2.
double gamma_shape_for_skewness(double skewness);

/// Jitter-free saccade velocities for `n` samples, normalised so the largest
/// sample equals `peak` exactly. Sample i sits at the midpoint of its interval
/// over the Gamma support [0, quantile(1 - kSaccadeTailMass)].
std::vector<double> saccade_shape(std::size_t n, double peak, double skewness);

struct SaccadeDraw {
    std::size_t samples = 0;
    double duration = 0.0;  // s, before rounding to samples
    double peak = 0.0;
    double skewness = 1.0;
};

/// Draws duration, peak and skewness. The peak uses the product of the
/// normalised duration draw and a unit velocity draw, so short saccades are
/// limited to low peak velocities.
SaccadeDraw draw_saccade(const SaccadeParams& p, double base_rate, RandomSource& rng);

/// Applies consistency jitter to a saccade shape. Values stay inside
/// [0, peak_cap] and the apex keeps the drawn peak.
VelocityProfile render_saccade(const SaccadeDraw& draw, const BoundedDistribution& consistency, double peak_cap,
                               double base_rate, RandomSource& rng);

VelocityProfile gen_saccade(const SaccadeParams& p, double base_rate, RandomSource& rng);

// --- smooth pursuit -----------------------------------------------------------

/// Logistic onset reaching 1% of `plateau` at t=0 and 99% at t=onset.
double pursuit_onset_velocity(double t, double onset, double plateau);

struct PursuitDraw {
    std::size_t samples = 0;
    double onset = 0.0;  // s; 0 disables the onset phase
    double plateau = 0.0;
    PursuitTrend trend = PursuitTrend::Constant;
    double trend_end = 0.0;
};

PursuitDraw draw_pursuit(const PursuitParams& p, double base_rate, RandomSource& rng);

VelocityProfile render_pursuit(const PursuitDraw& draw, const BoundedDistribution& consistency, double base_rate,
                               RandomSource& rng);

VelocityProfile gen_pursuit(const PursuitParams& p, double base_rate, RandomSource& rng);

// --- assembly ----------------------------------------------------------------

/// Concatenates one generated segment per sequence entry. Segment errors are
/// rethrown with the segment index prepended.
VelocityProfile assemble(const std::vector<MovementLabel>& sequence, const FixationParams& fix,
                         const SaccadeParams& sac, const PursuitParams& sp, double base_rate, RandomSource& rng);

}  // namespace gazeforge
