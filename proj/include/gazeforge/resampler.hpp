#pragma once

#include "gazeforge/core.hpp"

namespace gazeforge {

/// Target sampling rate in Hz. Degenerate bounds give a constant rate;
/// otherwise a new instantaneous rate is drawn for every output sample.
struct RateSpec {
    BoundedDistribution rate = BoundedDistribution::fixed(60.0);

    void validate(double base_rate) const;
};

/// Resamples a base-rate profile by averaging.
///
/// Base sample i covers (i/base_rate, (i+1)/base_rate] and is stamped at the
/// end of that interval. Each output sample at t_k = t_{k-1} + 1/r_k carries
/// the mean velocity of the base samples stamped in (t_{k-1}, t_k] and their
/// majority label (ties go to the latest sample). Emission stops once t_k
/// passes the profile duration.
SampledSignal resample(const VelocityProfile& profile, const RateSpec& spec, RandomSource& rng);

}  // namespace gazeforge
