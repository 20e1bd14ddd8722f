#pragma once

#include <cstddef>
#include <vector>

#include "gazeforge/core.hpp"

namespace gazeforge {

enum class NoiseMode { Replace, Add };

struct NoiseSpec {
    double fraction = 0.0;  // share of samples affected, [0, 1]
    DistKind location = DistKind::Uniform;
    // Normal placement: centre and std as fractions of the sample count.
    double location_center = 0.5;
    double location_std = 0.25;
    BoundedDistribution magnitude = BoundedDistribution::uniform(0.0, 500.0);  // deg/s
    NoiseMode mode = NoiseMode::Replace;
    std::size_t burst_length = 1;

    void validate() const;
};

/// Number of samples the spec affects in a signal of length n.
std::size_t noise_count(double fraction, std::size_t n);

/// Picks exactly noise_count(fraction, n) distinct indices, in selection order.
std::vector<std::size_t> select_noise_indices(const NoiseSpec& spec, std::size_t n, RandomSource& rng);

/// Overwrites (or offsets, in Add mode) the selected samples with magnitude
/// draws and labels them Noise. Everything else is copied untouched.
SampledSignal inject_noise(const SampledSignal& signal, const NoiseSpec& spec, RandomSource& rng);

}  // namespace gazeforge
