#pragma once

#include <cstddef>
#include <vector>

#include "gazeforge/core.hpp"

namespace gazeforge {

/// Row-major grid of reals. Used both for grayscale stimuli (values in [0,1]
/// after PGM decoding) and for saliency maps.
struct Grid {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> values;

    Grid() = default;
    Grid(std::size_t w, std::size_t h, double fill = 0.0) : width(w), height(h), values(w * h, fill) {}

    double& at(std::size_t x, std::size_t y) { return values[y * width + x]; }
    double at(std::size_t x, std::size_t y) const { return values[y * width + x]; }
    bool empty() const { return values.empty(); }
};

using SaliencyMap = Grid;

struct Target {
    double x = 0.0;  // px, column
    double y = 0.0;  // px, row
    double weight = 0.0;

    friend bool operator==(const Target&, const Target&) = default;
};

/// Candidate fixation targets over a stimulus of the given size.
struct TargetSet {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<Target> points;

    bool empty() const { return points.empty(); }
    std::size_t size() const { return points.size(); }
};

/// Working width of the spectral-residual computation.
inline constexpr std::size_t kSpectralWidth = 64;

/// Bilinear resize with pixel-centre alignment; shrinking averages the
/// covered source area instead.
Grid resize(const Grid& image, std::size_t width, std::size_t height);

/// Spectral-residual saliency.
///
/// The image is brought to 64 px width, transformed, and its log amplitude
/// spectrum is replaced by its difference to a 3x3 (circular) box average.
/// Inverting with the original phase and squaring gives the raw map, which is
/// smoothed with a 3x3 binomial kernel, scaled back to the input size and
/// normalised by its maximum. Spectral bins with negligible amplitude and the
/// DC term carry no phase and are dropped, so flat images give an all-zero
/// map. Deterministic.
SaliencyMap spectral_residual(const Grid& image);

/// Same as spectral_residual but returns the map before max-normalisation.
SaliencyMap spectral_residual_raw(const Grid& image);

/// Pixels strictly greater than every in-bounds 8-neighbour and >= threshold,
/// thinned greedily in descending value order (ties by row-major index) so
/// that kept points are at least min_distance apart.
TargetSet local_maxima(const SaliencyMap& map, double min_distance, double threshold);

/// Returns every input point followed by one copy displaced uniformly within
/// the disc of the given radius, clamped into the image.
TargetSet jitter_targets(const TargetSet& targets, double radius, RandomSource& rng);

}  // namespace gazeforge
