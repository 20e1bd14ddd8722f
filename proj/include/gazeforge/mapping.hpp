#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gazeforge/core.hpp"
#include "gazeforge/saliency.hpp"

namespace gazeforge {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

struct GazeSample {
    double t = 0.0;  // s
    double x = 0.0;  // px
    double y = 0.0;  // px
    double velocity = 0.0;  // deg/s
    MovementLabel label = MovementLabel::Fixation;

    friend bool operator==(const GazeSample&, const GazeSample&) = default;
};

struct GazeTrace {
    std::size_t width = 0;
    std::size_t height = 0;
    double pixels_per_degree = 30.0;
    std::vector<GazeSample> samples;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

struct SceneFrame {
    double time = 0.0;  // s
    TargetSet targets;
};

/// Fixation targets for a static image (one frame) or a frame sequence.
struct SceneTargets {
    std::vector<SceneFrame> frames;
    double frame_rate = 0.0;  // Hz; 0 for static scenes

    static SceneTargets static_scene(TargetSet targets);
    /// Frame i is shown from i / frame_rate.
    static SceneTargets dynamic_scene(std::vector<TargetSet> per_frame, double frame_rate);

    bool is_dynamic() const { return frames.size() > 1 || frame_rate > 0.0; }
    std::size_t width() const;
    std::size_t height() const;
    /// Index of the frame whose time is nearest to t (earlier frame on ties).
    std::size_t frame_for(double t) const;

    void validate() const;
};

enum class TargetSelection { Weighted, Uniform };

struct MappingParams {
    double pixels_per_degree = 30.0;
    double max_path_deviation = 5.0;   // px
    double fixation_dispersion = 10.0;  // px
    double target_jitter_px = 5.0;
    TargetSelection selection = TargetSelection::Weighted;
    DistKind deviation = DistKind::Uniform;

    void validate() const;
};

/// One entry per mapped label run; filled when a log is passed to map_to_gaze.
struct MappedRun {
    MovementLabel label = MovementLabel::Fixation;
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t frame = 0;
    Point start;
    Target target;
};

using MappingLog = std::vector<MappedRun>;

/// Index of a target drawn with probability proportional to its weight
/// (uniformly when selection is Uniform or all weights are zero).
std::size_t choose_target(const TargetSet& targets, TargetSelection selection, RandomSource& rng);

/// Mean-reverting random walk of n points starting at `center` and staying
/// within `dispersion` of it.
std::vector<Point> fixation_walk(Point center, std::size_t n, double dispersion, RandomSource& rng);

/// Turns a labelled velocity signal into gaze positions over a scene.
///
/// Fixation runs scatter around a target (the landing point of the preceding
/// movement, otherwise a fresh draw). Saccade and pursuit runs travel on a
/// straight line from the current position to a new target; each sample
/// advances in proportion to velocity * dt and the path is rescaled so the
/// last sample lands exactly on the target. Interior samples are pushed off
/// the line by at most max_path_deviation, tapering to zero at both ends.
/// Noise samples stay in the run they interrupt and move with the average
/// velocity of their neighbours. Dynamic scenes draw each run's target from
/// the frame nearest to the run's last timestamp.
GazeTrace map_to_gaze(const SampledSignal& signal, const SceneTargets& scene, const MappingParams& params,
                      RandomSource& rng, MappingLog* log = nullptr);

/// Angular speed per sample from positions: central differences inside,
/// one-sided at the ends, converted with pixels_per_degree.
std::vector<double> gaze_velocities(const GazeTrace& trace);

/// Centroids of the trace's fixation runs, weight 1 each.
TargetSet fixation_centroids(const GazeTrace& trace);

enum class RemapMode { SameStimulus, NewStimulus };

/// Builds a new trace from a labelled real one: the label runs are shuffled,
/// their velocities re-derived from positions, and the result mapped onto the
/// real fixation centroids (SameStimulus) or onto `scene` (NewStimulus).
GazeTrace remap_real(const GazeTrace& real, RemapMode mode, const SceneTargets* scene, const MappingParams& params,
                     RandomSource& rng, MappingLog* log = nullptr);

}  // namespace gazeforge
