#pragma once

#include <vector>

#include "gazeforge/config.hpp"
#include "gazeforge/eval.hpp"
#include "gazeforge/mapping.hpp"
#include "gazeforge/saliency.hpp"

namespace gazeforge {

/// sequence -> generators -> resampler -> noise.
struct GeneratedSignal {
    std::vector<MovementLabel> sequence;
    VelocityProfile profile;
    SampledSignal signal;
};

GeneratedSignal generate_signal(const RunConfig& config, RandomSource& rng);

/// Saliency map for the configured stimulus: the precomputed map when
/// paths.saliency is set, otherwise spectral residual of paths.stimulus.
SaliencyMap load_saliency(const RunConfig& config);

/// Local maxima of a map plus their jittered copies.
TargetSet targets_from_map(const SaliencyMap& map, const RunConfig& config, RandomSource& rng);

/// Static scene from the stimulus/saliency paths, or a dynamic scene from
/// the frame (or per-frame saliency) directory when `dynamic` is set.
SceneTargets build_scene(const RunConfig& config, bool dynamic, RandomSource& rng);

/// True when the config selects a dynamic scene (mode or directories).
bool wants_dynamic_scene(const RunConfig& config);

struct MapResult {
    GeneratedSignal generated;
    SceneTargets scene;
    GazeTrace trace;
};

MapResult run_map(const RunConfig& config, RandomSource& rng, MappingLog* log = nullptr);

GazeTrace run_remap(const RunConfig& config, RandomSource& rng, MappingLog* log = nullptr);

ErrorSummary run_evaluate(const RunConfig& config, RandomSource& rng);

}  // namespace gazeforge
