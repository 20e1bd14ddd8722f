#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gazeforge/generators.hpp"
#include "gazeforge/mapping.hpp"
#include "gazeforge/noise.hpp"
#include "gazeforge/resampler.hpp"
#include "gazeforge/sequence.hpp"

namespace gazeforge {

enum class RunMode { Velocity, MapStatic, MapDynamic, Remap, Evaluate, Saliency };

std::string_view run_mode_name(RunMode mode);

struct RunPaths {
    std::optional<std::filesystem::path> stimulus;      // PGM image
    std::optional<std::filesystem::path> saliency;      // precomputed PGM map
    std::optional<std::filesystem::path> frames_dir;    // numbered PGM frames
    std::optional<std::filesystem::path> saliency_dir;  // precomputed per-frame maps
    std::optional<std::filesystem::path> real_data;     // velocity or gaze CSV
    std::optional<std::filesystem::path> output;
    std::optional<std::filesystem::path> errors_output;
    std::optional<std::filesystem::path> targets_output;
};

/// Everything a run needs, validated.
struct RunConfig {
    std::optional<RunMode> mode;
    std::uint64_t seed = 0;
    double base_rate_hz = 1000.0;

    SequenceSpec sequence;
    FixationParams fixation;
    SaccadeParams saccade;
    PursuitParams pursuit;
    RateSpec sampling;
    NoiseSpec noise;

    MappingParams mapping;
    double min_target_distance = 10.0;  // px, local-maxima suppression radius
    double target_threshold = 0.1;      // saliency value a maximum must reach
    double frame_rate = 30.0;           // Hz, dynamic scenes
    RemapMode remap = RemapMode::SameStimulus;
    std::size_t stimulus_width = 0;  // remap without stimulus image
    std::size_t stimulus_height = 0;

    std::size_t repeats = 10;

    RunPaths paths;
};

/// Parses and validates a JSON configuration. Unknown keys are rejected with
/// the closest known key as a suggestion; syntax errors report line and
/// column. Throws ParseError or ParameterError.
RunConfig read_config(std::string_view text);

/// Applies `dotted.path=value` overrides to the JSON text before validation.
/// Values that parse as JSON are used as such, anything else as a string.
RunConfig read_config(std::string_view text, const std::vector<std::string>& overrides);

/// Dotted paths of every key the schema accepts, for help output.
std::vector<std::string> config_keys();

}  // namespace gazeforge
