#include "gazeforge/pipeline.hpp"

#include "gazeforge/error.hpp"
#include "gazeforge/io.hpp"

namespace gazeforge {

namespace {

const std::filesystem::path& require_path(const std::optional<std::filesystem::path>& p, const char* key) {
    if (!p) throw ParameterError(std::string("paths.") + key + " is required for this run");
    return *p;
}

}  // namespace

GeneratedSignal generate_signal(const RunConfig& config, RandomSource& rng) {
    GeneratedSignal out;
    out.sequence = build_sequence(config.sequence, rng);
    out.profile = assemble(out.sequence, config.fixation, config.saccade, config.pursuit, config.base_rate_hz, rng);
    const SampledSignal sampled = resample(out.profile, config.sampling, rng);
    if (sampled.empty()) throw ParameterError("generated profile is shorter than one output sample");
    out.signal = inject_noise(sampled, config.noise, rng);
    return out;
}

SaliencyMap load_saliency(const RunConfig& config) {
    if (config.paths.saliency) return io::load_pgm(*config.paths.saliency);
    if (config.paths.stimulus) return spectral_residual(io::load_pgm(*config.paths.stimulus));
    throw ParameterError("paths.stimulus or paths.saliency is required for a static scene");
}

TargetSet targets_from_map(const SaliencyMap& map, const RunConfig& config, RandomSource& rng) {
    const TargetSet maxima = local_maxima(map, config.min_target_distance, config.target_threshold);
    return jitter_targets(maxima, config.mapping.target_jitter_px, rng);
}

bool wants_dynamic_scene(const RunConfig& config) {
    if (config.mode) return *config.mode == RunMode::MapDynamic;
    return (config.paths.frames_dir || config.paths.saliency_dir) && !config.paths.stimulus && !config.paths.saliency;
}

SceneTargets build_scene(const RunConfig& config, bool dynamic, RandomSource& rng) {
    if (!dynamic) return SceneTargets::static_scene(targets_from_map(load_saliency(config), config, rng));

    const bool precomputed = config.paths.saliency_dir.has_value();
    const auto& dir = precomputed ? *config.paths.saliency_dir : require_path(config.paths.frames_dir, "frames_dir");
    const auto frames = io::list_frames(dir);
    if (frames.empty()) throw IoError("no .pgm frames in '" + dir.string() + "'");

    std::vector<TargetSet> per_frame;
    per_frame.reserve(frames.size());
    for (const auto& f : frames) {
        const Grid image = io::load_pgm(f);
        const SaliencyMap map = precomputed ? image : spectral_residual(image);
        per_frame.push_back(targets_from_map(map, config, rng));
    }
    return SceneTargets::dynamic_scene(std::move(per_frame), config.frame_rate);
}

MapResult run_map(const RunConfig& config, RandomSource& rng, MappingLog* log) {
    MapResult out;
    out.generated = generate_signal(config, rng);
    out.scene = build_scene(config, wants_dynamic_scene(config), rng);
    out.trace = map_to_gaze(out.generated.signal, out.scene, config.mapping, rng, log);
    return out;
}

GazeTrace run_remap(const RunConfig& config, RandomSource& rng, MappingLog* log) {
    GazeTrace real = io::read_gaze_csv(io::read_file(require_path(config.paths.real_data, "real_data")));
    real.pixels_per_degree = config.mapping.pixels_per_degree;

    if (config.remap == RemapMode::NewStimulus) {
        const SceneTargets scene = build_scene(config, wants_dynamic_scene(config), rng);
        return remap_real(real, RemapMode::NewStimulus, &scene, config.mapping, rng, log);
    }
    if (config.paths.stimulus) {
        const Grid stimulus = io::load_pgm(*config.paths.stimulus);
        real.width = stimulus.width;
        real.height = stimulus.height;
    } else {
        real.width = config.stimulus_width;
        real.height = config.stimulus_height;
    }
    if (real.width == 0 || real.height == 0) {
        throw ParameterError("same-stimulus remap needs paths.stimulus or mapping.stimulus_width/height");
    }
    return remap_real(real, RemapMode::SameStimulus, nullptr, config.mapping, rng, log);
}

ErrorSummary run_evaluate(const RunConfig& config, RandomSource& rng) {
    const SampledSignal real = io::read_velocity_csv(io::read_file(require_path(config.paths.real_data, "real_data")));
    std::vector<VelocitySample> samples;
    samples.reserve(real.size());
    for (const auto& s : real.samples) samples.push_back({s.velocity, s.label});
    return evaluate_dataset(samples, config.repeats, rng);
}

}  // namespace gazeforge
