#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gazeforge/config.hpp"
#include "gazeforge/error.hpp"
#include "gazeforge/io.hpp"
#include "gazeforge/pipeline.hpp"

namespace gazeforge::cli {

namespace {

struct Command {
    std::string name;
    std::string description;
    std::vector<RunMode> modes;
    std::vector<std::string> key_prefixes;
    std::vector<std::string> excluded_keys;
};

const std::vector<Command>& commands() {
    static const std::vector<std::string> signal_keys{"base_rate_hz", "sequence.", "fixation.", "saccade.",
                                                      "pursuit.", "sampling.", "noise."};
    auto with = [](std::vector<std::string> base, std::initializer_list<const char*> extra) {
        base.insert(base.end(), extra.begin(), extra.end());
        return base;
    };
    static const std::vector<Command> list{
        {"generate", "Generate a labelled velocity signal (CSV)", {RunMode::Velocity},
         with(signal_keys, {"mode", "seed", "paths.output"}), {}},
        {"map", "Generate a signal and map it onto a static image or a frame sequence (gaze CSV)",
         {RunMode::MapStatic, RunMode::MapDynamic},
         with(signal_keys, {"mode", "seed", "mapping.", "paths.stimulus", "paths.saliency", "paths.frames_dir",
                            "paths.saliency_dir", "paths.output", "paths.targets_output"}),
         {"mapping.remap", "mapping.stimulus_width", "mapping.stimulus_height"}},
        {"remap", "Shuffle a labelled real gaze recording and map it again (gaze CSV)", {RunMode::Remap},
         {"mode", "seed", "mapping.", "paths.real_data", "paths.stimulus", "paths.saliency", "paths.frames_dir",
          "paths.saliency_dir", "paths.output"},
         {}},
        {"saliency", "Spectral residual saliency map (PGM) and its fixation targets (CSV)", {RunMode::Saliency},
         {"mode", "seed", "mapping.min_target_distance", "mapping.target_threshold", "mapping.target_jitter_px",
          "paths.stimulus", "paths.output", "paths.targets_output"},
         {}},
        {"evaluate", "Re-simulate every segment of a labelled velocity recording and report squared errors",
         {RunMode::Evaluate}, {"mode", "seed", "evaluation.repeats", "paths.real_data", "paths.output",
                               "paths.errors_output"},
         {}},
    };
    return list;
}

std::vector<std::string> keys_for(const Command& cmd) {
    std::vector<std::string> out;
    for (const auto& key : config_keys()) {
        const bool wanted = std::any_of(cmd.key_prefixes.begin(), cmd.key_prefixes.end(), [&](const std::string& p) {
            return p.back() == '.' ? key.starts_with(p) : key == p;
        });
        const bool excluded = std::find(cmd.excluded_keys.begin(), cmd.excluded_keys.end(), key) != cmd.excluded_keys.end();
        if (wanted && !excluded) out.push_back(key);
    }
    return out;
}

std::string keys_footer(const Command& cmd) {
    std::string out = "Config keys read by this command:\n";
    for (const auto& k : keys_for(cmd)) out += "  " + k + "\n";
    out += "\nThe seed comes from --seed, else GAZEFORGE_SEED, else the config.\n";
    out += "Exit codes: 0 ok, 2 config/validation, 3 I/O, 4 numeric/mapping.";
    return out;
}

struct Options {
    std::string config;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output;
};

std::uint64_t parse_seed_env(const char* text) {
    const std::string_view s(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ParameterError("GAZEFORGE_SEED must be a non-negative integer, got '" + std::string(s) + "'");
    }
    return v;
}

RunConfig load_config(const Command& cmd, const Options& opt) {
    RunConfig config = read_config(io::read_file(opt.config), opt.overrides);
    if (opt.seed) {
        config.seed = *opt.seed;
    } else if (const char* env = std::getenv("GAZEFORGE_SEED")) {
        config.seed = parse_seed_env(env);
    }
    if (opt.output) config.paths.output = *opt.output;
    if (config.mode && std::find(cmd.modes.begin(), cmd.modes.end(), *config.mode) == cmd.modes.end()) {
        throw ParameterError("config mode '" + std::string(run_mode_name(*config.mode)) + "' does not match command '" +
                             cmd.name + "'");
    }
    if (!config.paths.output) throw ParameterError("no output path: set paths.output or pass --output");
    return config;
}

void print_counts(std::ostream& out, const std::vector<MovementLabel>& sequence) {
    std::map<MovementLabel, std::size_t> counts;
    for (auto l : sequence) ++counts[l];
    out << "segments: " << sequence.size() << " (fixation " << counts[MovementLabel::Fixation] << ", saccade "
        << counts[MovementLabel::Saccade] << ", smooth_pursuit " << counts[MovementLabel::SmoothPursuit] << ")\n";
}

std::size_t noise_samples(const SampledSignal& s) {
    return static_cast<std::size_t>(std::count_if(s.samples.begin(), s.samples.end(),
                                                   [](const SignalSample& x) { return x.label == MovementLabel::Noise; }));
}

int do_generate(const RunConfig& config, std::ostream& out) {
    RandomSource rng(config.seed);
    const GeneratedSignal g = generate_signal(config, rng);
    io::write_file_atomic(*config.paths.output, io::write_velocity_csv(g.signal));
    print_counts(out, g.sequence);
    out << "samples: " << g.signal.size() << " (noise " << noise_samples(g.signal) << ")\n";
    out << "duration_s: " << io::format_sig6(g.profile.duration()) << "\n";
    out << "output: " << config.paths.output->string() << "\n";
    return kExitOk;
}

int do_map(const RunConfig& config, std::ostream& out) {
    RandomSource rng(config.seed);
    const MapResult r = run_map(config, rng);
    const std::string gaze = io::write_gaze_csv(r.trace);
    std::optional<std::string> targets;
    if (config.paths.targets_output) {
        targets = r.scene.is_dynamic() ? io::write_scene_targets_csv(r.scene) : io::write_targets_csv(r.scene.frames[0].targets);
    }
    if (targets) io::write_file_atomic(*config.paths.targets_output, *targets);
    io::write_file_atomic(*config.paths.output, gaze);

    print_counts(out, r.generated.sequence);
    out << "samples: " << r.trace.size() << " (noise " << noise_samples(r.generated.signal) << ")\n";
    out << "duration_s: " << io::format_sig6(r.generated.profile.duration()) << "\n";
    out << "scene: " << (r.scene.is_dynamic() ? "dynamic" : "static") << ", " << r.scene.width() << "x"
        << r.scene.height() << ", " << r.scene.frames.size() << " frame(s)\n";
    out << "output: " << config.paths.output->string() << "\n";
    if (config.paths.targets_output) out << "targets: " << config.paths.targets_output->string() << "\n";
    return kExitOk;
}

int do_remap(const RunConfig& config, std::ostream& out) {
    RandomSource rng(config.seed);
    const GazeTrace trace = run_remap(config, rng);
    io::write_file_atomic(*config.paths.output, io::write_gaze_csv(trace));
    out << "samples: " << trace.size() << "\n";
    out << "stimulus: " << trace.width << "x" << trace.height << "\n";
    out << "output: " << config.paths.output->string() << "\n";
    return kExitOk;
}

int do_saliency(const RunConfig& config, std::ostream& out) {
    if (!config.paths.stimulus) throw ParameterError("paths.stimulus is required for saliency");
    RandomSource rng(config.seed);
    const SaliencyMap map = spectral_residual(io::load_pgm(*config.paths.stimulus));
    const TargetSet targets = targets_from_map(map, config, rng);
    const std::string pgm = io::write_pgm(map);
    if (config.paths.targets_output) io::write_file_atomic(*config.paths.targets_output, io::write_targets_csv(targets));
    io::write_file_atomic(*config.paths.output, pgm);
    out << "map: " << map.width << "x" << map.height << "\n";
    out << "targets: " << targets.points.size() << "\n";
    out << "output: " << config.paths.output->string() << "\n";
    if (config.paths.targets_output) out << "targets_output: " << config.paths.targets_output->string() << "\n";
    return kExitOk;
}

int do_evaluate(const RunConfig& config, std::ostream& out) {
    RandomSource rng(config.seed);
    const ErrorSummary summary = run_evaluate(config, rng);
    const std::string stats = io::write_summary_csv(summary);
    if (config.paths.errors_output) io::write_file_atomic(*config.paths.errors_output, io::write_pooled_errors_csv(summary));
    io::write_file_atomic(*config.paths.output, stats);
    for (const auto& [label, s] : summary.stats) {
        out << label_name(label) << ": n=" << s.count << " median=" << io::format_sig6(s.median)
            << " mean=" << io::format_sig6(s.mean) << "\n";
    }
    out << "fallbacks: " << summary.fallbacks << "\n";
    out << "output: " << config.paths.output->string() << "\n";
    if (config.paths.errors_output) out << "errors_output: " << config.paths.errors_output->string() << "\n";
    return kExitOk;
}

int dispatch(const Command& cmd, const RunConfig& config, std::ostream& out) {
    if (cmd.name == "generate") return do_generate(config, out);
    if (cmd.name == "map") return do_map(config, out);
    if (cmd.name == "remap") return do_remap(config, out);
    if (cmd.name == "saliency") return do_saliency(config, out);
    return do_evaluate(config, out);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Synthetic eye movement data: labelled velocity signals and gaze traces"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every command");

    const auto& cmds = commands();
    std::vector<Options> options(cmds.size());
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < cmds.size(); ++i) {
        CLI::App* sub = app.add_subcommand(cmds[i].name, cmds[i].description);
        Options& o = options[i];
        sub->add_option("-c,--config", o.config, "JSON config file")->required();
        sub->add_option("-s,--set", o.overrides, "Override a config key, e.g. --set noise.fraction=0.1")
            ->type_name("KEY=VALUE");
        sub->add_option("--seed", o.seed, "RNG seed (overrides GAZEFORGE_SEED and the config)");
        sub->add_option("-o,--output", o.output, "Output path (overrides paths.output)");
        sub->footer(keys_footer(cmds[i]));
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    std::size_t idx = 0;
    while (!subs[idx]->parsed()) ++idx;
    const Command& cmd = cmds[idx];

    RunConfig config;
    try {
        config = load_config(cmd, options[idx]);
    } catch (const IoError& e) {
        err << "gazeforge " << cmd.name << ": " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        err << "gazeforge " << cmd.name << ": config: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        return dispatch(cmd, config, out);
    } catch (const ParameterError& e) {
        err << "gazeforge " << cmd.name << ": " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConstraintError& e) {
        err << "gazeforge " << cmd.name << ": " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        err << "gazeforge " << cmd.name << ": " << e.what() << "\n";
        return kExitIo;
    } catch (const ParseError& e) {
        err << "gazeforge " << cmd.name << ": " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        err << "gazeforge " << cmd.name << ": " << e.what() << "\n";
        return kExitNumeric;
    }
}

}  // namespace gazeforge::cli
