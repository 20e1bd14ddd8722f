#include "gazeforge/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "gazeforge/error.hpp"

namespace gazeforge {

namespace {

using nlohmann::json;

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

std::string join(std::string_view prefix, std::string_view key) {
    return prefix.empty() ? std::string(key) : std::string(prefix) + "." + std::string(key);
}

// Strict view of one JSON object. Every accessor registers its key; finish()
// rejects whatever was not asked for.
class Section {
public:
    Section(const json* node, std::string path, std::vector<std::string>* recorder)
        : node_(node), path_(std::move(path)), recorder_(recorder) {
        if (node_ != nullptr && !node_->is_object()) fail(path_, "expected an object");
    }

    const json* find(std::string_view key) {
        known_.emplace_back(key);
        if (recorder_ != nullptr) recorder_->push_back(join(path_, key));
        if (node_ == nullptr) return nullptr;
        const auto it = node_->find(std::string(key));
        return it == node_->end() ? nullptr : &*it;
    }

    Section section(std::string_view key) {
        const json* child = find(key);
        if (recorder_ != nullptr) recorder_->pop_back();
        return Section(child, join(path_, key), recorder_);
    }

    double number(std::string_view key, double fallback) {
        const json* v = find(key);
        if (v == nullptr) return fallback;
        if (!v->is_number()) fail(join(path_, key), "expected a number");
        const double d = v->get<double>();
        if (!std::isfinite(d)) fail(join(path_, key), "expected a finite number");
        return d;
    }

    std::uint64_t unsigned_integer(std::string_view key, std::uint64_t fallback) {
        const json* v = find(key);
        if (v == nullptr) return fallback;
        if (v->is_number_unsigned()) return v->get<std::uint64_t>();
        if (v->is_number_integer() && v->get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v->get<std::int64_t>());
        fail(join(path_, key), "expected a non-negative integer");
    }

    std::optional<std::string> string(std::string_view key) {
        const json* v = find(key);
        if (v == nullptr) return std::nullopt;
        if (!v->is_string()) fail(join(path_, key), "expected a string");
        return v->get<std::string>();
    }

    template <typename E>
    E choice(std::string_view key, E fallback, std::initializer_list<std::pair<std::string_view, E>> options) {
        const auto s = string(key);
        if (!s) return fallback;
        for (const auto& [name, value] : options) {
            if (*s == name) return value;
        }
        std::string allowed;
        for (const auto& [name, value] : options) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
        fail(join(path_, key), "'" + *s + "' is not one of: " + allowed);
    }

    std::optional<std::filesystem::path> path(std::string_view key) {
        const auto s = string(key);
        if (!s) return std::nullopt;
        if (s->empty()) fail(join(path_, key), "path must not be empty");
        return std::filesystem::path(*s);
    }

    BoundedDistribution distribution(std::string_view key, const BoundedDistribution& fallback) {
        const json* v = find(key);
        const std::string where = join(path_, key);
        if (v == nullptr) return fallback;
        if (v->is_number()) {
            const double d = v->get<double>();
            if (!std::isfinite(d)) fail(where, "expected a finite number");
            return BoundedDistribution::fixed(d);
        }
        Section s(v, where, nullptr);
        BoundedDistribution out = fallback;
        out.kind = s.choice<DistKind>("dist", DistKind::Uniform, {{"uniform", DistKind::Uniform}, {"normal", DistKind::Normal}});
        out.min = s.number("min", fallback.min);
        out.max = s.number("max", fallback.max);
        // Normal without an explicit std spans the bounds with +-3 std.
        out.std = s.number("std", out.kind == DistKind::Normal ? (out.max - out.min) / 6.0 : 0.0);
        s.finish();
        out.validate(where);
        return out;
    }

    const json* array(std::string_view key) {
        const json* v = find(key);
        if (v != nullptr && !v->is_array()) fail(join(path_, key), "expected an array");
        return v;
    }

    void finish() const {
        if (node_ == nullptr) return;
        for (const auto& [key, value] : node_->items()) {
            if (std::find(known_.begin(), known_.end(), key) != known_.end()) continue;
            std::string message = "unknown key '" + join(path_, key) + "'";
            const auto best = std::min_element(known_.begin(), known_.end(), [&](const auto& a, const auto& b) {
                return edit_distance(key, a) < edit_distance(key, b);
            });
            if (best != known_.end() && edit_distance(key, *best) <= std::max<std::size_t>(2, key.size() / 3)) {
                message += " (did you mean '" + *best + "'?)";
            }
            throw ParameterError(message);
        }
    }

    [[noreturn]] static void fail(const std::string& where, const std::string& what) {
        throw ParameterError((where.empty() ? std::string("config") : where) + ": " + what);
    }

private:
    const json* node_;
    std::string path_;
    std::vector<std::string>* recorder_;
    std::vector<std::string> known_;
};

MovementLabel movement(const json& v, const std::string& where) {
    if (!v.is_string()) Section::fail(where, "expected a movement name");
    const auto label = parse_label_name(v.get<std::string>());
    if (!label || *label == MovementLabel::Noise) {
        Section::fail(where, "'" + v.get<std::string>() + "' is not one of: fixation, saccade, smooth_pursuit");
    }
    return *label;
}

RunConfig parse(const json& root, std::vector<std::string>* recorder) {
    RunConfig c;
    Section top(&root, "", recorder);

    if (const auto mode = top.string("mode")) {
        static constexpr std::array<RunMode, 6> modes{RunMode::Velocity, RunMode::MapStatic, RunMode::MapDynamic,
                                                      RunMode::Remap,    RunMode::Evaluate,  RunMode::Saliency};
        const auto it = std::find_if(modes.begin(), modes.end(), [&](RunMode m) { return run_mode_name(m) == *mode; });
        if (it == modes.end()) {
            Section::fail("mode", "'" + *mode + "' is not one of: velocity, map_static, map_dynamic, remap, evaluate, saliency");
        }
        c.mode = *it;
    }
    c.seed = top.unsigned_integer("seed", c.seed);
    c.base_rate_hz = top.number("base_rate_hz", c.base_rate_hz);
    if (!(c.base_rate_hz > 0.0)) Section::fail("base_rate_hz", "must be > 0");

    {
        Section s = top.section("sequence");
        Section counts = s.section("counts");
        c.sequence.counts[0] = counts.unsigned_integer("fixation", 0);
        c.sequence.counts[1] = counts.unsigned_integer("saccade", 0);
        c.sequence.counts[2] = counts.unsigned_integer("smooth_pursuit", 0);
        counts.finish();
        c.sequence.length = s.unsigned_integer("length", 0);
        if (const json* rules = s.array("rules")) {
            for (std::size_t i = 0; i < rules->size(); ++i) {
                const std::string where = "sequence.rules[" + std::to_string(i) + "]";
                Section r(&(*rules)[i], where, nullptr);
                OrderingRule rule;
                rule.kind = r.choice<OrderingRule::Kind>("kind", OrderingRule::Kind::AfterEach,
                                                         {{"after_each", OrderingRule::Kind::AfterEach},
                                                          {"before", OrderingRule::Kind::Before}});
                const json* first = r.find("first");
                const json* second = r.find("second");
                if (first == nullptr || second == nullptr) Section::fail(where, "needs 'first' and 'second'");
                rule.first = movement(*first, where + ".first");
                rule.second = movement(*second, where + ".second");
                if (rule.first == rule.second) Section::fail(where, "first and second must differ");
                r.finish();
                c.sequence.rules.push_back(rule);
            }
        }
        if (recorder != nullptr) {
            for (const char* k : {"kind", "first", "second"}) recorder->push_back(std::string("sequence.rules[].") + k);
        }
        if (const json* expl = s.array("explicit")) {
            for (std::size_t i = 0; i < expl->size(); ++i) {
                c.sequence.explicit_sequence.push_back(
                    movement((*expl)[i], "sequence.explicit[" + std::to_string(i) + "]"));
            }
        }
        s.finish();
        if (!c.sequence.explicit_sequence.empty()) {
            if (auto r = first_violated_rule(c.sequence.explicit_sequence, c.sequence.rules)) {
                Section::fail("sequence.explicit", "violates rule " + c.sequence.rules[*r].describe());
            }
        }
    }

    {
        Section s = top.section("fixation");
        c.fixation.duration = s.distribution("duration", c.fixation.duration);
        c.fixation.base_velocity = s.number("base_velocity", c.fixation.base_velocity);
        c.fixation.consistency = s.distribution("consistency", c.fixation.consistency);
        s.finish();
        c.fixation.validate();
    }
    {
        Section s = top.section("saccade");
        c.saccade.duration = s.distribution("duration", c.saccade.duration);
        c.saccade.peak_velocity = s.distribution("peak_velocity", c.saccade.peak_velocity);
        c.saccade.skewness = s.distribution("skewness", c.saccade.skewness);
        c.saccade.consistency = s.distribution("consistency", c.saccade.consistency);
        s.finish();
        c.saccade.validate();
    }
    {
        Section s = top.section("pursuit");
        c.pursuit.duration = s.distribution("duration", c.pursuit.duration);
        c.pursuit.velocity = s.distribution("velocity", c.pursuit.velocity);
        c.pursuit.onset_duration = s.distribution("onset_duration", c.pursuit.onset_duration);
        c.pursuit.trend = s.choice<PursuitTrend>("trend", c.pursuit.trend,
                                                 {{"constant", PursuitTrend::Constant},
                                                  {"linear_increasing", PursuitTrend::LinearIncreasing},
                                                  {"linear_decreasing", PursuitTrend::LinearDecreasing}});
        c.pursuit.trend_end_velocity = s.distribution("trend_end_velocity", c.pursuit.trend_end_velocity);
        c.pursuit.consistency = s.distribution("consistency", c.pursuit.consistency);
        s.finish();
        c.pursuit.validate();
    }
    {
        Section s = top.section("sampling");
        c.sampling.rate = s.distribution("rate", c.sampling.rate);
        s.finish();
        c.sampling.validate(c.base_rate_hz);
    }
    {
        Section s = top.section("noise");
        c.noise.fraction = s.number("fraction", c.noise.fraction);
        c.noise.location = s.choice<DistKind>("location", c.noise.location,
                                              {{"uniform", DistKind::Uniform}, {"normal", DistKind::Normal}});
        c.noise.location_center = s.number("location_center", c.noise.location_center);
        c.noise.location_std = s.number("location_std", c.noise.location_std);
        c.noise.magnitude = s.distribution("magnitude", c.noise.magnitude);
        c.noise.mode = s.choice<NoiseMode>("mode", c.noise.mode, {{"replace", NoiseMode::Replace}, {"add", NoiseMode::Add}});
        const std::uint64_t burst = s.unsigned_integer("burst_length", c.noise.burst_length);
        c.noise.burst_length = static_cast<std::size_t>(burst);
        s.finish();
        c.noise.validate();
    }
    {
        Section s = top.section("mapping");
        auto& m = c.mapping;
        m.pixels_per_degree = s.number("pixels_per_degree", m.pixels_per_degree);
        m.max_path_deviation = s.number("max_path_deviation", m.max_path_deviation);
        m.fixation_dispersion = s.number("fixation_dispersion", m.fixation_dispersion);
        m.target_jitter_px = s.number("target_jitter_px", m.target_jitter_px);
        m.selection = s.choice<TargetSelection>("target_selection", m.selection,
                                                {{"weighted", TargetSelection::Weighted},
                                                 {"uniform", TargetSelection::Uniform}});
        m.deviation = s.choice<DistKind>("deviation", m.deviation,
                                         {{"uniform", DistKind::Uniform}, {"normal", DistKind::Normal}});
        c.min_target_distance = s.number("min_target_distance", c.min_target_distance);
        c.target_threshold = s.number("target_threshold", c.target_threshold);
        c.frame_rate = s.number("frame_rate", c.frame_rate);
        c.remap = s.choice<RemapMode>("remap", c.remap,
                                      {{"same_stimulus", RemapMode::SameStimulus},
                                       {"new_stimulus", RemapMode::NewStimulus}});
        c.stimulus_width = static_cast<std::size_t>(s.unsigned_integer("stimulus_width", 0));
        c.stimulus_height = static_cast<std::size_t>(s.unsigned_integer("stimulus_height", 0));
        s.finish();
        m.validate();
        if (!(c.min_target_distance >= 0.0)) Section::fail("mapping.min_target_distance", "must be >= 0");
        if (!(c.frame_rate > 0.0)) Section::fail("mapping.frame_rate", "must be > 0");
    }
    {
        Section s = top.section("evaluation");
        c.repeats = static_cast<std::size_t>(s.unsigned_integer("repeats", c.repeats));
        s.finish();
        if (c.repeats < 1) Section::fail("evaluation.repeats", "must be >= 1");
    }
    {
        Section s = top.section("paths");
        c.paths.stimulus = s.path("stimulus");
        c.paths.saliency = s.path("saliency");
        c.paths.frames_dir = s.path("frames_dir");
        c.paths.saliency_dir = s.path("saliency_dir");
        c.paths.real_data = s.path("real_data");
        c.paths.output = s.path("output");
        c.paths.errors_output = s.path("errors_output");
        c.paths.targets_output = s.path("targets_output");
        s.finish();
    }
    top.finish();
    return c;
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const std::size_t offset = e.byte > 0 ? std::min<std::size_t>(e.byte - 1, text.size()) : 0;
        std::size_t line = 1;
        std::size_t column = 1;
        for (std::size_t i = 0; i < offset; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError("config: JSON syntax error at line " + std::to_string(line) + ", column " +
                         std::to_string(column) + " (" + e.what() + ")");
    }
}

void apply_override(json& root, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ParameterError("override '" + assignment + "' must look like key.path=value");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    json* node = &root;
    std::size_t pos = 0;
    while (true) {
        const auto dot = key.find('.', pos);
        const std::string part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
        if (part.empty()) throw ParameterError("override '" + assignment + "': empty path component");
        if (!node->is_object()) throw ParameterError("override '" + assignment + "': '" + part + "' has no parent object");
        if (dot == std::string::npos) {
            json value;
            try {
                value = json::parse(raw);
            } catch (const json::parse_error&) {
                value = raw;
            }
            (*node)[part] = std::move(value);
            return;
        }
        node = &(*node)[part];
        if (node->is_null()) *node = json::object();
        pos = dot + 1;
    }
}

}  // namespace

std::string_view run_mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::Velocity: return "velocity";
        case RunMode::MapStatic: return "map_static";
        case RunMode::MapDynamic: return "map_dynamic";
        case RunMode::Remap: return "remap";
        case RunMode::Evaluate: return "evaluate";
        case RunMode::Saliency: return "saliency";
    }
    return "?";
}

RunConfig read_config(std::string_view text) { return read_config(text, {}); }

RunConfig read_config(std::string_view text, const std::vector<std::string>& overrides) {
    json root = parse_json(text);
    if (!root.is_object()) throw ParseError("config: top level must be a JSON object");
    for (const auto& o : overrides) apply_override(root, o);
    return parse(root, nullptr);
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    parse(json::object(), &keys);
    return keys;
}

}  // namespace gazeforge
