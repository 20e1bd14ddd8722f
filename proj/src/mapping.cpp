#include "gazeforge/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gazeforge/error.hpp"

namespace gazeforge {

namespace {

constexpr double kRestoringPull = 0.1;
constexpr int kDistinctTargetDraws = 16;

bool is_movement(MovementLabel l) { return l == MovementLabel::Saccade || l == MovementLabel::SmoothPursuit; }

// Largest coordinate strictly inside [0, extent).
double upper_bound(std::size_t extent) {
    return extent > 0 ? std::nextafter(static_cast<double>(extent), 0.0) : 0.0;
}

Point clamp_to_image(Point p, std::size_t width, std::size_t height) {
    return {std::clamp(p.x, 0.0, upper_bound(width)), std::clamp(p.y, 0.0, upper_bound(height))};
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Label each sample with the movement it belongs to; noise samples take the
// label of the run they interrupt.
std::vector<MovementLabel> underlying_labels(const SampledSignal& signal) {
    const std::size_t n = signal.size();
    std::vector<MovementLabel> out(n, MovementLabel::Fixation);
    std::optional<MovementLabel> last;
    for (std::size_t i = 0; i < n; ++i) {
        const MovementLabel l = signal.samples[i].label;
        if (l != MovementLabel::Noise) last = l;
        out[i] = last.value_or(MovementLabel::Noise);
    }
    std::optional<MovementLabel> next;
    for (std::size_t i = n; i-- > 0;) {
        if (signal.samples[i].label != MovementLabel::Noise) next = signal.samples[i].label;
        if (out[i] == MovementLabel::Noise) out[i] = next.value_or(MovementLabel::Fixation);
    }
    return out;
}

// Velocity used for path stepping: noise samples take the mean of the nearest
// clean neighbours.
std::vector<double> stepping_velocities(const SampledSignal& signal) {
    const std::size_t n = signal.size();
    std::vector<double> v(n, 0.0);
    std::vector<std::optional<double>> before(n), after(n);
    std::optional<double> seen;
    for (std::size_t i = 0; i < n; ++i) {
        before[i] = seen;
        if (signal.samples[i].label != MovementLabel::Noise) seen = signal.samples[i].velocity;
    }
    seen.reset();
    for (std::size_t i = n; i-- > 0;) {
        after[i] = seen;
        if (signal.samples[i].label != MovementLabel::Noise) seen = signal.samples[i].velocity;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (signal.samples[i].label != MovementLabel::Noise) {
            v[i] = signal.samples[i].velocity;
        } else if (before[i] && after[i]) {
            v[i] = 0.5 * (*before[i] + *after[i]);
        } else {
            v[i] = before[i].value_or(after[i].value_or(0.0));
        }
    }
    return v;
}

std::vector<double> sample_intervals(const SampledSignal& signal) {
    const std::size_t n = signal.size();
    std::vector<double> dt(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) dt[i] = signal.samples[i].t - signal.samples[i - 1].t;
    if (n > 1) {
        dt[0] = dt[1];
    } else if (n == 1) {
        dt[0] = signal.samples[0].t > 0.0 ? signal.samples[0].t : 1.0;
    }
    return dt;
}

Point target_point(const Target& t) { return {t.x, t.y}; }

}  // namespace

SceneTargets SceneTargets::static_scene(TargetSet targets) {
    SceneTargets s;
    s.frames.push_back({0.0, std::move(targets)});
    return s;
}

SceneTargets SceneTargets::dynamic_scene(std::vector<TargetSet> per_frame, double frame_rate) {
    if (!(frame_rate > 0.0)) throw ParameterError("mapping.frame_rate must be > 0");
    SceneTargets s;
    s.frame_rate = frame_rate;
    for (std::size_t i = 0; i < per_frame.size(); ++i) {
        s.frames.push_back({static_cast<double>(i) / frame_rate, std::move(per_frame[i])});
    }
    return s;
}

std::size_t SceneTargets::width() const { return frames.empty() ? 0 : frames.front().targets.width; }
std::size_t SceneTargets::height() const { return frames.empty() ? 0 : frames.front().targets.height; }

std::size_t SceneTargets::frame_for(double t) const {
    if (frames.empty()) throw MappingError("scene has no frames");
    auto it = std::lower_bound(frames.begin(), frames.end(), t,
                               [](const SceneFrame& f, double value) { return f.time < value; });
    if (it == frames.begin()) return 0;
    if (it == frames.end()) return frames.size() - 1;
    const auto after = static_cast<std::size_t>(it - frames.begin());
    return (it->time - t) < (t - std::prev(it)->time) ? after : after - 1;
}

void SceneTargets::validate() const {
    if (frames.empty()) throw ParameterError("scene has no frames");
    for (std::size_t f = 0; f < frames.size(); ++f) {
        const auto& set = frames[f].targets;
        if (set.width != width() || set.height != height() || set.width == 0 || set.height == 0) {
            throw ParameterError("scene frame " + std::to_string(f) + ": inconsistent or empty stimulus size");
        }
        if (f > 0 && !(frames[f].time > frames[f - 1].time)) {
            throw ParameterError("scene frame times must be strictly increasing");
        }
        for (const Target& t : set.points) {
            if (!(t.x >= 0.0 && t.x < static_cast<double>(set.width) && t.y >= 0.0 &&
                  t.y < static_cast<double>(set.height))) {
                std::ostringstream os;
                os << "scene frame " << f << ": target (" << t.x << ", " << t.y << ") lies outside the "
                   << set.width << "x" << set.height << " stimulus";
                throw ParameterError(os.str());
            }
        }
    }
}

void MappingParams::validate() const {
    if (!(pixels_per_degree > 0.0)) throw ParameterError("mapping.pixels_per_degree must be > 0");
    if (!(max_path_deviation >= 0.0)) throw ParameterError("mapping.max_path_deviation must be >= 0");
    if (!(fixation_dispersion >= 0.0)) throw ParameterError("mapping.fixation_dispersion must be >= 0");
    if (!(target_jitter_px >= 0.0)) throw ParameterError("mapping.target_jitter_px must be >= 0");
}

std::size_t choose_target(const TargetSet& targets, TargetSelection selection, RandomSource& rng) {
    if (targets.empty()) throw MappingError("choose_target: empty target set");
    double total = 0.0;
    if (selection == TargetSelection::Weighted) {
        for (const Target& t : targets.points) total += std::max(0.0, t.weight);
    }
    if (total <= 0.0) return rng.index(targets.size());

    double u = rng.uniform() * total;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const double w = std::max(0.0, targets.points[i].weight);
        if (w <= 0.0) continue;
        last_positive = i;
        if (u < w) return i;
        u -= w;
    }
    return last_positive;
}

std::vector<Point> fixation_walk(Point center, std::size_t n, double dispersion, RandomSource& rng) {
    if (n < 1) throw ParameterError("fixation_walk: n must be >= 1");
    if (!(dispersion >= 0.0)) throw ParameterError("fixation_walk: dispersion must be >= 0");
    std::vector<Point> out;
    out.reserve(n);
    Point cur = center;
    out.push_back(cur);
    for (std::size_t i = 1; i < n; ++i) {
        const double theta = 2.0 * std::numbers::pi * rng.uniform();
        const double len = std::min(std::abs(dispersion / 3.0 * rng.normal()), dispersion / 2.0);
        Point next{cur.x + len * std::cos(theta) + kRestoringPull * (center.x - cur.x),
                   cur.y + len * std::sin(theta) + kRestoringPull * (center.y - cur.y)};
        const double r = distance(next, center);
        if (r > dispersion) {
            const double s = r > 0.0 ? dispersion / r : 0.0;
            next = {center.x + (next.x - center.x) * s, center.y + (next.y - center.y) * s};
        }
        cur = next;
        out.push_back(cur);
    }
    return out;
}

GazeTrace map_to_gaze(const SampledSignal& signal, const SceneTargets& scene, const MappingParams& params,
                      RandomSource& rng, MappingLog* log) {
    if (signal.empty()) throw ParameterError("map_to_gaze: empty signal");
    params.validate();
    scene.validate();
    for (std::size_t i = 1; i < signal.size(); ++i) {
        if (!(signal.samples[i].t > signal.samples[i - 1].t)) {
            throw ParameterError("map_to_gaze: timestamps must be strictly increasing (sample " + std::to_string(i) +
                                 ")");
        }
    }

    const std::size_t width = scene.width();
    const std::size_t height = scene.height();
    GazeTrace out{width, height, params.pixels_per_degree, {}};
    out.samples.resize(signal.size());
    for (std::size_t i = 0; i < signal.size(); ++i) {
        const auto& s = signal.samples[i];
        out.samples[i] = {s.t, 0.0, 0.0, s.velocity, s.label};
    }

    const std::vector<MovementLabel> labels = underlying_labels(signal);
    const std::vector<double> velocity = stepping_velocities(signal);
    const std::vector<double> dt = sample_intervals(signal);

    std::optional<Point> current;
    std::optional<Target> landing;  // target reached by the previous movement

    for (const LabelRun& run : label_runs(labels, [](MovementLabel l) { return l; })) {
        const double end_time = signal.samples[run.end - 1].t;
        const std::size_t frame = scene.frame_for(end_time);
        const TargetSet& targets = scene.frames[frame].targets;
        if (targets.empty()) {
            std::ostringstream os;
            os << "no fixation targets available at t=" << end_time << " s (frame " << frame << ")";
            throw MappingError(os.str());
        }
        MappedRun entry{run.label, run.begin, run.end, frame, {}, {}};

        if (!is_movement(run.label)) {
            const Target center = landing ? *landing : targets.points[choose_target(targets, params.selection, rng)];
            landing.reset();
            const std::vector<Point> walk =
                fixation_walk(target_point(center), run.length(), params.fixation_dispersion, rng);
            for (std::size_t j = 0; j < walk.size(); ++j) {
                const Point p = clamp_to_image(walk[j], width, height);
                out.samples[run.begin + j].x = p.x;
                out.samples[run.begin + j].y = p.y;
            }
            current = Point{out.samples[run.end - 1].x, out.samples[run.end - 1].y};
            entry.start = walk.front();
            entry.target = center;
        } else {
            const Point start = current ? *current
                                        : target_point(targets.points[choose_target(targets, params.selection, rng)]);
            Target goal = targets.points[choose_target(targets, params.selection, rng)];
            for (int attempt = 1; attempt < kDistinctTargetDraws && target_point(goal) == start && targets.size() > 1;
                 ++attempt) {
                goal = targets.points[choose_target(targets, params.selection, rng)];
            }
            const Point end = target_point(goal);

            std::vector<double> travelled(run.length(), 0.0);
            double total = 0.0;
            for (std::size_t j = 0; j < run.length(); ++j) {
                const std::size_t i = run.begin + j;
                total += velocity[i] * dt[i] * params.pixels_per_degree;
                travelled[j] = total;
            }

            const double dx = end.x - start.x;
            const double dy = end.y - start.y;
            const double len = std::hypot(dx, dy);
            const Point normal = len > 0.0 ? Point{-dy / len, dx / len} : Point{0.0, 0.0};

            for (std::size_t j = 0; j < run.length(); ++j) {
                auto& s = out.samples[run.begin + j];
                if (j + 1 == run.length()) {
                    s.x = end.x;
                    s.y = end.y;
                    break;
                }
                const double progress = total > 0.0 ? travelled[j] / total
                                                    : static_cast<double>(j + 1) / static_cast<double>(run.length());
                const double reach = params.max_path_deviation * 2.0 * std::min(progress, 1.0 - progress);
                double offset = 0.0;
                if (reach > 0.0) {
                    offset = params.deviation == DistKind::Uniform
                                 ? sample_bounded(BoundedDistribution::uniform(-reach, reach), rng)
                                 : sample_bounded(BoundedDistribution::normal(-reach, reach, reach / 3.0), rng);
                }
                const Point p = clamp_to_image(
                    {start.x + progress * dx + offset * normal.x, start.y + progress * dy + offset * normal.y}, width,
                    height);
                s.x = p.x;
                s.y = p.y;
            }
            current = end;
            landing = goal;
            entry.start = start;
            entry.target = goal;
        }
        if (log != nullptr) log->push_back(entry);
    }
    return out;
}

std::vector<double> gaze_velocities(const GazeTrace& trace) {
    if (!(trace.pixels_per_degree > 0.0)) throw ParameterError("gaze_velocities: pixels_per_degree must be > 0");
    const std::size_t n = trace.size();
    std::vector<double> v(n, 0.0);
    if (n < 2) return v;
    for (std::size_t i = 1; i < n; ++i) {
        if (!(trace.samples[i].t > trace.samples[i - 1].t)) {
            throw ParameterError("gaze_velocities: timestamps must be strictly increasing (sample " +
                                 std::to_string(i) + ")");
        }
    }
    auto speed = [&](std::size_t a, std::size_t b) {
        const auto& p = trace.samples[a];
        const auto& q = trace.samples[b];
        return std::hypot(q.x - p.x, q.y - p.y) / (q.t - p.t) / trace.pixels_per_degree;
    };
    v[0] = speed(0, 1);
    v[n - 1] = speed(n - 2, n - 1);
    for (std::size_t i = 1; i + 1 < n; ++i) v[i] = speed(i - 1, i + 1);
    return v;
}

TargetSet fixation_centroids(const GazeTrace& trace) {
    TargetSet out{trace.width, trace.height, {}};
    for (const LabelRun& run : label_runs(trace.samples, [](const GazeSample& s) { return s.label; })) {
        if (run.label != MovementLabel::Fixation) continue;
        double sx = 0.0;
        double sy = 0.0;
        for (std::size_t i = run.begin; i < run.end; ++i) {
            sx += trace.samples[i].x;
            sy += trace.samples[i].y;
        }
        const double n = static_cast<double>(run.length());
        out.points.push_back({sx / n, sy / n, 1.0});
    }
    return out;
}

GazeTrace remap_real(const GazeTrace& real, RemapMode mode, const SceneTargets* scene, const MappingParams& params,
                     RandomSource& rng, MappingLog* log) {
    if (real.empty()) throw ParameterError("remap_real: empty trace");
    params.validate();
    const bool labelled = std::any_of(real.samples.begin(), real.samples.end(),
                                      [](const GazeSample& s) { return s.label != MovementLabel::Noise; });
    if (!labelled) throw ParameterError("remap_real: trace carries no movement labels");

    SceneTargets targets;
    if (mode == RemapMode::SameStimulus) {
        TargetSet centres = fixation_centroids(real);
        if (centres.empty()) throw MappingError("remap_real: no fixations in the input trace to use as targets");
        targets = SceneTargets::static_scene(std::move(centres));
    } else {
        if (scene == nullptr) throw ParameterError("remap_real: new-stimulus mode needs scene targets");
        targets = *scene;
    }

    GazeTrace speed_source = real;
    speed_source.pixels_per_degree = params.pixels_per_degree;
    const std::vector<double> velocity = gaze_velocities(speed_source);

    std::vector<double> dt(real.size(), 0.0);
    for (std::size_t i = 1; i < real.size(); ++i) dt[i] = real.samples[i].t - real.samples[i - 1].t;
    if (real.size() > 1) dt[0] = dt[1];

    std::vector<LabelRun> runs = label_runs(real.samples, [](const GazeSample& s) { return s.label; });
    for (std::size_t i = runs.size(); i > 1; --i) std::swap(runs[i - 1], runs[rng.index(i)]);

    SampledSignal signal;
    signal.samples.reserve(real.size());
    double t = real.samples.front().t;
    bool first = true;
    for (const LabelRun& run : runs) {
        for (std::size_t i = run.begin; i < run.end; ++i) {
            if (!first) t += dt[i];
            first = false;
            signal.samples.push_back({t, velocity[i], real.samples[i].label});
        }
    }
    return map_to_gaze(signal, targets, params, rng, log);
}

}  // namespace gazeforge
