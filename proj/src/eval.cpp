#include "gazeforge/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "gazeforge/error.hpp"
#include "gazeforge/generators.hpp"

namespace gazeforge {

namespace {

// Skewness search range. 2 is the Gamma shape k=1 (peak on the first sample);
// the lower end puts the peak as late as the truncated support allows.
constexpr double kMinSkewness = 0.02;
constexpr double kMaxSkewness = 2.0;
constexpr int kBisectionSteps = 60;
// Consistency bounds for observed-std fluctuation, in units of the std.
constexpr double kStdBoundSpan = 10.0;

std::size_t argmax(const std::vector<double>& v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::size_t index_gap(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

BoundedDistribution observed_fluctuation(double sd) {
    if (sd <= 0.0) return BoundedDistribution::fixed(0.0);
    return BoundedDistribution::normal(-kStdBoundSpan * sd, kStdBoundSpan * sd, sd);
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double f = pos - static_cast<double>(lo);
    return sorted[lo] + f * (sorted[hi] - sorted[lo]);
}

SimulatedSegment simulate_saccade(const SegmentDescriptor& d, const SaccadeObserved& obs, double base_rate) {
    SimulatedSegment out;
    const std::size_t n = d.length;
    const std::size_t goal = obs.peak_index;
    auto peak_at = [&](double s) { return argmax(saccade_shape(n, obs.peak_velocity, s)); };

    double lo = kMinSkewness;  // latest attainable peak
    double hi = kMaxSkewness;  // peak on the first sample
    double best = hi;
    std::size_t best_gap = index_gap(peak_at(hi), goal);

    if (n > 1 && best_gap != 0) {
        const std::size_t latest = peak_at(lo);
        if (latest <= goal) {
            best = lo;
            best_gap = goal - latest;
        } else {
            for (int step = 0; step < kBisectionSteps && best_gap != 0; ++step) {
                const double mid = 0.5 * (lo + hi);
                const std::size_t at = peak_at(mid);
                if (index_gap(at, goal) < best_gap) {
                    best = mid;
                    best_gap = index_gap(at, goal);
                }
                if (at > goal) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
    }

    const std::vector<double> shape = saccade_shape(n, obs.peak_velocity, best);
    out.profile.base_rate = base_rate;
    out.profile.samples.reserve(n);
    for (double v : shape) out.profile.samples.push_back({v, MovementLabel::Saccade});
    out.skewness = best;
    out.fallback = best_gap > 1;
    return out;
}

}  // namespace

std::vector<SegmentDescriptor> extract_descriptors(std::span<const VelocitySample> samples) {
    std::vector<SegmentDescriptor> out;
    for (const LabelRun& run : label_runs(samples, [](const VelocitySample& s) { return s.label; })) {
        if (run.label == MovementLabel::Noise) continue;
        const auto values = samples.subspan(run.begin, run.length());
        SegmentDescriptor d{run.label, run.begin, run.length(), {}};

        if (run.label == MovementLabel::Saccade) {
            const auto top = std::max_element(values.begin(), values.end(),
                                              [](const auto& a, const auto& b) { return a.velocity < b.velocity; });
            d.params = SaccadeObserved{top->velocity, static_cast<std::size_t>(top - values.begin())};
        } else {
            const double n = static_cast<double>(values.size());
            double mean = 0.0;
            for (const auto& s : values) mean += s.velocity;
            mean /= n;
            double ss = 0.0;
            for (const auto& s : values) ss += (s.velocity - mean) * (s.velocity - mean);
            const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
            if (run.label == MovementLabel::Fixation) {
                d.params = FixationObserved{mean, sd};
            } else {
                d.params = PursuitObserved{mean, sd};
            }
        }
        out.push_back(d);
    }
    return out;
}

SimulatedSegment simulate_from_descriptor(const SegmentDescriptor& d, RandomSource& rng, double base_rate) {
    if (d.length < 1) throw ParameterError("segment descriptor: length must be >= 1");

    if (const auto* fix = std::get_if<FixationObserved>(&d.params)) {
        return {render_fixation(d.length, fix->mean_velocity, observed_fluctuation(fix->std), base_rate, rng), false,
                0.0};
    }
    if (const auto* sp = std::get_if<PursuitObserved>(&d.params)) {
        const PursuitDraw draw{d.length, 0.0, sp->mean_velocity, PursuitTrend::Constant, sp->mean_velocity};
        return {render_pursuit(draw, observed_fluctuation(sp->std), base_rate, rng), false, 0.0};
    }
    const auto& sac = std::get<SaccadeObserved>(d.params);
    if (sac.peak_index >= d.length) throw ParameterError("segment descriptor: peak_index must be < length");
    return simulate_saccade(d, sac, base_rate);
}

std::vector<double> squared_error(std::span<const double> sim, std::span<const double> real) {
    if (sim.size() != real.size()) {
        throw ParameterError("squared_error: length mismatch (" + std::to_string(sim.size()) + " vs " +
                             std::to_string(real.size()) + ")");
    }
    std::vector<double> out(sim.size());
    for (std::size_t i = 0; i < sim.size(); ++i) {
        const double d = sim[i] - real[i];
        out[i] = d * d;
    }
    return out;
}

ErrorStats summarize(std::vector<double> values) {
    if (values.empty()) throw ParameterError("summarize: no values");
    std::sort(values.begin(), values.end());
    ErrorStats s;
    s.count = values.size();
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    s.median = quantile_sorted(values, 0.5);
    s.q1 = quantile_sorted(values, 0.25);
    s.q3 = quantile_sorted(values, 0.75);
    s.min = values.front();
    s.max = values.back();
    const double iqr = s.q3 - s.q1;
    const double low_fence = s.q1 - 1.5 * iqr;
    const double high_fence = s.q3 + 1.5 * iqr;
    s.whisker_low = *std::lower_bound(values.begin(), values.end(), low_fence);
    s.whisker_high = *std::prev(std::upper_bound(values.begin(), values.end(), high_fence));
    return s;
}

ErrorSummary evaluate_dataset(std::span<const VelocitySample> real, std::size_t repeats, RandomSource& rng) {
    if (repeats < 1) throw ParameterError("evaluation.repeats must be >= 1");
    const std::uint64_t stream = rng.next_u64();
    ErrorSummary summary;

    const std::vector<SegmentDescriptor> descriptors = extract_descriptors(real);
    for (std::size_t si = 0; si < descriptors.size(); ++si) {
        const SegmentDescriptor& d = descriptors[si];
        std::vector<double> observed(d.length);
        for (std::size_t i = 0; i < d.length; ++i) observed[i] = real[d.begin + i].velocity;

        auto& pool = summary.pooled[d.label];
        for (std::size_t r = 0; r < repeats; ++r) {
            RandomSource child = RandomSource::derived(stream, si, r);
            const SimulatedSegment sim = simulate_from_descriptor(d, child);
            if (sim.fallback) ++summary.fallbacks;
            std::vector<double> simulated(d.length);
            for (std::size_t i = 0; i < d.length; ++i) simulated[i] = sim.profile.samples[i].velocity;
            const std::vector<double> err = squared_error(simulated, observed);
            pool.insert(pool.end(), err.begin(), err.end());
        }
    }
    for (const auto& [label, values] : summary.pooled) summary.stats[label] = summarize(values);
    return summary;
}

}  // namespace gazeforge
