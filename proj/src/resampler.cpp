#include "gazeforge/resampler.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "gazeforge/error.hpp"

namespace gazeforge {

namespace {

// Relative slack when comparing accumulated clock values against sample
// stamps, so that k additions of 1/r land on the k-th base stamp.
constexpr double kClockSlack = 1e-9;

MovementLabel majority_label(const VelocityProfile& profile, std::size_t lo, std::size_t hi) {
    std::array<std::size_t, 4> votes{0, 0, 0, 0};
    for (std::size_t i = lo; i < hi; ++i) ++votes[static_cast<std::size_t>(profile.samples[i].label)];
    const MovementLabel latest = profile.samples[hi - 1].label;
    std::size_t best = votes[static_cast<std::size_t>(latest)];
    MovementLabel winner = latest;
    for (std::size_t l = 0; l < votes.size(); ++l) {
        if (votes[l] > best) {
            best = votes[l];
            winner = static_cast<MovementLabel>(l);
        }
    }
    return winner;
}

}  // namespace

void RateSpec::validate(double base_rate) const {
    rate.validate("sampling.rate");
    if (!(rate.min > 0.0)) throw ParameterError("sampling.rate: min must be > 0");
    if (rate.max > base_rate * (1.0 + kClockSlack)) {
        std::ostringstream os;
        os << "sampling.rate: max " << rate.max << " Hz exceeds the base rate " << base_rate << " Hz";
        throw ParameterError(os.str());
    }
}

SampledSignal resample(const VelocityProfile& profile, const RateSpec& spec, RandomSource& rng) {
    if (profile.empty()) throw ParameterError("resample: empty profile");
    if (!(profile.base_rate > 0.0)) throw ParameterError("resample: base_rate must be > 0");
    spec.validate(profile.base_rate);

    const double duration = profile.duration();
    const std::size_t n = profile.size();
    const bool constant = spec.rate.min == spec.rate.max;

    SampledSignal out;
    out.samples.reserve(static_cast<std::size_t>(duration * spec.rate.max) + 2);

    double t = 0.0;
    std::size_t lo = 0;
    for (std::size_t k = 1;; ++k) {
        const double r = sample_bounded(spec.rate, rng);
        // A constant rate is stamped as k/r to avoid accumulating rounding.
        t = constant ? static_cast<double>(k) / r : t + 1.0 / r;
        if (t > duration * (1.0 + kClockSlack)) break;

        const double stamp = std::floor(t * profile.base_rate * (1.0 + kClockSlack));
        const std::size_t hi = std::min(n, static_cast<std::size_t>(stamp));
        if (hi <= lo) {
            throw NumericError("resample: empty averaging window at t=" + std::to_string(t) + " s");
        }
        double sum = 0.0;
        for (std::size_t i = lo; i < hi; ++i) sum += profile.samples[i].velocity;
        out.samples.push_back({t, sum / static_cast<double>(hi - lo), majority_label(profile, lo, hi)});
        lo = hi;
    }
    return out;
}

}  // namespace gazeforge
