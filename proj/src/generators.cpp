#include "gazeforge/generators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "gazeforge/error.hpp"

namespace gazeforge {

namespace {

constexpr int kMaxOnsetDraws = 100;

void require(bool ok, const std::string& message) {
    if (!ok) throw ParameterError(message);
}

void check_rate(double base_rate) {
    require(std::isfinite(base_rate) && base_rate > 0.0, "base_rate must be > 0");
}

std::size_t checked_samples(double seconds, double base_rate, const char* field) {
    const std::size_t n = segment_samples(seconds, base_rate);
    if (n < 1) {
        std::ostringstream os;
        os << field << ": drawn duration " << seconds << " s is shorter than one sample at " << base_rate << " Hz";
        throw ParameterError(os.str());
    }
    return n;
}

}  // namespace

void FixationParams::validate() const {
    duration.validate("fixation.duration");
    consistency.validate("fixation.consistency");
    require(duration.min > 0.0, "fixation.duration: min must be > 0");
    require(std::isfinite(base_velocity) && base_velocity >= 0.0, "fixation.base_velocity must be >= 0");
}

void SaccadeParams::validate() const {
    duration.validate("saccade.duration");
    peak_velocity.validate("saccade.peak_velocity");
    skewness.validate("saccade.skewness");
    consistency.validate("saccade.consistency");
    require(duration.min > 0.0, "saccade.duration: min must be > 0");
    require(peak_velocity.min >= 0.0, "saccade.peak_velocity: min must be >= 0");
    require(skewness.min > 0.0, "saccade.skewness: min must be > 0");
}

void PursuitParams::validate() const {
    duration.validate("pursuit.duration");
    velocity.validate("pursuit.velocity");
    onset_duration.validate("pursuit.onset_duration");
    trend_end_velocity.validate("pursuit.trend_end_velocity");
    consistency.validate("pursuit.consistency");
    require(duration.min > 0.0, "pursuit.duration: min must be > 0");
    require(velocity.min >= 0.0, "pursuit.velocity: min must be >= 0");
    require(trend_end_velocity.min >= 0.0, "pursuit.trend_end_velocity: min must be >= 0");
    require(onset_duration.min >= 0.0, "pursuit.onset_duration: min must be >= 0");
    require(onset_duration.min < duration.max, "pursuit.onset_duration: min must be below pursuit.duration max");
}

double draw_perturbation(const BoundedDistribution& consistency, RandomSource& rng) {
    if (consistency.min >= 0.0) {
        const BoundedDistribution centred{consistency.kind, -consistency.max, consistency.max, consistency.std};
        return sample_bounded(centred, rng);
    }
    return sample_bounded(consistency, rng);
}

std::size_t segment_samples(double seconds, double rate) {
    const double n = std::round(seconds * rate);
    return n <= 0.0 ? 0 : static_cast<std::size_t>(n);
}

VelocityProfile render_fixation(std::size_t n, double base_velocity, const BoundedDistribution& consistency,
                                double base_rate, RandomSource& rng) {
    check_rate(base_rate);
    VelocityProfile out{base_rate, {}};
    out.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = std::max(0.0, base_velocity + draw_perturbation(consistency, rng));
        out.samples.push_back({v, MovementLabel::Fixation});
    }
    return out;
}

VelocityProfile gen_fixation(const FixationParams& p, double base_rate, RandomSource& rng) {
    p.validate();
    check_rate(base_rate);
    const double seconds = sample_bounded(p.duration, rng);
    const std::size_t n = checked_samples(seconds, base_rate, "fixation.duration");
    return render_fixation(n, p.base_velocity, p.consistency, base_rate, rng);
}

double gamma_shape_for_skewness(double skewness) {
    if (!(skewness > 0.0) || !std::isfinite(skewness)) {
        throw ParameterError("saccade skewness must be finite and > 0, got " + std::to_string(skewness));
    }
    return 4.0 / (skewness * skewness);
}

std::vector<double> saccade_shape(std::size_t n, double peak, double skewness) {
    const double k = gamma_shape_for_skewness(skewness);
    if (n == 0) return {};
    if (n == 1) return {peak};

    double support = 0.0;
    try {
        support = boost::math::gamma_p_inv(k, 1.0 - kSaccadeTailMass);
    } catch (const std::exception& e) {
        throw NumericError("saccade skewness " + std::to_string(skewness) + ": Gamma quantile failed (" + e.what() +
                           ")");
    }
    if (!std::isfinite(support) || support <= 0.0) {
        throw NumericError("saccade skewness " + std::to_string(skewness) + ": non-finite Gamma support");
    }

    // Log density up to a constant; the constant cancels in the normalisation.
    std::vector<double> log_density(n);
    const double step = support / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (static_cast<double>(i) + 0.5) * step;
        log_density[i] = (k - 1.0) * std::log(x) - x;
    }
    const double top = *std::max_element(log_density.begin(), log_density.end());

    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = peak * std::exp(log_density[i] - top);
        if (!std::isfinite(v[i])) {
            throw NumericError("saccade skewness " + std::to_string(skewness) + ": non-finite profile value");
        }
    }
    return v;
}

SaccadeDraw draw_saccade(const SaccadeParams& p, double base_rate, RandomSource& rng) {
    p.validate();
    check_rate(base_rate);
    SaccadeDraw d;
    d.duration = sample_bounded(p.duration, rng);
    d.samples = checked_samples(d.duration, base_rate, "saccade.duration");
    const double u_len = normalized_position(p.duration, d.duration);
    const double u_vel = normalized_position(p.peak_velocity, sample_bounded(p.peak_velocity, rng));
    d.peak = p.peak_velocity.min + u_len * u_vel * p.peak_velocity.width();
    d.skewness = sample_bounded(p.skewness, rng);
    return d;
}

VelocityProfile render_saccade(const SaccadeDraw& draw, const BoundedDistribution& consistency, double peak_cap,
                               double base_rate, RandomSource& rng) {
    check_rate(base_rate);
    const std::vector<double> shape = saccade_shape(draw.samples, draw.peak, draw.skewness);
    VelocityProfile out{base_rate, {}};
    out.samples.reserve(shape.size());
    if (shape.empty()) return out;

    const auto apex = static_cast<std::size_t>(std::max_element(shape.begin(), shape.end()) - shape.begin());
    const double cap = std::max(peak_cap, draw.peak);
    for (std::size_t i = 0; i < shape.size(); ++i) {
        double v = std::clamp(shape[i] + draw_perturbation(consistency, rng), 0.0, cap);
        if (i == apex) v = draw.peak;
        out.samples.push_back({v, MovementLabel::Saccade});
    }
    return out;
}

VelocityProfile gen_saccade(const SaccadeParams& p, double base_rate, RandomSource& rng) {
    const SaccadeDraw d = draw_saccade(p, base_rate, rng);
    return render_saccade(d, p.consistency, p.peak_velocity.max, base_rate, rng);
}

double pursuit_onset_velocity(double t, double onset, double plateau) {
    if (onset <= 0.0) return plateau;
    // Logistic with steepness 2 ln 99 / onset, written in base 99 so the
    // midpoint and the onset end come out exact.
    const double e = std::pow(99.0, 2.0 * t / onset - 1.0);
    if (!std::isfinite(e)) return plateau;
    return plateau * (e / (1.0 + e));
}

PursuitDraw draw_pursuit(const PursuitParams& p, double base_rate, RandomSource& rng) {
    p.validate();
    check_rate(base_rate);
    PursuitDraw d;
    const double duration = sample_bounded(p.duration, rng);
    d.samples = checked_samples(duration, base_rate, "pursuit.duration");

    int attempts = 0;
    do {
        if (attempts++ == kMaxOnsetDraws) {
            throw ParameterError("pursuit.onset_duration: no draw shorter than the pursuit duration after " +
                                 std::to_string(kMaxOnsetDraws) + " attempts");
        }
        d.onset = sample_bounded(p.onset_duration, rng);
    } while (d.onset >= duration);

    d.plateau = sample_bounded(p.velocity, rng);
    d.trend = p.trend;
    d.trend_end = d.plateau;
    if (p.trend != PursuitTrend::Constant) {
        d.trend_end = sample_bounded(p.trend_end_velocity, rng);
        const bool rising = d.trend_end > d.plateau;
        if ((p.trend == PursuitTrend::LinearIncreasing && !rising) ||
            (p.trend == PursuitTrend::LinearDecreasing && rising)) {
            std::swap(d.plateau, d.trend_end);
        }
    }
    return d;
}

VelocityProfile render_pursuit(const PursuitDraw& draw, const BoundedDistribution& consistency, double base_rate,
                               RandomSource& rng) {
    check_rate(base_rate);
    const std::size_t n = draw.samples;
    std::size_t onset_samples = 0;
    while (onset_samples < n && static_cast<double>(onset_samples) / base_rate < draw.onset) ++onset_samples;
    const std::size_t trend_samples = n - onset_samples;

    VelocityProfile out{base_rate, {}};
    out.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = draw.plateau;
        if (i < onset_samples) {
            v = pursuit_onset_velocity(static_cast<double>(i) / base_rate, draw.onset, draw.plateau);
        } else if (draw.trend != PursuitTrend::Constant && trend_samples > 1) {
            const double frac = static_cast<double>(i - onset_samples) / static_cast<double>(trend_samples - 1);
            v = draw.plateau + (draw.trend_end - draw.plateau) * frac;
        }
        v = std::max(0.0, v + draw_perturbation(consistency, rng));
        out.samples.push_back({v, MovementLabel::SmoothPursuit});
    }
    return out;
}

VelocityProfile gen_pursuit(const PursuitParams& p, double base_rate, RandomSource& rng) {
    const PursuitDraw d = draw_pursuit(p, base_rate, rng);
    return render_pursuit(d, p.consistency, base_rate, rng);
}

VelocityProfile assemble(const std::vector<MovementLabel>& sequence, const FixationParams& fix,
                         const SaccadeParams& sac, const PursuitParams& sp, double base_rate, RandomSource& rng) {
    check_rate(base_rate);
    if (sequence.empty()) throw ParameterError("assemble: empty movement sequence");

    VelocityProfile out{base_rate, {}};
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        const std::string where = "segment " + std::to_string(i) + " (" + std::string(label_name(sequence[i])) + "): ";
        try {
            switch (sequence[i]) {
                case MovementLabel::Fixation: out.append(gen_fixation(fix, base_rate, rng)); break;
                case MovementLabel::Saccade: out.append(gen_saccade(sac, base_rate, rng)); break;
                case MovementLabel::SmoothPursuit: out.append(gen_pursuit(sp, base_rate, rng)); break;
                case MovementLabel::Noise: throw ParameterError("noise is not a movement type");
            }
        } catch (const ParameterError& e) {
            throw ParameterError(where + e.what());
        } catch (const NumericError& e) {
            throw NumericError(where + e.what());
        }
    }
    return out;
}

}  // namespace gazeforge
