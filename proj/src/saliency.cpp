#include "gazeforge/saliency.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>

#include <fftw3.h>

#include "gazeforge/error.hpp"

namespace gazeforge {

namespace {

using Complex = std::complex<double>;

constexpr std::size_t kMinImageSide = 8;
constexpr double kAmplitudeFloor = 1e-10;  // relative to the total absolute intensity
constexpr double kNormalizeGuard = 1e-12;

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

void fft2d(std::vector<Complex>& data, std::size_t width, std::size_t height, int direction) {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan = nullptr;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_2d(static_cast<int>(height), static_cast<int>(width), buf, buf, direction,
                                FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw NumericError("spectral_residual: FFT planning failed");
    fftw_execute(plan);
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
}

// One-dimensional resampling of `n_in` values (stride apart) into `n_out`.
void resample_line(const double* in, std::size_t n_in, std::size_t in_stride, double* out, std::size_t n_out,
                   std::size_t out_stride) {
    const double scale = static_cast<double>(n_in) / static_cast<double>(n_out);
    if (n_out < n_in) {
        // Area average over [j*scale, (j+1)*scale).
        for (std::size_t j = 0; j < n_out; ++j) {
            const double a = static_cast<double>(j) * scale;
            const double b = a + scale;
            double acc = 0.0;
            for (auto i = static_cast<std::size_t>(a); i < n_in && static_cast<double>(i) < b; ++i) {
                const double lo = std::max(a, static_cast<double>(i));
                const double hi = std::min(b, static_cast<double>(i + 1));
                acc += (hi - lo) * in[i * in_stride];
            }
            out[j * out_stride] = acc / scale;
        }
        return;
    }
    for (std::size_t j = 0; j < n_out; ++j) {
        const double src = std::clamp((static_cast<double>(j) + 0.5) * scale - 0.5, 0.0,
                                      static_cast<double>(n_in - 1));
        const auto i0 = static_cast<std::size_t>(src);
        const std::size_t i1 = std::min(i0 + 1, n_in - 1);
        const double f = src - static_cast<double>(i0);
        out[j * out_stride] = (1.0 - f) * in[i0 * in_stride] + f * in[i1 * in_stride];
    }
}

Grid smooth_binomial(const Grid& g) {
    static constexpr std::array<double, 3> k{0.25, 0.5, 0.25};
    auto clampi = [](std::ptrdiff_t v, std::size_t n) {
        return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(v, 0, static_cast<std::ptrdiff_t>(n) - 1));
    };
    Grid tmp(g.width, g.height);
    for (std::size_t y = 0; y < g.height; ++y) {
        for (std::size_t x = 0; x < g.width; ++x) {
            double acc = 0.0;
            for (int d = -1; d <= 1; ++d) acc += k[d + 1] * g.at(clampi(static_cast<std::ptrdiff_t>(x) + d, g.width), y);
            tmp.at(x, y) = acc;
        }
    }
    Grid out(g.width, g.height);
    for (std::size_t y = 0; y < g.height; ++y) {
        for (std::size_t x = 0; x < g.width; ++x) {
            double acc = 0.0;
            for (int d = -1; d <= 1; ++d) acc += k[d + 1] * tmp.at(x, clampi(static_cast<std::ptrdiff_t>(y) + d, g.height));
            out.at(x, y) = acc;
        }
    }
    return out;
}

}  // namespace

Grid resize(const Grid& image, std::size_t width, std::size_t height) {
    if (image.empty() || width == 0 || height == 0) throw ParameterError("resize: empty image or target size");
    if (image.width == width && image.height == height) return image;
    Grid horizontal(width, image.height);
    for (std::size_t y = 0; y < image.height; ++y) {
        resample_line(&image.values[y * image.width], image.width, 1, &horizontal.values[y * width], width, 1);
    }
    Grid out(width, height);
    for (std::size_t x = 0; x < width; ++x) {
        resample_line(&horizontal.values[x], image.height, width, &out.values[x], height, width);
    }
    return out;
}

SaliencyMap spectral_residual_raw(const Grid& image) {
    if (image.width < kMinImageSide || image.height < kMinImageSide) {
        throw ParameterError("spectral_residual: image must be at least 8x8 px");
    }
    if (!std::all_of(image.values.begin(), image.values.end(), [](double v) { return std::isfinite(v); })) {
        throw ParameterError("spectral_residual: image contains non-finite values");
    }

    const std::size_t w = kSpectralWidth;
    const auto h = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(static_cast<double>(kSpectralWidth * image.height) /
                                                static_cast<double>(image.width))));
    const Grid small = resize(image, w, h);
    const std::size_t n = w * h;

    std::vector<Complex> spectrum(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        spectrum[i] = small.values[i];
        total += std::abs(small.values[i]);
    }
    fft2d(spectrum, w, h, FFTW_FORWARD);

    const double floor = total > 0.0 ? kAmplitudeFloor * total : std::numeric_limits<double>::min();
    std::vector<double> log_amp(n);
    for (std::size_t i = 0; i < n; ++i) log_amp[i] = std::log(std::max(std::abs(spectrum[i]), floor));

    // Residual = log amplitude minus its circular 3x3 box average.
    std::vector<Complex> residual(n, Complex{0.0, 0.0});
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const std::size_t i = y * w + x;
            const double amp = std::abs(spectrum[i]);
            if (i == 0 || amp <= floor) continue;
            double box = 0.0;
            for (std::size_t dy = 0; dy < 3; ++dy) {
                for (std::size_t dx = 0; dx < 3; ++dx) {
                    box += log_amp[((y + h + dy - 1) % h) * w + (x + w + dx - 1) % w];
                }
            }
            residual[i] = std::exp(log_amp[i] - box / 9.0) * (spectrum[i] / amp);
        }
    }
    fft2d(residual, w, h, FFTW_BACKWARD);

    Grid raw(w, h);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) raw.values[i] = std::norm(residual[i] * inv_n);

    return resize(smooth_binomial(raw), image.width, image.height);
}

SaliencyMap spectral_residual(const Grid& image) {
    SaliencyMap map = spectral_residual_raw(image);
    const double top = *std::max_element(map.values.begin(), map.values.end());
    if (top > kNormalizeGuard) {
        for (double& v : map.values) v = std::clamp(v / top, 0.0, 1.0);
    } else {
        std::fill(map.values.begin(), map.values.end(), 0.0);
    }
    return map;
}

TargetSet local_maxima(const SaliencyMap& map, double min_distance, double threshold) {
    if (!(min_distance >= 0.0)) throw ParameterError("local_maxima: min_distance must be >= 0");
    TargetSet out{map.width, map.height, {}};

    std::vector<std::size_t> candidates;
    for (std::size_t y = 0; y < map.height; ++y) {
        for (std::size_t x = 0; x < map.width; ++x) {
            const double v = map.at(x, y);
            if (v < threshold) continue;
            bool peak = true;
            for (int dy = -1; dy <= 1 && peak; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const auto nx = static_cast<std::ptrdiff_t>(x) + dx;
                    const auto ny = static_cast<std::ptrdiff_t>(y) + dy;
                    if (nx < 0 || ny < 0 || nx >= static_cast<std::ptrdiff_t>(map.width) ||
                        ny >= static_cast<std::ptrdiff_t>(map.height)) {
                        continue;
                    }
                    if (!(v > map.at(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny)))) {
                        peak = false;
                        break;
                    }
                }
            }
            if (peak) candidates.push_back(y * map.width + x);
        }
    }

    std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
        return map.values[a] > map.values[b];
    });

    const double min_d2 = min_distance * min_distance;
    for (std::size_t idx : candidates) {
        const Target t{static_cast<double>(idx % map.width), static_cast<double>(idx / map.width), map.values[idx]};
        const bool crowded = std::any_of(out.points.begin(), out.points.end(), [&](const Target& k) {
            const double dx = k.x - t.x;
            const double dy = k.y - t.y;
            return dx * dx + dy * dy < min_d2;
        });
        if (!crowded) out.points.push_back(t);
    }
    return out;
}

TargetSet jitter_targets(const TargetSet& targets, double radius, RandomSource& rng) {
    if (!(radius >= 0.0)) throw ParameterError("jitter_targets: radius must be >= 0");
    TargetSet out{targets.width, targets.height, {}};
    out.points.reserve(2 * targets.size());
    const double max_x = targets.width > 0 ? static_cast<double>(targets.width - 1) : 0.0;
    const double max_y = targets.height > 0 ? static_cast<double>(targets.height - 1) : 0.0;
    for (const Target& t : targets.points) {
        out.points.push_back(t);
        const double r = radius * std::sqrt(rng.uniform());
        const double theta = 2.0 * std::numbers::pi * rng.uniform();
        out.points.push_back({std::clamp(t.x + r * std::cos(theta), 0.0, max_x),
                              std::clamp(t.y + r * std::sin(theta), 0.0, max_y), t.weight});
    }
    return out;
}

}  // namespace gazeforge
