#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "sarcd/errors.hpp"
#include "sarcd/parallel.hpp"
#include "sarcd/pfcmc.hpp"

namespace sarcd {

std::vector<GaborKernel> gabor_bank(const GaborBankConfig& cfg) {
    if (cfg.scales < 1 || cfg.orientations < 1) throw ParameterError("Gabor bank needs at least one scale and orientation");
    if (cfg.kernel_size < 1 || cfg.kernel_size % 2 == 0) throw ParameterError("Gabor kernel size must be odd");
    if (!(cfg.f_max > 0.0) || !(cfg.scale_factor > 0.0) || !(cfg.sigma > 0.0)) throw ParameterError("Gabor frequencies must be positive");

    const double sigma = cfg.sigma;
    const double dc_term = std::exp(-sigma * sigma / 2.0);
    const int r = cfg.kernel_size / 2;
    std::vector<GaborKernel> bank;
    bank.reserve(static_cast<std::size_t>(cfg.dimension()));
    for (int v = 0; v < cfg.scales; ++v) {
        const double kv = 2.0 * std::numbers::pi * cfg.f_max / std::pow(cfg.scale_factor, v);
        const double amp = kv * kv / (sigma * sigma);
        for (int u = 0; u < cfg.orientations; ++u) {
            const double theta = std::numbers::pi * u / cfg.orientations;
            const double kx = kv * std::cos(theta);
            const double ky = kv * std::sin(theta);
            GaborKernel g;
            g.size = cfg.kernel_size;
            g.re.resize(static_cast<std::size_t>(g.size) * g.size);
            g.im.resize(g.re.size());
            for (int y = -r; y <= r; ++y) {
                for (int x = -r; x <= r; ++x) {
                    const double envelope = amp * std::exp(-kv * kv * (x * x + y * y) / (2.0 * sigma * sigma));
                    const double phase = kx * x + ky * y;
                    const auto idx = static_cast<std::size_t>((y + r) * g.size + (x + r));
                    g.re[idx] = envelope * (std::cos(phase) - dc_term);
                    g.im[idx] = envelope * std::sin(phase);
                }
            }
            bank.push_back(std::move(g));
        }
    }
    return bank;
}

FeatureSet scalar_features(std::span<const double> values) {
    FeatureSet f;
    f.count = values.size();
    f.dim = 1;
    f.vectors.assign(values.begin(), values.end());
    return f;
}

FeatureSet gabor_features(const Raster& image, const GaborBankConfig& cfg) {
    if (static_cast<std::size_t>(cfg.kernel_size) > std::min(image.width(), image.height()))
        throw ParameterError("Gabor kernel size exceeds image dimensions");
    const auto bank = gabor_bank(cfg);
    const std::size_t n = image.size();
    const std::size_t dim = bank.size();
    const auto w = static_cast<std::ptrdiff_t>(image.width());
    const auto h = static_cast<std::ptrdiff_t>(image.height());

    // channel-major scratch, transposed into pixel-major rows at the end
    std::vector<std::vector<double>> channels(dim, std::vector<double>(n));
    std::vector<bool> degenerate(dim, false);
    parallel_for(dim, [&](std::size_t c) {
        const GaborKernel& g = bank[c];
        const int r = g.size / 2;
        auto& out = channels[c];
        for (std::ptrdiff_t row = 0; row < h; ++row) {
            for (std::ptrdiff_t col = 0; col < w; ++col) {
                double re = 0.0;
                double im = 0.0;
                for (int y = -r; y <= r; ++y) {
                    for (int x = -r; x <= r; ++x) {
                        const double p = image.clamped(row + y, col + x);
                        const auto idx = static_cast<std::size_t>((y + r) * g.size + (x + r));
                        re += g.re[idx] * p;
                        im += g.im[idx] * p;
                    }
                }
                out[static_cast<std::size_t>(row * w + col)] = std::hypot(re, im);
            }
        }
        const auto [lo, hi] = std::minmax_element(out.begin(), out.end());
        const double mean = std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(n);
        double var = 0.0;
        for (double v : out) var += (v - mean) * (v - mean);
        var /= static_cast<double>(n);
        const double scale = std::max(std::abs(*lo), std::abs(*hi));
        if (*hi - *lo <= 1e-12 * scale || !(var > 0.0)) {
            std::fill(out.begin(), out.end(), 0.0);
            degenerate[c] = true;
            return;
        }
        const double inv_sd = 1.0 / std::sqrt(var);
        for (double& v : out) v = (v - mean) * inv_sd;
    });

    const auto n_degenerate = std::count(degenerate.begin(), degenerate.end(), true);
    if (n_degenerate > 0)
        warn("gabor_features: " + std::to_string(n_degenerate) + " of " + std::to_string(dim) +
             " channels have zero variance and were set to zero");

    FeatureSet f;
    f.count = n;
    f.dim = dim;
    f.vectors.resize(n * dim);
    for (std::size_t c = 0; c < dim; ++c)
        for (std::size_t s = 0; s < n; ++s) f.vectors[s * dim + c] = channels[c][s];
    return f;
}

}  // namespace sarcd
