#include "sarcd/ddi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sarcd/errors.hpp"
#include "sarcd/parallel.hpp"

namespace sarcd {

PoolKernel::PoolKernel(int k) : k_(k) {
    if (k < 1 || k % 2 == 0) throw ParameterError("pool kernel size must be odd and positive, got " + std::to_string(k));
    const double k2 = static_cast<double>(k) * k;
    const int r = k / 2;
    weights_.resize(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const double di = i - r;
            const double dj = j - r;
            weights_[static_cast<std::size_t>(i * k + j)] =
                (i == r && j == r) ? 2.0 / k2 : 1.0 / (k2 * std::sqrt(di * di + dj * dj));
        }
    }
    mean_ = std::accumulate(weights_.begin(), weights_.end(), 0.0) / k2;
}

Raster weighted_pool(const Raster& image, const PoolKernel& kernel) {
    const int k = kernel.size();
    if (static_cast<std::size_t>(k) > std::min(image.width(), image.height()))
        throw ParameterError("pool kernel " + std::to_string(k) + " larger than image");
    const auto w = static_cast<std::ptrdiff_t>(image.width());
    const auto h = static_cast<std::ptrdiff_t>(image.height());
    const int r = kernel.radius();
    const double inv_k2 = 1.0 / (static_cast<double>(k) * k);
    std::vector<double> out(image.size());
    parallel_for(static_cast<std::size_t>(h), [&](std::size_t row) {
        const auto n = static_cast<std::ptrdiff_t>(row);
        for (std::ptrdiff_t m = 0; m < w; ++m) {
            double acc = 0.0;
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) acc += kernel.weight(i, j) * image.clamped(n + i - r, m + j - r);
            out[static_cast<std::size_t>(n * w + m)] = inv_k2 * acc;
        }
    });
    return Raster(image.width(), image.height(), std::move(out));
}

Raster log_ratio(const Raster& i1p, const Raster& i2p) {
    if (!i1p.same_shape(i2p)) throw ParameterError("log_ratio: image dimensions differ");
    std::vector<double> out(i1p.size());
    const auto a = i1p.values();
    const auto b = i2p.values();
    // ln a - ln b keeps the result exactly symmetric in the two inputs.
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::abs(std::log(std::max(b[i], kLogRatioFloor)) - std::log(std::max(a[i], kLogRatioFloor)));
    return Raster(i1p.width(), i1p.height(), std::move(out));
}

Raster cumulative_pool(const Raster& diff, int T) {
    if (T < 1) throw ParameterError("accumulation count T must be >= 1");
    if (static_cast<std::size_t>(2 * T - 1) > std::min(diff.width(), diff.height()))
        throw ParameterError("largest window 2T-1 = " + std::to_string(2 * T - 1) + " exceeds image size");
    std::vector<double> acc(diff.size(), 0.0);
    for (int t = 1; t <= T; ++t) {
        const PoolKernel kernel(2 * t - 1);
        const Raster pooled = weighted_pool(diff, kernel);
        const double norm = kernel.mean();
        const auto pv = pooled.values();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += pv[i] / norm;
    }
    for (double& v : acc) v /= T;
    return Raster(diff.width(), diff.height(), std::move(acc));
}

DdiStages deep_difference_stages(const Raster& i1, const Raster& i2, const DdiParams& params) {
    if (!i1.same_shape(i2)) throw ParameterError("deep_difference: image dimensions differ");
    const PoolKernel kernel(params.k);
    DdiStages s;
    s.i1_pooled = weighted_pool(i1, kernel);
    s.i2_pooled = weighted_pool(i2, kernel);
    s.log_ratio = log_ratio(s.i1_pooled, s.i2_pooled);
    s.ddi = cumulative_pool(s.log_ratio, params.T);
    return s;
}

Raster deep_difference(const Raster& i1, const Raster& i2, const DdiParams& params) {
    return deep_difference_stages(i1, i2, params).ddi;
}

}  // namespace sarcd
