#pragma once

#include <cstddef>
#include <vector>

#include "sarcd/raster.hpp"

namespace sarcd {

/// k x k pooling kernel whose weights fall off with distance from the centre:
/// w_ij = 1 / (k^2 * d_ij) off-centre, 2 / k^2 at the centre.
class PoolKernel {
public:
    /// Throws ParameterError unless k is odd and positive.
    explicit PoolKernel(int k);

    int size() const noexcept { return k_; }
    int radius() const noexcept { return k_ / 2; }
    /// Zero-based indices; (radius, radius) is the centre.
    double weight(int i, int j) const { return weights_[static_cast<std::size_t>(i * k_ + j)]; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    /// (1/k^2) * sum of all weights.
    double mean() const noexcept { return mean_; }

private:
    int k_;
    std::vector<double> weights_;
    double mean_;
};

inline PoolKernel pool_kernel(int k) { return PoolKernel(k); }
inline double kernel_mean(const PoolKernel& kernel) { return kernel.mean(); }

struct DdiParams {
    int k = 3;  ///< pre-pooling window applied to both inputs
    int T = 9;  ///< number of accumulated scales (windows 1, 3, ..., 2T-1)
};

/// Floor applied to pooled intensities before the log-ratio.
inline constexpr double kLogRatioFloor = 1e-6;

/// out(n,m) = (1/k^2) * sum_ij w_ij * I(n+i-r, m+j-r), replicate padding.
/// Throws ParameterError when k exceeds either image dimension.
Raster weighted_pool(const Raster& image, const PoolKernel& kernel);

/// |ln(i2p / i1p)| per pixel, both inputs floored at kLogRatioFloor.
Raster log_ratio(const Raster& i1p, const Raster& i2p);

/// (1/T) * sum_{t=1..T} weighted_pool(diff, K_{2t-1}) / mean(K_{2t-1}).
Raster cumulative_pool(const Raster& diff, int T);

struct DdiStages {
    Raster i1_pooled;
    Raster i2_pooled;
    Raster log_ratio;
    Raster ddi;
};

/// Full deep-difference computation keeping the intermediate images.
DdiStages deep_difference_stages(const Raster& i1, const Raster& i2, const DdiParams& params);

Raster deep_difference(const Raster& i1, const Raster& i2, const DdiParams& params);

}  // namespace sarcd
