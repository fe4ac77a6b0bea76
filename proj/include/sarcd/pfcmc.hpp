#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <span>
#include <vector>

#include "sarcd/raster.hpp"

namespace sarcd {

struct SigmoidParams {
    double gamma = 7.0;
    double mu = 0.0;
};

/// x -> 1 / (1 + exp(-gamma (x + mu))) per pixel.
Raster sigmoid_map(const Raster& image, const SigmoidParams& params);

/// Complex Gabor wavelet bank. Scale v has radial frequency
/// k_v = 2*pi*f_max / scale_factor^v and a Gaussian envelope of width
/// sigma / k_v pixels.
struct GaborBankConfig {
    int scales = 5;
    int orientations = 8;
    int kernel_size = 7;
    double f_max = 0.1;   ///< cycles per pixel
    double scale_factor = std::numbers::sqrt2;
    double sigma = 2.0 * std::numbers::pi;  ///< envelope width in carrier radians

    int dimension() const noexcept { return scales * orientations; }
};

/// count x dim row-major feature matrix; row s belongs to pixel s.
struct FeatureSet {
    std::size_t count = 0;
    std::size_t dim = 0;
    std::vector<double> vectors;

    std::span<const double> row(std::size_t s) const { return {vectors.data() + s * dim, dim}; }
};

/// Builds the FeatureSet for a 1-D signal (one value per row).
FeatureSet scalar_features(std::span<const double> values);

struct GaborKernel {
    int size = 0;
    std::vector<double> re;
    std::vector<double> im;
};

std::vector<GaborKernel> gabor_bank(const GaborBankConfig& cfg);

/// Magnitude responses of every bank kernel (replicate padding), each channel
/// standardized to zero mean and unit variance. Constant channels become zero.
FeatureSet gabor_features(const Raster& image, const GaborBankConfig& cfg);

struct FcmResult {
    std::size_t count = 0;
    std::vector<double> memberships;  ///< count x 2, row-major
    std::vector<double> centroids;    ///< 2 x dim, row-major
    std::size_t dim = 0;
    int iterations = 0;
    bool converged = false;
    double last_displacement = 0.0;
    std::vector<double> objective;  ///< one entry per iteration

    double membership(std::size_t s, int c) const { return memberships[2 * s + static_cast<std::size_t>(c)]; }
};

struct FcmOptions {
    double m = 2.0;
    double tol = 1e-5;
    int max_iter = 100;
    std::uint64_t seed = 0;
};

/// Two-cluster fuzzy c-means. Initial centroids are two distinct data points
/// drawn from a seeded generator.
FcmResult fcm(const FeatureSet& features, const FcmOptions& options);

/// Hard labels by argmax membership (ties go to unchanged); the cluster with
/// the larger mean reference value is labelled changed.
BinaryMap orient_labels(const FcmResult& result, const Raster& reference);

enum class PixelClass : std::uint8_t { unchanged = 0, changed = 1, intermediate = 2 };

class ThreeWayMap {
public:
    ThreeWayMap() = default;
    ThreeWayMap(std::size_t width, std::size_t height, std::vector<PixelClass> labels);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return labels_.size(); }
    PixelClass operator[](std::size_t i) const { return labels_[i]; }
    std::span<const PixelClass> labels() const noexcept { return labels_; }

    std::size_t count(PixelClass c) const noexcept;

    /// changed -> 1, everything else -> 0.
    BinaryMap changed_only() const;

    friend bool operator==(const ThreeWayMap&, const ThreeWayMap&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<PixelClass> labels_;
};

/// Combines two hard label maps by averaging: 1 -> changed, 0 -> unchanged,
/// 0.5 -> intermediate.
ThreeWayMap encode_labels(const BinaryMap& first, const BinaryMap& second);

/// Gray levels 0 (unchanged), 128 (intermediate), 255 (changed).
void save_three_way_pgm(const ThreeWayMap& map, const std::filesystem::path& path);
ThreeWayMap load_three_way_pgm(const std::filesystem::path& path);

struct PfcmcConfig {
    double gamma = 7.0;
    double b = 0.0;       ///< centre bias, (mu1 + mu2) / 2
    double delta = 0.12;  ///< |mu1 - mu2|
    GaborBankConfig gabor;
    double fcm_m = 2.0;
    double fcm_tol = 1e-5;
    int fcm_max_iter = 100;
    std::uint64_t seed = 0;

    double mu1() const noexcept { return b + delta / 2.0; }
    double mu2() const noexcept { return b - delta / 2.0; }
};

struct PfcmcResult {
    ThreeWayMap map;
    BinaryMap first;   ///< labels from the (gamma, mu1) branch
    BinaryMap second;  ///< labels from the (gamma, mu2) branch
    FcmResult first_fcm;
    FcmResult second_fcm;
};

/// Parallel FCM clustering of a difference image into three pseudo-classes.
PfcmcResult pfcmc_detailed(const Raster& ddi, const PfcmcConfig& cfg);
ThreeWayMap pfcmc(const Raster& ddi, const PfcmcConfig& cfg);

}  // namespace sarcd
