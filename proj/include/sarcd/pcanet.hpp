#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sarcd/pfcmc.hpp"
#include "sarcd/raster.hpp"

namespace sarcd {

/// Contiguous list of equally shaped rows x cols matrices.
class PatchStack {
public:
    PatchStack() = default;
    PatchStack(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t area() const noexcept { return rows_ * cols_; }
    std::size_t count() const noexcept { return area() == 0 ? 0 : data_.size() / area(); }

    std::span<const double> operator[](std::size_t i) const { return {data_.data() + i * area(), area()}; }
    std::span<double> operator[](std::size_t i) { return {data_.data() + i * area(), area()}; }

    void reserve(std::size_t n) { data_.reserve(n * area()); }
    void resize(std::size_t n) { data_.resize(n * area(), 0.0); }
    /// Throws ParameterError on a size mismatch.
    void push_back(std::span<const double> matrix);

    friend bool operator==(const PatchStack&, const PatchStack&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// One 2*lambda x lambda patch per pixel: the lambda x lambda neighbourhood in
/// the first image stacked above the same neighbourhood in the second.
struct PatchSet {
    int lambda = 0;
    std::size_t width = 0;
    std::size_t height = 0;
    PatchStack patches;
};

PatchSet extract_patches(const Raster& i1p, const Raster& i2p, int lambda);

/// Single patch for pixel index s, without materializing the whole set.
std::vector<double> extract_patch(const Raster& i1p, const Raster& i2p, int lambda, std::size_t s);

struct SampleSelection {
    std::vector<std::size_t> indices;
    std::vector<PixelClass> labels;  ///< changed or unchanged only
};

/// S samples: round(S*ratio) changed pixels drawn with replacement and the rest
/// unchanged pixels drawn without replacement (topped up with replacement only
/// when fewer distinct unchanged pixels exist than requested).
/// Throws DegenerateTrainingError when either class is absent.
SampleSelection balance_sample(const ThreeWayMap& map, std::size_t S, double ratio, std::uint64_t seed);

struct FilterBank {
    std::size_t rows = 0;
    std::size_t cols = 0;
    PatchStack filters;
    std::vector<double> eigenvalues;  ///< descending, one per filter

    std::size_t size() const noexcept { return filters.count(); }
    friend bool operator==(const FilterBank&, const FilterBank&) = default;
};

/// Top-L eigenvectors of sum_s p_s p_s^T over mean-removed vectorized patches,
/// ordered by eigenvalue, largest-magnitude component made positive.
FilterBank learn_pca_filters(const PatchStack& patches, int L);

/// Same-size 2-D correlation of input with each filter, zero padding; the
/// filter anchor is (rows/2, cols/2).
PatchStack stage_forward(std::span<const double> input, std::size_t rows, std::size_t cols, const FilterBank& bank);

/// T = sum_l 2^(l-1) H(Z_l), H(x) = 1 iff x > 0.
std::vector<std::uint32_t> binarize_encode(const PatchStack& maps);

/// Concatenated 2^L2-bin histograms, one per integer map.
std::vector<double> histogram_feature(std::span<const std::vector<std::uint32_t>> int_maps, int L2);

struct PcanetModel {
    int lambda = 0;
    int L1 = 0;
    int L2 = 0;
    FilterBank stage1;
    std::vector<FilterBank> stage2;  ///< one bank per stage-1 filter

    std::size_t feature_length() const noexcept { return static_cast<std::size_t>(L1) << L2; }
    friend bool operator==(const PcanetModel&, const PcanetModel&) = default;
};

PcanetModel train_pcanet(const PatchSet& patches, const SampleSelection& selection, int L1, int L2);

/// Overload for callers that gathered the training patches themselves.
PcanetModel train_pcanet(int lambda, const PatchStack& training, int L1, int L2);

std::vector<double> features_for(std::span<const double> patch, const PcanetModel& model);

/// Binary layout, all little-endian:
///   "SARP" | u32 lambda | u32 L1 | u32 L2
///   stage-1: L1 x (eigenvalue f32, 2*lambda*lambda filter f32)
///   stage-2: for each l1, L2 x (eigenvalue f32, filter f32 values)
void save_pcanet_model(const PcanetModel& model, const std::filesystem::path& path);
PcanetModel load_pcanet_model(const std::filesystem::path& path);

}  // namespace sarcd
