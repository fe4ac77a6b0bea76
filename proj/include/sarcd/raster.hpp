#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace sarcd {

/// Row-major 2-D grid of finite real-valued pixels.
class Raster {
public:
    Raster() = default;
    /// Zero-filled raster.
    Raster(std::size_t width, std::size_t height);
    /// Throws ParameterError when values.size() != width*height or a value is not finite.
    Raster(std::size_t width, std::size_t height, std::vector<double> values);

    static Raster filled(std::size_t width, std::size_t height, double value);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    double at(std::size_t row, std::size_t col) const { return values_[row * width_ + col]; }
    double& at(std::size_t row, std::size_t col) { return values_[row * width_ + col]; }

    /// Edge-clamped read; row/col may lie outside the grid.
    double clamped(std::ptrdiff_t row, std::ptrdiff_t col) const noexcept;

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    bool same_shape(const Raster& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> values_;
};

/// Row-major label grid over {0, 1}; 1 marks a changed pixel.
class BinaryMap {
public:
    BinaryMap() = default;
    BinaryMap(std::size_t width, std::size_t height);
    /// Throws ParameterError on length mismatch or a label outside {0, 1}.
    BinaryMap(std::size_t width, std::size_t height, std::vector<std::uint8_t> labels);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return labels_.size(); }

    std::uint8_t at(std::size_t row, std::size_t col) const { return labels_[row * width_ + col]; }
    std::span<const std::uint8_t> labels() const noexcept { return labels_; }
    std::span<std::uint8_t> labels() noexcept { return labels_; }

    std::size_t count_changed() const noexcept;

    bool same_shape(const BinaryMap& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    friend bool operator==(const BinaryMap&, const BinaryMap&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> labels_;
};

/// Reads a binary (P5) PGM and scales pixels to [0, 1] by maxval.
Raster load_pgm(const std::filesystem::path& path);

/// Writes a binary (P5) PGM with maxval 255; value v becomes round(255 v).
/// Throws RangeError when a value lies outside [0, 1].
void save_pgm(const Raster& raster, const std::filesystem::path& path);

/// "SARF" lossless container: 4-byte magic, u32 LE width, u32 LE height,
/// u32 reserved (0), then width*height float32 LE values, row-major.
void save_f32(const Raster& raster, const std::filesystem::path& path);
Raster load_f32(const std::filesystem::path& path);

/// Dispatches on the file magic: "SARF" or "P5".
Raster load_image(const std::filesystem::path& path);

/// Binary map as PGM: 0 -> 0, 1 -> 255. Loading maps samples above half range to 1.
void save_binary_pgm(const BinaryMap& map, const std::filesystem::path& path);
BinaryMap load_binary_pgm(const std::filesystem::path& path);

/// Min-max scale to [0, 1], then subtract the mean of the scaled values.
/// Throws DegenerateInputError when the raster is constant.
Raster normalize_center(const Raster& raster);

/// Min-max scale to [0, 1]; constant input maps to zeros. Used for previews.
Raster rescale_unit(const Raster& raster);

}  // namespace sarcd
