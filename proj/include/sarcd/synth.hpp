#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sarcd/raster.hpp"

namespace sarcd {

struct Rect {
    std::size_t x = 0;
    std::size_t y = 0;
    std::size_t w = 0;
    std::size_t h = 0;
    double level = 0.0;
};

/// Piecewise-constant reflectivity: a base level overwritten by rectangles in order.
struct Background {
    double level = 0.3;
    std::vector<Rect> rects;
};

struct SceneSpec {
    std::size_t width = 256;
    std::size_t height = 256;
    double looks = 1.0;        ///< gamma speckle shape L; 1 is the strongest speckle
    int n_regions = 5;         ///< number of circular change regions
    double radius_min = 4.0;   ///< admissible disc radius range, pixels
    double radius_max = 30.0;
    double change_gain = 8.0;  ///< reflectivity multiplier inside change regions
    bool allow_darkening = false;  ///< permits change_gain < 1
    double target_ir = 0.02;   ///< desired Nc / Nu
    Background background;
    std::uint64_t seed = 42;
};

/// 256x256 scene with a few reflectivity plateaus.
SceneSpec default_scene();

struct Disc {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
};

struct SyntheticPair {
    Raster i1;
    Raster i2;
    BinaryMap truth;
    Raster reflectivity;  ///< clean date-1 reflectivity, before speckle and rescaling
    std::vector<Disc> regions;
};

/// Throws SpecError when the scene cannot be realized (e.g. target_ir needs a
/// disc radius outside [radius_min, radius_max]).
SyntheticPair generate_pair(const SceneSpec& spec);

/// Unit-mean gamma speckle field, shape L and scale 1/L.
Raster gamma_speckle(std::size_t width, std::size_t height, double looks, std::uint64_t seed);

struct Block {
    std::size_t row = 0;
    std::size_t col = 0;
    std::size_t size = 0;
};

/// First size x size block (raster scan) lying on one reflectivity level and
/// at least `margin` pixels away from every changed pixel.
std::optional<Block> homogeneous_block(const SyntheticPair& pair, std::size_t size, std::size_t margin);

}  // namespace sarcd
