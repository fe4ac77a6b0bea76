#include "sarcd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "sarcd/errors.hpp"

namespace sarcd {

SceneSpec default_scene() {
    SceneSpec spec;
    spec.background.level = 0.3;
    spec.background.rects = {
        {0, 0, 96, 80, 0.15},
        {150, 20, 90, 70, 0.6},
        {30, 170, 110, 70, 0.9},
    };
    return spec;
}

Raster gamma_speckle(std::size_t width, std::size_t height, double looks, std::uint64_t seed) {
    if (!(looks > 0.0)) throw SpecError("looks must be positive");
    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> dist(looks, 1.0 / looks);
    std::vector<double> values(width * height);
    for (double& v : values) v = dist(rng);
    return Raster(width, height, std::move(values));
}

namespace {

void validate(const SceneSpec& spec) {
    if (spec.width == 0 || spec.height == 0) throw SpecError("scene dimensions must be positive");
    if (!(spec.looks > 0.0)) throw SpecError("looks must be positive");
    if (!(spec.change_gain > 0.0)) throw SpecError("change_gain must be positive");
    if (spec.change_gain <= 1.0 && !spec.allow_darkening)
        throw SpecError("change_gain must exceed 1 unless allow_darkening is set");
    if (!(spec.target_ir >= 0.0)) throw SpecError("target_ir must be non-negative");
    if (spec.n_regions < 0) throw SpecError("n_regions must be non-negative");
    if (!(spec.radius_min > 0.0) || spec.radius_max < spec.radius_min) throw SpecError("invalid region radius range");
    if (!(spec.background.level > 0.0)) throw SpecError("background level must be positive");
    for (const auto& r : spec.background.rects)
        if (!(r.level > 0.0)) throw SpecError("background rectangle levels must be positive");
}

bool inside(const Disc& d, double x, double y) {
    const double dx = x - d.cx;
    const double dy = y - d.cy;
    return dx * dx + dy * dy <= d.radius * d.radius;
}

}  // namespace

SyntheticPair generate_pair(const SceneSpec& spec) {
    validate(spec);
    const std::size_t W = spec.width;
    const std::size_t H = spec.height;
    const double total = static_cast<double>(W * H);

    std::vector<double> refl(W * H, spec.background.level);
    for (const auto& r : spec.background.rects)
        for (std::size_t y = r.y; y < std::min(H, r.y + r.h); ++y)
            for (std::size_t x = r.x; x < std::min(W, r.x + r.w); ++x) refl[y * W + x] = r.level;

    std::vector<Disc> discs;
    if (spec.target_ir > 0.0) {
        if (spec.n_regions == 0) throw SpecError("target_ir > 0 requires at least one change region");
        const double target_changed = total * spec.target_ir / (1.0 + spec.target_ir);
        const double radius = std::sqrt(target_changed / (spec.n_regions * std::numbers::pi));
        if (radius < spec.radius_min || radius > spec.radius_max)
            throw SpecError("target_ir " + std::to_string(spec.target_ir) + " needs disc radius " +
                            std::to_string(radius) + ", outside [" + std::to_string(spec.radius_min) + ", " +
                            std::to_string(spec.radius_max) + "]");
        if (2.0 * radius + 2.0 > static_cast<double>(std::min(W, H)))
            throw SpecError("change regions do not fit in the scene");

        std::mt19937_64 rng(spec.seed);
        std::uniform_real_distribution<double> ux(radius, static_cast<double>(W) - 1.0 - radius);
        std::uniform_real_distribution<double> uy(radius, static_cast<double>(H) - 1.0 - radius);
        constexpr int kMaxAttempts = 10000;
        for (int n = 0; n < spec.n_regions; ++n) {
            bool placed = false;
            for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
                const Disc candidate{ux(rng), uy(rng), radius};
                placed = std::none_of(discs.begin(), discs.end(), [&](const Disc& d) {
                    return std::hypot(d.cx - candidate.cx, d.cy - candidate.cy) < d.radius + candidate.radius + 2.0;
                });
                if (placed) discs.push_back(candidate);
            }
            if (!placed) throw SpecError("could not place " + std::to_string(spec.n_regions) + " non-overlapping regions");
        }
    }

    std::vector<std::uint8_t> truth(W * H, 0);
    std::vector<double> refl2 = refl;
    for (std::size_t y = 0; y < H; ++y) {
        for (std::size_t x = 0; x < W; ++x) {
            const bool changed = std::any_of(discs.begin(), discs.end(), [&](const Disc& d) {
                return inside(d, static_cast<double>(x), static_cast<double>(y));
            });
            if (changed) {
                truth[y * W + x] = 1;
                refl2[y * W + x] *= spec.change_gain;
            }
        }
    }

    // Speckle streams are derived from the scene seed but kept apart from the geometry stream.
    const Raster s1 = gamma_speckle(W, H, spec.looks, spec.seed * 2654435761ULL + 1);
    const Raster s2 = gamma_speckle(W, H, spec.looks, spec.seed * 2654435761ULL + 2);
    std::vector<double> a(W * H);
    std::vector<double> b(W * H);
    double peak = 0.0;
    for (std::size_t i = 0; i < W * H; ++i) {
        a[i] = refl[i] * s1.values()[i];
        b[i] = refl2[i] * s2.values()[i];
        peak = std::max({peak, a[i], b[i]});
    }
    for (std::size_t i = 0; i < W * H; ++i) {
        a[i] /= peak;
        b[i] /= peak;
    }

    SyntheticPair out;
    out.i1 = Raster(W, H, std::move(a));
    out.i2 = Raster(W, H, std::move(b));
    out.truth = BinaryMap(W, H, std::move(truth));
    out.reflectivity = Raster(W, H, std::move(refl));
    out.regions = std::move(discs);
    return out;
}

std::optional<Block> homogeneous_block(const SyntheticPair& pair, std::size_t size, std::size_t margin) {
    const std::size_t W = pair.truth.width();
    const std::size_t H = pair.truth.height();
    if (size == 0 || size > W || size > H) return std::nullopt;
    for (std::size_t row = 0; row + size <= H; row += 4) {
        for (std::size_t col = 0; col + size <= W; col += 4) {
            const double level = pair.reflectivity.at(row, col);
            bool ok = true;
            for (std::size_t y = row; y < row + size && ok; ++y)
                for (std::size_t x = col; x < col + size && ok; ++x) ok = pair.reflectivity.at(y, x) == level;
            const std::size_t y0 = row >= margin ? row - margin : 0;
            const std::size_t x0 = col >= margin ? col - margin : 0;
            const std::size_t y1 = std::min(H, row + size + margin);
            const std::size_t x1 = std::min(W, col + size + margin);
            for (std::size_t y = y0; y < y1 && ok; ++y)
                for (std::size_t x = x0; x < x1 && ok; ++x) ok = pair.truth.at(y, x) == 0;
            if (ok) return Block{row, col, size};
        }
    }
    return std::nullopt;
}

}  // namespace sarcd
