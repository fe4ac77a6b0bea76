#include "sarcd/pfcmc.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "sarcd/errors.hpp"

namespace sarcd {

Raster sigmoid_map(const Raster& image, const SigmoidParams& params) {
    if (!(params.gamma > 0.0)) throw ParameterError("sigmoid gamma must be positive");
    std::vector<double> out(image.size());
    const auto in = image.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-params.gamma * (in[i] + params.mu)));
    return Raster(image.width(), image.height(), std::move(out));
}

ThreeWayMap::ThreeWayMap(std::size_t width, std::size_t height, std::vector<PixelClass> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
    if (labels_.size() != width_ * height_) throw ParameterError("three-way map length mismatch");
}

std::size_t ThreeWayMap::count(PixelClass c) const noexcept {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), c));
}

BinaryMap ThreeWayMap::changed_only() const {
    std::vector<std::uint8_t> out(labels_.size());
    std::transform(labels_.begin(), labels_.end(), out.begin(),
                   [](PixelClass c) { return static_cast<std::uint8_t>(c == PixelClass::changed ? 1 : 0); });
    return BinaryMap(width_, height_, std::move(out));
}

ThreeWayMap encode_labels(const BinaryMap& first, const BinaryMap& second) {
    if (!first.same_shape(second)) throw ParameterError("encode_labels: label maps differ in size");
    std::vector<PixelClass> out(first.size());
    const auto a = first.labels();
    const auto b = second.labels();
    for (std::size_t s = 0; s < out.size(); ++s) {
        const double y = (a[s] + b[s]) / 2.0;
        out[s] = y == 1.0 ? PixelClass::changed : (y == 0.0 ? PixelClass::unchanged : PixelClass::intermediate);
    }
    return ThreeWayMap(first.width(), first.height(), std::move(out));
}

void save_three_way_pgm(const ThreeWayMap& map, const std::filesystem::path& path) {
    std::vector<double> gray(map.size());
    for (std::size_t s = 0; s < gray.size(); ++s) {
        switch (map[s]) {
            case PixelClass::unchanged: gray[s] = 0.0; break;
            case PixelClass::intermediate: gray[s] = 128.0 / 255.0; break;
            case PixelClass::changed: gray[s] = 1.0; break;
        }
    }
    save_pgm(Raster(map.width(), map.height(), std::move(gray)), path);
}

ThreeWayMap load_three_way_pgm(const std::filesystem::path& path) {
    const Raster r = load_pgm(path);
    std::vector<PixelClass> labels(r.size());
    const auto v = r.values();
    for (std::size_t s = 0; s < labels.size(); ++s) {
        const long level = std::lround(255.0 * v[s]);
        labels[s] = level < 64 ? PixelClass::unchanged : (level < 192 ? PixelClass::intermediate : PixelClass::changed);
    }
    return ThreeWayMap(r.width(), r.height(), std::move(labels));
}

PfcmcResult pfcmc_detailed(const Raster& ddi, const PfcmcConfig& cfg) {
    const Raster centered = normalize_center(ddi);

    auto branch = [&](double mu, std::uint64_t seed) {
        const Raster mapped = sigmoid_map(centered, {cfg.gamma, mu});
        const FeatureSet features = gabor_features(mapped, cfg.gabor);
        FcmResult result = fcm(features, {cfg.fcm_m, cfg.fcm_tol, cfg.fcm_max_iter, seed});
        BinaryMap labels = orient_labels(result, ddi);
        return std::pair{std::move(result), std::move(labels)};
    };

    auto second = std::async(std::launch::async, branch, cfg.mu2(), cfg.seed + 1);
    auto [first_fcm, first_labels] = branch(cfg.mu1(), cfg.seed);
    auto [second_fcm, second_labels] = second.get();

    PfcmcResult out;
    out.map = encode_labels(first_labels, second_labels);
    out.first = std::move(first_labels);
    out.second = std::move(second_labels);
    out.first_fcm = std::move(first_fcm);
    out.second_fcm = std::move(second_fcm);
    return out;
}

ThreeWayMap pfcmc(const Raster& ddi, const PfcmcConfig& cfg) { return pfcmc_detailed(ddi, cfg).map; }

}  // namespace sarcd
