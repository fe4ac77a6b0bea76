#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sarcd/errors.hpp"
#include "sarcd/pfcmc.hpp"

namespace sarcd {

namespace {

double squared_distance(std::span<const double> a, const double* b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

// u_c = 1 / sum_j (d_c / d_j)^(2/(m-1)), written in squared distances.
void update_memberships(const FeatureSet& x, const std::vector<double>& centroids, double m,
                        std::vector<double>& u) {
    const double exponent = 1.0 / (m - 1.0);
    for (std::size_t s = 0; s < x.count; ++s) {
        const auto row = x.row(s);
        const double d0 = squared_distance(row, centroids.data());
        const double d1 = squared_distance(row, centroids.data() + x.dim);
        double u0;
        if (d0 == 0.0 && d1 == 0.0) {
            u0 = 0.5;
        } else if (d0 == 0.0) {
            u0 = 1.0;
        } else if (d1 == 0.0) {
            u0 = 0.0;
        } else {
            u0 = 1.0 / (1.0 + std::pow(d0 / d1, exponent));
        }
        u[2 * s] = u0;
        u[2 * s + 1] = 1.0 - u0;
    }
}

double objective(const FeatureSet& x, const std::vector<double>& centroids, double m, const std::vector<double>& u) {
    double j = 0.0;
    for (std::size_t s = 0; s < x.count; ++s) {
        const auto row = x.row(s);
        j += std::pow(u[2 * s], m) * squared_distance(row, centroids.data()) +
             std::pow(u[2 * s + 1], m) * squared_distance(row, centroids.data() + x.dim);
    }
    return j;
}

std::vector<double> update_centroids(const FeatureSet& x, double m, const std::vector<double>& u,
                                     const std::vector<double>& previous) {
    std::vector<double> num(2 * x.dim, 0.0);
    double den[2] = {0.0, 0.0};
    for (std::size_t s = 0; s < x.count; ++s) {
        const auto row = x.row(s);
        for (int c = 0; c < 2; ++c) {
            const double wgt = std::pow(u[2 * s + static_cast<std::size_t>(c)], m);
            den[c] += wgt;
            double* dst = num.data() + static_cast<std::size_t>(c) * x.dim;
            for (std::size_t i = 0; i < x.dim; ++i) dst[i] += wgt * row[i];
        }
    }
    for (int c = 0; c < 2; ++c) {
        double* dst = num.data() + static_cast<std::size_t>(c) * x.dim;
        if (den[c] > 0.0) {
            for (std::size_t i = 0; i < x.dim; ++i) dst[i] /= den[c];
        } else {
            std::copy_n(previous.data() + static_cast<std::size_t>(c) * x.dim, x.dim, dst);
        }
    }
    return num;
}

bool rows_equal(std::span<const double> a, std::span<const double> b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

std::pair<std::size_t, std::size_t> draw_initial(const FeatureSet& x, std::uint64_t seed) {
    constexpr int kMaxRetries = 64;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, x.count - 1);
    const std::size_t first = pick(rng);
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        const std::size_t second = pick(rng);
        if (!rows_equal(x.row(first), x.row(second))) return {first, second};
    }
    // Random retries exhausted: fall back to the first distinct point in order.
    for (std::size_t s = 0; s < x.count; ++s)
        if (!rows_equal(x.row(first), x.row(s))) return {first, s};
    throw DegenerateInputError("fcm: all feature vectors are identical");
}

}  // namespace

FcmResult fcm(const FeatureSet& features, const FcmOptions& options) {
    if (features.count < 2) throw ParameterError("fcm needs at least two samples");
    if (!(options.m > 1.0)) throw ParameterError("fcm fuzziness m must exceed 1");
    if (!(options.tol > 0.0) || options.max_iter < 1) throw ParameterError("fcm tolerance and max_iter must be positive");
    if (features.vectors.size() != features.count * features.dim) throw ParameterError("fcm: malformed feature set");

    const auto [a, b] = draw_initial(features, options.seed);
    FcmResult result;
    result.count = features.count;
    result.dim = features.dim;
    result.centroids.resize(2 * features.dim);
    std::copy_n(features.row(a).begin(), features.dim, result.centroids.begin());
    std::copy_n(features.row(b).begin(), features.dim, result.centroids.begin() + static_cast<std::ptrdiff_t>(features.dim));
    result.memberships.resize(2 * features.count);

    for (int it = 0; it < options.max_iter; ++it) {
        update_memberships(features, result.centroids, options.m, result.memberships);
        result.objective.push_back(objective(features, result.centroids, options.m, result.memberships));
        auto next = update_centroids(features, options.m, result.memberships, result.centroids);
        double displacement = 0.0;
        for (int c = 0; c < 2; ++c) {
            const std::span<const double> moved(next.data() + static_cast<std::size_t>(c) * features.dim, features.dim);
            displacement = std::max(displacement,
                                    std::sqrt(squared_distance(moved, result.centroids.data() + static_cast<std::size_t>(c) * features.dim)));
        }
        result.centroids = std::move(next);
        result.iterations = it + 1;
        result.last_displacement = displacement;
        if (displacement < options.tol) {
            result.converged = true;
            break;
        }
    }
    // memberships consistent with the returned centroids
    update_memberships(features, result.centroids, options.m, result.memberships);
    return result;
}

BinaryMap orient_labels(const FcmResult& result, const Raster& reference) {
    if (result.count != reference.size()) throw ParameterError("orient_labels: membership count != pixel count");
    std::vector<std::uint8_t> hard(result.count);
    double sum[2] = {0.0, 0.0};
    std::size_t n[2] = {0, 0};
    const auto ref = reference.values();
    for (std::size_t s = 0; s < result.count; ++s) {
        const double u0 = result.membership(s, 0);
        const double u1 = result.membership(s, 1);
        const int c = u0 > u1 ? 0 : (u1 > u0 ? 1 : -1);
        hard[s] = static_cast<std::uint8_t>(c < 0 ? 2 : c);
        if (c >= 0) {
            sum[c] += ref[s];
            ++n[c];
        }
    }
    if (n[0] == 0 || n[1] == 0) {
        warn("orient_labels: a cluster is empty; labelling every pixel unchanged");
        return BinaryMap(reference.width(), reference.height());
    }
    const double mean0 = sum[0] / static_cast<double>(n[0]);
    const double mean1 = sum[1] / static_cast<double>(n[1]);
    if (mean0 == mean1) {
        warn("orient_labels: clusters have equal mean reference value; labelling every pixel unchanged");
        return BinaryMap(reference.width(), reference.height());
    }
    const std::uint8_t changed = mean0 > mean1 ? 0 : 1;
    std::vector<std::uint8_t> labels(result.count);
    for (std::size_t s = 0; s < result.count; ++s) labels[s] = hard[s] == changed ? 1 : 0;
    return BinaryMap(reference.width(), reference.height(), std::move(labels));
}

}  // namespace sarcd
