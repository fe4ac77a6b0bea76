#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sarcd/ddi.hpp"
#include "sarcd/errors.hpp"
#include "sarcd/synth.hpp"
#include "test_util.hpp"

using namespace sarcd;

namespace {

// Direct evaluation of the pooling sum with 1-based kernel indices.
Raster brute_pool(const Raster& img, int k) {
    const int c = (k + 1) / 2;
    Raster out(img.width(), img.height());
    for (std::size_t n = 0; n < img.height(); ++n) {
        for (std::size_t m = 0; m < img.width(); ++m) {
            double s = 0.0;
            for (int i = 1; i <= k; ++i) {
                for (int j = 1; j <= k; ++j) {
                    const double d = std::hypot(i - c, j - c);
                    const double w = (i == c && j == c) ? 2.0 / (k * k) : 1.0 / (k * k * d);
                    s += w * img.clamped(static_cast<std::ptrdiff_t>(n) + i - c, static_cast<std::ptrdiff_t>(m) + j - c);
                }
            }
            out.at(n, m) = s / (k * k);
        }
    }
    return out;
}

}  // namespace

TEST(PoolKernel, ThreeByThreeEntries) {
    const PoolKernel k = pool_kernel(3);
    EXPECT_NEAR(k.weight(1, 1), 2.0 / 9.0, 1e-15);
    for (auto [i, j] : {std::pair{0, 1}, {1, 0}, {1, 2}, {2, 1}}) EXPECT_NEAR(k.weight(i, j), 1.0 / 9.0, 1e-15);
    for (auto [i, j] : {std::pair{0, 0}, {0, 2}, {2, 0}, {2, 2}})
        EXPECT_NEAR(k.weight(i, j), 1.0 / (9.0 * std::numbers::sqrt2), 1e-15);
    EXPECT_NEAR(k.weight(0, 0), 0.078567, 1e-6);
}

TEST(PoolKernel, FiveByFiveOffAxisEntry) {
    // two rows above the centre: distance 2, weight 1/(25*2)
    EXPECT_NEAR(pool_kernel(5).weight(0, 2), 0.02, 1e-15);
}

TEST(PoolKernel, SizeOneIsTwo) {
    const PoolKernel k = pool_kernel(1);
    ASSERT_EQ(k.weights().size(), 1u);
    EXPECT_DOUBLE_EQ(k.weight(0, 0), 2.0);
    EXPECT_DOUBLE_EQ(kernel_mean(k), 2.0);
}

TEST(PoolKernel, EvenOrNonPositiveSizeRejected) {
    EXPECT_THROW(pool_kernel(4), ParameterError);
    EXPECT_THROW(pool_kernel(0), ParameterError);
    EXPECT_THROW(pool_kernel(-3), ParameterError);
}

TEST(PoolKernel, MeanOfThree) {
    const double hand = (4.0 * 0.078567 + 4.0 * 0.11111 + 0.22222) / 9.0;
    EXPECT_NEAR(kernel_mean(pool_kernel(3)), hand, 1e-5);
    // 0.108995 is a rounded figure; the sum is 0.1089929
    EXPECT_NEAR(kernel_mean(pool_kernel(3)), 0.108995, 5e-6);
    const double exact = (2.0 / 9.0 + 4.0 / 9.0 + 4.0 / (9.0 * std::numbers::sqrt2)) / 9.0;
    EXPECT_NEAR(kernel_mean(pool_kernel(3)), exact, 1e-15);
}

TEST(PoolKernel, SymmetricUnderRotationAndTransposition) {
    for (int k : {3, 5, 7, 11}) {
        const PoolKernel K(k);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                EXPECT_EQ(K.weight(i, j), K.weight(j, i));
                EXPECT_EQ(K.weight(i, j), K.weight(j, k - 1 - i));
            }
        }
        EXPECT_GT(K.mean(), 0.0);
    }
}

TEST(WeightedPool, MatchesDirectSum) {
    const Raster img = testutil::random_raster(13, 9, 5);
    for (int k : {1, 3, 5, 9}) {
        const Raster a = weighted_pool(img, PoolKernel(k));
        const Raster b = brute_pool(img, k);
        for (std::size_t i = 0; i < img.size(); ++i) EXPECT_NEAR(a.values()[i], b.values()[i], 1e-14) << "k=" << k;
    }
}

TEST(WeightedPool, ConstantImageScalesByKernelMean) {
    const Raster c = Raster::filled(7, 5, 0.37);
    for (int k : {1, 3, 5}) {
        const Raster out = weighted_pool(c, PoolKernel(k));
        for (double v : out.values()) EXPECT_NEAR(v, 0.37 * PoolKernel(k).mean(), 1e-15);
    }
}

TEST(WeightedPool, OnesImageCentre) {
    const Raster out = weighted_pool(Raster::filled(3, 3, 1.0), PoolKernel(3));
    EXPECT_NEAR(out.at(1, 1), kernel_mean(pool_kernel(3)), 1e-15);
    EXPECT_NEAR(out.at(1, 1), (6.0 + 2.0 * std::numbers::sqrt2) / 81.0, 1e-15);
}

TEST(WeightedPool, SizeOneDoublesInput) {
    const Raster img = testutil::random_raster(6, 4, 9);
    const Raster out = weighted_pool(img, PoolKernel(1));
    for (std::size_t i = 0; i < img.size(); ++i) EXPECT_DOUBLE_EQ(out.values()[i], 2.0 * img.values()[i]);
}

TEST(WeightedPool, KernelLargerThanImageRejected) {
    EXPECT_THROW(weighted_pool(Raster(4, 10), PoolKernel(5)), ParameterError);
}

TEST(WeightedPool, Linear) {
    const Raster x = testutil::random_raster(20, 15, 1);
    const Raster y = testutil::random_raster(20, 15, 2);
    const double a = 2.5;
    const double b = -0.75;
    std::vector<double> mix(x.size());
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * x.values()[i] + b * y.values()[i];
    const PoolKernel K(5);
    const Raster lhs = weighted_pool(Raster(20, 15, mix), K);
    const Raster px = weighted_pool(x, K);
    const Raster py = weighted_pool(y, K);
    for (std::size_t i = 0; i < mix.size(); ++i) EXPECT_NEAR(lhs.values()[i], a * px.values()[i] + b * py.values()[i], 1e-9);
}

TEST(LogRatio, Examples) {
    const Raster a = testutil::random_raster(5, 4, 3, 0.1, 1.0);
    const Raster same = log_ratio(a, a);
    for (double v : same.values()) EXPECT_EQ(v, 0.0);

    std::vector<double> scaled(a.values().begin(), a.values().end());
    for (double& v : scaled) v *= std::numbers::e;
    const Raster ratio = log_ratio(a, Raster(5, 4, scaled));
    for (double v : ratio.values()) EXPECT_NEAR(v, 1.0, 1e-12);

    const Raster out = log_ratio(Raster(1, 1, {2.0}), Raster(1, 1, {0.5}));
    EXPECT_NEAR(out.values()[0], 1.386294, 1e-6);
}

TEST(LogRatio, FloorsZeroPixels) {
    const Raster out = log_ratio(Raster(2, 1, {0.0, 0.0}), Raster(2, 1, {0.0, 1.0}));
    EXPECT_EQ(out.values()[0], 0.0);
    EXPECT_NEAR(out.values()[1], -std::log(kLogRatioFloor), 1e-9);
    EXPECT_TRUE(std::isfinite(out.values()[1]));
}

TEST(LogRatio, DimensionMismatchRejected) {
    EXPECT_THROW(log_ratio(Raster(2, 2), Raster(2, 3)), ParameterError);
}

TEST(DeepDifference, IdenticalInputsGiveZero) {
    const Raster a = testutil::random_raster(24, 24, 4, 0.05, 1.0);
    for (int T : {1, 4}) {
        const Raster d0 = deep_difference(a, a, {3, T});
        for (double v : d0.values()) EXPECT_EQ(v, 0.0);
    }
}

TEST(DeepDifference, ConstantDifferenceIsAFixedPoint) {
    const Raster c = Raster::filled(64, 64, 0.37);
    for (int T : {1, 3, 7}) {
        const Raster d = cumulative_pool(c, T);
        for (double v : d.values()) EXPECT_NEAR(v, 0.37, 1e-6);
    }
}

TEST(DeepDifference, MatchesComposedDefinition) {
    const Raster i1 = testutil::random_raster(21, 19, 6, 0.01, 1.0);
    const Raster i2 = testutil::random_raster(21, 19, 7, 0.01, 1.0);
    const int T = 4;
    const DdiStages st = deep_difference_stages(i1, i2, {3, T});
    const Raster p1 = brute_pool(i1, 3);
    const Raster p2 = brute_pool(i2, 3);
    std::vector<double> diff(i1.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = std::abs(std::log(p2.values()[i] / p1.values()[i]));
    std::vector<double> expected(i1.size(), 0.0);
    for (int t = 1; t <= T; ++t) {
        const Raster pooled = brute_pool(Raster(21, 19, diff), 2 * t - 1);
        const double mean = PoolKernel(2 * t - 1).mean();
        for (std::size_t i = 0; i < diff.size(); ++i) expected[i] += pooled.values()[i] / mean / T;
    }
    for (std::size_t i = 0; i < diff.size(); ++i) {
        EXPECT_NEAR(st.log_ratio.values()[i], diff[i], 1e-12);
        EXPECT_NEAR(st.ddi.values()[i], expected[i], 1e-12);
    }
    EXPECT_EQ(deep_difference(i1, i2, {3, T}), st.ddi);
}

TEST(DeepDifference, SymmetricInInputs) {
    const Raster i1 = testutil::random_raster(40, 33, 8, 0.01, 1.0);
    const Raster i2 = testutil::random_raster(40, 33, 9, 0.01, 1.0);
    const Raster a = deep_difference(i1, i2, {3, 5});
    const Raster b = deep_difference(i2, i1, {3, 5});
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.values()[i], b.values()[i], 1e-12);
}

TEST(DeepDifference, WindowLargerThanImageRejected) {
    const Raster a = testutil::random_raster(8, 8, 1, 0.1, 1.0);
    EXPECT_THROW(deep_difference(a, a, {3, 5}), ParameterError);  // 2T-1 = 9 > 8
    EXPECT_NO_THROW(deep_difference(a, a, {3, 4}));
}

TEST(DeepDifference, ReducesVarianceOnSpeckledUnchangedRegion) {
    const SyntheticPair pair = generate_pair(default_scene());
    const auto block = homogeneous_block(pair, 48, 12);
    ASSERT_TRUE(block.has_value());
    const DdiStages st = deep_difference_stages(pair.i1, pair.i2, {3, 9});
    const Raster plain = log_ratio(pair.i1, pair.i2);
    std::vector<double> lr;
    std::vector<double> dd;
    for (std::size_t r = block->row; r < block->row + block->size; ++r) {
        for (std::size_t c = block->col; c < block->col + block->size; ++c) {
            lr.push_back(plain.at(r, c));
            dd.push_back(st.ddi.at(r, c));
        }
    }
    const double var_lr = testutil::variance(lr);
    const double var_dd = testutil::variance(dd);
    RecordProperty("var_log_ratio", std::to_string(var_lr));
    RecordProperty("var_ddi", std::to_string(var_dd));
    // seed 42: var_lr 1.369, var_dd 0.00997
    EXPECT_LT(var_dd, 0.1 * var_lr);
}

TEST(DeepDifference, PooledNoiseVarianceNonIncreasingInWindow) {
    const Raster noise = testutil::random_raster(128, 128, 21);
    double previous = std::numeric_limits<double>::infinity();
    for (int t = 1; t <= 9; ++t) {
        const PoolKernel K(2 * t - 1);
        const Raster pooled = weighted_pool(noise, K);
        std::vector<double> v;
        for (std::size_t r = 16; r < 112; ++r)
            for (std::size_t c = 16; c < 112; ++c) v.push_back(pooled.at(r, c) / K.mean());
        const double var = testutil::variance(v);
        EXPECT_LE(var, previous) << "t=" << t;
        previous = var;
    }
}
