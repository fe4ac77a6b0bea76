#include <gtest/gtest.h>

#include <cmath>

#include "sarcd/errors.hpp"
#include "sarcd/metrics.hpp"
#include "sarcd/synth.hpp"

using namespace sarcd;

TEST(Synth, NearlyNoiselessScaleRatios) {
    SceneSpec spec = default_scene();
    spec.looks = 1e6;
    const SyntheticPair p = generate_pair(spec);
    for (std::size_t i = 0; i < p.truth.size(); ++i) {
        const double ratio = p.i2.values()[i] / p.i1.values()[i];
        const double expected = p.truth.labels()[i] ? spec.change_gain : 1.0;
        ASSERT_NEAR(ratio, expected, 0.01 * expected) << "pixel " << i;
    }
}

TEST(Synth, SpeckleMeanIsOne) {
    const Raster s = gamma_speckle(256, 256, 1.0, 42);
    double mean = 0.0;
    for (double v : s.values()) mean += v;
    mean /= static_cast<double>(s.size());
    RecordProperty("speckle_mean", std::to_string(mean));
    // 1.00385 for this seed
    EXPECT_NEAR(mean, 1.0, 0.02);
    for (double v : s.values()) ASSERT_GT(v, 0.0);
}

TEST(Synth, SameSeedIsBitIdentical) {
    const SyntheticPair a = generate_pair(default_scene());
    const SyntheticPair b = generate_pair(default_scene());
    EXPECT_EQ(a.i1, b.i1);
    EXPECT_EQ(a.i2, b.i2);
    EXPECT_EQ(a.truth, b.truth);
    SceneSpec other = default_scene();
    other.seed = 43;
    EXPECT_NE(generate_pair(other).i1, a.i1);
}

TEST(Synth, JointRescaleToUnitRange) {
    const SyntheticPair p = generate_pair(default_scene());
    double peak = 0.0;
    for (std::size_t i = 0; i < p.i1.size(); ++i) {
        ASSERT_GE(p.i1.values()[i], 0.0);
        ASSERT_GE(p.i2.values()[i], 0.0);
        peak = std::max({peak, p.i1.values()[i], p.i2.values()[i]});
    }
    EXPECT_DOUBLE_EQ(peak, 1.0);
}

TEST(Synth, ImbalanceRatioNearTarget) {
    for (double ir : {0.0094, 0.02, 0.077}) {
        SceneSpec spec = default_scene();
        spec.target_ir = ir;
        const SyntheticPair p = generate_pair(spec);
        EXPECT_NEAR(imbalance_ratio(p.truth), ir, 0.2 * ir) << "target " << ir;
    }
}

TEST(Synth, TruthMarksExactlyTheDiscs) {
    const SyntheticPair p = generate_pair(default_scene());
    ASSERT_EQ(p.regions.size(), 5u);
    for (std::size_t y = 0; y < p.truth.height(); ++y) {
        for (std::size_t x = 0; x < p.truth.width(); ++x) {
            bool in = false;
            for (const Disc& d : p.regions) in |= std::hypot(x - d.cx, y - d.cy) <= d.radius;
            ASSERT_EQ(p.truth.at(y, x), in ? 1 : 0);
        }
    }
    for (std::size_t i = 0; i < p.regions.size(); ++i)
        for (std::size_t j = i + 1; j < p.regions.size(); ++j)
            EXPECT_GT(std::hypot(p.regions[i].cx - p.regions[j].cx, p.regions[i].cy - p.regions[j].cy),
                      p.regions[i].radius + p.regions[j].radius);
}

TEST(Synth, SpeckleFieldsIndependentOnUnchangedPixels) {
    const SyntheticPair p = generate_pair(default_scene());
    // divide out the clean reflectivity to recover the two speckle fields
    std::vector<double> a, b;
    for (std::size_t i = 0; i < p.truth.size(); ++i) {
        if (p.truth.labels()[i]) continue;
        a.push_back(p.i1.values()[i] / p.reflectivity.values()[i]);
        b.push_back(p.i2.values()[i] / p.reflectivity.values()[i]);
    }
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= a.size();
    mb /= b.size();
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    EXPECT_LT(std::abs(sab / std::sqrt(saa * sbb)), 0.02);
}

TEST(Synth, UnreachableTargetIsASpecError) {
    SceneSpec spec = default_scene();
    spec.target_ir = 0.5;  // radius ~37 > 30
    EXPECT_THROW(generate_pair(spec), SpecError);
    spec = default_scene();
    spec.target_ir = 0.0005;  // radius < 4
    EXPECT_THROW(generate_pair(spec), SpecError);
}

TEST(Synth, GainBelowOneNeedsDarkeningFlag) {
    SceneSpec spec = default_scene();
    spec.change_gain = 0.25;
    EXPECT_THROW(generate_pair(spec), SpecError);
    spec.allow_darkening = true;
    spec.looks = 1e6;
    const SyntheticPair p = generate_pair(spec);
    for (std::size_t i = 0; i < p.truth.size(); ++i)
        if (p.truth.labels()[i]) ASSERT_NEAR(p.i2.values()[i] / p.i1.values()[i], 0.25, 0.0025);
}

TEST(Synth, HomogeneousBlockAvoidsChangesAndEdges) {
    const SyntheticPair p = generate_pair(default_scene());
    const auto block = homogeneous_block(p, 48, 12);
    ASSERT_TRUE(block.has_value());
    const double level = p.reflectivity.at(block->row, block->col);
    for (std::size_t r = block->row; r < block->row + 48; ++r) {
        for (std::size_t c = block->col; c < block->col + 48; ++c) {
            EXPECT_EQ(p.reflectivity.at(r, c), level);
            EXPECT_EQ(p.truth.at(r, c), 0);
        }
    }
    EXPECT_FALSE(homogeneous_block(p, 300, 0).has_value());
}
