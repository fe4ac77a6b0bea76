#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "sarcd/errors.hpp"
#include "sarcd/raster.hpp"
#include "test_util.hpp"

using namespace sarcd;
using testutil::TempDir;

TEST(Raster, ConstructorValidatesLengthAndFiniteness) {
    EXPECT_THROW(Raster(2, 2, {1.0, 2.0, 3.0}), ParameterError);
    EXPECT_THROW(Raster(1, 2, {1.0, std::numeric_limits<double>::quiet_NaN()}), ParameterError);
    EXPECT_THROW(Raster(1, 1, {std::numeric_limits<double>::infinity()}), ParameterError);
    const Raster r(3, 2, {0, 1, 2, 3, 4, 5});
    EXPECT_EQ(r.width(), 3u);
    EXPECT_EQ(r.height(), 2u);
    EXPECT_DOUBLE_EQ(r.at(1, 2), 5.0);
}

TEST(Raster, ClampedReadsReplicateEdges) {
    const Raster r(2, 2, {1, 2, 3, 4});
    EXPECT_DOUBLE_EQ(r.clamped(-3, -1), 1.0);
    EXPECT_DOUBLE_EQ(r.clamped(-1, 5), 2.0);
    EXPECT_DOUBLE_EQ(r.clamped(9, -2), 3.0);
    EXPECT_DOUBLE_EQ(r.clamped(4, 4), 4.0);
}

TEST(BinaryMap, RejectsLabelsOutsideZeroOne) {
    EXPECT_THROW(BinaryMap(2, 1, {0, 2}), ParameterError);
    const BinaryMap m(3, 1, {1, 0, 1});
    EXPECT_EQ(m.count_changed(), 2u);
}

TEST(Pgm, LoadsTwoByTwoExample) {
    TempDir dir;
    testutil::write_bytes(dir / "a.pgm", std::string("P5\n2 2\n255\n") + std::string("\x00\xff\x80\x40", 4));
    const Raster r = load_pgm(dir / "a.pgm");
    ASSERT_EQ(r.width(), 2u);
    ASSERT_EQ(r.height(), 2u);
    EXPECT_DOUBLE_EQ(r.values()[0], 0.0);
    EXPECT_DOUBLE_EQ(r.values()[1], 1.0);
    EXPECT_NEAR(r.values()[2], 128.0 / 255.0, 1e-15);
    EXPECT_NEAR(r.values()[2], 0.50196, 1e-5);
    EXPECT_NEAR(r.values()[3], 0.25098, 1e-5);
}

TEST(Pgm, HeaderCommentsAndSixteenBitSamples) {
    TempDir dir;
    testutil::write_bytes(dir / "c.pgm", std::string("P5 # comment\n1 # w\n2\n65535\n") + std::string("\xff\xff\x80\x00", 4));
    const Raster r = load_pgm(dir / "c.pgm");
    ASSERT_EQ(r.size(), 2u);
    EXPECT_DOUBLE_EQ(r.values()[0], 1.0);
    EXPECT_DOUBLE_EQ(r.values()[1], 32768.0 / 65535.0);
}

TEST(Pgm, AsciiVariantIsAParseError) {
    TempDir dir;
    testutil::write_bytes(dir / "p2.pgm", "P2\n2 2\n255\n0 1 2 3\n");
    try {
        load_pgm(dir / "p2.pgm");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 0u);
        EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos);
    }
}

TEST(Pgm, MalformedHeaderNamesOffset) {
    TempDir dir;
    testutil::write_bytes(dir / "bad.pgm", "P5\n2 x\n255\n");
    try {
        load_pgm(dir / "bad.pgm");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 5u);
    }
}

TEST(Pgm, TruncatedDataIsALengthError) {
    TempDir dir;
    testutil::write_bytes(dir / "t.pgm", std::string("P5\n2 2\n255\n") + std::string("\x01\x02\x03", 3));
    EXPECT_THROW(load_pgm(dir / "t.pgm"), LengthError);
}

TEST(Pgm, HeaderPassesDimensionsThrough) {
    TempDir dir;
    save_pgm(Raster(256, 256), dir / "z.pgm");
    const Raster r = load_pgm(dir / "z.pgm");
    EXPECT_EQ(r.width(), 256u);
    EXPECT_EQ(r.height(), 256u);
}

TEST(Pgm, SaveWritesRoundedBytes) {
    TempDir dir;
    save_pgm(Raster(3, 1, {0.0, 1.0, 0.5}), dir / "s.pgm");
    const std::string bytes = testutil::read_bytes(dir / "s.pgm");
    ASSERT_EQ(bytes.substr(0, 11), "P5\n3 1\n255\n");
    EXPECT_EQ(static_cast<unsigned char>(bytes[11]), 0);
    EXPECT_EQ(static_cast<unsigned char>(bytes[12]), 255);
    EXPECT_EQ(static_cast<unsigned char>(bytes[13]), 128);
}

TEST(Pgm, SaveRejectsOutOfRangeValues) {
    TempDir dir;
    EXPECT_THROW(save_pgm(Raster(1, 1, {1.01}), dir / "r.pgm"), RangeError);
    EXPECT_THROW(save_pgm(Raster(1, 1, {-0.5}), dir / "r.pgm"), RangeError);
}

TEST(Pgm, RoundTripWithinHalfGrayLevel) {
    TempDir dir;
    const Raster r = testutil::random_raster(37, 23, 7);
    save_pgm(r, dir / "rt.pgm");
    const Raster back = load_pgm(dir / "rt.pgm");
    ASSERT_TRUE(back.same_shape(r));
    for (std::size_t i = 0; i < r.size(); ++i) EXPECT_LE(std::abs(back.values()[i] - r.values()[i]), 1.0 / 510.0 + 1e-12);
}

TEST(Sarf, HeaderLayoutForThreeByTwo) {
    TempDir dir;
    save_f32(Raster(3, 2), dir / "h.sarf");
    const std::string bytes = testutil::read_bytes(dir / "h.sarf");
    ASSERT_EQ(bytes.size(), 16u + 6u * 4u);
    EXPECT_EQ(bytes.substr(0, 16), std::string("SARF\x03\x00\x00\x00\x02\x00\x00\x00\x00\x00\x00\x00", 16));
}

TEST(Sarf, RoundTripIsBitExact) {
    TempDir dir;
    std::vector<double> v(40 * 30);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<float>(std::sin(0.37 * i) * 1e3 - 5.0 / (i + 1));
    const Raster r(40, 30, v);
    save_f32(r, dir / "b.sarf");
    EXPECT_EQ(load_f32(dir / "b.sarf"), r);
    EXPECT_EQ(load_image(dir / "b.sarf"), r);
}

TEST(Sarf, ShortPayloadIsALengthError) {
    TempDir dir;
    save_f32(Raster(2, 2, {1, 2, 3, 4}), dir / "s.sarf");
    std::string bytes = testutil::read_bytes(dir / "s.sarf");
    bytes.resize(bytes.size() - 4);
    testutil::write_bytes(dir / "s.sarf", bytes);
    EXPECT_THROW(load_f32(dir / "s.sarf"), LengthError);
}

TEST(Sarf, BadMagicIsAParseError) {
    TempDir dir;
    testutil::write_bytes(dir / "m.sarf", std::string("SARX\x01\x00\x00\x00\x01\x00\x00\x00\x00\x00\x00\x00\x00\x00\x00\x00", 20));
    EXPECT_THROW(load_f32(dir / "m.sarf"), ParseError);
}

TEST(BinaryPgm, RoundTrip) {
    TempDir dir;
    const BinaryMap m(4, 2, {0, 1, 1, 0, 0, 0, 1, 1});
    save_binary_pgm(m, dir / "m.pgm");
    EXPECT_EQ(load_binary_pgm(dir / "m.pgm"), m);
}

TEST(NormalizeCenter, HandExample) {
    const Raster out = normalize_center(Raster(4, 1, {0, 1, 2, 3}));
    const double expected[] = {-0.5, -1.0 / 6.0, 1.0 / 6.0, 0.5};
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(out.values()[i], expected[i], 1e-15);
}

TEST(NormalizeCenter, ZeroMeanAndBoundedRange) {
    const Raster out = normalize_center(testutil::random_raster(50, 40, 3, -7.0, 12.0));
    double mean = 0.0;
    for (double v : out.values()) {
        EXPECT_GE(v, -1.0);
        EXPECT_LE(v, 1.0);
        mean += v;
    }
    EXPECT_NEAR(mean / static_cast<double>(out.size()), 0.0, 1e-9);
}

TEST(NormalizeCenter, ConstantInputIsDegenerate) {
    EXPECT_THROW(normalize_center(Raster::filled(2, 2, 5.0)), DegenerateInputError);
}

TEST(NormalizeCenter, InvariantUnderPositiveAffineMaps) {
    const Raster x = testutil::random_raster(31, 17, 11);
    for (auto [a, b] : {std::pair{3.5, -2.0}, std::pair{0.01, 100.0}, std::pair{250.0, 0.0}}) {
        std::vector<double> v(x.values().begin(), x.values().end());
        for (double& e : v) e = a * e + b;
        const Raster y = normalize_center(Raster(x.width(), x.height(), v));
        const Raster ref = normalize_center(x);
        for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y.values()[i], ref.values()[i], 1e-9);
    }
}

TEST(RescaleUnit, MapsToUnitInterval) {
    const Raster r = rescale_unit(Raster(3, 1, {-2, 0, 2}));
    EXPECT_DOUBLE_EQ(r.values()[0], 0.0);
    EXPECT_DOUBLE_EQ(r.values()[1], 0.5);
    EXPECT_DOUBLE_EQ(r.values()[2], 1.0);
    const Raster c = rescale_unit(Raster::filled(2, 2, 4.0));
    for (double v : c.values()) EXPECT_EQ(v, 0.0);
}
