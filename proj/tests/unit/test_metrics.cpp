#include <gtest/gtest.h>

#include <json.hpp>
#include <random>

#include "sarcd/errors.hpp"
#include "sarcd/metrics.hpp"

using namespace sarcd;

namespace {

BinaryMap map_of(std::vector<std::uint8_t> v) {
    const std::size_t n = v.size();
    return BinaryMap(n, 1, std::move(v));
}

}  // namespace

TEST(Confusion, Basics) {
    const BinaryMap t = map_of({1, 0, 1, 0, 0});
    EXPECT_EQ(confusion(t, t), (ConfusionCounts{2, 3, 0, 0}));
    EXPECT_EQ(confusion(map_of({1, 1, 1, 1}), map_of({0, 0, 0, 0})), (ConfusionCounts{0, 0, 4, 0}));
    const ConfusionCounts c = confusion(map_of({1, 0, 0, 1, 1}), map_of({1, 1, 0, 0, 1}));
    EXPECT_EQ(c, (ConfusionCounts{2, 1, 1, 1}));
    EXPECT_EQ(c.total(), 5u);
    EXPECT_EQ(c.overall_errors(), 2u);
    EXPECT_THROW(confusion(map_of({1}), map_of({1, 0})), ParameterError);
}

TEST(Pcc, Examples) {
    EXPECT_EQ(pcc({50, 900, 30, 20}), 0.95);
    EXPECT_EQ(pcc({10, 20, 0, 0}), 1.0);
}

TEST(Kappa, HandExample) {
    const ConfusionCounts c{50, 900, 30, 20};
    const double pre = (80.0 * 70.0 + 920.0 * 930.0) / 1e6;
    EXPECT_NEAR(pre, 0.8612, 1e-12);
    EXPECT_NEAR(kappa(c), (0.95 - pre) / (1.0 - pre), 1e-12);
    EXPECT_NEAR(kappa(c), 0.639769, 1e-6);
}

TEST(Kappa, PerfectAgreementIsOne) {
    EXPECT_DOUBLE_EQ(kappa({7, 93, 0, 0}), 1.0);
}

TEST(Kappa, UndefinedWhenSingleClassEverywhere) {
    EXPECT_THROW(kappa({0, 10, 0, 0}), ParameterError);
    EXPECT_THROW(kappa({10, 0, 0, 0}), ParameterError);
}

TEST(Kappa, IndependentMapsNearZero) {
    std::mt19937_64 rng(1234);
    std::bernoulli_distribution pred(0.3);
    std::bernoulli_distribution truth(0.1);
    std::vector<std::uint8_t> p(1'000'000);
    std::vector<std::uint8_t> t(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = pred(rng);
        t[i] = truth(rng);
    }
    const double kc = kappa(confusion(BinaryMap(1000, 1000, p), BinaryMap(1000, 1000, t)));
    EXPECT_LT(std::abs(kc), 0.01);
}

TEST(Kappa, SymmetricUnderClassSwap) {
    const ConfusionCounts c{37, 812, 64, 29};
    const ConfusionCounts swapped{c.tn, c.tp, c.fn, c.fp};
    EXPECT_NEAR(kappa(c), kappa(swapped), 1e-15);
    EXPECT_LE(kappa(c), 1.0);
}

TEST(ImbalanceRatio, PaperValues) {
    std::vector<std::uint8_t> a(1077, 0);
    std::fill(a.begin(), a.begin() + 77, 1);
    EXPECT_DOUBLE_EQ(imbalance_ratio(map_of(a)), 0.077);
    std::vector<std::uint8_t> b(10094, 0);
    std::fill(b.begin(), b.begin() + 94, 1);
    EXPECT_DOUBLE_EQ(imbalance_ratio(map_of(b)), 0.0094);
    EXPECT_EQ(imbalance_ratio(map_of({0, 0, 0})), 0.0);
    EXPECT_THROW(imbalance_ratio(map_of({1, 1})), ParameterError);
}

TEST(MetricsJson, FlatDocument) {
    const BinaryMap truth = map_of({1, 0, 0, 0, 1, 0});
    const BinaryMap pred = map_of({1, 1, 0, 0, 0, 0});
    const Evaluation e = evaluate(pred, truth);
    const auto j = nlohmann::json::parse(metrics_json(e));
    ASSERT_EQ(j.size(), 6u);
    EXPECT_EQ(j.at("fp").get<int>(), 1);
    EXPECT_EQ(j.at("fn").get<int>(), 1);
    EXPECT_EQ(j.at("oe").get<int>(), 2);
    EXPECT_DOUBLE_EQ(j.at("pcc").get<double>(), 4.0 / 6.0);
    EXPECT_DOUBLE_EQ(j.at("kc").get<double>(), e.kc);
    EXPECT_DOUBLE_EQ(j.at("ir").get<double>(), 0.5);
    EXPECT_EQ(metrics_json(e), metrics_json(evaluate(pred, truth)));
}
