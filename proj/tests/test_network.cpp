#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "omamrc/channel.hpp"
#include "omamrc/network.hpp"
#include "test_support.hpp"

namespace omamrc {
namespace {

bool has_error(const ValidationResult& result, const std::string& text)
{
    for (const auto& e : result.errors) {
        if (e.find(text) != std::string::npos) {
            return true;
        }
    }
    return false;
}

TEST(SourceSet, BasicAlgebra)
{
    const SourceSet a = SourceSet::of({0, 2});
    const SourceSet b = SourceSet::of({2, 3});
    EXPECT_EQ((a & b), SourceSet::of({2}));
    EXPECT_EQ((a | b), SourceSet::of({0, 2, 3}));
    EXPECT_EQ((a - b), SourceSet::of({0}));
    EXPECT_EQ(SourceSet::all(4) - a, SourceSet::of({1, 3}));
    EXPECT_EQ(a.size(), 2);
    EXPECT_TRUE(a.intersects(b));
    EXPECT_FALSE(a.intersects(SourceSet::of({1})));
    EXPECT_EQ(a.to_string(), "{s1,s3}");
    EXPECT_EQ(SourceSet::all(0), SourceSet{});
    EXPECT_EQ(SourceSet::all(kMaxSources).size(), kMaxSources);
}

TEST(SourceSet, SizeKSubsetsComeInLexicographicOrder)
{
    std::vector<std::vector<int>> seen;
    first_subset_of_size(SourceSet::of({0, 1, 3, 4}), 2, [&](SourceSet s) {
        seen.push_back(s.members());
        return false;
    });
    const std::vector<std::vector<int>> expected{{0, 1}, {0, 3}, {0, 4}, {1, 3}, {1, 4}, {3, 4}};
    EXPECT_EQ(seen, expected);
}

TEST(NodeId, OrderIsSourcesThenRelays)
{
    EXPECT_LT(source_node(2), relay_node(0));
    EXPECT_LT(relay_node(0), relay_node(1));
    EXPECT_EQ(node_at(4, 3), relay_node(1));
    EXPECT_EQ(node_ordinal(relay_node(1), 3), 4);
    EXPECT_EQ(relay_node(1).to_string(), "r2");
}

TEST(ValidateConfig, AcceptsThreeSourceThreeRelayNetwork)
{
    const auto result = validate_config(symmetric_config(3, 3, 3, 0.5, {1, 1, 1}, 0.0));
    ASSERT_TRUE(result) << (result.errors.empty() ? "" : result.errors.front());
    EXPECT_EQ(result.network->sources(), 3);
    EXPECT_EQ(result.network->relays(), 3);
    EXPECT_TRUE(result.warnings.empty());
    // (M + L)(L + 1) minus the L relay self pairs
    EXPECT_EQ(all_links(3, 3).size(), 21u);
}

TEST(ValidateConfig, RejectsNonPositiveRate)
{
    const auto result = validate_config(symmetric_config(3, 3, 3, 0.5, {1, 1, 0}, 0.0));
    EXPECT_FALSE(result);
    EXPECT_TRUE(has_error(result, "non-positive rate for source 2"));
}

TEST(ValidateConfig, RejectsSingleSource)
{
    const auto result = validate_config(symmetric_config(1, 3, 3, 0.5, {1}, 0.0));
    EXPECT_FALSE(result);
    EXPECT_TRUE(has_error(result, "M must be ≥ 2"));
}

TEST(ValidateConfig, RejectsNonPositiveAlpha)
{
    EXPECT_TRUE(has_error(validate_config(symmetric_config(2, 1, 1, 0.0, {1, 1}, 0.0)), "alpha"));
    EXPECT_TRUE(has_error(validate_config(symmetric_config(2, 1, 1, -1.0, {1, 1}, 0.0)), "alpha"));
}

TEST(ValidateConfig, ReportsMissingLink)
{
    auto cfg = symmetric_config(2, 2, 2, 0.5, {1, 1}, 0.0);
    cfg.link_gains_db.erase({relay_node(1), relay_node(0)});
    const auto result = validate_config(cfg);
    EXPECT_FALSE(result);
    EXPECT_TRUE(has_error(result, "missing link entry r2->r1"));
}

TEST(ValidateConfig, RejectsSelfLinkAndOutOfRangeNodes)
{
    auto cfg = symmetric_config(2, 2, 2, 0.5, {1, 1}, 0.0);
    cfg.link_gains_db[{relay_node(0), relay_node(0)}] = 1.0;
    EXPECT_TRUE(has_error(validate_config(cfg), "unexpected link entry r1->r1"));
    cfg = symmetric_config(2, 2, 2, 0.5, {1, 1}, 0.0);
    cfg.link_gains_db[{source_node(5), destination_node()}] = 1.0;
    EXPECT_TRUE(has_error(validate_config(cfg), "unexpected link entry s6->d"));
}

TEST(ValidateConfig, ShortFrameWarnsButPasses)
{
    const auto result = validate_config(symmetric_config(3, 3, 2, 0.5, {1, 1, 1}, 0.0));
    EXPECT_TRUE(result);
    EXPECT_EQ(result.warnings.size(), 1u);
}

TEST(ValidateConfig, ConvertsDecibelsOnce)
{
    auto cfg = symmetric_config(2, 1, 1, 0.5, {1, 1}, 5.0);
    cfg.link_gains_db[{source_node(1), destination_node()}] = -INFINITY;
    const auto net = *validate_config(cfg).network;
    EXPECT_NEAR(net.gain(source_node(0), relay_node(0)), std::sqrt(10.0), 1e-12);
    EXPECT_EQ(net.gain(source_node(1), destination_node()), 0.0);
}

TEST(Decibels, RoundTrip)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> linear(1e-6, 1e6);
    for (int i = 0; i < 10000; ++i) {
        const double x = linear(rng);
        EXPECT_NEAR(db_to_linear(linear_to_db(x)) / x, 1.0, 1e-12);
    }
}

TEST(MutualInformation, KnownValues)
{
    EXPECT_EQ(mutual_information({0.0, 0.0}), 0.0);
    EXPECT_DOUBLE_EQ(mutual_information({1.0, 0.0}), 1.0);
    EXPECT_DOUBLE_EQ(mutual_information({1.0, std::sqrt(2.0)}), 2.0);
}

TEST(MutualInformation, NonNegativeAndIncreasing)
{
    double previous = -1.0;
    for (double power = 0.0; power < 100.0; power += 0.37) {
        const double mi = mutual_information({std::sqrt(power), 0.0});
        EXPECT_GE(mi, 0.0);
        EXPECT_GT(mi, previous);
        previous = mi;
    }
}

TEST(DrawRealization, ZeroVarianceLinkIsSilent)
{
    auto cfg = symmetric_config(2, 1, 1, 0.5, {1, 1}, 3.0);
    cfg.link_gains_db[{source_node(0), destination_node()}] = -INFINITY;
    const auto net = *validate_config(cfg).network;
    auto stream = frame_stream(1, 0);
    const auto real = draw_realization(net, stream);
    EXPECT_EQ(std::norm(real.gain(source_node(0), destination_node())), 0.0);
    EXPECT_EQ(real.mi(source_node(0), destination_node()), 0.0);
    EXPECT_GT(real.mi(source_node(1), destination_node()), 0.0);
}

TEST(DrawRealization, PowerMatchesConfiguredVariance)
{
    const auto net = testing::make_network(2, 1, 1, 0.5, {1, 1}, 5.0);
    double sum = 0.0;
    constexpr int kDraws = 100000;
    for (int i = 0; i < kDraws; ++i) {
        auto stream = frame_stream(99, static_cast<std::uint64_t>(i));
        sum += std::norm(draw_realization(net, stream).gain(source_node(0), relay_node(0)));
    }
    const double expected = std::pow(10.0, 0.5);
    EXPECT_NEAR(sum / kDraws, expected, 0.02 * expected);
}

TEST(DrawRealization, LinksAreUncorrelated)
{
    const auto net = testing::make_network(2, 1, 1, 0.5, {1, 1}, 5.0);
    constexpr int kDraws = 100000;
    std::vector<double> x(kDraws);
    std::vector<double> y(kDraws);
    auto stream = frame_stream(4, 0);
    for (int i = 0; i < kDraws; ++i) {
        const auto real = draw_realization(net, stream);
        x[static_cast<std::size_t>(i)] = std::norm(real.gain(source_node(0), destination_node()));
        y[static_cast<std::size_t>(i)] = std::norm(real.gain(relay_node(0), destination_node()));
    }
    const auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double e : v) {
            s += e;
        }
        return s / static_cast<double>(v.size());
    };
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    EXPECT_NEAR(sxy / std::sqrt(sxx * syy), 0.0, 0.02);
}

TEST(DrawRealization, SameSeedIsBitIdentical)
{
    const auto net = testing::make_network(3, 3, 3, 0.5, {1, 1, 1}, 2.0);
    auto a = frame_stream(123, 45);
    auto b = frame_stream(123, 45);
    const auto ra = draw_realization(net, a);
    const auto rb = draw_realization(net, b);
    ASSERT_EQ(ra.gains().size(), rb.gains().size());
    for (std::size_t i = 0; i < ra.gains().size(); ++i) {
        EXPECT_EQ(ra.gains()[i], rb.gains()[i]);
    }
    auto c = frame_stream(123, 46);
    EXPECT_NE(draw_realization(net, c).gains()[0], ra.gains()[0]);
}

TEST(DrawRealization, SameFadingAcrossSnrPoints)
{
    const auto low = testing::make_network(2, 1, 1, 0.5, {1, 1}, 0.0);
    const auto high = testing::make_network(2, 1, 1, 0.5, {1, 1}, 10.0);
    auto a = frame_stream(8, 3);
    auto b = frame_stream(8, 3);
    const auto ra = draw_realization(low, a);
    const auto rb = draw_realization(high, b);
    for (std::size_t i = 0; i < ra.gains().size(); ++i) {
        EXPECT_NEAR(std::norm(rb.gains()[i]), 10.0 * std::norm(ra.gains()[i]), 1e-12 * (1 + std::norm(rb.gains()[i])));
    }
}

} // namespace
} // namespace omamrc
