#include "quplink/simulator.hpp"

#include <gtest/gtest.h>

namespace {

using quplink::BerCurve;
using quplink::BerPoint;
using quplink::BitDepth;
using quplink::DetectorKind;
using quplink::ExecutionPolicy;
using quplink::ModulationScheme;
using quplink::SimConfig;

SimConfig small_config() {
    SimConfig cfg;
    cfg.m_antennas = 32;
    cfg.k_users = 4;
    cfg.modulation = ModulationScheme::Qpsk;
    cfg.detector = DetectorKind::Zf;
    cfg.ebn0_grid_db = {-12.0};
    cfg.n_channel_realizations = 12;
    cfg.n_vectors_per_realization = 40;
    cfg.master_seed = 99;
    return cfg;
}

BerCurve synthetic_curve(std::vector<std::pair<double, double>> db_ber) {
    BerCurve curve;
    for (const auto& [db, ber] : db_ber) {
        BerPoint p;
        p.ebn0_db = db;
        p.ber = ber;
        p.bit_errors = static_cast<std::uint64_t>(ber * 1e9);
        p.bits_total = 1000000000ull;
        curve.points.push_back(p);
    }
    return curve;
}

TEST(Simulator, ValidateConfigNamesOffendingField) {
    SimConfig cfg = small_config();
    cfg.k_users = 40;
    try {
        quplink::validate_config(cfg);
        FAIL() << "expected ConfigError";
    } catch (const quplink::ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("m:"), std::string::npos);
    }

    cfg = small_config();
    cfg.ebn0_grid_db = {0.0, 0.0};
    try {
        quplink::validate_config(cfg);
        FAIL() << "expected ConfigError";
    } catch (const quplink::ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("ebn0"), std::string::npos);
    }

    cfg = small_config();
    cfg.ebn0_grid_db.clear();
    EXPECT_THROW(quplink::validate_config(cfg), quplink::ConfigError);

    cfg = small_config();
    cfg.n_vectors_per_realization = 0;
    try {
        quplink::validate_config(cfg);
        FAIL() << "expected ConfigError";
    } catch (const quplink::ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("vectors"), std::string::npos);
    }
}

TEST(Simulator, FullPrecisionIsErrorFreeWithoutNoise) {
    SimConfig cfg = small_config();
    cfg.ebn0_grid_db = {80.0};
    const BerPoint point = quplink::run_point(cfg, 80.0, BitDepth::infinite());
    EXPECT_EQ(point.bit_errors, 0u);
    EXPECT_EQ(point.bits_total, 12u * 40u * 4u * 2u);
    EXPECT_EQ(point.ber, 0.0);
}

TEST(Simulator, IdenticalCountsForAnyThreadCount) {
    SimConfig cfg = small_config();
    cfg.n_channel_realizations = 16;
    const std::vector<BitDepth> depths = {BitDepth::finite(1), BitDepth::infinite()};

    ExecutionPolicy one;
    one.n_threads = 1;
    ExecutionPolicy three;
    three.n_threads = 3;
    ExecutionPolicy eight;
    eight.n_threads = 8;

    const auto a = quplink::run_point_multi(cfg, -12.0, depths, one);
    const auto b = quplink::run_point_multi(cfg, -12.0, depths, three);
    const auto c = quplink::run_point_multi(cfg, -12.0, depths, eight);
    for (std::size_t d = 0; d < depths.size(); ++d) {
        EXPECT_EQ(a.depths[d].bit_errors, b.depths[d].bit_errors);
        EXPECT_EQ(a.depths[d].bit_errors, c.depths[d].bit_errors);
        EXPECT_EQ(a.depths[d].bits_total, b.depths[d].bits_total);
        EXPECT_EQ(a.depths[d].bits_total, c.depths[d].bits_total);
        EXPECT_EQ(a.depths[d].per_realization_errors, b.depths[d].per_realization_errors);
    }
}

TEST(Simulator, SharedDrawsAcrossDepths) {
    const SimConfig cfg = small_config();
    const auto joint = quplink::run_realization_multi(
        cfg, -12.0, {BitDepth::finite(1), BitDepth::finite(2), BitDepth::infinite()}, 3);
    const auto solo_two = quplink::run_realization(cfg, -12.0, BitDepth::finite(2), 3);
    const auto solo_inf = quplink::run_realization(cfg, -12.0, BitDepth::infinite(), 3);

    EXPECT_EQ(joint.bit_errors[1], solo_two.bit_errors[0]);
    EXPECT_EQ(joint.bit_errors[2], solo_inf.bit_errors[0]);
    EXPECT_EQ(joint.trace.channel_blocks, solo_two.trace.channel_blocks);
    EXPECT_EQ(joint.trace.bits_blocks, solo_two.trace.bits_blocks);
    EXPECT_EQ(joint.trace.noise_blocks, solo_two.trace.noise_blocks);
}

TEST(Simulator, StreamConsumptionIsExact) {
    SimConfig cfg = small_config();
    cfg.m_antennas = 8;
    cfg.k_users = 4;  // 8 payload bits per vector, one u32 word
    cfg.n_vectors_per_realization = 40;
    const auto result = quplink::run_realization(cfg, -6.0, BitDepth::finite(2), 0);
    EXPECT_EQ(result.attempts_used, 1u);
    EXPECT_EQ(result.bits_per_depth, 40u * 8u);
    EXPECT_EQ(result.trace.channel_blocks, 8u * 4u);   // one block per entry
    EXPECT_EQ(result.trace.noise_blocks, 40u * 8u);    // one block per antenna sample
    EXPECT_EQ(result.trace.bits_blocks, 10u);          // 40 words, 4 words per block
}

TEST(Simulator, BerFallsAsSnrRises) {
    SimConfig cfg = small_config();
    cfg.n_channel_realizations = 20;
    cfg.n_vectors_per_realization = 200;
    cfg.ebn0_grid_db = {-16.0, -14.0, -12.0};
    const BerCurve curve = quplink::run_sweep(cfg, BitDepth::infinite());
    ASSERT_EQ(curve.points.size(), 3u);
    EXPECT_GT(curve.points[0].ber, curve.points[1].ber);
    EXPECT_GT(curve.points[1].ber, curve.points[2].ber);
    EXPECT_GT(curve.points[2].ber, 0.0);
}

TEST(Simulator, CoarserAdcsNeverHelp) {
    SimConfig cfg = small_config();
    cfg.n_channel_realizations = 20;
    cfg.n_vectors_per_realization = 150;
    const std::vector<BitDepth> depths = {BitDepth::finite(1), BitDepth::finite(2),
                                          BitDepth::finite(3), BitDepth::infinite()};
    const auto result = quplink::run_point_multi(cfg, -10.0, depths);
    for (std::size_t d = 1; d < depths.size(); ++d) {
        EXPECT_LE(result.depths[d].bit_errors, result.depths[d - 1].bit_errors + 20)
            << "depth index " << d;
    }
    EXPECT_GT(result.depths[0].bit_errors, result.depths.back().bit_errors);
}

TEST(Simulator, OneBitCurveFlattensIntoFloor) {
    SimConfig cfg;
    cfg.m_antennas = 100;
    cfg.k_users = 10;
    cfg.ebn0_grid_db = {10.0, 20.0};
    cfg.n_channel_realizations = 30;
    cfg.n_vectors_per_realization = 400;
    cfg.master_seed = 7;
    const BerCurve curve = quplink::run_sweep(cfg, BitDepth::finite(1));
    const double ber10 = curve.points[0].ber;
    const double ber20 = curve.points[1].ber;
    EXPECT_GT(ber10, 1e-5);
    EXPECT_LT(ber10, 5e-4);
    EXPECT_GT(ber20, 1e-5);
    EXPECT_LT(ber10 / ber20, 5.0);
}

TEST(Simulator, MmseNoWorseThanZfUnderHeavyLoading) {
    SimConfig cfg;
    cfg.m_antennas = 16;
    cfg.k_users = 8;
    cfg.ebn0_grid_db = {-12.0};
    cfg.n_channel_realizations = 20;
    cfg.n_vectors_per_realization = 100;
    cfg.master_seed = 31;

    cfg.detector = DetectorKind::Zf;
    const BerPoint zf = quplink::run_point(cfg, -12.0, BitDepth::infinite());
    cfg.detector = DetectorKind::Mmse;
    const BerPoint mmse = quplink::run_point(cfg, -12.0, BitDepth::infinite());
    EXPECT_LT(mmse.bit_errors, zf.bit_errors);
}

TEST(Simulator, EarlyStopRequiresNonDeterministicMode) {
    SimConfig cfg = small_config();
    cfg.n_channel_realizations = 30;
    cfg.ebn0_grid_db = {-20.0};

    ExecutionPolicy strict;
    strict.n_threads = 2;
    strict.deterministic = true;
    const BerPoint full = quplink::run_point(cfg, -20.0, BitDepth::infinite(), strict);
    EXPECT_EQ(full.bits_total, 30u * 40u * 4u * 2u);

    ExecutionPolicy loose;
    loose.n_threads = 2;
    loose.deterministic = false;
    loose.early_stop_errors = 10;
    const BerPoint stopped = quplink::run_point(cfg, -20.0, BitDepth::infinite(), loose);
    EXPECT_LT(stopped.bits_total, full.bits_total);
    EXPECT_GE(stopped.bit_errors, 10u);
    EXPECT_NEAR(stopped.ber, full.ber, 0.05);
}

TEST(Simulator, SweepMatchesPointByPoint) {
    SimConfig cfg = small_config();
    cfg.ebn0_grid_db = {-14.0, -11.0};
    const BerCurve curve = quplink::run_sweep(cfg, BitDepth::finite(3));
    const BerPoint first = quplink::run_point(cfg, -14.0, BitDepth::finite(3));
    const BerPoint second = quplink::run_point(cfg, -11.0, BitDepth::finite(3));
    EXPECT_EQ(curve.points[0].bit_errors, first.bit_errors);
    EXPECT_EQ(curve.points[1].bit_errors, second.bit_errors);
    EXPECT_EQ(curve.bits, BitDepth::finite(3));
}

TEST(Simulator, SnrAtBerInterpolatesOnLogScale) {
    const BerCurve curve = synthetic_curve({{0.0, 1e-3}, {2.0, 1e-5}});
    const auto snr = quplink::snr_at_ber(curve, 1e-4);
    ASSERT_TRUE(snr.has_value());
    EXPECT_NEAR(*snr, 1.0, 1e-12);
}

TEST(Simulator, SnrAtBerExactGridHit) {
    const BerCurve curve = synthetic_curve({{-2.0, 1e-3}, {0.0, 1e-4}, {2.0, 1e-6}});
    const auto snr = quplink::snr_at_ber(curve, 1e-4);
    ASSERT_TRUE(snr.has_value());
    EXPECT_DOUBLE_EQ(*snr, 0.0);
}

TEST(Simulator, SnrAtBerNeedsPositiveBracket) {
    const BerCurve floored = synthetic_curve({{0.0, 1e-3}, {2.0, 3e-4}, {4.0, 2.8e-4}});
    EXPECT_FALSE(quplink::snr_at_ber(floored, 1e-4).has_value());

    const BerCurve hits_zero = synthetic_curve({{0.0, 1e-3}, {2.0, 0.0}});
    EXPECT_FALSE(quplink::snr_at_ber(hits_zero, 1e-4).has_value());

    const BerCurve recovers = synthetic_curve({{0.0, 1e-3}, {2.0, 0.0}, {4.0, 5e-4}, {6.0, 5e-5}});
    const auto snr = quplink::snr_at_ber(recovers, 1e-4);
    ASSERT_TRUE(snr.has_value());
    EXPECT_GT(*snr, 4.0);
    EXPECT_LT(*snr, 6.0);

    EXPECT_THROW(quplink::snr_at_ber(recovers, 0.0), quplink::ConfigError);
}

TEST(Simulator, DegradationSubtractsCrossings) {
    const BerCurve reference = synthetic_curve({{0.0, 1e-3}, {2.0, 1e-5}});
    const BerCurve test = synthetic_curve({{3.0, 1e-3}, {5.0, 1e-5}});
    const auto degradation = quplink::ber_degradation(test, reference, 1e-4);
    ASSERT_TRUE(degradation.has_value());
    EXPECT_NEAR(*degradation, 3.0, 1e-12);

    const BerCurve floored = synthetic_curve({{0.0, 1e-3}, {5.0, 9e-4}});
    EXPECT_FALSE(quplink::ber_degradation(floored, reference, 1e-4).has_value());
}

}  // namespace
