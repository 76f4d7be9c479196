#include "quplink/detector.hpp"

#include <gtest/gtest.h>

#include "quplink/channel.hpp"
#include "quplink/rng.hpp"

namespace {

using quplink::ComplexMatrix;
using quplink::cxd;
using quplink::DetectionMatrix;
using quplink::DetectorKind;

ComplexMatrix test_channel(std::size_t m, std::size_t k, std::uint64_t stream_id) {
    quplink::RandomStream stream(2024, stream_id);
    return quplink::draw_channel(m, k, stream);
}

TEST(Detector, ZfInvertsTheChannel) {
    const ComplexMatrix h = test_channel(30, 5, 1);
    const DetectionMatrix det = quplink::build_zf(h);
    ASSERT_EQ(det.a.rows(), 30u);
    ASSERT_EQ(det.a.cols(), 5u);
    const ComplexMatrix product = matmul(hermitian_transpose(det.a), h);
    EXPECT_LT(max_abs_difference(product, ComplexMatrix::identity(5)), 1e-10);
}

TEST(Detector, ZfRecoversNoiselessSymbols) {
    const ComplexMatrix h = test_channel(20, 4, 2);
    const DetectionMatrix det = quplink::build_zf(h);
    ComplexMatrix x(4, 1);
    x(0, 0) = {1, -1};
    x(1, 0) = {-3, 0.5};
    x(2, 0) = {0, 2};
    x(3, 0) = {0.25, 0.25};
    const ComplexMatrix y = matmul(h, x);
    std::vector<cxd> r(y.data(), y.data() + 20);
    const auto x_hat = quplink::detect(det, r);
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(std::abs(x_hat[k] - x(k, 0)), 0.0, 1e-10);
    }
}

TEST(Detector, MmseApproachesZfAtHighSnr) {
    const ComplexMatrix h = test_channel(16, 4, 3);
    const DetectionMatrix zf = quplink::build_zf(h);
    const DetectionMatrix mmse = quplink::build_mmse(h, 1e-10, 1.0);
    EXPECT_LT(max_abs_difference(zf.a, mmse.a), 1e-8);
}

TEST(Detector, MmseMatchesScalarFormula) {
    ComplexMatrix h(1, 1);
    h(0, 0) = {0.6, -0.8};
    const double sigma_n2 = 0.5;
    const double sigma_x2 = 2.0;
    const DetectionMatrix mmse = quplink::build_mmse(h, sigma_n2, sigma_x2);
    const cxd expected = h(0, 0) / (std::norm(h(0, 0)) + sigma_n2 / sigma_x2);
    EXPECT_NEAR(std::abs(mmse.a(0, 0) - expected), 0.0, 1e-12);
}

TEST(Detector, MmseShrinksTowardZero) {
    const ComplexMatrix h = test_channel(12, 3, 4);
    const DetectionMatrix zf = quplink::build_zf(h);
    const DetectionMatrix mmse = quplink::build_mmse(h, 5.0, 1.0);
    // With heavy regularization the combined gain a_k^H h_k drops below 1.
    const ComplexMatrix gain = matmul(hermitian_transpose(mmse.a), h);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_LT(gain(k, k).real(), 0.999);
        EXPECT_GT(gain(k, k).real(), 0.0);
    }
    const ComplexMatrix zf_gain = matmul(hermitian_transpose(zf.a), h);
    EXPECT_NEAR(zf_gain(0, 0).real(), 1.0, 1e-9);
}

TEST(Detector, DetectKnownValues) {
    ComplexMatrix a(2, 2);
    a(0, 0) = {1, 0};
    a(0, 1) = {0, 1};
    a(1, 0) = {2, 0};
    a(1, 1) = {0, 0};
    const DetectionMatrix det{DetectorKind::Zf, a};
    const std::vector<cxd> r = {{1, 1}, {3, -2}};
    const auto x_hat = quplink::detect(det, r);
    // x0 = conj(1)(1+i) + conj(2)(3-2i) = 7 - 3i
    // x1 = conj(i)(1+i) = -i(1+i) = 1 - i
    EXPECT_NEAR(std::abs(x_hat[0] - cxd(7, -3)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(x_hat[1] - cxd(1, -1)), 0.0, 1e-12);
}

TEST(Detector, DetectRejectsWrongLength) {
    const ComplexMatrix h = test_channel(10, 2, 5);
    const DetectionMatrix det = quplink::build_zf(h);
    const std::vector<cxd> r(7);
    EXPECT_THROW(quplink::detect(det, r), quplink::DimensionError);
}

TEST(Detector, BuildZfRejectsRankDeficientChannel) {
    ComplexMatrix h(6, 2);
    for (std::size_t i = 0; i < 6; ++i) {
        h(i, 0) = {1.0 + static_cast<double>(i), -0.5};
        h(i, 1) = h(i, 0);  // duplicated column
    }
    EXPECT_THROW(quplink::build_zf(h), quplink::NotPositiveDefiniteError);
}

TEST(Detector, BuildMmseRejectsNonPositiveSignalPower) {
    const ComplexMatrix h = test_channel(8, 2, 6);
    EXPECT_THROW(quplink::build_mmse(h, 0.1, 0.0), quplink::ConfigError);
}

TEST(Detector, DecomposeUserDiagonalChannel) {
    ComplexMatrix h(2, 2);
    h(0, 0) = {1, 0};
    h(1, 1) = {2, 0};
    const DetectionMatrix det = quplink::build_zf(h);
    const double sigma_n2 = 0.3;
    const double sigma_x2 = 1.5;

    const auto u0 = quplink::decompose_user(h, det, 0, sigma_n2, sigma_x2);
    EXPECT_NEAR(u0.signal_power, sigma_x2, 1e-12);
    EXPECT_NEAR(u0.interference_power, 0.0, 1e-12);
    EXPECT_NEAR(u0.noise_power, sigma_n2, 1e-12);

    const auto u1 = quplink::decompose_user(h, det, 1, sigma_n2, sigma_x2);
    EXPECT_NEAR(u1.noise_power, sigma_n2 / 4.0, 1e-12);
    EXPECT_NEAR(u1.sindr(), sigma_x2 / (sigma_n2 / 4.0), 1e-9);
}

TEST(Detector, ZfHasNoResidualInterference) {
    const ComplexMatrix h = test_channel(24, 6, 7);
    const DetectionMatrix det = quplink::build_zf(h);
    for (std::size_t k = 0; k < 6; ++k) {
        const auto parts = quplink::decompose_user(h, det, k, 0.2, 1.0);
        EXPECT_NEAR(parts.signal_power, 1.0, 1e-9);
        EXPECT_NEAR(parts.interference_power, 0.0, 1e-16);
        EXPECT_GT(parts.noise_power, 0.0);
    }
}

TEST(Detector, MmseTradesInterferenceForNoise) {
    const ComplexMatrix h = test_channel(24, 6, 8);
    const double sigma_n2 = 2.0;
    const DetectionMatrix zf = quplink::build_zf(h);
    const DetectionMatrix mmse = quplink::build_mmse(h, sigma_n2, 1.0);
    for (std::size_t k = 0; k < 6; ++k) {
        const auto zf_parts = quplink::decompose_user(h, zf, k, sigma_n2, 1.0);
        const auto mmse_parts = quplink::decompose_user(h, mmse, k, sigma_n2, 1.0);
        EXPECT_GT(mmse_parts.interference_power, 0.0);
        EXPECT_GE(mmse_parts.sindr(), zf_parts.sindr() * (1.0 - 1e-9));
    }
}

TEST(Detector, DecomposeUserRangeCheck) {
    const ComplexMatrix h = test_channel(8, 3, 9);
    const DetectionMatrix det = quplink::build_zf(h);
    EXPECT_THROW(quplink::decompose_user(h, det, 3, 0.1, 1.0), quplink::DimensionError);
}

TEST(Detector, KindNamesRoundTrip) {
    EXPECT_EQ(quplink::parse_detector("zf"), DetectorKind::Zf);
    EXPECT_EQ(quplink::parse_detector("mmse"), DetectorKind::Mmse);
    EXPECT_EQ(quplink::to_string(DetectorKind::Mmse), "mmse");
    EXPECT_THROW(quplink::parse_detector("ml"), quplink::ConfigError);
}

}  // namespace
