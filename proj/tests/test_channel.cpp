#include "quplink/channel.hpp"

#include <gtest/gtest.h>

namespace {

using quplink::ComplexMatrix;
using quplink::RandomStream;

TEST(Channel, DrawChannelShapeAndMoments) {
    RandomStream stream(7, 100);
    const ComplexMatrix h = quplink::draw_channel(200, 50, stream);
    ASSERT_EQ(h.rows(), 200u);
    ASSERT_EQ(h.cols(), 50u);

    double sum_re = 0.0;
    double sum_im = 0.0;
    double sum_norm = 0.0;
    double sum_re_sq = 0.0;
    const double n = 200.0 * 50.0;
    for (std::size_t r = 0; r < h.rows(); ++r) {
        for (std::size_t c = 0; c < h.cols(); ++c) {
            sum_re += h(r, c).real();
            sum_im += h(r, c).imag();
            sum_norm += std::norm(h(r, c));
            sum_re_sq += h(r, c).real() * h(r, c).real();
        }
    }
    EXPECT_NEAR(sum_re / n, 0.0, 0.03);
    EXPECT_NEAR(sum_im / n, 0.0, 0.03);
    EXPECT_NEAR(sum_norm / n, 1.0, 0.04);       // E|h|^2 = 1
    EXPECT_NEAR(sum_re_sq / n, 0.5, 0.03);      // half the power per dimension
}

TEST(Channel, DrawChannelIsDeterministicPerStream) {
    RandomStream a(42, 5);
    RandomStream b(42, 5);
    const ComplexMatrix ha = quplink::draw_channel(8, 3, a);
    const ComplexMatrix hb = quplink::draw_channel(8, 3, b);
    EXPECT_EQ(quplink::max_abs_difference(ha, hb), 0.0);

    RandomStream c(42, 6);
    const ComplexMatrix hc = quplink::draw_channel(8, 3, c);
    EXPECT_GT(quplink::max_abs_difference(ha, hc), 0.0);
}

TEST(Channel, NoiseVarianceFromEbn0KnownValues) {
    EXPECT_DOUBLE_EQ(quplink::noise_variance_from_ebn0(0.0, 2, 1.0), 0.5);
    EXPECT_DOUBLE_EQ(quplink::noise_variance_from_ebn0(10.0, 2, 1.0), 0.05);
    EXPECT_DOUBLE_EQ(quplink::noise_variance_from_ebn0(0.0, 4, 1.0), 0.25);
    EXPECT_DOUBLE_EQ(quplink::noise_variance_from_ebn0(0.0, 2, 2.0), 1.0);
    EXPECT_DOUBLE_EQ(quplink::noise_variance_from_ebn0(-10.0, 2, 1.0), 5.0);
}

TEST(Channel, NoiseVarianceDecreasesWithEbn0) {
    double previous = quplink::noise_variance_from_ebn0(-20.0, 2, 1.0);
    for (double db = -19.0; db <= 20.0; db += 1.0) {
        const double current = quplink::noise_variance_from_ebn0(db, 2, 1.0);
        EXPECT_LT(current, previous);
        previous = current;
    }
}

TEST(Channel, DrawNoiseMoments) {
    RandomStream stream(9, 200);
    const double sigma_n2 = 0.8;
    const std::size_t n = 50000;
    const auto noise = quplink::draw_noise(n, sigma_n2, stream);
    double sum_norm = 0.0;
    double sum_re_sq = 0.0;
    std::complex<double> sum = 0.0;
    for (const auto& v : noise) {
        sum += v;
        sum_norm += std::norm(v);
        sum_re_sq += v.real() * v.real();
    }
    EXPECT_NEAR(std::abs(sum) / n, 0.0, 0.02);
    EXPECT_NEAR(sum_norm / n, sigma_n2, 0.02);
    EXPECT_NEAR(sum_re_sq / n, sigma_n2 / 2.0, 0.015);
}

TEST(Channel, DrawNoiseIsDeterministicPerStream) {
    RandomStream a(11, 3);
    RandomStream b(11, 3);
    const auto na = quplink::draw_noise(32, 0.25, a);
    const auto nb = quplink::draw_noise(32, 0.25, b);
    EXPECT_EQ(na, nb);
}

}  // namespace
