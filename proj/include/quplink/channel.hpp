#pragma once

// Rayleigh-fading channel and thermal noise. Entries of H and n are circularly
// symmetric complex Gaussians with i.i.d. real and imaginary parts, so a unit
// variance complex sample has variance 1/2 per dimension.

#include <cmath>
#include <complex>
#include <vector>

#include "quplink/complex_matrix.hpp"
#include "quplink/rng.hpp"

namespace quplink {

// M x K matrix with entries CN(0, 1); drawn row-major so the layout matches
// the matrix storage order.
inline ComplexMatrix draw_channel(std::size_t m_antennas, std::size_t k_users,
                                  RandomStream& stream) {
    const double per_dim = std::sqrt(0.5);
    ComplexMatrix h(m_antennas, k_users);
    for (std::size_t r = 0; r < m_antennas; ++r) {
        for (std::size_t c = 0; c < k_users; ++c) {
            const auto [re, im] = stream.normal_pair();
            h(r, c) = {per_dim * re, per_dim * im};
        }
    }
    return h;
}

// Noise variance per receive antenna for a given Eb/N0. Each user's symbol
// energy is sigma_x2, carrying bits_per_symbol bits, so
// N0 = sigma_x2 / (bits_per_symbol * 10^(ebn0_db / 10)).
inline double noise_variance_from_ebn0(double ebn0_db, int bits_per_symbol, double sigma_x2) {
    return sigma_x2 / (bits_per_symbol * std::pow(10.0, ebn0_db / 10.0));
}

inline void draw_noise_into(std::size_t m_antennas, double noise_variance, RandomStream& stream,
                            std::complex<double>* out) {
    const double per_dim = std::sqrt(0.5 * noise_variance);
    for (std::size_t i = 0; i < m_antennas; ++i) {
        const auto [re, im] = stream.normal_pair();
        out[i] = {per_dim * re, per_dim * im};
    }
}

inline std::vector<std::complex<double>> draw_noise(std::size_t m_antennas, double noise_variance,
                                                    RandomStream& stream) {
    std::vector<std::complex<double>> n(m_antennas);
    draw_noise_into(m_antennas, noise_variance, stream, n.data());
    return n;
}

}  // namespace quplink
