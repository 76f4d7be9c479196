#pragma once

// Gray-mapped QPSK and 16-QAM with unit average symbol energy. Points are
// stored in label order, so the integer value of a symbol's bit label (MSB
// first) is its index into the point table.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "quplink/errors.hpp"

namespace quplink {

enum class ModulationScheme {
    Qpsk,
    Qam16,
};

inline std::string to_string(ModulationScheme scheme) {
    return scheme == ModulationScheme::Qpsk ? "qpsk" : "16qam";
}

inline ModulationScheme parse_modulation(const std::string& text) {
    if (text == "qpsk") {
        return ModulationScheme::Qpsk;
    }
    if (text == "16qam") {
        return ModulationScheme::Qam16;
    }
    throw ConfigError("modulation: unknown scheme '" + text + "' (expected qpsk or 16qam)");
}

struct ConstellationSpec {
    ModulationScheme scheme;
    int bits_per_symbol;
    std::vector<std::complex<double>> points;
    std::vector<std::uint32_t> labels;
};

namespace detail {

// Per-axis Gray code used on both rails of 16-QAM: 2-bit code -> amplitude,
// chosen so adjacent amplitudes differ in exactly one bit
// (00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3).
inline constexpr double kQam16CodeToLevel[4] = {-3.0, -1.0, 3.0, 1.0};

}  // namespace detail

inline ConstellationSpec make_constellation(ModulationScheme scheme) {
    ConstellationSpec spec;
    spec.scheme = scheme;
    if (scheme == ModulationScheme::Qpsk) {
        spec.bits_per_symbol = 2;
        const double a = 1.0 / std::sqrt(2.0);
        spec.points.resize(4);
        for (std::uint32_t label = 0; label < 4; ++label) {
            const double re = (label & 2u) ? -a : a;
            const double im = (label & 1u) ? -a : a;
            spec.points[label] = {re, im};
        }
    } else {
        spec.bits_per_symbol = 4;
        const double scale = 1.0 / std::sqrt(10.0);
        spec.points.resize(16);
        for (std::uint32_t label = 0; label < 16; ++label) {
            const double re = detail::kQam16CodeToLevel[(label >> 2) & 3u] * scale;
            const double im = detail::kQam16CodeToLevel[label & 3u] * scale;
            spec.points[label] = {re, im};
        }
    }
    spec.labels.resize(spec.points.size());
    for (std::uint32_t label = 0; label < spec.labels.size(); ++label) {
        spec.labels[label] = label;
    }
    return spec;
}

// bits (0/1 values, MSB first within each symbol) -> symbols.
inline void modulate_into(const ConstellationSpec& spec, const std::uint8_t* bits,
                          std::size_t n_symbols, std::complex<double>* symbols) {
    const int q = spec.bits_per_symbol;
    for (std::size_t s = 0; s < n_symbols; ++s) {
        std::uint32_t label = 0;
        for (int b = 0; b < q; ++b) {
            label = (label << 1) | (bits[s * q + b] & 1u);
        }
        symbols[s] = spec.points[label];
    }
}

inline std::vector<std::complex<double>> modulate(const ConstellationSpec& spec,
                                                  const std::vector<std::uint8_t>& bits) {
    const std::size_t q = static_cast<std::size_t>(spec.bits_per_symbol);
    if (bits.size() % q != 0) {
        throw DimensionError("modulate: bit count " + std::to_string(bits.size()) +
                             " is not a multiple of " + std::to_string(q));
    }
    std::vector<std::complex<double>> symbols(bits.size() / q);
    modulate_into(spec, bits.data(), symbols.size(), symbols.data());
    return symbols;
}

// Minimum-distance decision; ties resolve to the lowest point index.
inline void demodulate_into(const ConstellationSpec& spec, const std::complex<double>* symbols,
                            std::size_t n_symbols, std::uint8_t* bits) {
    const int q = spec.bits_per_symbol;
    const std::size_t n_points = spec.points.size();
    for (std::size_t s = 0; s < n_symbols; ++s) {
        std::size_t best = 0;
        double best_dist = std::norm(symbols[s] - spec.points[0]);
        for (std::size_t p = 1; p < n_points; ++p) {
            const double dist = std::norm(symbols[s] - spec.points[p]);
            if (dist < best_dist) {
                best_dist = dist;
                best = p;
            }
        }
        const std::uint32_t label = spec.labels[best];
        for (int b = 0; b < q; ++b) {
            bits[s * q + b] = static_cast<std::uint8_t>((label >> (q - 1 - b)) & 1u);
        }
    }
}

inline std::vector<std::uint8_t> demodulate(const ConstellationSpec& spec,
                                            const std::vector<std::complex<double>>& symbols) {
    std::vector<std::uint8_t> bits(symbols.size() * static_cast<std::size_t>(spec.bits_per_symbol));
    demodulate_into(spec, symbols.data(), symbols.size(), bits.data());
    return bits;
}

inline std::uint64_t count_bit_errors(const std::vector<std::uint8_t>& sent,
                                      const std::vector<std::uint8_t>& received) {
    if (sent.size() != received.size()) {
        throw DimensionError("count_bit_errors: lengths " + std::to_string(sent.size()) + " and " +
                             std::to_string(received.size()) + " differ");
    }
    std::uint64_t errors = 0;
    for (std::size_t i = 0; i < sent.size(); ++i) {
        errors += (sent[i] != received[i]) ? 1u : 0u;
    }
    return errors;
}

}  // namespace quplink
