#pragma once

// Uniform mid-riser quantization applied independently to the real and
// imaginary rails of every receive antenna, plus the step-size policies that
// tie the step to the analytic receive signal strength.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "quplink/errors.hpp"

namespace quplink {

// ADC resolution: 1..8 bits, or infinite for an ideal front end.
class BitDepth {
public:
    static constexpr int kMaxFiniteBits = 8;

    static BitDepth finite(int bits) {
        if (bits < 1 || bits > kMaxFiniteBits) {
            throw ConfigError("bits: value " + std::to_string(bits) + " out of range 1.." +
                              std::to_string(kMaxFiniteBits));
        }
        return BitDepth(bits);
    }

    static BitDepth infinite() { return BitDepth(kInfiniteSentinel); }

    static BitDepth parse(const std::string& text) {
        if (text == "inf") {
            return infinite();
        }
        int value = 0;
        try {
            std::size_t used = 0;
            value = std::stoi(text, &used);
            if (used != text.size()) {
                throw std::invalid_argument(text);
            }
        } catch (const std::exception&) {
            throw ConfigError("bits: '" + text + "' is not an integer or 'inf'");
        }
        return finite(value);
    }

    bool is_finite() const { return value_ != kInfiniteSentinel; }
    int value() const { return value_; }
    int levels() const { return 1 << value_; }

    std::string to_string() const { return is_finite() ? std::to_string(value_) : "inf"; }

    friend bool operator==(BitDepth a, BitDepth b) { return a.value_ == b.value_; }

private:
    static constexpr int kInfiniteSentinel = -1;
    explicit BitDepth(int value) : value_(value) {}
    int value_;
};

enum class StepRule {
    // Step spans a +-4 sigma full scale: delta = 8 sigma / 2^b.
    FullScaleFourSigma,
    // Step minimizes the mean squared error for a unit-variance Gaussian,
    // scaled by the receive standard deviation.
    GaussianOptimal,
};

inline std::string to_string(StepRule rule) {
    return rule == StepRule::FullScaleFourSigma ? "fullscale4" : "gaussopt";
}

inline StepRule parse_step_rule(const std::string& text) {
    if (text == "fullscale4") {
        return StepRule::FullScaleFourSigma;
    }
    if (text == "gaussopt") {
        return StepRule::GaussianOptimal;
    }
    throw ConfigError("step_rule: unknown rule '" + text + "' (expected fullscale4 or gaussopt)");
}

namespace detail {

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Exact second moment of (y - r) over one quantizer cell [a, b] of a standard
// normal, using integral tables for y^2 phi, y phi and phi. Infinite cell
// edges are handled by the limits y phi(y) -> 0 and Phi(+-inf) -> {1, 0}.
inline double cell_squared_error(double a, double b, double r) {
    const bool a_inf = std::isinf(a);
    const bool b_inf = std::isinf(b);
    const double phi_a = a_inf ? 0.0 : normal_pdf(a);
    const double phi_b = b_inf ? 0.0 : normal_pdf(b);
    const double cdf_a = a_inf ? 0.0 : normal_cdf(a);
    const double cdf_b = b_inf ? 1.0 : normal_cdf(b);
    const double a_phi_a = a_inf ? 0.0 : a * phi_a;
    const double b_phi_b = b_inf ? 0.0 : b * phi_b;
    return (1.0 + r * r) * (cdf_b - cdf_a) - (b_phi_b - a_phi_a) + 2.0 * r * (phi_b - phi_a);
}

}  // namespace detail

// Mean squared error of a b-bit mid-riser quantizer with step delta applied to
// a standard normal input.
inline double gaussian_quantizer_mse(double delta, int bits) {
    const int n = 1 << bits;
    double mse = 0.0;
    for (int i = 0; i < n; ++i) {
        const double lower = (i == 0) ? -std::numeric_limits<double>::infinity()
                                      : (i - n / 2) * delta;
        const double upper = (i == n - 1) ? std::numeric_limits<double>::infinity()
                                          : (i + 1 - n / 2) * delta;
        const double level = (i + 0.5 - n / 2) * delta;
        mse += detail::cell_squared_error(lower, upper, level);
    }
    return mse;
}

// Step minimizing gaussian_quantizer_mse for a unit-variance input: coarse
// scan to bracket the minimum, then golden-section refinement. Results are
// computed once per bit depth.
inline double optimal_gaussian_step(int bits) {
    if (bits < 1 || bits > BitDepth::kMaxFiniteBits) {
        throw ConfigError("bits: value " + std::to_string(bits) + " out of range 1.." +
                          std::to_string(BitDepth::kMaxFiniteBits));
    }
    static const std::array<double, BitDepth::kMaxFiniteBits + 1> table = [] {
        std::array<double, BitDepth::kMaxFiniteBits + 1> steps{};
        for (int b = 1; b <= BitDepth::kMaxFiniteBits; ++b) {
            const double scan_step = 1e-3;
            double best = scan_step;
            double best_mse = gaussian_quantizer_mse(best, b);
            for (double d = 2 * scan_step; d <= 4.0; d += scan_step) {
                const double mse = gaussian_quantizer_mse(d, b);
                if (mse < best_mse) {
                    best_mse = mse;
                    best = d;
                }
            }
            double lo = best - scan_step;
            double hi = best + scan_step;
            const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
            double c = hi - inv_phi * (hi - lo);
            double d = lo + inv_phi * (hi - lo);
            double fc = gaussian_quantizer_mse(c, b);
            double fd = gaussian_quantizer_mse(d, b);
            while (hi - lo > 1e-10) {
                if (fc < fd) {
                    hi = d;
                    d = c;
                    fd = fc;
                    c = hi - inv_phi * (hi - lo);
                    fc = gaussian_quantizer_mse(c, b);
                } else {
                    lo = c;
                    c = d;
                    fc = fd;
                    d = lo + inv_phi * (hi - lo);
                    fd = gaussian_quantizer_mse(d, b);
                }
            }
            steps[b] = 0.5 * (lo + hi);
        }
        return steps;
    }();
    return table[bits];
}

// Standard deviation per real dimension of one receive antenna's signal,
// y_m = sum_k h_mk x_k + n_m, under unit-variance fading.
inline double receive_std_per_dim(std::size_t k_users, double sigma_x2, double sigma_n2) {
    return std::sqrt(0.5 * (static_cast<double>(k_users) * sigma_x2 + sigma_n2));
}

struct QuantizerSpec {
    BitDepth depth = BitDepth::infinite();
    double step = 0.0;
};

inline QuantizerSpec make_quantizer(BitDepth depth, StepRule rule, double std_per_dim) {
    QuantizerSpec spec;
    spec.depth = depth;
    if (depth.is_finite()) {
        if (!(std_per_dim > 0.0) || !std::isfinite(std_per_dim)) {
            throw ConfigError("std_per_dim: must be positive and finite");
        }
        spec.step = (rule == StepRule::FullScaleFourSigma)
                        ? 8.0 * std_per_dim / depth.levels()
                        : optimal_gaussian_step(depth.value()) * std_per_dim;
    }
    return spec;
}

// Mid-riser rule: cell index m = clamp(floor(y / step), -N/2, N/2 - 1), output
// (m + 0.5) * step. Values exactly on a cell boundary round up.
inline double quantize_real(const QuantizerSpec& spec, double y) {
    if (!std::isfinite(y)) {
        throw NumericalError("quantize_real: input is not finite");
    }
    if (!spec.depth.is_finite()) {
        return y;
    }
    const double half_levels = spec.depth.levels() / 2;
    double m = std::floor(y / spec.step);
    if (m < -half_levels) {
        m = -half_levels;
    } else if (m > half_levels - 1) {
        m = half_levels - 1;
    }
    return (m + 0.5) * spec.step;
}

inline void quantize_vector_into(const QuantizerSpec& spec, const std::complex<double>* in,
                                 std::size_t n, std::complex<double>* out) {
    if (!spec.depth.is_finite()) {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = in[i];
        }
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = {quantize_real(spec, in[i].real()), quantize_real(spec, in[i].imag())};
    }
}

inline std::vector<std::complex<double>> quantize_vector(
    const QuantizerSpec& spec, const std::vector<std::complex<double>>& y) {
    std::vector<std::complex<double>> r(y.size());
    quantize_vector_into(spec, y.data(), y.size(), r.data());
    return r;
}

// All reproduction levels in ascending order; useful for table checks.
inline std::vector<double> quantizer_codebook(const QuantizerSpec& spec) {
    std::vector<double> levels;
    if (!spec.depth.is_finite()) {
        return levels;
    }
    const int n = spec.depth.levels();
    levels.reserve(n);
    for (int i = 0; i < n; ++i) {
        levels.push_back((i + 0.5 - n / 2) * spec.step);
    }
    return levels;
}

}  // namespace quplink
