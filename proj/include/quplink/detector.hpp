#pragma once

// Linear multi-user detection. Both detectors are expressed as a receive
// combining matrix A, applied as x_hat = A^H r, with
//   ZF:   A = H (H^H H)^-1
//   MMSE: A = H (H^H H + (sigma_n2 / sigma_x2) I)^-1

#include <complex>
#include <string>
#include <vector>

#include "quplink/complex_matrix.hpp"
#include "quplink/errors.hpp"

namespace quplink {

enum class DetectorKind {
    Zf,
    Mmse,
};

inline std::string to_string(DetectorKind kind) {
    return kind == DetectorKind::Zf ? "zf" : "mmse";
}

inline DetectorKind parse_detector(const std::string& text) {
    if (text == "zf") {
        return DetectorKind::Zf;
    }
    if (text == "mmse") {
        return DetectorKind::Mmse;
    }
    throw ConfigError("detector: unknown kind '" + text + "' (expected zf or mmse)");
}

struct DetectionMatrix {
    DetectorKind kind;
    ComplexMatrix a;  // M x K combining matrix
};

namespace detail {

inline ComplexMatrix combining_matrix(const ComplexMatrix& h, double diagonal_load) {
    ComplexMatrix g = gram(h);
    if (diagonal_load != 0.0) {
        for (std::size_t i = 0; i < g.rows(); ++i) {
            g(i, i) += diagonal_load;
        }
    }
    // A = H G^-1; with G Hermitian this equals (G^-1 H^H)^H.
    return hermitian_transpose(solve_hpd(g, hermitian_transpose(h)));
}

}  // namespace detail

inline DetectionMatrix build_zf(const ComplexMatrix& h) {
    return {DetectorKind::Zf, detail::combining_matrix(h, 0.0)};
}

inline DetectionMatrix build_mmse(const ComplexMatrix& h, double sigma_n2, double sigma_x2) {
    if (!(sigma_x2 > 0.0)) {
        throw ConfigError("sigma_x2: must be positive");
    }
    return {DetectorKind::Mmse, detail::combining_matrix(h, sigma_n2 / sigma_x2)};
}

inline void detect_into(const DetectionMatrix& det, const std::complex<double>* r,
                        std::complex<double>* x_hat) {
    const std::size_t m = det.a.rows();
    const std::size_t k = det.a.cols();
    for (std::size_t j = 0; j < k; ++j) {
        x_hat[j] = 0.0;
    }
    for (std::size_t i = 0; i < m; ++i) {
        const cxd* arow = det.a.row(i);
        const cxd ri = r[i];
        for (std::size_t j = 0; j < k; ++j) {
            x_hat[j] += std::conj(arow[j]) * ri;
        }
    }
}

inline std::vector<std::complex<double>> detect(const DetectionMatrix& det,
                                                const std::vector<std::complex<double>>& r) {
    if (r.size() != det.a.rows()) {
        throw DimensionError("detect: receive vector has " + std::to_string(r.size()) +
                             " entries, combining matrix expects " + std::to_string(det.a.rows()));
    }
    std::vector<std::complex<double>> x_hat(det.a.cols());
    detect_into(det, r.data(), x_hat.data());
    return x_hat;
}

// Post-detection power budget of one user under the unquantized linear model:
// the detector output splits into desired signal, multi-user interference and
// filtered noise.
struct UserDecomposition {
    double signal_power;
    double interference_power;
    double noise_power;

    double sindr() const { return signal_power / (interference_power + noise_power); }
};

inline UserDecomposition decompose_user(const ComplexMatrix& h, const DetectionMatrix& det,
                                        std::size_t user_index, double sigma_n2, double sigma_x2) {
    const std::size_t k = h.cols();
    if (user_index >= k) {
        throw DimensionError("decompose_user: user index " + std::to_string(user_index) +
                             " out of range for " + std::to_string(k) + " users");
    }
    if (h.rows() != det.a.rows() || h.cols() != det.a.cols()) {
        throw DimensionError("decompose_user: channel " + h.shape_string() +
                             " and combining matrix " + det.a.shape_string() + " differ");
    }

    std::vector<cxd> cross(k, 0.0);  // a_k^H h_j for every j
    double filter_energy = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        const cxd ak = det.a(i, user_index);
        filter_energy += std::norm(ak);
        const cxd* hrow = h.row(i);
        for (std::size_t j = 0; j < k; ++j) {
            cross[j] += std::conj(ak) * hrow[j];
        }
    }

    UserDecomposition out{};
    out.signal_power = sigma_x2 * std::norm(cross[user_index]);
    for (std::size_t j = 0; j < k; ++j) {
        if (j != user_index) {
            out.interference_power += sigma_x2 * std::norm(cross[j]);
        }
    }
    out.noise_power = sigma_n2 * filter_energy;
    return out;
}

}  // namespace quplink
