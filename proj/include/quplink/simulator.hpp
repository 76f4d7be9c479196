#pragma once

// Link-level Monte Carlo engine. One realization draws a channel, builds the
// detector once, then pushes vectors of Gray-mapped symbols through
// quantize -> detect -> demodulate and counts bit errors. Several ADC
// resolutions are evaluated against the same channel, payload and noise draws,
// which removes inter-curve Monte Carlo jitter and amortizes the expensive
// draws. Realizations are independent streams, so any scheduling across
// threads reproduces the same counts.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "quplink/channel.hpp"
#include "quplink/complex_matrix.hpp"
#include "quplink/detector.hpp"
#include "quplink/errors.hpp"
#include "quplink/modem.hpp"
#include "quplink/quantizer.hpp"
#include "quplink/rng.hpp"

namespace quplink {

struct SimConfig {
    std::size_t m_antennas = 100;
    std::size_t k_users = 10;
    ModulationScheme modulation = ModulationScheme::Qpsk;
    DetectorKind detector = DetectorKind::Zf;
    StepRule step_rule = StepRule::FullScaleFourSigma;
    double sigma_x2 = 1.0;
    std::vector<double> ebn0_grid_db;
    std::size_t n_channel_realizations = 100;
    std::size_t n_vectors_per_realization = 2000;
    std::uint64_t master_seed = 1;
};

struct ExecutionPolicy {
    unsigned n_threads = 0;  // 0 picks the hardware concurrency
    bool deterministic = true;
    std::uint64_t early_stop_errors = 2000;  // per curve, only if not deterministic
};

struct BerPoint {
    double ebn0_db = 0.0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_total = 0;
    double ber = 0.0;
};

struct BerCurve {
    BitDepth bits = BitDepth::infinite();
    DetectorKind detector = DetectorKind::Zf;
    ModulationScheme modulation = ModulationScheme::Qpsk;
    std::vector<BerPoint> points;
};

// How many generator blocks each stream of a realization consumed; identical
// across ADC resolutions by construction, which tests assert.
struct StreamTrace {
    std::uint64_t channel_blocks = 0;
    std::uint64_t bits_blocks = 0;
    std::uint64_t noise_blocks = 0;
};

struct RealizationResult {
    std::vector<std::uint64_t> bit_errors;  // one entry per requested bit depth
    std::uint64_t bits_per_depth = 0;
    StreamTrace trace;
    std::uint32_t attempts_used = 0;
};

struct DepthResult {
    BitDepth depth = BitDepth::infinite();
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_total = 0;
    std::vector<std::uint64_t> per_realization_errors;
};

struct MultiPointResult {
    double ebn0_db = 0.0;
    std::uint64_t bits_per_realization = 0;
    std::vector<DepthResult> depths;
};

inline void validate_config(const SimConfig& cfg) {
    if (cfg.k_users < 1) {
        throw ConfigError("k: must be at least 1");
    }
    if (cfg.m_antennas < cfg.k_users) {
        throw ConfigError("m: " + std::to_string(cfg.m_antennas) + " antennas cannot serve " +
                          std::to_string(cfg.k_users) + " users (need m >= k)");
    }
    if (cfg.n_channel_realizations < 1) {
        throw ConfigError("channels: must be at least 1");
    }
    if (cfg.n_vectors_per_realization < 1) {
        throw ConfigError("vectors: must be at least 1");
    }
    if (!(cfg.sigma_x2 > 0.0)) {
        throw ConfigError("sigma_x2: must be positive");
    }
    if (cfg.ebn0_grid_db.empty()) {
        throw ConfigError("ebn0: grid is empty");
    }
    for (std::size_t i = 0; i < cfg.ebn0_grid_db.size(); ++i) {
        if (!std::isfinite(cfg.ebn0_grid_db[i])) {
            throw ConfigError("ebn0: grid value at position " + std::to_string(i) +
                              " is not finite");
        }
        if (i > 0 && !(cfg.ebn0_grid_db[i] > cfg.ebn0_grid_db[i - 1])) {
            throw ConfigError("ebn0: grid must be strictly ascending (position " +
                              std::to_string(i) + ")");
        }
    }
}

namespace detail {

constexpr std::uint32_t kMaxChannelAttempts = 3;

struct VectorWorkspace {
    std::vector<std::uint8_t> bits_sent;
    std::vector<std::uint8_t> bits_received;
    std::vector<cxd> x;
    std::vector<cxd> y;
    std::vector<cxd> r;
    std::vector<cxd> x_hat;

    VectorWorkspace(std::size_t m, std::size_t k, int q)
        : bits_sent(k * q),
          bits_received(k * q),
          x(k),
          y(m),
          r(m),
          x_hat(k) {}
};

// Payload bits come packed in 32-bit words, least significant bit first; each
// vector starts on a fresh word so consumption per vector is constant.
inline void draw_bits(RandomStream& stream, std::size_t n_bits, std::uint8_t* out) {
    std::size_t produced = 0;
    while (produced < n_bits) {
        std::uint32_t word = stream.next_u32();
        const std::size_t take = std::min<std::size_t>(32, n_bits - produced);
        for (std::size_t j = 0; j < take; ++j) {
            out[produced + j] = static_cast<std::uint8_t>((word >> j) & 1u);
        }
        produced += take;
    }
}

}  // namespace detail

// One channel realization, evaluated at one grid point for every requested
// bit depth against shared channel, payload and noise draws. A channel whose
// Gram matrix fails the Cholesky pivot check is redrawn from an
// attempt-indexed stream, a few times at most.
inline RealizationResult run_realization_multi(const SimConfig& cfg, double ebn0_db,
                                               const std::vector<BitDepth>& depths,
                                               std::uint32_t realization_index) {
    const ConstellationSpec constellation = make_constellation(cfg.modulation);
    const int q = constellation.bits_per_symbol;
    const double sigma_n2 = noise_variance_from_ebn0(ebn0_db, q, cfg.sigma_x2);
    const double symbol_scale = std::sqrt(cfg.sigma_x2);
    const double std_dim = receive_std_per_dim(cfg.k_users, cfg.sigma_x2, sigma_n2);

    std::vector<QuantizerSpec> quantizers;
    quantizers.reserve(depths.size());
    for (const BitDepth depth : depths) {
        quantizers.push_back(make_quantizer(depth, cfg.step_rule, std_dim));
    }

    RealizationResult result;
    result.bit_errors.assign(depths.size(), 0);

    std::uint32_t attempt = 0;
    ComplexMatrix h;
    DetectionMatrix det;
    std::uint64_t channel_blocks = 0;
    for (;; ++attempt) {
        RandomStream channel_stream =
            derive_stream(cfg.master_seed, realization_index, attempt, StreamPurpose::Channel);
        h = draw_channel(cfg.m_antennas, cfg.k_users, channel_stream);
        channel_blocks = channel_stream.blocks_consumed();
        try {
            det = (cfg.detector == DetectorKind::Zf)
                      ? build_zf(h)
                      : build_mmse(h, sigma_n2, cfg.sigma_x2);
            break;
        } catch (const NotPositiveDefiniteError&) {
            if (attempt + 1 >= detail::kMaxChannelAttempts) {
                throw;
            }
        }
    }
    result.attempts_used = attempt + 1;

    RandomStream bits_stream =
        derive_stream(cfg.master_seed, realization_index, attempt, StreamPurpose::Bits);
    RandomStream noise_stream =
        derive_stream(cfg.master_seed, realization_index, attempt, StreamPurpose::Noise);

    detail::VectorWorkspace ws(cfg.m_antennas, cfg.k_users, q);
    const std::size_t bits_per_vector = cfg.k_users * static_cast<std::size_t>(q);

    for (std::size_t v = 0; v < cfg.n_vectors_per_realization; ++v) {
        detail::draw_bits(bits_stream, bits_per_vector, ws.bits_sent.data());
        modulate_into(constellation, ws.bits_sent.data(), cfg.k_users, ws.x.data());
        if (symbol_scale != 1.0) {
            for (std::size_t k = 0; k < cfg.k_users; ++k) {
                ws.x[k] *= symbol_scale;
            }
        }

        draw_noise_into(cfg.m_antennas, sigma_n2, noise_stream, ws.y.data());
        for (std::size_t i = 0; i < cfg.m_antennas; ++i) {
            const cxd* hrow = h.row(i);
            cxd acc = ws.y[i];
            for (std::size_t k = 0; k < cfg.k_users; ++k) {
                acc += hrow[k] * ws.x[k];
            }
            ws.y[i] = acc;
        }

        for (std::size_t d = 0; d < depths.size(); ++d) {
            quantize_vector_into(quantizers[d], ws.y.data(), cfg.m_antennas, ws.r.data());
            detect_into(det, ws.r.data(), ws.x_hat.data());
            demodulate_into(constellation, ws.x_hat.data(), cfg.k_users, ws.bits_received.data());
            std::uint64_t errors = 0;
            for (std::size_t b = 0; b < bits_per_vector; ++b) {
                errors += (ws.bits_sent[b] != ws.bits_received[b]) ? 1u : 0u;
            }
            result.bit_errors[d] += errors;
        }
    }

    result.bits_per_depth = cfg.n_vectors_per_realization * bits_per_vector;
    result.trace.channel_blocks = channel_blocks;
    result.trace.bits_blocks = bits_stream.blocks_consumed();
    result.trace.noise_blocks = noise_stream.blocks_consumed();
    return result;
}

inline RealizationResult run_realization(const SimConfig& cfg, double ebn0_db, BitDepth depth,
                                         std::uint32_t realization_index) {
    return run_realization_multi(cfg, ebn0_db, {depth}, realization_index);
}

namespace detail {

inline unsigned effective_threads(const ExecutionPolicy& exec) {
    if (exec.n_threads > 0) {
        return exec.n_threads;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace detail

// One grid point for several bit depths. Realizations are dispatched to
// worker threads through a shared counter and reduced in index order, so the
// totals are independent of the thread count. With deterministic mode off, a
// point may stop scheduling new realizations once every depth has accumulated
// early_stop_errors; completed realizations always count in full.
inline MultiPointResult run_point_multi(const SimConfig& cfg, double ebn0_db,
                                        const std::vector<BitDepth>& depths,
                                        const ExecutionPolicy& exec = {}) {
    validate_config(cfg);
    if (depths.empty()) {
        throw ConfigError("bits: list is empty");
    }

    const std::uint32_t n_real = static_cast<std::uint32_t>(cfg.n_channel_realizations);
    std::vector<RealizationResult> results(n_real);
    std::vector<char> completed(n_real, 0);

    std::atomic<std::uint32_t> next_index{0};
    std::atomic<bool> stop{false};
    std::vector<std::atomic<std::uint64_t>> running_errors(depths.size());
    for (auto& e : running_errors) {
        e.store(0);
    }

    std::exception_ptr first_error;
    std::atomic<bool> has_error{false};
    std::mutex error_mutex;

    auto worker = [&]() {
        try {
            for (;;) {
                if (has_error.load(std::memory_order_relaxed) ||
                    stop.load(std::memory_order_relaxed)) {
                    return;
                }
                const std::uint32_t index = next_index.fetch_add(1);
                if (index >= n_real) {
                    return;
                }
                results[index] = run_realization_multi(cfg, ebn0_db, depths, index);
                completed[index] = 1;
                if (!exec.deterministic) {
                    bool all_reached = true;
                    for (std::size_t d = 0; d < depths.size(); ++d) {
                        const std::uint64_t total =
                            running_errors[d].fetch_add(results[index].bit_errors[d]) +
                            results[index].bit_errors[d];
                        all_reached = all_reached && (total >= exec.early_stop_errors);
                    }
                    if (all_reached) {
                        stop.store(true, std::memory_order_relaxed);
                    }
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> guard(error_mutex);
            if (!has_error.exchange(true)) {
                first_error = std::current_exception();
            }
        }
    };

    const unsigned n_threads = std::min<unsigned>(detail::effective_threads(exec), n_real);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (has_error.load()) {
        std::rethrow_exception(first_error);
    }

    MultiPointResult out;
    out.ebn0_db = ebn0_db;
    out.bits_per_realization = cfg.n_vectors_per_realization * cfg.k_users *
                               static_cast<std::size_t>(make_constellation(cfg.modulation).bits_per_symbol);
    out.depths.resize(depths.size());
    for (std::size_t d = 0; d < depths.size(); ++d) {
        out.depths[d].depth = depths[d];
        for (std::uint32_t i = 0; i < n_real; ++i) {
            if (!completed[i]) {
                continue;
            }
            out.depths[d].bit_errors += results[i].bit_errors[d];
            out.depths[d].bits_total += results[i].bits_per_depth;
            out.depths[d].per_realization_errors.push_back(results[i].bit_errors[d]);
        }
    }
    return out;
}

inline BerPoint run_point(const SimConfig& cfg, double ebn0_db, BitDepth depth,
                          const ExecutionPolicy& exec = {}) {
    const MultiPointResult multi = run_point_multi(cfg, ebn0_db, {depth}, exec);
    BerPoint point;
    point.ebn0_db = ebn0_db;
    point.bit_errors = multi.depths[0].bit_errors;
    point.bits_total = multi.depths[0].bits_total;
    point.ber = point.bits_total > 0
                    ? static_cast<double>(point.bit_errors) / static_cast<double>(point.bits_total)
                    : 0.0;
    return point;
}

inline std::vector<BerCurve> run_sweep_multi(const SimConfig& cfg,
                                             const std::vector<BitDepth>& depths,
                                             const ExecutionPolicy& exec = {}) {
    validate_config(cfg);
    std::vector<BerCurve> curves(depths.size());
    for (std::size_t d = 0; d < depths.size(); ++d) {
        curves[d].bits = depths[d];
        curves[d].detector = cfg.detector;
        curves[d].modulation = cfg.modulation;
        curves[d].points.reserve(cfg.ebn0_grid_db.size());
    }
    for (const double ebn0_db : cfg.ebn0_grid_db) {
        const MultiPointResult multi = run_point_multi(cfg, ebn0_db, depths, exec);
        for (std::size_t d = 0; d < depths.size(); ++d) {
            BerPoint point;
            point.ebn0_db = ebn0_db;
            point.bit_errors = multi.depths[d].bit_errors;
            point.bits_total = multi.depths[d].bits_total;
            point.ber = point.bits_total > 0 ? static_cast<double>(point.bit_errors) /
                                                   static_cast<double>(point.bits_total)
                                             : 0.0;
            curves[d].points.push_back(point);
        }
    }
    return curves;
}

inline BerCurve run_sweep(const SimConfig& cfg, BitDepth depth, const ExecutionPolicy& exec = {}) {
    return run_sweep_multi(cfg, {depth}, exec)[0];
}

// Eb/N0 at which a measured curve crosses the target BER, by log-linear
// interpolation between the first pair of consecutive points that brackets the
// target with positive error rates. An exact grid hit needs no bracket.
inline std::optional<double> snr_at_ber(const BerCurve& curve, double target_ber) {
    if (!(target_ber > 0.0)) {
        throw ConfigError("target_ber: must be positive");
    }
    const auto& pts = curve.points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].ber == target_ber) {
            return pts[i].ebn0_db;
        }
        if (i + 1 < pts.size() && pts[i].ber > target_ber && pts[i + 1].ber <= target_ber &&
            pts[i + 1].ber > 0.0) {
            const double log_hi = std::log10(pts[i].ber);
            const double log_lo = std::log10(pts[i + 1].ber);
            const double t = (std::log10(target_ber) - log_hi) / (log_lo - log_hi);
            return pts[i].ebn0_db + t * (pts[i + 1].ebn0_db - pts[i].ebn0_db);
        }
    }
    return std::nullopt;
}

// Extra Eb/N0 a test curve needs over a reference curve to reach the same
// target BER. Unset if either curve never reaches the target.
inline std::optional<double> ber_degradation(const BerCurve& test_curve,
                                             const BerCurve& reference_curve, double target_ber) {
    const std::optional<double> test_snr = snr_at_ber(test_curve, target_ber);
    const std::optional<double> ref_snr = snr_at_ber(reference_curve, target_ber);
    if (!test_snr || !ref_snr) {
        return std::nullopt;
    }
    return *test_snr - *ref_snr;
}

}  // namespace quplink
