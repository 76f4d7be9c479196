#pragma once

// Counter-based random number generation (Philox4x32-10). Every random stream
// is addressed by (seed, stream id) and can be recreated from scratch at any
// point, which is what makes runs reproducible independent of thread count.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace quplink {

namespace detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace detail

// One 10-round Philox4x32 block: 128-bit counter, 64-bit key, 128-bit output.
inline std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                               const std::array<std::uint32_t, 2>& key) {
    std::uint32_t x0 = counter[0], x1 = counter[1], x2 = counter[2], x3 = counter[3];
    std::uint32_t k0 = key[0], k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        detail::philox_mulhilo(detail::kPhiloxM0, x0, hi0, lo0);
        detail::philox_mulhilo(detail::kPhiloxM1, x2, hi1, lo1);
        x0 = hi1 ^ x1 ^ k0;
        x1 = lo1;
        x2 = hi0 ^ x3 ^ k1;
        x3 = lo0;
        k0 += detail::kPhiloxW0;
        k1 += detail::kPhiloxW1;
    }
    return {x0, x1, x2, x3};
}

// Purpose tags keep the channel, payload bits and noise of one realization in
// disjoint streams, so adding or removing draws of one kind never shifts the
// others.
enum class StreamPurpose : std::uint32_t {
    Channel = 0,
    Bits = 1,
    Noise = 2,
};

// A deterministic stream of uniforms and normals. The key is the master seed;
// the upper counter words carry the stream id and the lower words count blocks
// within the stream.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_id_(stream_id) {}

    static std::uint64_t make_stream_id(std::uint32_t realization_index, std::uint32_t attempt,
                                        StreamPurpose purpose) {
        return (static_cast<std::uint64_t>(realization_index) << 16) |
               (static_cast<std::uint64_t>(attempt & 0xffu) << 8) |
               static_cast<std::uint64_t>(purpose);
    }

    std::uint32_t next_u32() {
        if (buffer_pos_ == 4) {
            refill();
        }
        return buffer_[buffer_pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    // Uniform on (0, 1]; never returns 0 so it is safe under log().
    double uniform_open() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // One Box-Muller pair of independent standard normals.
    std::pair<double, double> normal_pair() {
        const double u1 = uniform_open();
        const double u2 = uniform_open();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    // Number of 128-bit blocks generated so far; used to assert that stream
    // consumption does not depend on quantizer settings.
    std::uint64_t blocks_consumed() const { return block_index_; }

private:
    void refill() {
        const std::array<std::uint32_t, 4> counter = {
            static_cast<std::uint32_t>(block_index_),
            static_cast<std::uint32_t>(block_index_ >> 32),
            static_cast<std::uint32_t>(stream_id_),
            static_cast<std::uint32_t>(stream_id_ >> 32),
        };
        buffer_ = philox4x32(counter, key_);
        ++block_index_;
        buffer_pos_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_id_ = 0;
    std::uint64_t block_index_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int buffer_pos_ = 4;
};

inline RandomStream derive_stream(std::uint64_t seed, std::uint32_t realization_index,
                                  std::uint32_t attempt, StreamPurpose purpose) {
    return RandomStream(seed, RandomStream::make_stream_id(realization_index, attempt, purpose));
}

}  // namespace quplink
