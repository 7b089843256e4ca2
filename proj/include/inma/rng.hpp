#pragma once

#include <array>
#include <cstdint>

namespace inma::rng {

/// Philox4x32-10 counter-based block cipher. Maps a 128-bit counter and a
/// 64-bit key to 128 pseudo-random bits. Stateless, so any (counter, key)
/// pair can be evaluated independently of all others.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key);

/// A deterministic random stream owned by one lattice site (or one auxiliary
/// consumer). The stream is keyed by (seed, s, t, tag): the seed feeds the
/// cipher key, the site coordinates and purpose tag occupy three counter
/// words, and the fourth counter word enumerates blocks. Streams with
/// different keys never overlap, which makes generation order and thread
/// scheduling irrelevant to the output.
class SiteStream {
public:
    SiteStream(std::uint64_t seed, std::int32_t s, std::int32_t t, std::uint32_t tag = 0)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          base_{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(t), tag, 0} {}

    std::uint32_t next_u32() {
        if (pos_ == 4) refill();
        return block_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    void refill() {
        block_ = philox4x32(base_, key_);
        ++base_[3];
        pos_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> base_;
    std::array<std::uint32_t, 4> block_{};
    int pos_ = 4;
};

}  // namespace inma::rng
