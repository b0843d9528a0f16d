#pragma once

#include <cstdint>
#include <string_view>

namespace ldgmq {

// Philox-4x32-10 counter-based generator.  A generator is identified by
// (seed, stream); equal identifiers produce equal sequences regardless of
// how many other generators exist, which keeps multi-block experiments
// independent of scheduling.
class philox_rng {
public:
    explicit philox_rng(std::uint64_t seed, std::uint64_t stream = 0)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          stream_(stream) {}

    static constexpr std::string_view name() { return "philox4x32-10"; }

    std::uint32_t next_u32() {
        if (pos_ == 4) {
            fill_block();
            pos_ = 0;
        }
        return block_[pos_++];
    }

    std::uint64_t next_u64() {
        std::uint64_t lo = next_u32();
        std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    // uniform in [0,1) with 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n), n > 0; rejection keeps it unbiased
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

private:
    void fill_block() {
        std::uint32_t c0 = static_cast<std::uint32_t>(counter_);
        std::uint32_t c1 = static_cast<std::uint32_t>(counter_ >> 32);
        std::uint32_t c2 = static_cast<std::uint32_t>(stream_);
        std::uint32_t c3 = static_cast<std::uint32_t>(stream_ >> 32);
        std::uint32_t k0 = key0_, k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            std::uint64_t p0 = 0xD2511F53ull * c0;
            std::uint64_t p1 = 0xCD9E8D57ull * c2;
            std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            std::uint32_t n0 = hi1 ^ c1 ^ k0;
            std::uint32_t n1 = lo1;
            std::uint32_t n2 = hi0 ^ c3 ^ k1;
            std::uint32_t n3 = lo0;
            c0 = n0; c1 = n1; c2 = n2; c3 = n3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        block_[0] = c0; block_[1] = c1; block_[2] = c2; block_[3] = c3;
        ++counter_;
    }

    std::uint32_t key0_, key1_;
    std::uint64_t stream_ = 0;
    std::uint64_t counter_ = 0;
    std::uint32_t block_[4] = {};
    int pos_ = 4;
};

// Stable stream ids so the purpose of each substream is explicit.
namespace rng_stream {
inline constexpr std::uint64_t code_sample = 1;
inline constexpr std::uint64_t source_block = 2;  // + block index below
inline constexpr std::uint64_t decimation = 3;
inline constexpr std::uint64_t recovery = 4;
inline constexpr std::uint64_t poly_search = 5;
inline constexpr std::uint64_t test = 900;
}

inline philox_rng derive_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
    return philox_rng(seed, stream * 0x100000000ull + index);
}

} // namespace ldgmq
