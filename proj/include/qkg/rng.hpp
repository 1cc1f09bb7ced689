#pragma once

#include <array>
#include <cstdint>

namespace qkg {

// All randomness in the suite flows through one documented generator so that
// runs are reproducible bit-for-bit across platforms and releases:
//
//   engine   xoshiro256** (Blackman & Vigna), state seeded from the 64-bit
//            seed by four successive splitmix64 outputs
//   streams  every simulated party owns its own engine; party streams are
//            derived from a root seed with derive_stream_seed(root, id)
//
// std::uniform_* distributions are implementation-defined and deliberately
// avoided; the helpers below are the only sampling primitives used.

struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

class Xoshiro256ss {
public:
    explicit Xoshiro256ss(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& word : state_) word = sm.next();
    }

    std::uint64_t next_u64() {
        std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    int next_bit() { return static_cast<int>(next_u64() >> 63); }

    // Uniform double in [0, 1) from the top 53 bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t x = next_u64();
            if (x >= threshold) return x % n;
        }
    }

    void fill_bytes(std::uint8_t* out, std::size_t len) {
        std::size_t i = 0;
        while (i < len) {
            std::uint64_t w = next_u64();
            for (int shift = 56; shift >= 0 && i < len; shift -= 8)
                out[i++] = static_cast<std::uint8_t>(w >> shift);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_;
};

// Deterministic per-party substream seed. Stream ids are small integers fixed
// by the caller's documentation (e.g. sender=0, receiver=1, eavesdropper=2).
inline std::uint64_t derive_stream_seed(std::uint64_t root, std::uint64_t stream_id) {
    SplitMix64 sm{root ^ (0x9E3779B97F4A7C15ull * (stream_id + 1))};
    return sm.next();
}

}  // namespace qkg
