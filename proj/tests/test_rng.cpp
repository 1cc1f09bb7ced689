#include <catch2/catch_amalgamated.hpp>

#include "qkg/rng.hpp"

using namespace qkg;

TEST_CASE("splitmix64 reference sequence", "[rng]") {
    SplitMix64 sm{0};
    CHECK(sm.next() == 0xe220a8397b1dcdafull);
    CHECK(sm.next() == 0x6e789e6aa1b965f4ull);
    CHECK(sm.next() == 0x06c45d188009454full);

    SplitMix64 sm42{42};
    CHECK(sm42.next() == 0xbdd732262feb6e95ull);
    CHECK(sm42.next() == 0x28efe333b266f103ull);
}

TEST_CASE("xoshiro256** reference sequence", "[rng]") {
    Xoshiro256ss rng(0);
    CHECK(rng.next_u64() == 0x99ec5f36cb75f2b4ull);
    CHECK(rng.next_u64() == 0xbf6e1f784956452aull);
    CHECK(rng.next_u64() == 0x1a5f849d4933e6e0ull);
    CHECK(rng.next_u64() == 0x6aa594f1262d2d2cull);
    CHECK(rng.next_u64() == 0xbba5ad4a1f842e59ull);

    Xoshiro256ss rng2(12345);
    CHECK(rng2.next_u64() == 0xbe6a36374160d49bull);
    CHECK(rng2.next_u64() == 0x214aaa0637a688c6ull);
}

TEST_CASE("uniform helpers stay in range", "[rng]") {
    Xoshiro256ss rng(7);
    for (int i = 0; i < 10000; ++i) {
        double d = rng.next_double();
        CHECK(d >= 0.0);
        CHECK(d < 1.0);
        std::uint64_t v = rng.below(17);
        CHECK(v < 17);
        int b = rng.next_bit();
        CHECK((b == 0 || b == 1));
    }
}

TEST_CASE("below is roughly uniform", "[rng]") {
    Xoshiro256ss rng(99);
    constexpr int buckets = 6;
    constexpr int draws = 60000;
    int counts[buckets] = {};
    for (int i = 0; i < draws; ++i) ++counts[rng.below(buckets)];
    for (int count : counts) {
        CHECK(count > draws / buckets - 600);
        CHECK(count < draws / buckets + 600);
    }
}

TEST_CASE("sample mean of next_double near one half", "[rng]") {
    Xoshiro256ss rng(5);
    double sum = 0.0;
    constexpr int n = 100000;
    for (int i = 0; i < n; ++i) sum += rng.next_double();
    CHECK(sum / n == Catch::Approx(0.5).margin(0.01));
}

TEST_CASE("stream derivation is stable and separating", "[rng]") {
    CHECK(derive_stream_seed(1, 0) == derive_stream_seed(1, 0));
    CHECK(derive_stream_seed(1, 0) != derive_stream_seed(1, 1));
    CHECK(derive_stream_seed(1, 0) != derive_stream_seed(2, 0));
}

TEST_CASE("fill_bytes is deterministic", "[rng]") {
    Xoshiro256ss a(11), b(11);
    std::uint8_t buf_a[17], buf_b[17];
    a.fill_bytes(buf_a, sizeof buf_a);
    b.fill_bytes(buf_b, sizeof buf_b);
    CHECK(std::equal(buf_a, buf_a + sizeof buf_a, buf_b));
}
