#include <catch2/catch_amalgamated.hpp>

#include "qkg/bytes.hpp"
#include "qkg/crypto.hpp"

using namespace qkg;
using crypto::hkdf_expand;
using crypto::hkdf_extract;
using crypto::hkdf_sha256;
using crypto::hmac_sha256;
using crypto::sha256;

namespace {
Bytes hex(const std::string& s) { return from_hex(s); }
}  // namespace

TEST_CASE("sha256 known answers", "[crypto]") {
    CHECK(to_hex(sha256({})) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    Bytes abc{'a', 'b', 'c'};
    CHECK(to_hex(sha256(abc)) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("hmac-sha256 standard vectors", "[crypto]") {
    // RFC 4231 cases 1-4
    CHECK(to_hex(hmac_sha256(hex("0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b"),
                             crypto::str_bytes("Hi There"))) ==
          "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7");
    CHECK(to_hex(hmac_sha256(crypto::str_bytes("Jefe"),
                             crypto::str_bytes("what do ya want for nothing?"))) ==
          "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
    CHECK(to_hex(hmac_sha256(hex("aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa"),
                             Bytes(50, 0xdd))) ==
          "773ea91e36800e46854db8ebd09181a72959098b3ef8c122d9635514ced565fe");
    Bytes key4;
    for (int i = 1; i <= 25; ++i) key4.push_back(static_cast<std::uint8_t>(i));
    CHECK(to_hex(hmac_sha256(key4, Bytes(50, 0xcd))) ==
          "82558a389a443c0ea4cc819899f2083a85f0faa3e578f8077a2e3ff46729665b");
}

TEST_CASE("hkdf-sha256 standard vectors", "[crypto]") {
    // RFC 5869 appendix A
    SECTION("test case 1") {
        Bytes ikm(22, 0x0b);
        Bytes salt = hex("000102030405060708090a0b0c");
        Bytes info = hex("f0f1f2f3f4f5f6f7f8f9");
        Key256 prk = hkdf_extract(salt, ikm);
        CHECK(to_hex(prk) == "077709362c2e32df0ddc3f0dc47bba6390b6c73bb50f9c3122ec844ad7c2b3e5");
        CHECK(to_hex(hkdf_expand(prk, info, 42)) ==
              "3cb25f25faacd57a90434f64d0362f2a2d2d0a90cf1a5a4c5db02d56ecc4c5bf"
              "34007208d5b887185865");
    }
    SECTION("test case 2, long inputs") {
        Bytes ikm, salt, info;
        for (int i = 0x00; i <= 0x4f; ++i) ikm.push_back(static_cast<std::uint8_t>(i));
        for (int i = 0x60; i <= 0xaf; ++i) salt.push_back(static_cast<std::uint8_t>(i));
        for (int i = 0xb0; i <= 0xff; ++i) info.push_back(static_cast<std::uint8_t>(i));
        CHECK(to_hex(hkdf_sha256(ikm, salt, info, 82)) ==
              "b11e398dc80327a1c8e7f78c596a49344f012eda2d4efad8a050cc4c19afa97c"
              "59045a99cac7827271cb41c65e590e09da3275600c2f09b8367793a9aca3db71"
              "cc30c58179ec3e87c14c01d5c1f3434f1d87");
    }
    SECTION("test case 3, empty salt and info") {
        Bytes ikm(22, 0x0b);
        CHECK(to_hex(hkdf_sha256(ikm, {}, {}, 42)) ==
              "8da4e775a563c18f715f802a063c5a31b8a11f5c5ee1879ec3454e5f3c738d2d"
              "9d201395faa4b61a96c8");
    }
}

TEST_CASE("hkdf output length cap", "[crypto]") {
    Bytes ikm(32, 0x01);
    CHECK_THROWS_AS(hkdf_sha256(ikm, {}, {}, 255 * 32 + 1), DomainError);
}

TEST_CASE("hex round trip", "[crypto]") {
    Bytes data = hex("00ff10a5");
    CHECK(to_hex(data) == "00ff10a5");
    CHECK_THROWS_AS(from_hex("abc"), FormatError);
    CHECK_THROWS_AS(from_hex("zz"), FormatError);
}
