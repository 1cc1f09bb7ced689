#pragma once

#include <openssl/core_names.h>
#include <openssl/evp.h>

#include <cstdint>
#include <span>
#include <string_view>

#include "qkg/bytes.hpp"
#include "qkg/errors.hpp"

namespace qkg::crypto {

// Thin wrappers over OpenSSL's SHA-256 / HMAC-SHA-256, plus the RFC 5869
// extract-and-expand KDF every key derivation in the suite goes through.

inline Key256 sha256(std::span<const std::uint8_t> data) {
    Key256 out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size())
        throw Error("SHA-256 evaluation failed");
    return out;
}

namespace detail {

struct MacCtx {
    EVP_MAC* mac = nullptr;
    EVP_MAC_CTX* ctx = nullptr;

    MacCtx() {
        mac = EVP_MAC_fetch(nullptr, "HMAC", nullptr);
        if (mac) ctx = EVP_MAC_CTX_new(mac);
        if (!ctx) throw Error("HMAC context allocation failed");
        OSSL_PARAM params[2];
        params[0] = OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_DIGEST,
                                                     const_cast<char*>("SHA256"), 0);
        params[1] = OSSL_PARAM_construct_end();
        // Initialise once with the digest parameter; later inits only swap keys.
        static const std::uint8_t dummy[32] = {};
        if (EVP_MAC_init(ctx, dummy, sizeof dummy, params) != 1)
            throw Error("HMAC context initialisation failed");
    }

    ~MacCtx() {
        if (ctx) EVP_MAC_CTX_free(ctx);
        if (mac) EVP_MAC_free(mac);
    }

    MacCtx(const MacCtx&) = delete;
    MacCtx& operator=(const MacCtx&) = delete;
};

inline MacCtx& mac_ctx() {
    thread_local MacCtx instance;
    return instance;
}

}  // namespace detail

inline Key256 hmac_sha256(std::span<const std::uint8_t> key,
                          std::span<const std::uint8_t> msg) {
    auto& h = detail::mac_ctx();
    // OpenSSL rejects null data pointers even for empty inputs.
    static const std::uint8_t empty = 0;
    const std::uint8_t* kp = key.empty() ? &empty : key.data();
    const std::uint8_t* mp = msg.empty() ? &empty : msg.data();
    Key256 out{};
    std::size_t outlen = 0;
    if (EVP_MAC_init(h.ctx, kp, key.size(), nullptr) != 1 ||
        EVP_MAC_update(h.ctx, mp, msg.size()) != 1 ||
        EVP_MAC_final(h.ctx, out.data(), &outlen, out.size()) != 1 || outlen != out.size())
        throw Error("HMAC-SHA-256 evaluation failed");
    return out;
}

// RFC 5869 extract step. An absent salt maps to the all-zero hash-length key.
inline Key256 hkdf_extract(std::span<const std::uint8_t> salt,
                           std::span<const std::uint8_t> ikm) {
    if (salt.empty()) {
        static const Key256 zero_salt{};
        return hmac_sha256(zero_salt, ikm);
    }
    return hmac_sha256(salt, ikm);
}

// RFC 5869 expand step.
inline Bytes hkdf_expand(const Key256& prk, std::span<const std::uint8_t> info,
                         std::size_t out_len) {
    if (out_len > 255 * 32) throw DomainError("HKDF output length exceeds 255 blocks");
    Bytes okm;
    okm.reserve(out_len);
    Bytes block;  // T(i-1) || info || i
    std::uint8_t counter = 1;
    while (okm.size() < out_len) {
        block.insert(block.end(), info.begin(), info.end());
        block.push_back(counter++);
        Key256 t = hmac_sha256(prk, block);
        block.assign(t.begin(), t.end());
        std::size_t take = std::min<std::size_t>(t.size(), out_len - okm.size());
        okm.insert(okm.end(), t.begin(), t.begin() + static_cast<std::ptrdiff_t>(take));
    }
    return okm;
}

inline Bytes hkdf_sha256(std::span<const std::uint8_t> ikm,
                         std::span<const std::uint8_t> salt,
                         std::span<const std::uint8_t> info, std::size_t out_len) {
    Key256 prk = hkdf_extract(salt, ikm);
    return hkdf_expand(prk, info, out_len);
}

inline Bytes str_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

}  // namespace qkg::crypto
