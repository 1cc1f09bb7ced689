#pragma once

#include <sys/stat.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qkg/bytes.hpp"
#include "qkg/crypto.hpp"
#include "qkg/errors.hpp"
#include "qkg/qk_grid.hpp"
#include "qkg/rng.hpp"

namespace qkg::keys {

// Master-key derivation from the seed grid plus previous-key feedback, and
// the downstream key tree (CK/IK, K_ASME, NAS keys, K_eNB, NH).
//
// Every derivation is HKDF-SHA-256 with an ASCII domain-separation label.
// Variable-length context fields are appended to the label after a 0x00
// separator so label and context can never collide.

inline constexpr std::string_view kLabelMaster = "QKG/K";
inline constexpr std::string_view kLabelCk = "QKG/CK";
inline constexpr std::string_view kLabelIk = "QKG/IK";
inline constexpr std::string_view kLabelAsme = "QKG/ASME";
inline constexpr std::string_view kLabelNasEnc = "QKG/NASenc";
inline constexpr std::string_view kLabelNasInt = "QKG/NASint";
inline constexpr std::string_view kLabelEnb = "QKG/eNB";
inline constexpr std::string_view kLabelNh = "QKG/NH";
inline constexpr std::string_view kLabelWalk = "QKG/walk";

struct PreK {
    Key256 value{};
    std::uint64_t generation = 0;  // 0 is the installed bootstrap key
};

struct DerivationContext {
    Bytes serving_network_id;
    std::uint32_t nas_uplink_count = 0;
    std::uint8_t algorithm_id = 0;

    void validate() const {
        if (serving_network_id.empty()) throw ConfigError("serving_network_id must be nonempty");
    }
};

struct KeyChain {
    Key256 k{};
    Key128 ck{};
    Key128 ik{};
    Key256 k_asme{};
    Key128 k_nas_enc{};
    Key128 k_nas_int{};
    Key256 k_enb{};
    Key256 nh{};
    std::uint64_t nh_chain_counter = 0;

    bool operator==(const KeyChain&) const = default;
};

namespace detail {

inline Bytes label_info(std::string_view label) {
    return Bytes(label.begin(), label.end());
}

inline Bytes label_info(std::string_view label, std::span<const std::uint8_t> context) {
    Bytes info(label.begin(), label.end());
    info.push_back(0x00);
    info.insert(info.end(), context.begin(), context.end());
    return info;
}

template <std::size_t N>
std::array<std::uint8_t, N> kdf(std::span<const std::uint8_t> ikm,
                                std::span<const std::uint8_t> salt, const Bytes& info) {
    Bytes okm = crypto::hkdf_sha256(ikm, salt, info, N);
    std::array<std::uint8_t, N> out{};
    std::copy(okm.begin(), okm.end(), out.begin());
    return out;
}

}  // namespace detail

// Cell-selection walk for the master key: the previous key seeds a
// pseudorandom coordinate sequence (seed = first 8 bytes, big-endian, of
// HMAC-SHA-256(pre_k, "QKG/walk")); null cells are skipped and cell contents
// accumulate until at least 512 bits are gathered.
inline Bytes gather_grid_source(const grid::QkGrid& g, const PreK& pre_k) {
    if (!g.populated()) throw StateError("grid is not populated");
    Bytes walk_label = crypto::str_bytes(kLabelWalk);
    Key256 mac = crypto::hmac_sha256(pre_k.value, walk_label);
    std::uint64_t walk_seed = 0;
    for (int i = 0; i < 8; ++i) walk_seed = walk_seed << 8 | mac[static_cast<std::size_t>(i)];
    Xoshiro256ss rng(walk_seed);

    auto n = static_cast<std::uint64_t>(g.side());
    Bytes gathered;
    std::size_t gathered_bits = 0;
    while (gathered_bits < 512) {
        int row = static_cast<int>(rng.below(n));
        int col = static_cast<int>(rng.below(n));
        if (g.is_null(row, col)) continue;
        const Bytes& cell = g.cell(row, col);
        gathered.insert(gathered.end(), cell.begin(), cell.end());
        gathered_bits += cell.size() * 8;
    }
    return gathered;
}

// K = HKDF(ikm = gathered grid cells, salt = previous key, label "QKG/K").
// The new feedback state carries K with the generation counter advanced.
inline std::pair<Key256, PreK> derive_master_key(const grid::QkGrid& g, const PreK& pre_k) {
    Bytes source = gather_grid_source(g, pre_k);
    Key256 k = detail::kdf<32>(source, pre_k.value, detail::label_info(kLabelMaster));
    PreK next{k, pre_k.generation + 1};
    return {k, next};
}

inline std::pair<Key128, Key128> derive_ck_ik(const Key256& k) {
    Key128 ck = detail::kdf<16>(k, {}, detail::label_info(kLabelCk));
    Key128 ik = detail::kdf<16>(k, {}, detail::label_info(kLabelIk));
    return {ck, ik};
}

inline Key256 derive_k_asme(const Key128& ck, const Key128& ik, const DerivationContext& ctx) {
    ctx.validate();
    Bytes ikm(ck.begin(), ck.end());
    ikm.insert(ikm.end(), ik.begin(), ik.end());
    return detail::kdf<32>(ikm, {}, detail::label_info(kLabelAsme, ctx.serving_network_id));
}

inline std::pair<Key128, Key128> derive_nas_keys(const Key256& k_asme,
                                                 const DerivationContext& ctx) {
    ctx.validate();
    Bytes algo{ctx.algorithm_id};
    Key128 enc = detail::kdf<16>(k_asme, {}, detail::label_info(kLabelNasEnc, algo));
    Key128 integ = detail::kdf<16>(k_asme, {}, detail::label_info(kLabelNasInt, algo));
    return {enc, integ};
}

inline Key256 derive_k_enb(const Key256& k_asme, const DerivationContext& ctx) {
    ctx.validate();
    Bytes count;
    put_be32(count, ctx.nas_uplink_count);
    return detail::kdf<32>(k_asme, {}, detail::label_info(kLabelEnb, count));
}

// prev is K_eNB for the first hop and the previous NH afterwards.
inline Key256 derive_nh(const Key256& k_asme, const Key256& prev) {
    return detail::kdf<32>(k_asme, prev, detail::label_info(kLabelNh));
}

// Full tree below an established master key.
inline KeyChain derive_chain_from_k(const Key256& k, const DerivationContext& ctx) {
    KeyChain chain;
    chain.k = k;
    std::tie(chain.ck, chain.ik) = derive_ck_ik(k);
    chain.k_asme = derive_k_asme(chain.ck, chain.ik, ctx);
    std::tie(chain.k_nas_enc, chain.k_nas_int) = derive_nas_keys(chain.k_asme, ctx);
    chain.k_enb = derive_k_enb(chain.k_asme, ctx);
    chain.nh = derive_nh(chain.k_asme, chain.k_enb);
    chain.nh_chain_counter = 1;
    return chain;
}

inline void advance_nh(KeyChain& chain) {
    chain.nh = derive_nh(chain.k_asme, chain.nh);
    ++chain.nh_chain_counter;
}

// One authentication round: derive K from (grid, feedback key), advance the
// feedback state, expand the tree.
inline KeyChain derive_chain(const grid::QkGrid& g, PreK& pre_k, const DerivationContext& ctx) {
    auto [k, next] = derive_master_key(g, pre_k);
    pre_k = next;
    return derive_chain_from_k(k, ctx);
}

// ---------------------------------------------------------------------------
// Key-store file: "QKGK", generation (u64 BE), feedback key (32 bytes), then
// a presence flag and the cached chain fields in declaration order. Written
// with owner-only permissions.
// ---------------------------------------------------------------------------

inline Bytes encode_key_store(const PreK& pre_k, const KeyChain* chain) {
    Bytes out;
    out.insert(out.end(), {'Q', 'K', 'G', 'K'});
    put_be64(out, pre_k.generation);
    out.insert(out.end(), pre_k.value.begin(), pre_k.value.end());
    out.push_back(chain ? 0x01 : 0x00);
    if (chain) {
        auto put = [&out](std::span<const std::uint8_t> v) {
            out.insert(out.end(), v.begin(), v.end());
        };
        put(chain->k);
        put(chain->ck);
        put(chain->ik);
        put(chain->k_asme);
        put(chain->k_nas_enc);
        put(chain->k_nas_int);
        put(chain->k_enb);
        put(chain->nh);
        put_be64(out, chain->nh_chain_counter);
    }
    return out;
}

struct KeyStore {
    PreK pre_k;
    bool has_chain = false;
    KeyChain chain;
};

inline KeyStore decode_key_store(std::span<const std::uint8_t> data) {
    if (data.size() < 4 || data[0] != 'Q' || data[1] != 'K' || data[2] != 'G' || data[3] != 'K')
        throw FormatError("bad key-store magic (want QKGK)");
    std::size_t pos = 4;
    KeyStore store;
    store.pre_k.generation = get_be64(data, pos);
    auto take = [&data, &pos](std::span<std::uint8_t> out) {
        if (pos + out.size() > data.size()) throw FormatError("truncated key store");
        std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(pos), out.size(), out.begin());
        pos += out.size();
    };
    take(store.pre_k.value);
    if (pos + 1 > data.size()) throw FormatError("truncated key store");
    std::uint8_t flag = data[pos++];
    if (flag > 1) throw FormatError("bad key-store chain flag");
    if (flag == 1) {
        store.has_chain = true;
        take(store.chain.k);
        take(store.chain.ck);
        take(store.chain.ik);
        take(store.chain.k_asme);
        take(store.chain.k_nas_enc);
        take(store.chain.k_nas_int);
        take(store.chain.k_enb);
        take(store.chain.nh);
        store.chain.nh_chain_counter = get_be64(data, pos);
    }
    if (pos != data.size()) throw FormatError("trailing bytes in key store");
    return store;
}

inline void save_key_store(const std::filesystem::path& path, const PreK& pre_k,
                           const KeyChain* chain = nullptr) {
    Bytes data = encode_key_store(pre_k, chain);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write key store: " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    out.close();
    ::chmod(path.c_str(), S_IRUSR | S_IWUSR);
}

inline KeyStore load_key_store(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read key store: " + path.string());
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_key_store(data);
}

// Golden-vector line: "<label> <hex inputs digest> <hex output>".
inline std::string golden_line(std::string_view label, std::span<const std::uint8_t> inputs,
                               std::span<const std::uint8_t> output) {
    Key256 digest = crypto::sha256(inputs);
    return std::string(label) + " " + to_hex(digest) + " " + to_hex(output);
}

}  // namespace qkg::keys

namespace qkg::grid {

// Draws random feedback keys and counts distinct derived master keys; the
// experiment behind the unique-key statistic.
inline std::size_t count_unique_keys(const QkGrid& g, std::size_t num_samples,
                                     std::uint64_t rng_seed) {
    if (!g.populated()) throw StateError("grid is not populated");
    if (num_samples < 1) throw ConfigError("num_samples must be >= 1");
    Xoshiro256ss rng(rng_seed);
    std::unordered_set<std::string> seen;
    seen.reserve(num_samples * 2);
    for (std::size_t i = 0; i < num_samples; ++i) {
        keys::PreK pre_k;
        rng.fill_bytes(pre_k.value.data(), pre_k.value.size());
        auto [k, next] = keys::derive_master_key(g, pre_k);
        seen.emplace(reinterpret_cast<const char*>(k.data()), k.size());
    }
    return seen.size();
}

}  // namespace qkg::grid
