#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qkg/errors.hpp"

namespace qkg {

using Bytes  = std::vector<std::uint8_t>;
using Key128 = std::array<std::uint8_t, 16>;
using Key256 = std::array<std::uint8_t, 32>;

inline std::string to_hex(std::span<const std::uint8_t> data) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

inline Bytes from_hex(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (hex.size() % 2 != 0) throw FormatError("hex string has odd length");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = nibble(hex[i]);
        int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) throw FormatError("invalid hex digit");
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

inline void put_be16(Bytes& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_be32(Bytes& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>(v >> shift));
}

inline void put_be64(Bytes& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>(v >> shift));
}

inline std::uint16_t get_be16(std::span<const std::uint8_t> in, std::size_t& pos) {
    if (pos + 2 > in.size()) throw FormatError("truncated input: expected 16-bit field");
    std::uint16_t v = static_cast<std::uint16_t>(in[pos] << 8 | in[pos + 1]);
    pos += 2;
    return v;
}

inline std::uint32_t get_be32(std::span<const std::uint8_t> in, std::size_t& pos) {
    if (pos + 4 > in.size()) throw FormatError("truncated input: expected 32-bit field");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | in[pos + i];
    pos += 4;
    return v;
}

inline std::uint64_t get_be64(std::span<const std::uint8_t> in, std::size_t& pos) {
    if (pos + 8 > in.size()) throw FormatError("truncated input: expected 64-bit field");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | in[pos + i];
    pos += 8;
    return v;
}

// A growable bit string. Bits pack MSB-first within bytes on export; a
// trailing partial byte is zero-padded, so the true bit length has to travel
// alongside the packed form.
class BitString {
public:
    BitString() = default;

    static BitString from_bytes(std::span<const std::uint8_t> bytes, std::size_t bit_len) {
        if (bit_len > bytes.size() * 8) throw FormatError("bit length exceeds provided bytes");
        BitString bs;
        bs.bits_.reserve(bit_len);
        for (std::size_t i = 0; i < bit_len; ++i)
            bs.bits_.push_back((bytes[i / 8] >> (7 - i % 8)) & 1);
        return bs;
    }

    void push_back(int bit) { bits_.push_back(static_cast<std::uint8_t>(bit & 1)); }

    void append(const BitString& other) {
        bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
    }

    void append_bytes(std::span<const std::uint8_t> bytes) {
        bits_.reserve(bits_.size() + bytes.size() * 8);
        for (std::uint8_t b : bytes)
            for (int i = 7; i >= 0; --i) bits_.push_back((b >> i) & 1);
    }

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    int operator[](std::size_t i) const { return bits_[i]; }

    BitString slice(std::size_t pos, std::size_t len) const {
        if (pos + len > bits_.size()) throw UnderflowError("bit slice out of range");
        BitString out;
        out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(pos),
                         bits_.begin() + static_cast<std::ptrdiff_t>(pos + len));
        return out;
    }

    Bytes to_bytes() const {
        Bytes out((bits_.size() + 7) / 8, 0);
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(1u << (7 - i % 8));
        return out;
    }

    std::string to_hex() const {
        Bytes packed = to_bytes();
        return qkg::to_hex(packed);
    }

    bool operator==(const BitString&) const = default;

private:
    std::vector<std::uint8_t> bits_;  // one byte per bit, values 0/1
};

}  // namespace qkg
