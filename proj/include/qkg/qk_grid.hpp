#pragma once

#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "qkg/bytes.hpp"
#include "qkg/crypto.hpp"
#include "qkg/errors.hpp"
#include "qkg/qkd_link.hpp"
#include "qkg/rng.hpp"

namespace qkg::grid {

// The n x n seed-material table. Column j (1-based) stores cells of 8*j bits;
// each row and each column contains exactly one null cell, so the null
// pattern is a permutation matrix. Cells fill row-major from a key-exchange
// bit stream.

struct GridLayout {
    int n = 0;
    std::vector<int> null_col_of_row;  // row r's null cell sits at this column

    static GridLayout construct(int n, std::uint64_t rng_seed) {
        if (n < 3) throw ConfigError("grid side must be at least 3");
        if (n % 2 == 0) throw ConfigError("grid side must be odd");
        GridLayout layout;
        layout.n = n;
        layout.null_col_of_row.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) layout.null_col_of_row[static_cast<std::size_t>(i)] = i;
        Xoshiro256ss rng(rng_seed);
        for (int i = n - 1; i > 0; --i) {  // Fisher-Yates permutation of null columns
            auto j = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i) + 1));
            std::swap(layout.null_col_of_row[static_cast<std::size_t>(i)],
                      layout.null_col_of_row[j]);
        }
        return layout;
    }

    // col is 0-based here; the width rule is 8*j bits for 1-based column j.
    int column_width_bits(int col) const { return 8 * (col + 1); }

    bool is_null(int row, int col) const {
        return null_col_of_row[static_cast<std::size_t>(row)] == col;
    }

    // Each column has n-1 non-null cells of 8*(col+1) bits.
    std::size_t required_bits() const {
        std::size_t total = 0;
        for (int col = 0; col < n; ++col)
            total += static_cast<std::size_t>(column_width_bits(col)) *
                     static_cast<std::size_t>(n - 1);
        return total;
    }

    void validate() const {
        if (n < 3 || n % 2 == 0) throw ConfigError("grid side must be odd and at least 3");
        if (null_col_of_row.size() != static_cast<std::size_t>(n))
            throw FormatError("null placement must name one column per row");
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        for (int col : null_col_of_row) {
            if (col < 0 || col >= n) throw FormatError("null column index out of range");
            if (seen[static_cast<std::size_t>(col)])
                throw FormatError("null placement is not a permutation");
            seen[static_cast<std::size_t>(col)] = true;
        }
    }
};

class QkGrid {
public:
    QkGrid() = default;  // unpopulated; only deserialize/populate produce usable grids

    static QkGrid populate(GridLayout layout, const BitString& key_stream) {
        layout.validate();
        std::size_t required = layout.required_bits();
        if (key_stream.size() < required)
            throw UnderflowError("key stream underflow: grid needs " + std::to_string(required) +
                                 " bits, got " + std::to_string(key_stream.size()));
        QkGrid grid;
        grid.layout_ = std::move(layout);
        int n = grid.layout_.n;
        grid.cells_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), Bytes{});
        std::size_t pos = 0;
        for (int row = 0; row < n; ++row) {
            for (int col = 0; col < n; ++col) {
                if (grid.layout_.is_null(row, col)) continue;
                auto width = static_cast<std::size_t>(grid.layout_.column_width_bits(col));
                grid.cells_[grid.index(row, col)] = key_stream.slice(pos, width).to_bytes();
                pos += width;
            }
        }
        grid.consumed_bits_ = pos;
        grid.source_digest_ = digest_stream(key_stream.slice(0, pos));
        return grid;
    }

    bool populated() const { return !cells_.empty(); }

    const GridLayout& layout() const {
        require_populated();
        return layout_;
    }

    int side() const { return layout_.n; }

    const Bytes& cell(int row, int col) const {
        require_populated();
        if (layout_.is_null(row, col)) throw StateError("cell is null");
        return cells_[index(row, col)];
    }

    bool is_null(int row, int col) const {
        require_populated();
        return layout_.is_null(row, col);
    }

    std::size_t consumed_bits() const { return consumed_bits_; }

    const Key256& source_digest() const {
        require_populated();
        return source_digest_;
    }

    // Container layout: "QKG1", n (u16 BE), the null permutation as one u16 BE
    // column index per row, then the non-null cells row-major, byte-aligned.
    Bytes serialize() const {
        require_populated();
        Bytes out;
        out.insert(out.end(), {'Q', 'K', 'G', '1'});
        put_be16(out, static_cast<std::uint16_t>(layout_.n));
        for (int col : layout_.null_col_of_row) put_be16(out, static_cast<std::uint16_t>(col));
        for (int row = 0; row < layout_.n; ++row)
            for (int col = 0; col < layout_.n; ++col) {
                if (layout_.is_null(row, col)) continue;
                const Bytes& c = cells_[index(row, col)];
                out.insert(out.end(), c.begin(), c.end());
            }
        return out;
    }

    static QkGrid deserialize(std::span<const std::uint8_t> data) {
        if (data.size() < 4 || data[0] != 'Q' || data[1] != 'K' || data[2] != 'G' ||
            data[3] != '1')
            throw FormatError("bad grid container magic (want QKG1)");
        std::size_t pos = 4;
        GridLayout layout;
        layout.n = get_be16(data, pos);
        if (layout.n < 3 || layout.n % 2 == 0)
            throw FormatError("grid container has invalid side length");
        layout.null_col_of_row.resize(static_cast<std::size_t>(layout.n));
        for (int row = 0; row < layout.n; ++row)
            layout.null_col_of_row[static_cast<std::size_t>(row)] = get_be16(data, pos);
        layout.validate();
        std::size_t body_bits = layout.required_bits();
        if (data.size() - pos != body_bits / 8)
            throw FormatError("grid container body has wrong length");
        BitString stream = BitString::from_bytes(data.subspan(pos), body_bits);
        return populate(std::move(layout), stream);
    }

    std::string hex_dump() const {
        require_populated();
        std::ostringstream out;
        out << "qk-grid n=" << layout_.n << " digest=" << to_hex(source_digest_) << "\n";
        for (int row = 0; row < layout_.n; ++row) {
            out << "row " << row << ":";
            for (int col = 0; col < layout_.n; ++col) {
                out << ' ';
                if (layout_.is_null(row, col))
                    out << "-";
                else
                    out << to_hex(cells_[index(row, col)]);
            }
            out << "\n";
        }
        return out.str();
    }

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(layout_.n) +
               static_cast<std::size_t>(col);
    }

    void require_populated() const {
        if (!populated()) throw StateError("grid is not populated");
    }

    static Key256 digest_stream(const BitString& stream) {
        Bytes packed = stream.to_bytes();
        put_be64(packed, stream.size());
        return crypto::sha256(packed);
    }

    GridLayout layout_;
    std::vector<Bytes> cells_;  // row-major, empty at null positions
    std::size_t consumed_bits_ = 0;
    Key256 source_digest_{};
};

// RNG stream ids under the generation root seed. Each exchange attempt runs
// with its own derived channel seed; the layout draw has its own stream.
constexpr std::uint64_t kLayoutStream = 100;
constexpr std::uint64_t kExchangeStreamBase = 200;

struct GenerationOptions {
    int max_detections = 3;  // aborted exchanges tolerated before giving up
    qkd::ExchangeOptions exchange;
};

// Runs key exchanges until enough accepted bits accumulate, then lays out and
// fills the grid. Receiver-side bits feed the store. Detection aborts beyond
// the retry budget raise EstablishmentError.
inline QkGrid run_grid_generation(const qkd::ChannelConfig& config, int n,
                                  const GenerationOptions& options = {}) {
    config.validate();
    GridLayout layout =
        GridLayout::construct(n, derive_stream_seed(config.rng_seed, kLayoutStream));
    std::size_t required = layout.required_bits();

    BitString stream;
    int detections = 0;
    std::uint64_t attempt = 0;
    while (stream.size() < required) {
        qkd::ChannelConfig exchange_config = config;
        exchange_config.rng_seed =
            derive_stream_seed(config.rng_seed, kExchangeStreamBase + attempt);
        ++attempt;
        qkd::ExchangeResult result = qkd::run_exchange(exchange_config, options.exchange);
        if (result.decision == qkd::Decision::Abort) {
            if (++detections > options.max_detections)
                throw EstablishmentError(
                    "key establishment failed: eavesdropper detected on " +
                    std::to_string(detections) + " exchanges (budget " +
                    std::to_string(options.max_detections) + ")");
            continue;
        }
        stream.append(result.key.final_receiver_bits());
    }
    return QkGrid::populate(std::move(layout), stream);
}

// Defined in key_hierarchy.hpp (the sampled keys are derived through the key
// hierarchy); declared here because the experiment is a grid-level statistic.
inline std::size_t count_unique_keys(const QkGrid& grid, std::size_t num_samples,
                                     std::uint64_t rng_seed);

}  // namespace qkg::grid
