#pragma once

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "qkg/bytes.hpp"
#include "qkg/qk_grid.hpp"
#include "qkg/rng.hpp"

namespace qkg::test {

// A deterministic grid filled from a seeded stream, standing in for a
// pre-shared replica in tests that do not exercise the exchange itself.
inline grid::QkGrid make_grid(int n, std::uint64_t seed) {
    grid::GridLayout layout =
        grid::GridLayout::construct(n, derive_stream_seed(seed, grid::kLayoutStream));
    Xoshiro256ss rng(seed);
    Bytes raw(layout.required_bits() / 8);
    rng.fill_bytes(raw.data(), raw.size());
    return grid::QkGrid::populate(std::move(layout), BitString::from_bytes(raw, raw.size() * 8));
}

// Scratch directory that cleans up after itself.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& label) {
        path = std::filesystem::temp_directory_path() /
               ("qkg_" + label + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }

    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }

    std::string str() const { return path.string(); }

private:
    static int& counter() {
        static int value = 0;
        return value;
    }
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace qkg::test
