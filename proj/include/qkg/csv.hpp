#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "qkg/errors.hpp"

namespace qkg {

// Doubles print through one fixed format so reruns are byte-identical.
inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string csv_num(std::uint64_t v) { return std::to_string(v); }
inline std::string csv_num(int v) { return std::to_string(v); }

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header)
        : path_(path), out_(path, std::ios::trunc) {
        if (!out_) throw IoError("cannot open for writing: " + path.string());
        row(std::vector<std::string>(header));
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    const std::filesystem::path& path() const { return path_; }

    void close() { out_.close(); }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

}  // namespace qkg
