#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qkg/bytes.hpp"
#include "qkg/crypto.hpp"
#include "qkg/errors.hpp"

namespace qkg {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Every experiment directory carries exactly one manifest describing how its
// files were produced. Rerunning the recorded argv (with a fresh output
// directory) must reproduce every data file byte-for-byte; files flagged
// non-deterministic (wall-clock timing series) are the documented exception.
struct RunManifest {
    std::vector<std::string> args;  // argv after the program name
    std::string config_digest;      // sha256 of the config file, or "-"
    std::uint64_t seed = 0;
    std::string tool_version{kToolVersion};
    std::string started_at;
    std::string finished_at;

    struct OutputFile {
        std::string name;
        std::string sha256;
        bool deterministic = true;
    };
    std::vector<OutputFile> outputs;
};

inline std::string iso8601_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string file_sha256(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot hash missing file: " + path.string());
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return to_hex(crypto::sha256(data));
}

inline void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest) {
    nlohmann::json j;
    j["tool_version"] = manifest.tool_version;
    j["args"] = manifest.args;
    j["config_digest"] = manifest.config_digest;
    j["seed"] = manifest.seed;
    j["started_at"] = manifest.started_at;
    j["finished_at"] = manifest.finished_at;
    j["outputs"] = nlohmann::json::array();
    for (const auto& out : manifest.outputs)
        j["outputs"].push_back({{"name", out.name},
                                {"sha256", out.sha256},
                                {"deterministic", out.deterministic}});
    std::ofstream out(dir / "manifest.json", std::ios::trunc);
    if (!out) throw IoError("cannot write manifest in " + dir.string());
    out << j.dump(2) << "\n";
}

inline RunManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read manifest: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("malformed manifest " + path.string() + ": " + e.what());
    }
    RunManifest manifest;
    try {
        manifest.tool_version = j.at("tool_version").get<std::string>();
        manifest.args = j.at("args").get<std::vector<std::string>>();
        manifest.config_digest = j.at("config_digest").get<std::string>();
        manifest.seed = j.at("seed").get<std::uint64_t>();
        manifest.started_at = j.value("started_at", "");
        manifest.finished_at = j.value("finished_at", "");
        for (const auto& out : j.at("outputs")) {
            RunManifest::OutputFile file;
            file.name = out.at("name").get<std::string>();
            file.sha256 = out.at("sha256").get<std::string>();
            file.deterministic = out.value("deterministic", true);
            manifest.outputs.push_back(std::move(file));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("manifest " + path.string() + " missing fields: " + e.what());
    }
    return manifest;
}

}  // namespace qkg
