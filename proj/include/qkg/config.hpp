#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "qkg/aka_sim.hpp"
#include "qkg/errors.hpp"

namespace qkg {

// Scenario files are plain key/value text grouped into [section] blocks;
// '#' starts a comment. Sections and keys are listed in the README.
using ConfigSections = std::map<std::string, std::map<std::string, std::string>>;

inline ConfigSections parse_config_text(std::istream& in) {
    ConfigSections sections;
    std::string line;
    std::string current = "scenario";
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        std::string trimmed = line.substr(first, last - first + 1);
        if (trimmed.front() == '[') {
            if (trimmed.back() != ']')
                throw FormatError("config line " + std::to_string(line_no) +
                                  ": unterminated section header");
            current = trimmed.substr(1, trimmed.size() - 2);
            continue;
        }
        auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw FormatError("config line " + std::to_string(line_no) + ": expected key=value");
        auto key_end = trimmed.find_last_not_of(" \t", eq == 0 ? 0 : eq - 1);
        std::string key = trimmed.substr(0, key_end + 1);
        auto val_begin = trimmed.find_first_not_of(" \t", eq + 1);
        std::string value = val_begin == std::string::npos ? "" : trimmed.substr(val_begin);
        if (key.empty()) throw FormatError("config line " + std::to_string(line_no) + ": empty key");
        sections[current][key] = value;
    }
    return sections;
}

inline ConfigSections load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file: " + path);
    return parse_config_text(in);
}

namespace detail {

inline double to_double(const std::string& raw, const std::string& what) {
    try {
        std::size_t idx = 0;
        double v = std::stod(raw, &idx);
        if (idx != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for " + what + ": '" + raw + "'");
    }
}

inline std::uint64_t to_u64(const std::string& raw, const std::string& what) {
    try {
        std::size_t idx = 0;
        std::uint64_t v = std::stoull(raw, &idx);
        if (idx != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for " + what + ": '" + raw + "'");
    }
}

}  // namespace detail

// Applies a parsed config onto scenario defaults. Unknown keys are errors so
// that typos never silently fall back to defaults.
inline aka::Scenario scenario_from_config(const ConfigSections& sections) {
    aka::Scenario scenario;
    for (const auto& [section, entries] : sections) {
        for (const auto& [key, value] : entries) {
            std::string what = section + "." + key;
            if (section == "scenario") {
                if (key == "scheme")
                    scenario.scheme = aka::parse_scheme(value);
                else if (key == "seed")
                    scenario.seed = detail::to_u64(value, what);
                else if (key == "grid_n")
                    scenario.grid_n = static_cast<int>(detail::to_u64(value, what));
                else if (key == "ue_id")
                    scenario.ue_id = value;
                else if (key == "serving_network_id")
                    scenario.serving_network_id = crypto::str_bytes(value);
                else if (key == "nas_uplink_count")
                    scenario.nas_uplink_count =
                        static_cast<std::uint32_t>(detail::to_u64(value, what));
                else if (key == "algorithm_id")
                    scenario.algorithm_id = static_cast<std::uint8_t>(detail::to_u64(value, what));
                else
                    throw ConfigError("unknown config key " + what);
            } else if (section == "costs") {
                if (key == "link_latency_ms")
                    scenario.costs.link_latency_ms = detail::to_double(value, what);
                else if (key == "kdf_cost_ms")
                    scenario.costs.kdf_cost_ms = detail::to_double(value, what);
                else if (key == "grid_lookup_cost_ms")
                    scenario.costs.grid_lookup_cost_ms = detail::to_double(value, what);
                else if (key == "av_fetch_cost_ms")
                    scenario.costs.av_fetch_cost_ms = detail::to_double(value, what);
                else if (key == "se_group_crypto_ms")
                    scenario.costs.se_group_crypto_ms = detail::to_double(value, what);
                else if (key == "se_extra_messages")
                    scenario.costs.se_extra_messages =
                        static_cast<int>(detail::to_u64(value, what));
                else if (key == "eps_extra_messages")
                    scenario.costs.eps_extra_messages =
                        static_cast<int>(detail::to_u64(value, what));
                else
                    throw ConfigError("unknown config key " + what);
            } else if (section == "channel") {
                if (key == "photons")
                    scenario.photons_per_exchange = detail::to_u64(value, what);
                else if (key == "noise")
                    scenario.channel_noise = detail::to_double(value, what);
                else
                    throw ConfigError("unknown config key " + what);
            } else if (section == "attack") {
                if (key == "kind")
                    scenario.attack = aka::parse_attack(value);
                else if (key == "eve_fraction")
                    scenario.attack_eve_fraction = detail::to_double(value, what);
                else
                    throw ConfigError("unknown config key " + what);
            } else {
                throw ConfigError("unknown config section [" + section + "]");
            }
        }
    }
    scenario.validate();
    return scenario;
}

}  // namespace qkg
