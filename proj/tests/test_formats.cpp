#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "qkg/config.hpp"
#include "qkg/csv.hpp"
#include "qkg/manifest.hpp"
#include "test_util.hpp"

using namespace qkg;

TEST_CASE("config parser handles sections comments and spacing", "[formats]") {
    std::istringstream in(R"(
# top comment
seed = 99
[costs]
link_latency_ms = 2.5
av_fetch_cost_ms=4
[attack]
kind = tamper
)");
    ConfigSections sections = parse_config_text(in);
    CHECK(sections["scenario"]["seed"] == "99");
    CHECK(sections["costs"]["link_latency_ms"] == "2.5");
    CHECK(sections["costs"]["av_fetch_cost_ms"] == "4");
    CHECK(sections["attack"]["kind"] == "tamper");

    aka::Scenario scenario = scenario_from_config(sections);
    CHECK(scenario.seed == 99);
    CHECK(scenario.costs.link_latency_ms == 2.5);
    CHECK(scenario.costs.av_fetch_cost_ms == 4.0);
    CHECK(scenario.attack == aka::Attack::Tamper);
}

TEST_CASE("config parser rejects malformed lines", "[formats]") {
    std::istringstream bad_section("[costs\nx=1\n");
    CHECK_THROWS_AS(parse_config_text(bad_section), FormatError);
    std::istringstream no_equals("just words\n");
    CHECK_THROWS_AS(parse_config_text(no_equals), FormatError);
}

TEST_CASE("unknown config keys are rejected", "[formats]") {
    std::istringstream in("[costs]\nlatency_typo = 1\n");
    ConfigSections sections = parse_config_text(in);
    CHECK_THROWS_AS(scenario_from_config(sections), ConfigError);

    std::istringstream bad_section("[nonsense]\nx = 1\n");
    CHECK_THROWS_AS(scenario_from_config(parse_config_text(bad_section)), ConfigError);

    std::istringstream bad_value("[channel]\nphotons = many\n");
    CHECK_THROWS_AS(scenario_from_config(parse_config_text(bad_value)), ConfigError);
}

TEST_CASE("manifest round trip", "[formats]") {
    test::TempDir dir("manifest");
    RunManifest manifest;
    manifest.args = {"qkd", "--photons", "100", "--out", "somewhere"};
    manifest.config_digest = "-";
    manifest.seed = 17;
    manifest.started_at = iso8601_now();
    manifest.finished_at = manifest.started_at;
    manifest.outputs.push_back({"a.csv", "00", true});
    manifest.outputs.push_back({"timing.csv", "11", false});
    write_manifest(dir.path, manifest);

    RunManifest back = read_manifest(dir.path / "manifest.json");
    CHECK(back.args == manifest.args);
    CHECK(back.seed == 17);
    REQUIRE(back.outputs.size() == 2);
    CHECK(back.outputs[0].deterministic);
    CHECK(!back.outputs[1].deterministic);
}

TEST_CASE("manifest errors", "[formats]") {
    test::TempDir dir("badmanifest");
    CHECK_THROWS_AS(read_manifest(dir.path / "missing.json"), IoError);
    std::ofstream(dir.path / "broken.json") << "{not json";
    CHECK_THROWS_AS(read_manifest(dir.path / "broken.json"), FormatError);
    std::ofstream(dir.path / "empty.json") << "{}";
    CHECK_THROWS_AS(read_manifest(dir.path / "empty.json"), FormatError);
}

TEST_CASE("csv numbers format stably", "[formats]") {
    CHECK(csv_num(0.5) == "0.5");
    CHECK(csv_num(1.0 / 3.0) == "0.333333333333");
    CHECK(csv_num(std::size_t{42}) == "42");
    test::TempDir dir("csv");
    {
        CsvWriter csv(dir.path / "t.csv", {"a", "b"});
        csv.row({"1", "2"});
    }
    CHECK(test::read_file(dir.path / "t.csv") == "a,b\n1,2\n");
}
