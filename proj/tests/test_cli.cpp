#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qkg/manifest.hpp"
#include "test_util.hpp"

using namespace qkg;

namespace {

struct CommandResult {
    int exit_code;
    std::string stdout_text;
};

CommandResult run_cli(const std::string& args) {
    test::TempDir capture("cliout");
    std::string out_file = (capture.path / "stdout.txt").string();
    std::string command = std::string(QKG_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
    int status = std::system(command.c_str());
    CommandResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.stdout_text = test::read_file(out_file);
    return result;
}

std::map<std::string, std::string> manifest_hashes(const std::filesystem::path& dir,
                                                   bool deterministic_only) {
    RunManifest manifest = read_manifest(dir / "manifest.json");
    std::map<std::string, std::string> hashes;
    for (const auto& out : manifest.outputs)
        if (!deterministic_only || out.deterministic) hashes[out.name] = out.sha256;
    return hashes;
}

}  // namespace

TEST_CASE("usage errors exit with code 2", "[cli]") {
    CHECK(run_cli("qkd --photons 0").exit_code == 2);
    CHECK(run_cli("qkd --no-such-flag").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("grid --n 4").exit_code == 2);
    CHECK(run_cli("bench --iterations 5").exit_code == 2);
}

TEST_CASE("help and version exit cleanly", "[cli]") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("--version").exit_code == 0);
    CHECK(run_cli("qkd --help").exit_code == 0);
}

TEST_CASE("clean exchange writes transcript and key", "[cli]") {
    test::TempDir dir("qkd");
    auto result =
        run_cli("qkd --photons 20000 --seed 1 --out " + dir.str());
    CHECK(result.exit_code == 0);
    CHECK(result.stdout_text.find("decision=accept") != std::string::npos);
    CHECK(std::filesystem::exists(dir.path / "transcript.csv"));
    CHECK(std::filesystem::exists(dir.path / "key.hex"));
    CHECK(std::filesystem::exists(dir.path / "manifest.json"));

    std::ifstream key(dir.path / "key.hex");
    std::string hex_line, bits_line;
    std::getline(key, hex_line);
    std::getline(key, bits_line);
    CHECK(!hex_line.empty());
    CHECK(std::stoul(bits_line) > 0);
    CHECK(hex_line.size() == (std::stoul(bits_line) + 7) / 8 * 2);
}

TEST_CASE("full intercept aborts with code 1", "[cli]") {
    test::TempDir dir("qkd_eve");
    auto result = run_cli("qkd --photons 20000 --eve 1.0 --seed 1 --out " + dir.str());
    CHECK(result.exit_code == 1);
    CHECK(result.stdout_text.find("decision=abort") != std::string::npos);
}

TEST_CASE("grid runs are reproducible", "[cli]") {
    test::TempDir a("grid_a"), b("grid_b");
    CHECK(run_cli("grid --n 3 --seed 1 --photons 1024 --out " + a.str()).exit_code == 0);
    CHECK(run_cli("grid --n 3 --seed 1 --photons 1024 --out " + b.str()).exit_code == 0);
    CHECK(file_sha256(a.path / "grid.qkg") == file_sha256(b.path / "grid.qkg"));
    CHECK(file_sha256(a.path / "grid_dump.txt") == file_sha256(b.path / "grid_dump.txt"));

    test::TempDir c("grid_c");
    CHECK(run_cli("grid --n 3 --seed 2 --photons 1024 --out " + c.str()).exit_code == 0);
    CHECK(file_sha256(a.path / "grid.qkg") != file_sha256(c.path / "grid.qkg"));
}

TEST_CASE("grid generation under full intercept fails with code 1", "[cli]") {
    test::TempDir dir("grid_eve");
    auto result = run_cli("grid --n 3 --eve 1.0 --photons 2048 --seed 1 --out " + dir.str());
    CHECK(result.exit_code == 1);
}

TEST_CASE("keys derives golden vectors deterministically", "[cli]") {
    test::TempDir a("keys_a"), b("keys_b");
    CHECK(run_cli("keys --seed 3 --generations 2 --out " + a.str()).exit_code == 0);
    CHECK(run_cli("keys --seed 3 --generations 2 --out " + b.str()).exit_code == 0);
    CHECK(file_sha256(a.path / "golden.txt") == file_sha256(b.path / "golden.txt"));
    CHECK(file_sha256(a.path / "keystore.qkgk") == file_sha256(b.path / "keystore.qkgk"));

    std::string golden = test::read_file(a.path / "golden.txt");
    CHECK(golden.find("K ") == 0);
    CHECK(golden.find("NH ") != std::string::npos);
    // one line per derivation, eight per generation
    CHECK(std::count(golden.begin(), golden.end(), '\n') == 16);
}

TEST_CASE("keys consumes a serialized grid", "[cli]") {
    test::TempDir g("keys_grid"), k("keys_use");
    REQUIRE(run_cli("grid --n 3 --seed 5 --photons 1024 --out " + g.str()).exit_code == 0);
    auto result = run_cli("keys --grid " + (g.path / "grid.qkg").string() + " --seed 5 --out " +
                          k.str());
    CHECK(result.exit_code == 0);
    CHECK(run_cli("keys --grid " + (g.path / "missing.qkg").string()).exit_code == 3);

    std::ofstream bad(g.path / "broken.qkg", std::ios::binary);
    bad << "not a grid container";
    bad.close();
    CHECK(run_cli("keys --grid " + (g.path / "broken.qkg").string()).exit_code == 3);
}

TEST_CASE("aka batch emits the ordered load curve", "[cli]") {
    test::TempDir dir("aka");
    auto result =
        run_cli("aka --scheme qkg,eps --n-auth 20 --seed 1 --out " + dir.str());
    CHECK(result.exit_code == 0);

    std::ifstream csv(dir.path / "load_curve.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "auth_index,scheme,elapsed_ms_cumulative,hss_msgs,mme_msgs");
    std::map<std::string, std::vector<double>> elapsed;
    std::string line;
    while (std::getline(csv, line)) {
        std::stringstream ss(line);
        std::string index, scheme, value;
        std::getline(ss, index, ',');
        std::getline(ss, scheme, ',');
        std::getline(ss, value, ',');
        elapsed[scheme].push_back(std::stod(value));
    }
    REQUIRE(elapsed["qkg"].size() == 20);
    REQUIRE(elapsed["eps"].size() == 20);
    for (std::size_t i = 0; i < 20; ++i) CHECK(elapsed["qkg"][i] <= elapsed["eps"][i]);
}

TEST_CASE("aka attack runs exit by outcome", "[cli]") {
    test::TempDir t("aka_tamper");
    auto tamper = run_cli("aka --attack tamper --seed 2 --out " + t.str());
    CHECK(tamper.exit_code == 1);
    CHECK(tamper.stdout_text.find("outcome=auth_failure") != std::string::npos);
    CHECK(std::filesystem::exists(t.path / "attack_transcript.csv"));

    test::TempDir r("aka_replay");
    CHECK(run_cli("aka --attack replay --seed 2 --out " + r.str()).exit_code == 1);

    test::TempDir i("aka_eve");
    auto eve = run_cli("aka --attack intercept_resend --seed 2 --out " + i.str());
    CHECK(eve.exit_code == 1);
    CHECK(eve.stdout_text.find("outcome=detection_abort") != std::string::npos);
}

TEST_CASE("aka reads scenario config files", "[cli]") {
    test::TempDir dir("aka_cfg");
    std::ofstream cfg(dir.path / "scenario.cfg");
    cfg << "[scenario]\ngrid_n = 5\nseed = 77\n[costs]\nlink_latency_ms = 1\n";
    cfg.close();
    auto result = run_cli("aka --config " + (dir.path / "scenario.cfg").string() +
                          " --scheme qkg --n-auth 3 --seed 4 --out " + dir.str());
    CHECK(result.exit_code == 0);

    // config seed wins when the flag is absent, the flag wins when present
    test::TempDir noflag("aka_cfg_noflag");
    auto cfg_run = run_cli("aka --config " + (dir.path / "scenario.cfg").string() +
                           " --scheme qkg --n-auth 3 --out " + noflag.str());
    CHECK(cfg_run.exit_code == 0);
    CHECK(read_manifest(noflag.path / "manifest.json").seed == 77);
    CHECK(read_manifest(dir.path / "manifest.json").seed == 4);

    std::ofstream bad(dir.path / "bad.cfg");
    bad << "[costs]\nwrong_key = 1\n";
    bad.close();
    CHECK(run_cli("aka --config " + (dir.path / "bad.cfg").string()).exit_code == 2);
    CHECK(run_cli("aka --config " + (dir.path / "nope.cfg").string()).exit_code == 3);
}

TEST_CASE("lifetime prints the analytic value", "[cli]") {
    test::TempDir dir("lifetime");
    auto result = run_cli(
        "lifetime --dist exp --mean 1 --lambda 2 --phi 1 --th 1 --ts 10 --mc-trials 100000 "
        "--seed 1 --out " +
        dir.str());
    CHECK(result.exit_code == 0);

    std::ifstream csv(dir.path / "lifetime.csv");
    std::string header, row;
    std::getline(csv, header);
    REQUIRE(std::getline(csv, row));
    std::stringstream ss(row);
    std::vector<std::string> cells;
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 9);
    CHECK(std::stod(cells[6]) == Catch::Approx(1.0 - std::exp(-1.0)).margin(1e-5));
}

TEST_CASE("lifetime sweep files run row by row", "[cli]") {
    test::TempDir dir("sweep");
    std::ofstream sweep(dir.path / "sweep.csv");
    sweep << "# lambda,phi,t_h,T_s,kind,mean\n2,1,1,10,exp,1\n1,2,0.25,10,det,0.5\n";
    sweep.close();
    auto result = run_cli("lifetime --sweep-file " + (dir.path / "sweep.csv").string() +
                          " --mc-trials 50000 --seed 2 --out " + dir.str());
    CHECK(result.exit_code == 0);
    std::string csv = test::read_file(dir.path / "lifetime.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 rows

    std::ofstream bad(dir.path / "bad.csv");
    bad << "1,2\n";
    bad.close();
    CHECK(run_cli("lifetime --sweep-file " + (dir.path / "bad.csv").string()).exit_code == 3);
}

TEST_CASE("bench reports medians and flags timing files", "[cli]") {
    test::TempDir dir("bench");
    auto result = run_cli("bench --iterations 30 --warmup 2 --n 3 --seed 1 --out " + dir.str());
    CHECK(result.exit_code == 0);
    CHECK(result.stdout_text.find("qkg_median_ns=") != std::string::npos);
    RunManifest manifest = read_manifest(dir.path / "manifest.json");
    REQUIRE(manifest.outputs.size() == 2);
    for (const auto& out : manifest.outputs) CHECK(!out.deterministic);
}

TEST_CASE("environment variable supplies the default output directory", "[cli]") {
    test::TempDir dir("envout");
    test::TempDir capture("envcap");
    std::string out_file = (capture.path / "stdout.txt").string();
    std::string command = "QKG_OUT_DIR=" + dir.str() + " " + QKG_CLI_PATH +
                          " qkd --photons 2000 --seed 3 > " + out_file + " 2>&1";
    int status = std::system(command.c_str());
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(std::filesystem::exists(dir.path / "manifest.json"));
    CHECK(std::filesystem::exists(dir.path / "key.hex"));
}

TEST_CASE("rerun reproduces deterministic outputs byte for byte", "[cli]") {
    test::TempDir first("rerun_a"), second("rerun_b");
    REQUIRE(run_cli("qkd --photons 5000 --seed 9 --out " + first.str()).exit_code == 0);
    auto rerun = run_cli("rerun --manifest " + (first.path / "manifest.json").string() +
                         " --out " + second.str());
    CHECK(rerun.exit_code == 0);
    CHECK(manifest_hashes(first.path, true) == manifest_hashes(second.path, true));
}
