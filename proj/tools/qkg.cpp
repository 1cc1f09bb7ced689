// Command-line front end: key-exchange runs, grid builds, key-chain
// derivations, authentication batches and attacks, lifetime-model sweeps and
// the key-generation timing benchmark. Every run leaves a manifest.json in
// its output directory; `qkg rerun` replays a manifest into a fresh
// directory.
//
// Exit codes: 0 success, 1 domain failure (detection abort, failed
// authentication), 2 usage error, 3 I/O or file-format error.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qkg/aka_sim.hpp"
#include "qkg/config.hpp"
#include "qkg/csv.hpp"
#include "qkg/key_hierarchy.hpp"
#include "qkg/lifetime_model.hpp"
#include "qkg/manifest.hpp"
#include "qkg/qk_grid.hpp"
#include "qkg/qkd_link.hpp"

namespace fs = std::filesystem;
using namespace qkg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomainFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

fs::path resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("QKG_OUT_DIR"); env && *env) return env;
    return "qkg-out";
}

// Collects output files and writes the directory manifest on finalize.
struct RunDir {
    fs::path dir;
    RunManifest manifest;

    RunDir(const std::string& out_flag, const std::vector<std::string>& args,
           std::uint64_t seed, const std::string& config_digest) {
        dir = resolve_out_dir(out_flag);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw IoError("cannot create output directory " + dir.string());
        manifest.args = args;
        manifest.seed = seed;
        manifest.config_digest = config_digest.empty() ? "-" : config_digest;
        manifest.started_at = iso8601_now();
    }

    fs::path path(const std::string& name) const { return dir / name; }

    void add_output(const std::string& name, bool deterministic = true) {
        manifest.outputs.push_back({name, file_sha256(dir / name), deterministic});
    }

    void finalize() {
        manifest.finished_at = iso8601_now();
        write_manifest(dir, manifest);
    }
};

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
}

Bytes read_binary_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// ---------------------------------------------------------------------------
// qkd
// ---------------------------------------------------------------------------

struct QkdArgs {
    std::size_t photons = 100000;
    double noise = 0.0;
    double eve = 0.0;
    double sample_fraction = 0.25;
    double threshold = qkd::kDefaultDetectionThreshold;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_qkd(const QkdArgs& args, const std::vector<std::string>& argv) {
    qkd::ChannelConfig config{args.photons, args.noise, args.eve, args.seed};
    qkd::ExchangeOptions options;
    options.sample_fraction = args.sample_fraction;
    options.detection_threshold = args.threshold;
    options.record_transcript = true;

    qkd::ExchangeResult result = qkd::run_exchange(config, options);

    RunDir run(args.out, argv, args.seed, "");
    {
        CsvWriter csv(run.path("transcript.csv"),
                      {"index", "sender_bit", "sender_basis", "receiver_basis", "receiver_bit",
                       "retained", "sampled"});
        for (const auto& row : result.transcript)
            csv.row({std::to_string(row.index), std::to_string(int(row.sender_bit)),
                     std::string(1, qkd::basis_char(row.sender_basis)),
                     std::string(1, qkd::basis_char(row.receiver_basis)),
                     std::to_string(int(row.receiver_bit)), row.retained ? "1" : "0",
                     row.sampled ? "1" : "0"});
    }
    run.add_output("transcript.csv");

    auto [hex, bit_len] = result.key.final_key_hex();
    write_text_file(run.path("key.hex"), hex + "\n" + std::to_string(bit_len) + "\n");
    run.add_output("key.hex");
    run.finalize();

    double retention = static_cast<double>(result.key.retained_indices.size()) /
                       static_cast<double>(args.photons);
    std::cout << "photons=" << args.photons << " retained=" << result.key.retained_indices.size()
              << " retention=" << csv_num(retention) << " qber=" << csv_num(result.key.qber)
              << " decision=" << (result.decision == qkd::Decision::Abort ? "abort" : "accept")
              << "\n";
    return result.decision == qkd::Decision::Abort ? kExitDomainFailure : kExitOk;
}

// ---------------------------------------------------------------------------
// grid
// ---------------------------------------------------------------------------

struct GridArgs {
    int n = 3;
    std::size_t photons = 4096;
    double noise = 0.0;
    double eve = 0.0;
    int retries = 3;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_grid(const GridArgs& args, const std::vector<std::string>& argv) {
    qkd::ChannelConfig config{args.photons, args.noise, args.eve, args.seed};
    grid::GenerationOptions options;
    options.max_detections = args.retries;

    grid::QkGrid g = grid::run_grid_generation(config, args.n, options);

    RunDir run(args.out, argv, args.seed, "");
    Bytes container = g.serialize();
    std::ofstream bin(run.path("grid.qkg"), std::ios::binary | std::ios::trunc);
    if (!bin) throw IoError("cannot write grid container");
    bin.write(reinterpret_cast<const char*>(container.data()),
              static_cast<std::streamsize>(container.size()));
    bin.close();
    run.add_output("grid.qkg");
    write_text_file(run.path("grid_dump.txt"), g.hex_dump());
    run.add_output("grid_dump.txt");
    run.finalize();

    std::cout << "grid n=" << args.n << " bits=" << g.consumed_bits()
              << " digest=" << to_hex(g.source_digest()) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// keys
// ---------------------------------------------------------------------------

struct KeysArgs {
    std::string grid_path;  // serialized grid; generated from seed when empty
    int n = 3;
    std::uint64_t seed = 1;
    std::uint64_t generations = 3;
    std::string snid = "mnc001.mcc001";
    std::string out;
};

grid::QkGrid provisioned_grid(int n, std::uint64_t seed) {
    grid::GridLayout layout =
        grid::GridLayout::construct(n, derive_stream_seed(seed, grid::kLayoutStream));
    Xoshiro256ss rng(seed);
    Bytes raw(layout.required_bits() / 8);
    rng.fill_bytes(raw.data(), raw.size());
    return grid::QkGrid::populate(std::move(layout), BitString::from_bytes(raw, raw.size() * 8));
}

int cmd_keys(const KeysArgs& args, const std::vector<std::string>& argv) {
    grid::QkGrid g;
    if (!args.grid_path.empty())
        g = grid::QkGrid::deserialize(read_binary_file(args.grid_path));
    else
        g = provisioned_grid(args.n, args.seed);

    keys::PreK pre_k;
    Xoshiro256ss bootstrap(derive_stream_seed(args.seed, 4));
    bootstrap.fill_bytes(pre_k.value.data(), pre_k.value.size());

    keys::DerivationContext ctx{crypto::str_bytes(args.snid), 0, 1};
    RunDir run(args.out, argv, args.seed, "");

    std::string golden;
    keys::KeyChain chain;
    for (std::uint64_t gen = 0; gen < args.generations; ++gen) {
        keys::PreK before = pre_k;
        chain = keys::derive_chain(g, pre_k, ctx);

        Bytes in_k(g.source_digest().begin(), g.source_digest().end());
        in_k.insert(in_k.end(), before.value.begin(), before.value.end());
        put_be64(in_k, before.generation);
        golden += keys::golden_line("K", in_k, chain.k) + "\n";

        golden += keys::golden_line("CK", chain.k, chain.ck) + "\n";
        golden += keys::golden_line("IK", chain.k, chain.ik) + "\n";

        Bytes in_asme(chain.ck.begin(), chain.ck.end());
        in_asme.insert(in_asme.end(), chain.ik.begin(), chain.ik.end());
        in_asme.insert(in_asme.end(), ctx.serving_network_id.begin(),
                       ctx.serving_network_id.end());
        golden += keys::golden_line("ASME", in_asme, chain.k_asme) + "\n";

        Bytes in_nas(chain.k_asme.begin(), chain.k_asme.end());
        in_nas.push_back(ctx.algorithm_id);
        golden += keys::golden_line("NASenc", in_nas, chain.k_nas_enc) + "\n";
        golden += keys::golden_line("NASint", in_nas, chain.k_nas_int) + "\n";

        Bytes in_enb(chain.k_asme.begin(), chain.k_asme.end());
        put_be32(in_enb, ctx.nas_uplink_count);
        golden += keys::golden_line("eNB", in_enb, chain.k_enb) + "\n";

        Bytes in_nh(chain.k_asme.begin(), chain.k_asme.end());
        in_nh.insert(in_nh.end(), chain.k_enb.begin(), chain.k_enb.end());
        golden += keys::golden_line("NH", in_nh, chain.nh) + "\n";
    }

    write_text_file(run.path("golden.txt"), golden);
    run.add_output("golden.txt");
    keys::save_key_store(run.path("keystore.qkgk"), pre_k, &chain);
    run.add_output("keystore.qkgk");
    run.finalize();

    std::cout << "generations=" << args.generations << " final_generation=" << pre_k.generation
              << " k=" << to_hex(chain.k) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// aka
// ---------------------------------------------------------------------------

struct AkaArgs {
    std::string schemes = "qkg,eps";
    std::size_t n_auth = 100;
    std::string attack = "none";
    std::uint64_t seed = 1;
    bool seed_given = false;  // flags beat config values, config beats defaults
    std::string config_path;
    std::string out;
};

int cmd_aka(const AkaArgs& args, const std::vector<std::string>& argv) {
    aka::Scenario scenario;
    std::string config_digest;
    if (!args.config_path.empty()) {
        scenario = scenario_from_config(load_config_file(args.config_path));
        config_digest = file_sha256(args.config_path);
    }
    if (args.seed_given || args.config_path.empty()) scenario.seed = args.seed;
    aka::Attack attack = aka::parse_attack(args.attack);
    if (attack != aka::Attack::None) scenario.attack = attack;

    RunDir run(args.out, argv, scenario.seed, config_digest);

    if (scenario.attack != aka::Attack::None) {
        if (args.schemes.find(',') == std::string::npos && !args.schemes.empty())
            scenario.scheme = aka::parse_scheme(args.schemes);
        aka::AuthTranscript t = aka::run_attack(scenario, scenario.attack);
        CsvWriter csv(run.path("attack_transcript.csv"),
                      {"timestamp_ms", "kind", "sender", "receiver", "payload"});
        for (const auto& m : t.messages) {
            std::string payload;
            for (const auto& [name, value] : m.payload) {
                if (!payload.empty()) payload += ';';
                payload += name + "=" + to_hex(value);
            }
            csv.row({csv_num(m.timestamp_ms), m.kind, m.sender, m.receiver, payload});
        }
        csv.close();
        run.add_output("attack_transcript.csv");
        run.finalize();
        const char* outcome = t.outcome == aka::Outcome::Success         ? "success"
                              : t.outcome == aka::Outcome::AuthFailure   ? "auth_failure"
                                                                         : "detection_abort";
        std::cout << "attack=" << args.attack << " outcome=" << outcome
                  << " elapsed_ms=" << csv_num(t.elapsed_ms) << "\n";
        return t.outcome == aka::Outcome::Success ? kExitOk : kExitDomainFailure;
    }

    std::vector<std::string> schemes;
    std::stringstream ss(args.schemes);
    std::string token;
    while (std::getline(ss, token, ',')) schemes.push_back(token);
    if (schemes.empty()) throw ConfigError("no schemes requested");

    CsvWriter csv(run.path("load_curve.csv"),
                  {"auth_index", "scheme", "elapsed_ms_cumulative", "hss_msgs", "mme_msgs"});
    for (const auto& name : schemes) {
        aka::Scheme scheme = aka::parse_scheme(name);
        auto curve = aka::run_batch(scheme, args.n_auth, scenario);
        for (const auto& point : curve)
            csv.row({std::to_string(point.auth_index), name,
                     csv_num(point.elapsed_ms_cumulative), std::to_string(point.hss_msgs),
                     std::to_string(point.mme_msgs)});
        std::cout << "scheme=" << name << " n_auth=" << args.n_auth
                  << " elapsed_ms=" << csv_num(curve.back().elapsed_ms_cumulative)
                  << " hss_msgs=" << curve.back().hss_msgs << " mme_msgs=" << curve.back().mme_msgs
                  << "\n";
    }
    csv.close();
    run.add_output("load_curve.csv");
    run.finalize();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// lifetime
// ---------------------------------------------------------------------------

struct LifetimeArgs {
    std::string dist = "exp";
    double mean = 1.0;
    double value = 1.0;
    double lambda = 2.0;
    double phi = 1.0;
    double t_h = 1.0;
    double t_s = 10.0;
    std::size_t mc_trials = 1000000;
    std::uint64_t seed = 1;
    std::string sweep_file;
    std::string out;
};

lifetime::ExpiryDistribution make_dist(const std::string& kind, double mean, double value) {
    if (kind == "exp") return lifetime::ExpiryDistribution::exponential(mean);
    if (kind == "det") return lifetime::ExpiryDistribution::deterministic(value);
    throw ConfigError("unknown expiry distribution kind: " + kind);
}

int cmd_lifetime(const LifetimeArgs& args, const std::vector<std::string>& argv) {
    struct SweepRow {
        double lambda, phi, t_h, t_s;
        std::string kind;
        double mean;
    };
    std::vector<SweepRow> rows;
    std::string config_digest;
    if (!args.sweep_file.empty()) {
        config_digest = file_sha256(args.sweep_file);
        std::ifstream in(args.sweep_file);
        if (!in) throw IoError("cannot read sweep file: " + args.sweep_file);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            SweepRow row;
            char kind_buf[16] = {0};
            int matched = std::sscanf(line.c_str(), " %lf , %lf , %lf , %lf , %15[a-z] , %lf",
                                      &row.lambda, &row.phi, &row.t_h, &row.t_s, kind_buf,
                                      &row.mean);
            if (matched != 6)
                throw FormatError("sweep file line " + std::to_string(line_no) +
                                  ": want lambda,phi,t_h,T_s,kind,mean");
            row.kind = kind_buf;
            rows.push_back(row);
        }
        if (rows.empty()) throw FormatError("sweep file has no parameter rows");
    } else {
        double mean = args.dist == "det" ? args.value : args.mean;
        rows.push_back({args.lambda, args.phi, args.t_h, args.t_s, args.dist, mean});
    }

    RunDir run(args.out, argv, args.seed, config_digest);
    CsvWriter csv(run.path("lifetime.csv"),
                  {"lambda", "phi", "t_h", "T_s", "dist_kind", "dist_mean", "p_dkga_analytic",
                   "p_dkga_mc", "mc_stderr"});
    std::uint64_t row_index = 0;
    for (const auto& row : rows) {
        lifetime::LifetimeParams params{row.lambda, row.phi, row.t_h, row.t_s,
                                        make_dist(row.kind, row.mean, row.mean)};
        auto detail = lifetime::p_dkga_detailed(params);
        if (detail.clamped)
            std::cerr << "warning: quadrature strayed outside [0,1] (raw "
                      << csv_num(detail.raw_value) << "), value clamped\n";
        double analytic = detail.value;
        auto mc = lifetime::p_dkga_monte_carlo(params, args.mc_trials,
                                               derive_stream_seed(args.seed, row_index++));
        csv.row({csv_num(row.lambda), csv_num(row.phi), csv_num(row.t_h), csv_num(row.t_s),
                 row.kind, csv_num(row.mean), csv_num(analytic), csv_num(mc.estimate),
                 csv_num(mc.stderr_est)});
        std::cout << "lambda=" << csv_num(row.lambda) << " phi=" << csv_num(row.phi)
                  << " t_h=" << csv_num(row.t_h) << " dist=" << row.kind
                  << " p_dkga_analytic=" << csv_num(analytic)
                  << " p_dkga_mc=" << csv_num(mc.estimate) << " stderr=" << csv_num(mc.stderr_est)
                  << "\n";
    }
    csv.close();
    run.add_output("lifetime.csv");
    run.finalize();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchArgs {
    int iterations = 50;
    int warmup = 5;
    int n = 5;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_bench(const BenchArgs& args, const std::vector<std::string>& argv) {
    if (args.iterations < 30) throw ConfigError("bench needs at least 30 iterations");
    if (args.warmup < 0) throw ConfigError("warmup must be non-negative");

    grid::QkGrid g = provisioned_grid(args.n, args.seed);
    keys::PreK pre_k;
    Xoshiro256ss bootstrap(derive_stream_seed(args.seed, 4));
    bootstrap.fill_bytes(pre_k.value.data(), pre_k.value.size());
    Xoshiro256ss random_path_rng(derive_stream_seed(args.seed, 5));

    using Clock = std::chrono::steady_clock;
    auto time_ns = [](auto&& fn) {
        auto begin = Clock::now();
        fn();
        auto end = Clock::now();
        return std::chrono::duration_cast<std::chrono::nanoseconds>(end - begin).count();
    };

    std::vector<long long> qkg_series, kdf_series;
    keys::PreK state = pre_k;
    for (int i = 0; i < args.warmup + args.iterations; ++i) {
        long long ns = time_ns([&] {
            auto [k, next] = keys::derive_master_key(g, state);
            state = next;
        });
        if (i >= args.warmup) qkg_series.push_back(ns);
    }
    Bytes salt = crypto::str_bytes("bench");
    for (int i = 0; i < args.warmup + args.iterations; ++i) {
        long long ns = time_ns([&] {
            Bytes input(32);
            random_path_rng.fill_bytes(input.data(), input.size());
            volatile auto sink =
                crypto::hkdf_sha256(input, salt, crypto::str_bytes("KDF/gen"), 32)[0];
            (void)sink;
        });
        if (i >= args.warmup) kdf_series.push_back(ns);
    }

    auto median = [](std::vector<long long> v) {
        std::sort(v.begin(), v.end());
        std::size_t mid = v.size() / 2;
        return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2;
    };

    RunDir run(args.out, argv, args.seed, "");
    {
        CsvWriter csv(run.path("bench_timing.csv"), {"method", "iteration", "elapsed_ns"});
        for (std::size_t i = 0; i < qkg_series.size(); ++i)
            csv.row({"qkg", std::to_string(i), std::to_string(qkg_series[i])});
        for (std::size_t i = 0; i < kdf_series.size(); ++i)
            csv.row({"kdf_random", std::to_string(i), std::to_string(kdf_series[i])});
    }
    run.add_output("bench_timing.csv", /*deterministic=*/false);
    {
        CsvWriter csv(run.path("bench_summary.csv"), {"method", "iterations", "median_ns"});
        csv.row({"qkg", std::to_string(args.iterations), std::to_string(median(qkg_series))});
        csv.row(
            {"kdf_random", std::to_string(args.iterations), std::to_string(median(kdf_series))});
    }
    run.add_output("bench_summary.csv", /*deterministic=*/false);
    run.finalize();

    std::cout << "qkg_median_ns=" << median(qkg_series)
              << " kdf_random_median_ns=" << median(kdf_series) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// rerun
// ---------------------------------------------------------------------------

int run_cli(const std::vector<std::string>& args);

struct RerunArgs {
    std::string manifest_path;
    std::string out;
};

int cmd_rerun(const RerunArgs& args) {
    RunManifest manifest = read_manifest(args.manifest_path);
    std::vector<std::string> replay = manifest.args;
    auto it = std::find(replay.begin(), replay.end(), "--out");
    if (it != replay.end() && it + 1 != replay.end())
        *(it + 1) = args.out;
    else {
        replay.push_back("--out");
        replay.push_back(args.out);
    }
    return run_cli(replay);
}

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"key-exchange, seed-grid and authentication simulation suite"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    int exit_code = kExitOk;

    QkdArgs qkd_args;
    auto* qkd_cmd = app.add_subcommand("qkd", "run one key exchange over the simulated channel");
    qkd_cmd->add_option("--photons", qkd_args.photons, "photons to transmit");
    qkd_cmd->add_option("--noise", qkd_args.noise, "bit-flip probability at measurement");
    qkd_cmd->add_option("--eve", qkd_args.eve, "intercept-resend fraction");
    qkd_cmd->add_option("--sample-fraction", qkd_args.sample_fraction,
                        "sifted fraction sacrificed for error estimation");
    qkd_cmd->add_option("--threshold", qkd_args.threshold, "detection threshold on the QBER");
    qkd_cmd->add_option("--seed", qkd_args.seed, "root RNG seed");
    qkd_cmd->add_option("--out", qkd_args.out, "output directory");

    GridArgs grid_args;
    auto* grid_cmd = app.add_subcommand("grid", "establish and serialize a seed grid");
    grid_cmd->add_option("--n", grid_args.n, "grid side length (odd, >= 3)");
    grid_cmd->add_option("--photons", grid_args.photons, "photons per exchange");
    grid_cmd->add_option("--noise", grid_args.noise, "bit-flip probability");
    grid_cmd->add_option("--eve", grid_args.eve, "intercept-resend fraction");
    grid_cmd->add_option("--retries", grid_args.retries, "tolerated detection aborts");
    grid_cmd->add_option("--seed", grid_args.seed, "root RNG seed");
    grid_cmd->add_option("--out", grid_args.out, "output directory");

    KeysArgs keys_args;
    auto* keys_cmd = app.add_subcommand("keys", "derive the key chain and golden vectors");
    keys_cmd->add_option("--grid", keys_args.grid_path, "serialized grid (grid.qkg)");
    keys_cmd->add_option("--n", keys_args.n, "grid side when generating locally");
    keys_cmd->add_option("--generations", keys_args.generations, "feedback rounds to derive");
    keys_cmd->add_option("--snid", keys_args.snid, "serving network identity");
    keys_cmd->add_option("--seed", keys_args.seed, "root RNG seed");
    keys_cmd->add_option("--out", keys_args.out, "output directory");

    AkaArgs aka_args;
    auto* aka_cmd = app.add_subcommand("aka", "run authentication batches or attacks");
    aka_cmd->add_option("--scheme", aka_args.schemes, "comma list of schemes: qkg,eps,se");
    aka_cmd->add_option("--n-auth", aka_args.n_auth, "authentications per scheme");
    aka_cmd->add_option("--attack", aka_args.attack,
                        "none | intercept_resend | replay | tamper");
    aka_cmd->add_option("--config", aka_args.config_path, "scenario config file");
    aka_cmd->add_option("--seed", aka_args.seed, "root RNG seed");
    aka_cmd->add_option("--out", aka_args.out, "output directory");

    LifetimeArgs lt_args;
    auto* lt_cmd = app.add_subcommand("lifetime", "evaluate the key-lifetime model");
    lt_cmd->add_option("--dist", lt_args.dist, "expiry distribution: exp | det");
    lt_cmd->add_option("--mean", lt_args.mean, "mean expiry time (exp)");
    lt_cmd->add_option("--value", lt_args.value, "fixed expiry time (det)");
    lt_cmd->add_option("--lambda", lt_args.lambda, "expected key arrival rate");
    lt_cmd->add_option("--phi", lt_args.phi, "key discontinuation rate");
    lt_cmd->add_option("--th", lt_args.t_h, "refresh horizon");
    lt_cmd->add_option("--ts", lt_args.t_s, "session duration");
    lt_cmd->add_option("--mc-trials", lt_args.mc_trials, "Monte Carlo trials");
    lt_cmd->add_option("--sweep-file", lt_args.sweep_file,
                       "parameter rows: lambda,phi,t_h,T_s,kind,mean");
    lt_cmd->add_option("--seed", lt_args.seed, "root RNG seed");
    lt_cmd->add_option("--out", lt_args.out, "output directory");

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "time 256-bit key generation paths");
    bench_cmd->add_option("--iterations", bench_args.iterations, "timed iterations (>= 30)");
    bench_cmd->add_option("--warmup", bench_args.warmup, "discarded warmup iterations");
    bench_cmd->add_option("--n", bench_args.n, "grid side length");
    bench_cmd->add_option("--seed", bench_args.seed, "root RNG seed");
    bench_cmd->add_option("--out", bench_args.out, "output directory");

    RerunArgs rerun_args;
    auto* rerun_cmd = app.add_subcommand("rerun", "replay a manifest into a new directory");
    rerun_cmd->add_option("--manifest", rerun_args.manifest_path, "manifest.json path")
        ->required();
    rerun_cmd->add_option("--out", rerun_args.out, "new output directory")->required();

    qkd_cmd->callback([&] { exit_code = cmd_qkd(qkd_args, args); });
    grid_cmd->callback([&] { exit_code = cmd_grid(grid_args, args); });
    keys_cmd->callback([&] { exit_code = cmd_keys(keys_args, args); });
    aka_cmd->callback([&] {
        aka_args.seed_given = aka_cmd->count("--seed") > 0;
        exit_code = cmd_aka(aka_args, args);
    });
    lt_cmd->callback([&] { exit_code = cmd_lifetime(lt_args, args); });
    bench_cmd->callback([&] { exit_code = cmd_bench(bench_args, args); });
    rerun_cmd->callback([&] { exit_code = cmd_rerun(rerun_args); });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomainFailure;
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args);
}
