#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qkg/bytes.hpp"
#include "qkg/crypto.hpp"
#include "qkg/errors.hpp"
#include "qkg/key_hierarchy.hpp"
#include "qkg/qk_grid.hpp"
#include "qkg/qkd_link.hpp"
#include "qkg/rng.hpp"

namespace qkg::aka {

// Message-level authentication simulator. Entity state machines (UE, eNB,
// MME, HSS, key server) exchange typed messages through a deterministic
// discrete-event loop with configurable link latencies and crypto costs.
//
// Modeled flows (message counts are the comparison currency, not wire
// fidelity):
//
//   grid scheme / permanent-key scheme, 4-message serving flow + HSS fetch:
//     UE->MME   attach_request        (identity, freshness counter)
//     MME->HSS  auth_data_request
//     HSS->MME  auth_data_response    (nonce, expected response, wrapped K_ASME)
//     MME->UE   challenge             (nonce)
//     UE->MME   challenge_response    (response)
//     MME->UE   auth_accept | auth_reject
//     MME->ENB  key_provision         (success only; wrapped K_eNB / NH)
//
//   group scheme: the same flow plus two group-key legs before the accept.
//
// The schemes differ at the HSS: the grid scheme derives the master key from
// the local seed grid (grid_lookup cost), the baselines fetch/build an
// authentication vector (av_fetch cost). Everything else is shared, which is
// what makes the per-authentication cost orderings structural.
//
// RNG streams under Scenario::seed: 0 grid provisioning, 1 HSS nonces,
// 2 transport-key setup, 3 attacker choices, 4 bootstrap feedback key.

enum class Role : std::uint8_t { UE, ENB, MME, HSS, QKS };
enum class Scheme : std::uint8_t { QKG, EPS, SE };
enum class Outcome : std::uint8_t { Success, AuthFailure, DetectionAbort };
enum class Attack : std::uint8_t { None, InterceptResend, Replay, Tamper };

inline std::string_view role_name(Role r) {
    switch (r) {
        case Role::UE: return "ue";
        case Role::ENB: return "enb";
        case Role::MME: return "mme";
        case Role::HSS: return "hss";
        case Role::QKS: return "qks";
    }
    return "?";
}

inline std::string_view scheme_name(Scheme s) {
    switch (s) {
        case Scheme::QKG: return "qkg";
        case Scheme::EPS: return "eps";
        case Scheme::SE: return "se";
    }
    return "?";
}

inline Scheme parse_scheme(std::string_view name) {
    if (name == "qkg") return Scheme::QKG;
    if (name == "eps") return Scheme::EPS;
    if (name == "se") return Scheme::SE;
    throw ConfigError("unknown scheme: " + std::string(name));
}

inline Attack parse_attack(std::string_view name) {
    if (name == "none") return Attack::None;
    if (name == "intercept_resend") return Attack::InterceptResend;
    if (name == "replay") return Attack::Replay;
    if (name == "tamper") return Attack::Tamper;
    throw ConfigError("unknown attack: " + std::string(name));
}

// Per-scheme serving message counts beyond the shared core flow are
// configuration: the group scheme defaults to one extra round trip, the
// permanent-key baseline to none.
struct CostModel {
    double link_latency_ms = 5.0;
    double kdf_cost_ms = 0.2;
    double grid_lookup_cost_ms = 0.1;  // local seed-material access (grid walk / USIM read)
    double av_fetch_cost_ms = 2.0;     // authentication-vector build+fetch at the HSS
    double se_group_crypto_ms = 1.0;   // extra group-crypto per leg in the group scheme
    int se_extra_messages = 2;         // group-key legs appended to the serving flow
    int eps_extra_messages = 0;        // extra serving legs for the permanent-key baseline

    void validate() const {
        if (link_latency_ms < 0 || kdf_cost_ms < 0 || grid_lookup_cost_ms < 0 ||
            av_fetch_cost_ms < 0 || se_group_crypto_ms < 0)
            throw ConfigError("cost model entries must be non-negative");
        if (se_extra_messages < 0 || se_extra_messages % 2 != 0)
            throw ConfigError("se_extra_messages must be even and non-negative");
        if (eps_extra_messages < 0 || eps_extra_messages % 2 != 0)
            throw ConfigError("eps_extra_messages must be even and non-negative");
    }

    int extra_legs(Scheme scheme) const {
        if (scheme == Scheme::SE) return se_extra_messages;
        if (scheme == Scheme::EPS) return eps_extra_messages;
        return 0;
    }
};

struct SimMessage {
    std::string kind;
    std::string sender;
    std::string receiver;
    std::vector<std::pair<std::string, Bytes>> payload;
    double timestamp_ms = 0.0;

    const Bytes& field(std::string_view name) const {
        for (const auto& [key, value] : payload)
            if (key == name) return value;
        throw ProtocolError("message " + kind + " lacks field " + std::string(name));
    }
};

struct AuthTranscript {
    std::vector<SimMessage> messages;
    double elapsed_ms = 0.0;
    Outcome outcome = Outcome::Success;
    std::size_t hss_load = 0;  // messages addressed to the HSS
    std::size_t mme_load = 0;  // messages addressed to the MME

    // Post-run key state for verification; not part of the wire transcript.
    std::optional<keys::KeyChain> ue_chain;
    std::optional<keys::KeyChain> network_chain;

    std::string to_string() const {
        std::ostringstream out;
        out << "outcome=" << static_cast<int>(outcome) << " elapsed_ms=" << elapsed_ms
            << " hss=" << hss_load << " mme=" << mme_load << "\n";
        for (const auto& m : messages) {
            out << m.timestamp_ms << " " << m.sender << "->" << m.receiver << " " << m.kind;
            for (const auto& [name, value] : m.payload) out << " " << name << "=" << to_hex(value);
            out << "\n";
        }
        return out.str();
    }
};

struct Scenario {
    Scheme scheme = Scheme::QKG;
    CostModel costs;
    int grid_n = 3;
    std::size_t photons_per_exchange = 10000;
    double channel_noise = 0.0;
    double attack_eve_fraction = 1.0;  // intercept-resend strength
    Attack attack = Attack::None;
    std::uint64_t seed = 1;
    std::string ue_id = "ue1";
    Bytes serving_network_id = crypto::str_bytes("mnc001.mcc001");
    bool provision_grid = true;        // pre-share the seed grid at setup
    std::uint32_t nas_uplink_count = 0;
    std::uint8_t algorithm_id = 1;

    void validate() const {
        costs.validate();
        if (grid_n < 3 || grid_n % 2 == 0) throw ConfigError("grid_n must be odd and >= 3");
        if (photons_per_exchange < 1) throw ConfigError("photons_per_exchange must be >= 1");
        if (serving_network_id.empty()) throw ConfigError("serving_network_id must be nonempty");
        if (attack_eve_fraction < 0.0 || attack_eve_fraction > 1.0)
            throw ConfigError("attack_eve_fraction must lie in [0,1]");
    }

    keys::DerivationContext derivation_context() const {
        return {serving_network_id, nas_uplink_count, algorithm_id};
    }
};

struct LoadPoint {
    std::size_t auth_index = 0;  // 1-based
    double elapsed_ms_cumulative = 0.0;
    std::size_t hss_msgs = 0;    // cumulative
    std::size_t mme_msgs = 0;    // cumulative
};

namespace detail {

constexpr std::uint64_t kGridStream = 0;
constexpr std::uint64_t kNonceStream = 1;
constexpr std::uint64_t kTransportStream = 2;
constexpr std::uint64_t kAttackStream = 3;
constexpr std::uint64_t kBootstrapStream = 4;

// Per-scheme derivation counts charged as kdf_cost each. Shared between the
// schemes so the only structural cost difference is the HSS source fetch.
constexpr int kHssKdfOps = 4;  // master/vector, CK|IK, K_ASME, expected response
constexpr int kUeKdfOps = 7;   // master, CK|IK, K_ASME, response, NAS pair, K_eNB, NH
constexpr int kMmeKdfOps = 4;  // NAS pair, K_eNB, NH

inline Bytes wrap_key(std::span<const std::uint8_t> value, const Key256& link_key,
                      std::span<const std::uint8_t> nonce, std::string_view field) {
    Bytes info = crypto::str_bytes("QKG/WRAP/");
    info.insert(info.end(), field.begin(), field.end());
    Bytes keystream = crypto::hkdf_sha256(link_key, nonce, info, value.size());
    Bytes out(value.begin(), value.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] ^= keystream[i];
    return out;
}

inline Bytes be64_bytes(std::uint64_t v) {
    Bytes out;
    put_be64(out, v);
    return out;
}

inline Bytes expected_response(const Key256& k, std::span<const std::uint8_t> nonce) {
    return crypto::hkdf_sha256(k, nonce, crypto::str_bytes("QKG/RES"), 16);
}

}  // namespace detail

// One long-lived simulation: entities keep key state across authentications,
// so feedback counters and freshness checks behave as they would in a serving
// network. All behavior is a pure function of (scenario, seed).
class Simulation {
public:
    explicit Simulation(const Scenario& scenario)
        : scenario_(scenario),
          nonce_rng_(derive_stream_seed(scenario.seed, detail::kNonceStream)),
          attack_rng_(derive_stream_seed(scenario.seed, detail::kAttackStream)) {
        scenario_.validate();

        Xoshiro256ss setup_rng(derive_stream_seed(scenario_.seed, detail::kTransportStream));
        setup_rng.fill_bytes(backhaul_key_.data(), backhaul_key_.size());
        setup_rng.fill_bytes(ran_key_.data(), ran_key_.size());
        setup_rng.fill_bytes(permanent_key_.data(), permanent_key_.size());

        Xoshiro256ss bootstrap_rng(derive_stream_seed(scenario_.seed, detail::kBootstrapStream));
        keys::PreK bootstrap;
        bootstrap_rng.fill_bytes(bootstrap.value.data(), bootstrap.value.size());
        ue_.pre_k = bootstrap;
        hss_.pre_k = bootstrap;

        if (scenario_.provision_grid && scenario_.attack != Attack::InterceptResend)
            provision_shared_grid();
    }

    // Runs one authentication of the scenario's scheme.
    AuthTranscript authenticate() { return run_flow(scenario_.scheme, Attack::None); }

    AuthTranscript run_attack(Attack attack) {
        switch (attack) {
            case Attack::None:
                return authenticate();
            case Attack::Tamper:
                return run_flow(scenario_.scheme, Attack::Tamper);
            case Attack::Replay: {
                AuthTranscript honest = authenticate();
                if (honest.outcome != Outcome::Success)
                    throw StateError("replay attack needs a prior successful run");
                return replay_attach(honest);
            }
            case Attack::InterceptResend:
                return intercept_resend();
        }
        throw ConfigError("unknown attack");
    }

    std::uint64_t ue_generation() const { return ue_.pre_k.generation; }

    const grid::QkGrid& shared_grid() const { return grid_; }

    // Key material by holder, for ownership audits.
    std::vector<std::pair<std::string, Bytes>> held_keys(Role role) const {
        std::vector<std::pair<std::string, Bytes>> out;
        auto add = [&out](std::string name, std::span<const std::uint8_t> v) {
            out.emplace_back(std::move(name), Bytes(v.begin(), v.end()));
        };
        switch (role) {
            case Role::UE:
                add("pre_k", ue_.pre_k.value);
                if (ue_.chain) {
                    add("k", ue_.chain->k);
                    add("ck", ue_.chain->ck);
                    add("ik", ue_.chain->ik);
                    add("k_asme", ue_.chain->k_asme);
                    add("k_nas_enc", ue_.chain->k_nas_enc);
                    add("k_nas_int", ue_.chain->k_nas_int);
                    add("k_enb", ue_.chain->k_enb);
                    add("nh", ue_.chain->nh);
                }
                break;
            case Role::HSS:
                add("pre_k", hss_.pre_k.value);
                if (hss_.has_keys) {
                    add("k", hss_.k);
                    add("ck", hss_.ck);
                    add("ik", hss_.ik);
                    add("k_asme", hss_.k_asme);
                }
                break;
            case Role::MME:
                if (mme_.has_keys) {
                    add("k_asme", mme_.k_asme);
                    add("k_nas_enc", mme_.k_nas_enc);
                    add("k_nas_int", mme_.k_nas_int);
                    add("k_enb", mme_.k_enb);
                    add("nh", mme_.nh);
                }
                break;
            case Role::ENB:
                if (enb_.has_keys) {
                    add("k_enb", enb_.k_enb);
                    add("nh", enb_.nh);
                }
                break;
            case Role::QKS:
                break;
        }
        return out;
    }

private:
    struct UeState {
        keys::PreK pre_k;
        std::optional<keys::KeyChain> chain;
        std::uint64_t auth_seq = 0;  // freshness counter for the permanent-key schemes
    };
    struct HssState {
        keys::PreK pre_k;
        bool has_keys = false;
        Key256 k{};
        Key128 ck{};
        Key128 ik{};
        Key256 k_asme{};
    };
    struct MmeState {
        bool has_keys = false;
        Key256 k_asme{};
        Key128 k_nas_enc{};
        Key128 k_nas_int{};
        Key256 k_enb{};
        Key256 nh{};
        std::uint64_t nh_counter = 0;
        std::map<std::string, std::uint64_t> last_seen_generation;
        // transient per-auth expectation
        Bytes pending_nonce;
        Bytes pending_xres;
    };
    struct EnbState {
        bool has_keys = false;
        Key256 k_enb{};
        Key256 nh{};
    };

    struct Event {
        double time;
        std::uint64_t seq;
        SimMessage msg;
        bool operator<(const Event& other) const {
            return time != other.time ? time < other.time : seq < other.seq;
        }
    };

    // Per-flow context threaded through the event loop.
    struct Flow {
        Scheme scheme;
        Attack attack = Attack::None;
        AuthTranscript transcript;
        std::deque<Event> queue;
        std::uint64_t next_seq = 0;
        double finish_time = 0.0;
        int extra_legs_remaining = 0;
    };

    void provision_shared_grid() {
        grid::GridLayout layout = grid::GridLayout::construct(
            scenario_.grid_n,
            derive_stream_seed(derive_stream_seed(scenario_.seed, detail::kGridStream),
                               grid::kLayoutStream));
        Xoshiro256ss fill_rng(derive_stream_seed(scenario_.seed, detail::kGridStream));
        Bytes raw(layout.required_bits() / 8);
        fill_rng.fill_bytes(raw.data(), raw.size());
        grid_ = grid::QkGrid::populate(std::move(layout), BitString::from_bytes(raw, raw.size() * 8));
    }

    AuthTranscript intercept_resend() {
        qkd::ChannelConfig channel;
        channel.num_photons = scenario_.photons_per_exchange;
        channel.noise_flip_prob = scenario_.channel_noise;
        channel.eavesdropper_fraction = scenario_.attack_eve_fraction;
        channel.rng_seed = derive_stream_seed(scenario_.seed, detail::kGridStream);
        AuthTranscript transcript;
        try {
            grid_ = grid::run_grid_generation(channel, scenario_.grid_n);
        } catch (const EstablishmentError&) {
            SimMessage notice;
            notice.kind = "qkd_detection_notice";
            notice.sender = "qks";
            notice.receiver = "hss";
            notice.payload.emplace_back("aborted", Bytes{0x01});
            notice.timestamp_ms = 0.0;
            transcript.messages.push_back(std::move(notice));
            transcript.outcome = Outcome::DetectionAbort;
            transcript.hss_load = 1;
            return transcript;
        }
        // Establishment survived the intercept fraction; authenticate normally.
        return run_flow(scenario_.scheme, Attack::None);
    }

    AuthTranscript replay_attach(const AuthTranscript& honest) {
        const SimMessage* original = nullptr;
        for (const auto& m : honest.messages)
            if (m.kind == "attach_request") original = &m;
        if (!original) throw StateError("no attach_request in the recorded transcript");

        Flow flow;
        flow.scheme = scenario_.scheme;
        SimMessage copy = *original;  // byte-for-byte replay, stale counter included
        copy.timestamp_ms = 0.0;
        send(flow, std::move(copy), 0.0);
        run_events(flow);
        return std::move(flow.transcript);
    }

    AuthTranscript run_flow(Scheme scheme, Attack attack) {
        Flow flow;
        flow.scheme = scheme;
        flow.attack = attack;

        SimMessage attach;
        attach.kind = "attach_request";
        attach.sender = "ue";
        attach.receiver = "mme";
        std::uint64_t generation =
            scheme == Scheme::QKG ? ue_.pre_k.generation : ue_.auth_seq;
        attach.payload.emplace_back("ue_id", crypto::str_bytes(scenario_.ue_id));
        attach.payload.emplace_back("generation", detail::be64_bytes(generation));
        if (scheme != Scheme::QKG) ++ue_.auth_seq;
        send(flow, std::move(attach), 0.0);
        run_events(flow);
        return std::move(flow.transcript);
    }

    void send(Flow& flow, SimMessage msg, double at_time) {
        msg.timestamp_ms = at_time;
        flow.queue.push_back({at_time + scenario_.costs.link_latency_ms, flow.next_seq++,
                              std::move(msg)});
    }

    void run_events(Flow& flow) {
        while (!flow.queue.empty()) {
            auto it = std::min_element(flow.queue.begin(), flow.queue.end());
            Event event = std::move(*it);
            flow.queue.erase(it);
            deliver(flow, event);
        }
        flow.transcript.elapsed_ms = flow.finish_time;
        for (const auto& m : flow.transcript.messages) {
            if (m.receiver == "hss") ++flow.transcript.hss_load;
            if (m.receiver == "mme") ++flow.transcript.mme_load;
        }
    }

    void deliver(Flow& flow, Event& event) {
        SimMessage& msg = event.msg;
        if (flow.attack == Attack::Tamper && msg.kind == "challenge") {
            // adversary flips one challenge bit in transit
            Bytes nonce = msg.field("nonce");
            std::uint64_t bit = attack_rng_.below(nonce.size() * 8);
            nonce[bit / 8] ^= static_cast<std::uint8_t>(1u << (7 - bit % 8));
            for (auto& [name, value] : msg.payload)
                if (name == "nonce") value = nonce;
        }
        flow.transcript.messages.push_back(msg);

        double arrival = event.time;
        double proc = 0.0;
        if (msg.receiver == "mme")
            proc = handle_mme(flow, msg, arrival);
        else if (msg.receiver == "hss")
            proc = handle_hss(flow, msg, arrival);
        else if (msg.receiver == "ue")
            proc = handle_ue(flow, msg, arrival);
        else if (msg.receiver == "enb")
            proc = handle_enb(flow, msg, arrival);
        flow.finish_time = std::max(flow.finish_time, arrival + proc);
    }

    double handle_mme(Flow& flow, const SimMessage& msg, double arrival) {
        const CostModel& costs = scenario_.costs;
        if (msg.kind == "attach_request") {
            std::string ue_id(msg.field("ue_id").begin(), msg.field("ue_id").end());
            std::size_t pos = 0;
            std::uint64_t generation = get_be64(msg.field("generation"), pos);
            auto it = mme_.last_seen_generation.find(ue_id);
            if (it != mme_.last_seen_generation.end() && generation <= it->second) {
                reject(flow, arrival, "stale freshness counter");
                return 0.0;
            }
            mme_.last_seen_generation[ue_id] = generation;
            SimMessage req;
            req.kind = "auth_data_request";
            req.sender = "mme";
            req.receiver = "hss";
            req.payload = msg.payload;
            send(flow, std::move(req), arrival);
            return 0.0;
        }
        if (msg.kind == "auth_data_response") {
            mme_.pending_nonce = msg.field("nonce");
            mme_.pending_xres = msg.field("xres");
            Bytes wrapped = msg.field("k_asme_wrapped");
            Bytes unwrapped =
                detail::wrap_key(wrapped, backhaul_key_, mme_.pending_nonce, "k_asme");
            std::copy(unwrapped.begin(), unwrapped.end(), mme_.k_asme.begin());
            SimMessage challenge;
            challenge.kind = "challenge";
            challenge.sender = "mme";
            challenge.receiver = "ue";
            challenge.payload.emplace_back("nonce", mme_.pending_nonce);
            send(flow, std::move(challenge), arrival);
            return 0.0;
        }
        if (msg.kind == "challenge_response") {
            if (msg.field("res") != mme_.pending_xres) {
                reject(flow, arrival, "response mismatch");
                return 0.0;
            }
            double proc = detail::kMmeKdfOps * costs.kdf_cost_ms;
            auto ctx = scenario_.derivation_context();
            std::tie(mme_.k_nas_enc, mme_.k_nas_int) = keys::derive_nas_keys(mme_.k_asme, ctx);
            mme_.k_enb = keys::derive_k_enb(mme_.k_asme, ctx);
            mme_.nh = keys::derive_nh(mme_.k_asme, mme_.k_enb);
            mme_.nh_counter = 1;
            mme_.has_keys = true;
            flow.extra_legs_remaining = costs.extra_legs(flow.scheme);
            if (flow.extra_legs_remaining >= 2) {
                proc += leg_crypto_cost(flow.scheme);
                send_group_leg(flow, arrival + proc);
                return proc;
            }
            finish_success(flow, arrival + proc);
            return proc;
        }
        if (msg.kind == "group_key_complete") {
            if (flow.extra_legs_remaining >= 2) {
                double proc = leg_crypto_cost(flow.scheme);
                send_group_leg(flow, arrival + proc);
                return proc;
            }
            finish_success(flow, arrival);
            return 0.0;
        }
        throw ProtocolError("mme cannot handle message kind " + msg.kind);
    }

    double handle_hss(Flow& flow, const SimMessage& msg, double arrival) {
        const CostModel& costs = scenario_.costs;
        if (msg.kind != "auth_data_request")
            throw ProtocolError("hss cannot handle message kind " + msg.kind);

        double source_cost = flow.scheme == Scheme::QKG ? costs.grid_lookup_cost_ms
                                                        : costs.av_fetch_cost_ms;
        double proc = source_cost + detail::kHssKdfOps * costs.kdf_cost_ms;

        Key256 master;
        if (flow.scheme == Scheme::QKG) {
            auto [k, next] = keys::derive_master_key(grid_, hss_.pre_k);
            master = k;
            hss_.pre_k = next;
        } else {
            master = permanent_key_;
        }
        Bytes nonce(16);
        nonce_rng_.fill_bytes(nonce.data(), nonce.size());
        Bytes xres = detail::expected_response(master, nonce);
        auto [ck, ik] = keys::derive_ck_ik(master);
        Key256 k_asme = keys::derive_k_asme(ck, ik, scenario_.derivation_context());
        hss_.k = master;
        hss_.ck = ck;
        hss_.ik = ik;
        hss_.k_asme = k_asme;
        hss_.has_keys = true;

        SimMessage resp;
        resp.kind = "auth_data_response";
        resp.sender = "hss";
        resp.receiver = "mme";
        resp.payload.emplace_back("nonce", nonce);
        resp.payload.emplace_back("xres", xres);
        resp.payload.emplace_back("k_asme_wrapped",
                                  detail::wrap_key(k_asme, backhaul_key_, nonce, "k_asme"));
        send(flow, std::move(resp), arrival + proc);
        return proc;
    }

    double handle_ue(Flow& flow, const SimMessage& msg, double arrival) {
        const CostModel& costs = scenario_.costs;
        if (msg.kind == "challenge") {
            double proc = costs.grid_lookup_cost_ms + detail::kUeKdfOps * costs.kdf_cost_ms;
            Key256 master;
            if (flow.scheme == Scheme::QKG) {
                auto [k, next] = keys::derive_master_key(grid_, ue_.pre_k);
                master = k;
                ue_.pre_k = next;
            } else {
                master = permanent_key_;
            }
            Bytes nonce = msg.field("nonce");
            Bytes res = detail::expected_response(master, nonce);
            ue_.chain = keys::derive_chain_from_k(master, scenario_.derivation_context());
            SimMessage reply;
            reply.kind = "challenge_response";
            reply.sender = "ue";
            reply.receiver = "mme";
            reply.payload.emplace_back("res", res);
            send(flow, std::move(reply), arrival + proc);
            return proc;
        }
        if (msg.kind == "group_key_command") {
            double proc = leg_crypto_cost(flow.scheme);
            SimMessage done;
            done.kind = "group_key_complete";
            done.sender = "ue";
            done.receiver = "mme";
            done.payload.emplace_back("ack", Bytes{0x01});
            send(flow, std::move(done), arrival + proc);
            return proc;
        }
        if (msg.kind == "auth_accept" || msg.kind == "auth_reject") return 0.0;
        throw ProtocolError("ue cannot handle message kind " + msg.kind);
    }

    double handle_enb(Flow& flow, const SimMessage& msg, double arrival) {
        (void)flow;
        (void)arrival;
        if (msg.kind != "key_provision")
            throw ProtocolError("enb cannot handle message kind " + msg.kind);
        Bytes nonce = msg.field("nonce");
        Bytes k_enb = detail::wrap_key(msg.field("k_enb_wrapped"), ran_key_, nonce, "k_enb");
        Bytes nh = detail::wrap_key(msg.field("nh_wrapped"), ran_key_, nonce, "nh");
        std::copy(k_enb.begin(), k_enb.end(), enb_.k_enb.begin());
        std::copy(nh.begin(), nh.end(), enb_.nh.begin());
        enb_.has_keys = true;
        return 0.0;
    }

    double leg_crypto_cost(Scheme scheme) const {
        return scheme == Scheme::SE ? scenario_.costs.se_group_crypto_ms : 0.0;
    }

    void send_group_leg(Flow& flow, double at_time) {
        flow.extra_legs_remaining -= 2;
        SimMessage cmd;
        cmd.kind = "group_key_command";
        cmd.sender = "mme";
        cmd.receiver = "ue";
        cmd.payload.emplace_back(
            "group_token", crypto::hkdf_sha256(mme_.k_enb, {}, crypto::str_bytes("QKG/GROUP"), 16));
        send(flow, std::move(cmd), at_time);
    }

    void reject(Flow& flow, double at_time, std::string_view reason) {
        flow.transcript.outcome = Outcome::AuthFailure;
        SimMessage msg;
        msg.kind = "auth_reject";
        msg.sender = "mme";
        msg.receiver = "ue";
        msg.payload.emplace_back("status", Bytes{0x00});
        msg.payload.emplace_back("reason", crypto::str_bytes(std::string(reason)));
        send(flow, std::move(msg), at_time);
    }

    void finish_success(Flow& flow, double at_time) {
        flow.transcript.outcome = Outcome::Success;

        SimMessage accept;
        accept.kind = "auth_accept";
        accept.sender = "mme";
        accept.receiver = "ue";
        accept.payload.emplace_back("status", Bytes{0x01});
        send(flow, accept, at_time);

        SimMessage provision;
        provision.kind = "key_provision";
        provision.sender = "mme";
        provision.receiver = "enb";
        provision.payload.emplace_back("nonce", mme_.pending_nonce);
        provision.payload.emplace_back(
            "k_enb_wrapped", detail::wrap_key(mme_.k_enb, ran_key_, mme_.pending_nonce, "k_enb"));
        provision.payload.emplace_back(
            "nh_wrapped", detail::wrap_key(mme_.nh, ran_key_, mme_.pending_nonce, "nh"));
        provision.payload.emplace_back("nh_counter", detail::be64_bytes(mme_.nh_counter));
        send(flow, std::move(provision), at_time);

        flow.transcript.ue_chain = ue_.chain;
        keys::KeyChain network;
        network.k = hss_.k;
        network.ck = hss_.ck;
        network.ik = hss_.ik;
        network.k_asme = hss_.k_asme;
        network.k_nas_enc = mme_.k_nas_enc;
        network.k_nas_int = mme_.k_nas_int;
        network.k_enb = mme_.k_enb;
        network.nh = mme_.nh;
        network.nh_chain_counter = mme_.nh_counter;
        flow.transcript.network_chain = network;
    }

    Scenario scenario_;
    grid::QkGrid grid_;
    UeState ue_;
    HssState hss_;
    MmeState mme_;
    EnbState enb_;
    Key256 backhaul_key_{};   // MME<->HSS transport protection
    Key256 ran_key_{};        // MME<->eNB transport protection
    Key256 permanent_key_{};  // baseline schemes' pre-shared master key
    Xoshiro256ss nonce_rng_;
    Xoshiro256ss attack_rng_;
};

inline AuthTranscript run_qkg_aka(const Scenario& scenario) {
    Scenario s = scenario;
    s.scheme = Scheme::QKG;
    Simulation sim(s);
    return sim.authenticate();
}

inline AuthTranscript run_eps_aka(const Scenario& scenario) {
    Scenario s = scenario;
    s.scheme = Scheme::EPS;
    Simulation sim(s);
    return sim.authenticate();
}

inline AuthTranscript run_se_aka(const Scenario& scenario) {
    Scenario s = scenario;
    s.scheme = Scheme::SE;
    Simulation sim(s);
    return sim.authenticate();
}

inline AuthTranscript run_attack(const Scenario& scenario, Attack attack) {
    Simulation sim(scenario);
    return sim.run_attack(attack);
}

// Sequential authentications with persistent entity state; the feedback
// counter advances once per run in the grid scheme.
inline std::vector<LoadPoint> run_batch(Scheme scheme, std::size_t n_auth,
                                        const Scenario& scenario) {
    if (n_auth < 1) throw ConfigError("n_auth must be >= 1");
    Scenario s = scenario;
    s.scheme = scheme;
    Simulation sim(s);
    std::vector<LoadPoint> curve;
    curve.reserve(n_auth);
    double elapsed = 0.0;
    std::size_t hss = 0, mme = 0;
    for (std::size_t i = 1; i <= n_auth; ++i) {
        AuthTranscript t = sim.authenticate();
        elapsed += t.elapsed_ms;
        hss += t.hss_load;
        mme += t.mme_load;
        curve.push_back({i, elapsed, hss, mme});
    }
    return curve;
}

}  // namespace qkg::aka
