#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qkg/bytes.hpp"
#include "qkg/errors.hpp"
#include "qkg/rng.hpp"

namespace qkg::qkd {

// Polarization-encoded key exchange between a key server and a receiving seed
// store: random bit/basis generation, measurement, sifting over the public
// channel, error-rate estimation and eavesdropper detection.
//
// Party RNG streams derived from ChannelConfig::rng_seed:
//   0 sender, 1 receiver, 2 eavesdropper, 3 QBER sampler.

enum class Basis : std::uint8_t { R, S };  // R: rectilinear 0/90, S: diagonal 45/135

// h = 0 deg, v = 90 deg, lp = 45 deg, rp = 135 deg.
enum class Polarization : std::uint8_t { H, V, LP, RP };

inline char basis_char(Basis b) { return b == Basis::R ? 'R' : 'S'; }

inline int angle_for(int bit, Basis basis) {
    if (basis == Basis::R) return bit ? 90 : 0;
    return bit ? 135 : 45;
}

inline Polarization polarization_for(int bit, Basis basis) {
    if (basis == Basis::R) return bit ? Polarization::V : Polarization::H;
    return bit ? Polarization::RP : Polarization::LP;
}

struct PolarizedPhoton {
    std::uint8_t bit = 0;
    Basis basis = Basis::R;
    int angle_deg = 0;

    static PolarizedPhoton encode(int bit, Basis basis) {
        return {static_cast<std::uint8_t>(bit & 1), basis, angle_for(bit, basis)};
    }
};

struct ChannelConfig {
    std::size_t num_photons = 0;
    double noise_flip_prob = 0.0;       // independent bit flip applied at measurement
    double eavesdropper_fraction = 0.0; // fraction of photons intercepted and resent
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (num_photons < 1) throw ConfigError("num_photons must be >= 1");
        if (noise_flip_prob < 0.0 || noise_flip_prob > 1.0)
            throw ConfigError("noise_flip_prob must lie in [0,1]");
        if (eavesdropper_fraction < 0.0 || eavesdropper_fraction > 1.0)
            throw ConfigError("eavesdropper_fraction must lie in [0,1]");
    }
};

// One side's per-photon bookkeeping, kept private to that party until the
// public discussion phase.
struct PartyRecord {
    std::vector<std::uint8_t> bits;
    std::vector<Basis> bases;

    std::size_t size() const { return bits.size(); }
};

struct SiftedKey {
    BitString bits_sender;           // sender bits at retained positions
    BitString bits_receiver;         // receiver bits at retained positions
    std::vector<std::size_t> retained_indices;
    double qber = 0.0;               // disagreement rate over the sacrificed sample
    std::vector<std::size_t> sample_indices;  // photon indices sacrificed for estimation

    // Key material with the publicly compared sample removed. The receiver
    // side feeds the seed store; with a clean channel both sides agree.
    BitString final_receiver_bits() const { return final_bits(bits_receiver); }
    BitString final_sender_bits() const { return final_bits(bits_sender); }

    // Lowercase hex, bits MSB-first within bytes, trailing partial byte
    // zero-padded; the true bit length is returned alongside.
    std::pair<std::string, std::size_t> final_key_hex() const {
        BitString key = final_receiver_bits();
        return {key.to_hex(), key.size()};
    }

private:
    BitString final_bits(const BitString& retained) const {
        BitString out;
        std::size_t s = 0;  // cursor into sample_indices (both lists sorted)
        for (std::size_t i = 0; i < retained_indices.size(); ++i) {
            if (s < sample_indices.size() && sample_indices[s] == retained_indices[i]) {
                ++s;
                continue;
            }
            out.push_back(retained[i]);
        }
        return out;
    }
};

inline std::uint64_t stream_seed(const ChannelConfig& config, std::uint64_t stream_id) {
    return derive_stream_seed(config.rng_seed, stream_id);
}

constexpr std::uint64_t kSenderStream = 0;
constexpr std::uint64_t kReceiverStream = 1;
constexpr std::uint64_t kEavesdropperStream = 2;
constexpr std::uint64_t kSamplerStream = 3;

// Sender phase: independent uniform bit and basis per photon. A pure function
// of (config, rng_seed); the returned photons double as the sender's record.
inline std::vector<PolarizedPhoton> generate_transmission(const ChannelConfig& config) {
    config.validate();
    Xoshiro256ss rng(stream_seed(config, kSenderStream));
    std::vector<PolarizedPhoton> photons;
    photons.reserve(config.num_photons);
    for (std::size_t i = 0; i < config.num_photons; ++i) {
        int bit = rng.next_bit();
        Basis basis = rng.next_bit() ? Basis::S : Basis::R;
        photons.push_back(PolarizedPhoton::encode(bit, basis));
    }
    return photons;
}

// Matched basis reads the encoded bit exactly; a mismatched basis collapses
// to a uniform random bit.
inline std::uint8_t measure(const PolarizedPhoton& photon, Basis receiver_basis,
                            Xoshiro256ss& rng) {
    if (receiver_basis == photon.basis) return photon.bit;
    return static_cast<std::uint8_t>(rng.next_bit());
}

// Intercept-resend adversary: each photon is independently captured with the
// given probability, measured in a random basis, and re-emitted re-encoded in
// the adversary's basis with the adversary's measured bit.
inline std::vector<PolarizedPhoton> apply_eavesdropper(std::vector<PolarizedPhoton> photons,
                                                       double fraction, Xoshiro256ss& rng) {
    if (fraction < 0.0 || fraction > 1.0)
        throw ConfigError("eavesdropper fraction must lie in [0,1]");
    if (fraction == 0.0) return photons;
    for (auto& photon : photons) {
        if (!rng.bernoulli(fraction)) continue;
        Basis eve_basis = rng.next_bit() ? Basis::S : Basis::R;
        std::uint8_t eve_bit = measure(photon, eve_basis, rng);
        photon = PolarizedPhoton::encode(eve_bit, eve_basis);
    }
    return photons;
}

// Public discussion: keep positions where bases agree, then sacrifice a
// seeded random fraction of the kept bits for error estimation. Sampled bits
// are publicly compared and excluded from the final key.
inline SiftedKey sift(const PartyRecord& sender, const PartyRecord& receiver,
                      double sample_fraction, Xoshiro256ss& sampler_rng) {
    if (sender.size() != receiver.size())
        throw ProtocolError("sender and receiver records differ in length");
    if (sample_fraction < 0.0 || sample_fraction > 1.0)
        throw ConfigError("sample_fraction must lie in [0,1]");

    SiftedKey key;
    for (std::size_t i = 0; i < sender.size(); ++i) {
        if (sender.bases[i] != receiver.bases[i]) continue;
        key.retained_indices.push_back(i);
        key.bits_sender.push_back(sender.bits[i]);
        key.bits_receiver.push_back(receiver.bits[i]);
    }

    std::size_t retained = key.retained_indices.size();
    std::size_t sample_count =
        static_cast<std::size_t>(sample_fraction * static_cast<double>(retained));
    if (sample_count > 0) {
        // Partial Fisher-Yates over positions within the retained list.
        std::vector<std::size_t> positions(retained);
        for (std::size_t i = 0; i < retained; ++i) positions[i] = i;
        for (std::size_t i = 0; i < sample_count; ++i) {
            std::size_t j = i + sampler_rng.below(retained - i);
            std::swap(positions[i], positions[j]);
        }
        positions.resize(sample_count);
        std::sort(positions.begin(), positions.end());

        std::size_t disagreements = 0;
        for (std::size_t pos : positions) {
            key.sample_indices.push_back(key.retained_indices[pos]);
            if (key.bits_sender[pos] != key.bits_receiver[pos]) ++disagreements;
        }
        key.qber = static_cast<double>(disagreements) / static_cast<double>(sample_count);
    }
    return key;
}

enum class Decision : std::uint8_t { Accept, Abort };

// Paper rule: an intercept-resend adversary shows up as a 25% error rate, so
// estimates at or above the threshold abort the exchange. The default
// threshold of 0.20 absorbs sampling noise; pass 0.25 for the literal rule.
constexpr double kDefaultDetectionThreshold = 0.20;

inline Decision detect_eavesdropper(const SiftedKey& key, double threshold) {
    if (key.sample_indices.empty())
        throw EstimationError("QBER sample is empty; enable sampling before detection");
    return key.qber >= threshold ? Decision::Abort : Decision::Accept;
}

struct ExchangeOptions {
    double sample_fraction = 0.25;  // sifted bits sacrificed for the QBER estimate
    double detection_threshold = kDefaultDetectionThreshold;
    bool record_transcript = false;
};

struct TranscriptRow {
    std::size_t index;
    std::uint8_t sender_bit;
    Basis sender_basis;
    Basis receiver_basis;
    std::uint8_t receiver_bit;
    bool retained;
    bool sampled;
};

struct ExchangeResult {
    SiftedKey key;
    Decision decision = Decision::Accept;
    std::vector<TranscriptRow> transcript;  // populated when requested
};

// Full protocol for one exchange: transmission, optional interception,
// measurement with channel noise, sifting, sampling, detection. Deterministic
// in (config, options).
inline ExchangeResult run_exchange(const ChannelConfig& config, const ExchangeOptions& options = {}) {
    config.validate();

    std::vector<PolarizedPhoton> sent = generate_transmission(config);
    PartyRecord sender;
    sender.bits.reserve(sent.size());
    sender.bases.reserve(sent.size());
    for (const auto& photon : sent) {
        sender.bits.push_back(photon.bit);
        sender.bases.push_back(photon.basis);
    }

    Xoshiro256ss eve_rng(stream_seed(config, kEavesdropperStream));
    std::vector<PolarizedPhoton> in_flight =
        apply_eavesdropper(std::move(sent), config.eavesdropper_fraction, eve_rng);

    Xoshiro256ss receiver_rng(stream_seed(config, kReceiverStream));
    PartyRecord receiver;
    receiver.bits.reserve(in_flight.size());
    receiver.bases.reserve(in_flight.size());
    for (const auto& photon : in_flight) {
        Basis basis = receiver_rng.next_bit() ? Basis::S : Basis::R;
        std::uint8_t bit = measure(photon, basis, receiver_rng);
        if (config.noise_flip_prob > 0.0 && receiver_rng.bernoulli(config.noise_flip_prob))
            bit ^= 1;
        receiver.bases.push_back(basis);
        receiver.bits.push_back(bit);
    }

    Xoshiro256ss sampler_rng(stream_seed(config, kSamplerStream));
    ExchangeResult result;
    result.key = sift(sender, receiver, options.sample_fraction, sampler_rng);
    result.decision = result.key.sample_indices.empty()
                          ? Decision::Accept
                          : detect_eavesdropper(result.key, options.detection_threshold);

    if (options.record_transcript) {
        result.transcript.reserve(config.num_photons);
        std::size_t r = 0, s = 0;
        for (std::size_t i = 0; i < config.num_photons; ++i) {
            bool retained = r < result.key.retained_indices.size() &&
                            result.key.retained_indices[r] == i;
            bool sampled = s < result.key.sample_indices.size() &&
                           result.key.sample_indices[s] == i;
            if (retained) ++r;
            if (sampled) ++s;
            result.transcript.push_back({i, sender.bits[i], sender.bases[i], receiver.bases[i],
                                         receiver.bits[i], retained, sampled});
        }
    }
    return result;
}

}  // namespace qkg::qkd
