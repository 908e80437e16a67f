#pragma once
// Channel coding and channel models.
//
// ConvCode: feedforward binary convolutional encoder with zero-tail
// termination plus a Viterbi decoder (Hamming metric on hard bits, squared
// Euclidean on soft observations). Default code: rate 1/2, K=3, generators
// (7,5) octal.
//
// Channels: BSC(p) flips coded bits; AWGN/Rayleigh map bits by BPSK (0 -> +1,
// 1 -> -1) and emit real observations. snr_db is Eb/N0 with the code rate
// folded into the noise variance: sigma^2 = 1 / (2 R 10^(snr/10)). Rayleigh
// uses per-symbol fades of unit mean square with perfect CSI equalization.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <variant>
#include <vector>

#include "bits.hpp"
#include "rng.hpp"

namespace kgsc {

struct ConvCode {
    unsigned constraint_length = 3;
    std::vector<unsigned> generators = {0b111, 0b101};

    std::size_t outputs_per_step() const { return generators.size(); }
    double rate() const { return 1.0 / static_cast<double>(generators.size()); }
    std::size_t coded_length(std::size_t info_len) const {
        return generators.size() * (info_len + constraint_length - 1);
    }

    BitVector encode(const BitVector& info) const {
        check_params();
        BitVector out;
        out.reserve(coded_length(info.size()));
        unsigned state = 0;
        auto push_step = [&](unsigned input_bit) {
            const unsigned reg = (input_bit << (constraint_length - 1)) | state;
            for (unsigned g : generators) out.push_back(static_cast<std::uint8_t>(std::popcount(reg & g) & 1u));
            state = reg >> 1;
        };
        for (auto b : info) push_step(b & 1u);
        for (unsigned i = 0; i < constraint_length - 1; ++i) push_step(0);  // zero tail
        return out;
    }

    BitVector decode(const BitVector& hard) const {
        return viterbi(hard.size(), [&](std::size_t step, unsigned reg) {
            double m = 0;
            for (std::size_t j = 0; j < generators.size(); ++j) {
                const unsigned expected = std::popcount(reg & generators[j]) & 1u;
                m += (hard[step * generators.size() + j] & 1u) != expected;
            }
            return m;
        });
    }

    BitVector decode(const SoftVector& soft) const {
        return viterbi(soft.size(), [&](std::size_t step, unsigned reg) {
            double m = 0;
            for (std::size_t j = 0; j < generators.size(); ++j) {
                const unsigned expected = std::popcount(reg & generators[j]) & 1u;
                const double symbol = expected ? -1.0 : 1.0;
                const double diff = soft[step * generators.size() + j] - symbol;
                m += diff * diff;
            }
            return m;
        });
    }

private:
    void check_params() const {
        if (constraint_length < 2 || constraint_length > 16)
            throw std::invalid_argument("conv code: unsupported constraint length");
        if (generators.empty()) throw std::invalid_argument("conv code: no generators");
    }

    // Terminated trellis: path metrics start and end in state 0. Equal-metric
    // survivors keep the lower-indexed predecessor state.
    template <class BranchMetric>
    BitVector viterbi(std::size_t n_observations, BranchMetric branch_metric) const {
        check_params();
        const std::size_t n_out = generators.size();
        if (n_observations % n_out != 0) throw std::invalid_argument("viterbi: observation length not a multiple of rate");
        const std::size_t n_steps = n_observations / n_out;
        if (n_steps < constraint_length - 1) throw std::invalid_argument("viterbi: observation shorter than tail");

        const unsigned n_states = 1u << (constraint_length - 1);
        const double inf = std::numeric_limits<double>::infinity();
        std::vector<double> metric(n_states, inf), next_metric(n_states);
        metric[0] = 0.0;
        std::vector<std::vector<std::uint8_t>> prev_state(n_steps, std::vector<std::uint8_t>(n_states, 0));
        std::vector<std::vector<std::uint8_t>> input_bit(n_steps, std::vector<std::uint8_t>(n_states, 0));

        for (std::size_t t = 0; t < n_steps; ++t) {
            std::fill(next_metric.begin(), next_metric.end(), inf);
            for (unsigned s = 0; s < n_states; ++s) {
                if (metric[s] == inf) continue;
                for (unsigned u = 0; u <= 1; ++u) {
                    const unsigned reg = (u << (constraint_length - 1)) | s;
                    const unsigned next = reg >> 1;
                    const double cand = metric[s] + branch_metric(t, reg);
                    if (cand < next_metric[next]) {
                        next_metric[next] = cand;
                        prev_state[t][next] = static_cast<std::uint8_t>(s);
                        input_bit[t][next] = static_cast<std::uint8_t>(u);
                    }
                }
            }
            metric.swap(next_metric);
        }

        BitVector path(n_steps);
        unsigned state = 0;
        for (std::size_t t = n_steps; t-- > 0;) {
            path[t] = input_bit[t][state];
            state = prev_state[t][state];
        }
        path.resize(n_steps - (constraint_length - 1));  // drop tail bits
        return path;
    }
};

struct ChannelModel {
    enum class Kind { bsc, awgn, rayleigh };

    Kind kind = Kind::bsc;
    double parameter = 0.0;  // flip probability for BSC, Eb/N0 in dB otherwise

    static ChannelModel bsc(double p) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bsc: flip probability outside [0,1]");
        return {Kind::bsc, p};
    }

    static ChannelModel awgn(double snr_db) {
        if (!std::isfinite(snr_db)) throw std::invalid_argument("awgn: snr must be finite");
        return {Kind::awgn, snr_db};
    }

    static ChannelModel rayleigh(double snr_db) {
        if (!std::isfinite(snr_db)) throw std::invalid_argument("rayleigh: snr must be finite");
        return {Kind::rayleigh, snr_db};
    }
};

// Hard bits for the BSC, equalized real observations otherwise.
using ChannelOutput = std::variant<BitVector, SoftVector>;

inline double noise_sigma(double snr_db, double code_rate) {
    return std::sqrt(1.0 / (2.0 * code_rate * std::pow(10.0, snr_db / 10.0)));
}

inline ChannelOutput transmit(const BitVector& coded, const ChannelModel& ch, Rng& rng, double code_rate = 0.5) {
    switch (ch.kind) {
        case ChannelModel::Kind::bsc: {
            BitVector out(coded.size());
            for (std::size_t i = 0; i < coded.size(); ++i)
                out[i] = static_cast<std::uint8_t>((coded[i] ^ (bernoulli(rng, ch.parameter) ? 1u : 0u)) & 1u);
            return out;
        }
        case ChannelModel::Kind::awgn: {
            const double sigma = noise_sigma(ch.parameter, code_rate);
            SoftVector out(coded.size());
            for (std::size_t i = 0; i < coded.size(); ++i)
                out[i] = (coded[i] ? -1.0 : 1.0) + sigma * gaussian(rng);
            return out;
        }
        case ChannelModel::Kind::rayleigh: {
            const double sigma = noise_sigma(ch.parameter, code_rate);
            SoftVector out(coded.size());
            for (std::size_t i = 0; i < coded.size(); ++i) {
                const double g1 = gaussian(rng), g2 = gaussian(rng);
                const double fade = std::sqrt((g1 * g1 + g2 * g2) / 2.0);  // E[fade^2] = 1
                const double noise = sigma * gaussian(rng);
                out[i] = (coded[i] ? -1.0 : 1.0) + noise / fade;  // known-fade equalization
            }
            return out;
        }
    }
    throw std::logic_error("transmit: unknown channel kind");
}

inline BitVector viterbi_decode(const ConvCode& code, const ChannelOutput& observed) {
    return std::visit([&](const auto& obs) { return code.decode(obs); }, observed);
}

// Hard slicing of soft observations (sign detector); used by diagnostics.
inline BitVector hard_slice(const SoftVector& soft) {
    BitVector out(soft.size());
    for (std::size_t i = 0; i < soft.size(); ++i) out[i] = soft[i] < 0.0 ? 1 : 0;
    return out;
}

}  // namespace kgsc
