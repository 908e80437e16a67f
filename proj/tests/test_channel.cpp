#include <catch2/catch_amalgamated.hpp>

#include <limits>

#include "kgsc/channel.hpp"

using namespace kgsc;

namespace {

std::size_t count_errors(const BitVector& a, const BitVector& b) {
    return hamming_distance(a, b);
}

}  // namespace

TEST_CASE("conv encoder matches the hand-traced register") {
    const ConvCode code;
    CHECK(bits_to_string(code.encode(bits_from_string("1"))) == "111011");  // 11 10 11
    CHECK(bits_to_string(code.encode(BitVector{})) == "0000");              // zero-state flush
}

TEST_CASE("conv encoder satisfies the length contract") {
    const ConvCode code;
    Rng rng(5);
    for (std::size_t len : {std::size_t(0), std::size_t(1), std::size_t(7), std::size_t(100), std::size_t(10000)}) {
        const auto out = code.encode(random_bits(rng, len));
        CHECK(out.size() == 2 * (len + 2));
    }
}

TEST_CASE("conv encoder is linear over GF(2)") {
    const ConvCode code;
    Rng rng(6);
    for (int i = 0; i < 30; ++i) {
        const auto x = random_bits(rng, 64);
        const auto y = random_bits(rng, 64);
        CHECK(code.encode(xor_bits(x, y)) == xor_bits(code.encode(x), code.encode(y)));
    }
}

TEST_CASE("viterbi inverts a clean encoding") {
    const ConvCode code;
    Rng rng(7);
    for (std::size_t len : {std::size_t(0), std::size_t(1), std::size_t(17), std::size_t(257)}) {
        const auto msg = random_bits(rng, len);
        CHECK(code.decode(code.encode(msg)) == msg);
    }
}

TEST_CASE("viterbi corrects a single flipped bit") {
    const ConvCode code;
    Rng rng(8);
    for (int trial = 0; trial < 25; ++trial) {
        const auto msg = random_bits(rng, 100);
        auto coded = code.encode(msg);
        coded[uniform_below(rng, coded.size())] ^= 1;
        CHECK(code.decode(coded) == msg);
    }
}

TEST_CASE("viterbi is maximum likelihood against the exhaustive-path oracle") {
    const ConvCode code;
    const std::size_t k = 6;
    Rng rng(9);
    for (int trial = 0; trial < 40; ++trial) {
        auto observed = code.encode(random_bits(rng, k));
        for (int f = 0; f < 3; ++f) observed[uniform_below(rng, observed.size())] ^= 1;

        const auto decoded = code.decode(observed);
        const auto decoded_metric = count_errors(code.encode(decoded), observed);

        // Exhaustive search over all 2^k messages.
        std::size_t best = std::numeric_limits<std::size_t>::max();
        for (unsigned m = 0; m < (1u << k); ++m) {
            BitVector msg;
            append_uint(msg, m, k);
            best = std::min(best, count_errors(code.encode(msg), observed));
        }
        CHECK(decoded_metric == best);
    }
}

TEST_CASE("viterbi decodes any well-formed garbage") {
    const ConvCode code;
    Rng rng(10);
    for (int trial = 0; trial < 20; ++trial) {
        const auto garbage = random_bits(rng, 2 * (5 + 2));
        CHECK(code.decode(garbage).size() == 5);
    }
    CHECK_THROWS(code.decode(bits_from_string("101")));   // odd length
    CHECK_THROWS(code.decode(bits_from_string("10")));    // shorter than the tail
}

TEST_CASE("bsc at the extremes is identity / complement") {
    Rng rng(11);
    const auto bits = random_bits(rng, 300);
    const auto same = std::get<BitVector>(transmit(bits, ChannelModel::bsc(0.0), rng));
    CHECK(same == bits);
    const auto flipped = std::get<BitVector>(transmit(bits, ChannelModel::bsc(1.0), rng));
    CHECK(count_errors(bits, flipped) == bits.size());
    CHECK_THROWS(ChannelModel::bsc(1.5));
}

TEST_CASE("bsc empirical flip rate stays within 3 sigma") {
    const double p = 0.1;
    const std::size_t n = 100000;
    Rng rng(12);
    const auto bits = random_bits(rng, n);
    const auto out = std::get<BitVector>(transmit(bits, ChannelModel::bsc(p), rng));
    const double observed = static_cast<double>(count_errors(bits, out)) / static_cast<double>(n);
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
    CHECK(std::abs(observed - p) < 3 * sigma);
}

TEST_CASE("awgn at high snr slices back to the input") {
    Rng rng(13);
    const auto bits = random_bits(rng, 10000);
    const auto soft = std::get<SoftVector>(transmit(bits, ChannelModel::awgn(60.0), rng));
    CHECK(hard_slice(soft) == bits);
}

TEST_CASE("post-decoding ber beats the raw channel at bsc p=0.02") {
    const ConvCode code;
    const double p = 0.02;
    Rng rng(14);
    const auto msg = random_bits(rng, 20000);
    const auto coded = code.encode(msg);
    const auto received = std::get<BitVector>(transmit(coded, ChannelModel::bsc(p), rng));
    const auto decoded = code.decode(received);
    const double ber = static_cast<double>(count_errors(msg, decoded)) / static_cast<double>(msg.size());
    CHECK(ber < p);
}

TEST_CASE("rayleigh fading never beats awgn at equal snr") {
    const ConvCode code;
    const double snr_db = 3.0;
    std::size_t awgn_errors = 0, rayleigh_errors = 0, total = 0;
    for (int frame = 0; frame < 150; ++frame) {
        Rng msg_rng = derive_rng(15, 0, frame);
        const auto msg = random_bits(msg_rng, 120);
        const auto coded = code.encode(msg);

        Rng awgn_rng = derive_rng(16, 1, frame);
        const auto a = code.decode(std::get<SoftVector>(transmit(coded, ChannelModel::awgn(snr_db), awgn_rng)));
        awgn_errors += count_errors(msg, a);

        Rng ray_rng = derive_rng(16, 2, frame);
        const auto r = code.decode(std::get<SoftVector>(transmit(coded, ChannelModel::rayleigh(snr_db), ray_rng)));
        rayleigh_errors += count_errors(msg, r);
        total += msg.size();
    }
    INFO("awgn " << awgn_errors << " rayleigh " << rayleigh_errors << " of " << total);
    CHECK(rayleigh_errors >= awgn_errors);
}
