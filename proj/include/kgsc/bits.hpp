#pragma once
// Bit vectors: one 0/1 byte per position, explicit length.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rng.hpp"

namespace kgsc {

using BitVector = std::vector<std::uint8_t>;
using SoftVector = std::vector<double>;

// Appends `width` bits of `value`, most significant first.
inline void append_uint(BitVector& bits, std::uint64_t value, unsigned width) {
    for (unsigned i = width; i-- > 0;) bits.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
}

// Reads `width` bits starting at `offset`, most significant first.
inline std::uint64_t read_uint(const BitVector& bits, std::size_t offset, unsigned width) {
    if (offset + width > bits.size()) throw std::out_of_range("read_uint: window exceeds bit vector");
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) v = (v << 1) | (bits[offset + i] & 1u);
    return v;
}

inline std::size_t hamming_distance(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] ^ b[i]) & 1u;
    return d;
}

inline BitVector xor_bits(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("xor_bits: length mismatch");
    BitVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] ^ b[i]) & 1u;
    return out;
}

inline BitVector random_bits(Rng& rng, std::size_t n) {
    BitVector out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng() & 1u);
    return out;
}

inline std::string bits_to_string(const BitVector& bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

// Parses "0"/"1" characters; spaces are allowed as visual grouping.
inline BitVector bits_from_string(std::string_view s) {
    BitVector out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == ' ') continue;
        if (c != '0' && c != '1') throw std::invalid_argument("bits_from_string: expected 0/1/space");
        out.push_back(static_cast<std::uint8_t>(c == '1'));
    }
    return out;
}

}  // namespace kgsc
