#pragma once
// Baseline character-level source coders and compression accounting.
//
// fixed7: 7 bits per character, code points < 128 only.
// Huffman: canonical codes over byte frequencies with a deterministic
// tie-break, so identical corpora give identical tables on every platform.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "align.hpp"
#include "bits.hpp"
#include "kg.hpp"

namespace kgsc {

inline BitVector fixed7_encode(std::string_view text) {
    BitVector bits;
    bits.reserve(text.size() * 7);
    for (unsigned char c : text) {
        if (c >= 128) throw std::invalid_argument("fixed7_encode: non-ASCII character");
        append_uint(bits, c, 7);
    }
    return bits;
}

inline std::string fixed7_decode(const BitVector& bits) {
    if (bits.size() % 7 != 0) throw std::invalid_argument("fixed7_decode: bit length not divisible by 7");
    std::string text;
    text.reserve(bits.size() / 7);
    for (std::size_t i = 0; i < bits.size(); i += 7) text.push_back(static_cast<char>(read_uint(bits, i, 7)));
    return text;
}

class HuffmanTable {
public:
    // Canonical Huffman over byte frequencies of `corpus`. Merge ties prefer
    // the lower frequency, then the earlier-created node (leaves ordered by
    // symbol value), so the table is reproducible. A single-symbol alphabet
    // gets a one-bit code.
    static HuffmanTable build(std::string_view corpus) {
        if (corpus.empty()) throw std::invalid_argument("huffman build: empty corpus");
        std::array<std::size_t, 256> freq{};
        for (unsigned char c : corpus) ++freq[c];

        struct Node {
            std::size_t freq;
            std::size_t seq;
            int symbol;  // -1 for internal
            int left = -1, right = -1;
        };
        std::vector<Node> nodes;
        for (int s = 0; s < 256; ++s)
            if (freq[s] > 0) nodes.push_back({freq[s], nodes.size(), s});

        std::vector<unsigned> lengths(256, 0);
        if (nodes.size() == 1) {
            lengths[static_cast<unsigned>(nodes[0].symbol)] = 1;
        } else {
            auto cmp = [&](int a, int b) {
                if (nodes[a].freq != nodes[b].freq) return nodes[a].freq > nodes[b].freq;
                return nodes[a].seq > nodes[b].seq;
            };
            std::priority_queue<int, std::vector<int>, decltype(cmp)> heap(cmp);
            for (int i = 0; i < static_cast<int>(nodes.size()); ++i) heap.push(i);
            while (heap.size() > 1) {
                const int a = heap.top();
                heap.pop();
                const int b = heap.top();
                heap.pop();
                nodes.push_back({nodes[a].freq + nodes[b].freq, nodes.size(), -1, a, b});
                heap.push(static_cast<int>(nodes.size()) - 1);
            }
            // Depth-first code lengths.
            std::vector<std::pair<int, unsigned>> stack{{heap.top(), 0}};
            while (!stack.empty()) {
                auto [idx, depth] = stack.back();
                stack.pop_back();
                if (nodes[idx].symbol >= 0) {
                    lengths[static_cast<unsigned>(nodes[idx].symbol)] = depth;
                } else {
                    stack.push_back({nodes[idx].left, depth + 1});
                    stack.push_back({nodes[idx].right, depth + 1});
                }
            }
        }

        // Canonical assignment: (length, symbol) order, incrementing codes.
        std::vector<std::pair<unsigned, unsigned>> order;  // (length, symbol)
        for (unsigned s = 0; s < 256; ++s)
            if (lengths[s] > 0) order.push_back({lengths[s], s});
        std::sort(order.begin(), order.end());

        HuffmanTable table;
        std::uint64_t code = 0;
        unsigned prev_len = 0;
        for (auto [len, sym] : order) {
            code <<= (len - prev_len);
            prev_len = len;
            BitVector bits;
            append_uint(bits, code, len);
            table.codes_[static_cast<unsigned char>(sym)] = bits;
            ++code;
        }
        table.build_trie();
        return table;
    }

    BitVector encode(std::string_view text) const {
        BitVector out;
        for (unsigned char c : text) {
            const auto& code = codes_[c];
            if (code.empty()) throw std::invalid_argument(std::string("huffman encode: symbol not in table: ") +
                                                          std::to_string(int(c)));
            out.insert(out.end(), code.begin(), code.end());
        }
        return out;
    }

    std::string decode(const BitVector& bits) const {
        std::string text;
        int node = 0;
        for (std::size_t i = 0; i < bits.size(); ++i) {
            const int next = bits[i] ? trie_[node].one : trie_[node].zero;
            if (next < 0) throw std::invalid_argument("huffman decode: invalid code path");
            node = next;
            if (trie_[node].symbol >= 0) {
                text.push_back(static_cast<char>(trie_[node].symbol));
                node = 0;
            }
        }
        if (node != 0) throw std::invalid_argument("huffman decode: dangling bits");
        return text;
    }

    // (symbol, codeword) pairs in symbol order.
    std::map<unsigned char, BitVector> codes() const {
        std::map<unsigned char, BitVector> out;
        for (unsigned s = 0; s < 256; ++s)
            if (!codes_[s].empty()) out[static_cast<unsigned char>(s)] = codes_[s];
        return out;
    }

    double kraft_sum() const {
        double sum = 0;
        for (const auto& code : codes_)
            if (!code.empty()) sum += std::pow(2.0, -static_cast<double>(code.size()));
        return sum;
    }

    std::size_t encoded_length(std::string_view text) const {
        std::size_t n = 0;
        for (unsigned char c : text) {
            if (codes_[c].empty()) throw std::invalid_argument("huffman length: symbol not in table");
            n += codes_[c].size();
        }
        return n;
    }

private:
    struct TrieNode {
        int zero = -1, one = -1, symbol = -1;
    };

    void build_trie() {
        trie_.assign(1, {});
        for (unsigned s = 0; s < 256; ++s) {
            const auto& code = codes_[s];
            if (code.empty()) continue;
            int node = 0;
            for (auto bit : code) {
                int next = bit ? trie_[node].one : trie_[node].zero;
                if (next < 0) {
                    next = static_cast<int>(trie_.size());
                    trie_.push_back({});  // may reallocate; re-index the parent
                    (bit ? trie_[node].one : trie_[node].zero) = next;
                }
                node = next;
            }
            trie_[node].symbol = static_cast<int>(s);
        }
    }

    std::array<BitVector, 256> codes_{};
    std::vector<TrieNode> trie_;
};

// Pre-channel-coding source bits per sentence, one row per sentence of `text`:
// semantic = aligned triplet count x symbol width, fixed7 = 7 x characters,
// huffman = table-encoded length. A sentence with no aligned triplet cannot be
// transmitted semantically and is flagged.
struct CompressionRow {
    std::string sentence;
    std::size_t triplet_count = 0;
    std::size_t bits_semantic = 0;
    std::size_t bits_fixed7 = 0;
    std::size_t bits_huffman = 0;
    bool transmittable = false;
};

inline std::vector<CompressionRow> compression_report(std::string_view text, const KnowledgeGraph& kg,
                                                      const SynonymTable& synonym_table, const HuffmanTable& huffman,
                                                      const Codebook& cb) {
    std::vector<CompressionRow> rows;
    for (const auto& msg : align(text, kg, synonym_table)) {
        CompressionRow row;
        row.sentence = msg.sentence;
        row.triplet_count = msg.triplets.size();
        row.bits_semantic = msg.triplets.size() * cb.symbol_width();
        row.bits_fixed7 = msg.sentence.size() * 7;
        row.bits_huffman = huffman.encoded_length(msg.sentence);
        row.transmittable = !msg.triplets.empty();
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace kgsc
