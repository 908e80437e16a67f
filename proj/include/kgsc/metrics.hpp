#pragma once
// Evaluation quantities: source/semantic entropy accounting, sentence
// similarity with a pluggable embedder, BLEU, and triplet error rate.
//
// Entropies use log base 2. The default sentence embedding is a lower-cased
// whitespace-token term-frequency vector, L2-normalized, which keeps the
// metric deterministic and dependency-free; a learned embedder can be plugged
// in through the SentenceEmbedder interface.

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kg.hpp"

namespace kgsc {

using MessageDistribution = std::map<std::string, double>;
using MessageMapping = std::map<std::string, std::string>;

inline void validate_distribution(const MessageDistribution& d) {
    double sum = 0.0;
    for (const auto& [m, p] : d) {
        if (!(p >= 0.0)) throw std::invalid_argument("distribution: negative probability for '" + m + "'");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("distribution: probabilities do not sum to 1");
}

inline double message_entropy(const MessageDistribution& d) {
    validate_distribution(d);
    double h = 0.0;
    for (const auto& [m, p] : d)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

// Push-forward of the message distribution through the symbol mapping:
// Pr(s) = sum of Pr(m) over m with f(m) = s.
inline MessageDistribution pushforward(const MessageDistribution& d, const MessageMapping& mapping) {
    validate_distribution(d);
    MessageDistribution out;
    for (const auto& [m, p] : d) {
        auto it = mapping.find(m);
        if (it == mapping.end()) throw std::invalid_argument("pushforward: mapping undefined for '" + m + "'");
        out[it->second] += p;
    }
    return out;
}

inline double semantic_entropy(const MessageDistribution& d, const MessageMapping& mapping) {
    return message_entropy(pushforward(d, mapping));
}

// |H(S) - (H(M) + H(S|M) - H(M|S))| computed from the joint distribution of a
// deterministic mapping (H(S|M) = 0 by construction).
inline double entropy_identity_residual(const MessageDistribution& d, const MessageMapping& mapping) {
    validate_distribution(d);
    const double h_m = message_entropy(d);
    const auto pushed = pushforward(d, mapping);
    const double h_s = message_entropy(pushed);

    const double h_s_given_m = 0.0;
    double h_m_given_s = 0.0;
    for (const auto& [s, ps] : pushed) {
        if (ps <= 0.0) continue;
        double h_cond = 0.0;
        for (const auto& [m, pm] : d) {
            if (pm <= 0.0 || mapping.at(m) != s) continue;
            const double p = pm / ps;
            h_cond -= p * std::log2(p);
        }
        h_m_given_s += ps * h_cond;
    }
    return std::abs(h_s - (h_m + h_s_given_m - h_m_given_s));
}

class SentenceEmbedder {
public:
    virtual ~SentenceEmbedder() = default;
    virtual std::vector<double> embed(const std::string& text) const = 0;
};

// Lower-cased whitespace tokens; punctuation stays attached ("F.C." is one token).
inline std::vector<std::string> metric_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (unsigned char c : text) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            if (!cur.empty()) {
                tokens.push_back(std::move(cur));
                cur.clear();
            }
        } else {
            cur.push_back(static_cast<char>((c >= 'A' && c <= 'Z') ? c - 'A' + 'a' : c));
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

// Cosine similarity of term-frequency maps (the default embedding).
inline double similarity(std::string_view a, std::string_view b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("similarity: empty sentence");
    std::unordered_map<std::string, double> ta, tb;
    for (auto& tok : metric_tokens(a)) ta[tok] += 1.0;
    for (auto& tok : metric_tokens(b)) tb[tok] += 1.0;
    if (ta.empty() || tb.empty()) throw std::invalid_argument("similarity: zero embedding vector");
    if (ta == tb) return 1.0;  // exact on identical token frequencies
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [tok, f] : ta) {
        na += f * f;
        auto it = tb.find(tok);
        if (it != tb.end()) dot += f * it->second;
    }
    for (const auto& [tok, f] : tb) nb += f * f;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Cosine similarity of embedder outputs.
inline double similarity(const std::string& a, const std::string& b, const SentenceEmbedder& embedder) {
    if (a.empty() || b.empty()) throw std::invalid_argument("similarity: empty sentence");
    const auto va = embedder.embed(a);
    const auto vb = embedder.embed(b);
    if (va.size() != vb.size() || va.empty()) throw std::invalid_argument("similarity: embedding dimension mismatch");
    if (va == vb) {
        for (double v : va)
            if (v != 0.0) return 1.0;  // exact on identical nonzero embeddings
        throw std::invalid_argument("similarity: zero embedding vector");
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        dot += va[i] * vb[i];
        na += va[i] * va[i];
        nb += vb[i] * vb[i];
    }
    if (na == 0.0 || nb == 0.0) throw std::invalid_argument("similarity: zero embedding vector");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace detail {

inline std::map<std::string, std::size_t> ngram_counts(const std::vector<std::string>& tokens, std::size_t n) {
    std::map<std::string, std::size_t> counts;
    if (tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key;
        for (std::size_t j = 0; j < n; ++j) {
            if (j) key.push_back('\x1f');
            key += tokens[i + j];
        }
        ++counts[key];
    }
    return counts;
}

}  // namespace detail

// BLEU with uniform weights over n = 1..max_n: geometric mean of clipped
// n-gram precisions times the brevity penalty. Orders longer than the
// candidate are skipped rather than zeroed.
inline double bleu(std::string_view candidate, std::string_view reference, unsigned max_n = 4) {
    const auto cand = metric_tokens(candidate);
    const auto ref = metric_tokens(reference);
    if (cand.empty() || ref.empty()) throw std::invalid_argument("bleu: empty token sequence");

    double log_precision_sum = 0.0;
    unsigned orders = 0;
    for (unsigned n = 1; n <= max_n; ++n) {
        if (cand.size() < n) break;
        const auto cand_counts = detail::ngram_counts(cand, n);
        const auto ref_counts = detail::ngram_counts(ref, n);
        std::size_t clipped = 0, total = 0;
        for (const auto& [gram, count] : cand_counts) {
            total += count;
            auto it = ref_counts.find(gram);
            if (it != ref_counts.end()) clipped += std::min(count, it->second);
        }
        ++orders;
        if (clipped == 0) return 0.0;
        log_precision_sum += std::log(static_cast<double>(clipped) / static_cast<double>(total));
    }
    if (orders == 0) return 0.0;

    const double c = static_cast<double>(cand.size());
    const double r = static_cast<double>(ref.size());
    const double brevity = c >= r ? 1.0 : std::exp(1.0 - r / c);
    return brevity * std::exp(log_precision_sum / static_cast<double>(orders));
}

// Fraction of positions where the received triplet differs in any field.
inline double triplet_error_rate(const std::vector<Triplet>& sent, const std::vector<Triplet>& received) {
    if (sent.size() != received.size()) throw std::invalid_argument("triplet_error_rate: length mismatch");
    if (sent.empty()) return 0.0;
    std::size_t errors = 0;
    for (std::size_t i = 0; i < sent.size(); ++i)
        if (!(sent[i] == received[i])) ++errors;
    return static_cast<double>(errors) / static_cast<double>(sent.size());
}

}  // namespace kgsc
