#pragma once
// Receiver-side semantics: bit-level similarity, per-field candidate search,
// embedding-scored symbol correction, private-graph message recovery, and
// template verbalization.

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bits.hpp"
#include "embedding.hpp"
#include "kg.hpp"

namespace kgsc {

// Cosine similarity of equal-length bit vectors under the BPSK map
// {0,1} -> {+1,-1}; equals 1 - 2 d_H / n.
inline double sim(const BitVector& a, const BitVector& b) {
    if (a.empty() || a.size() != b.size()) throw std::invalid_argument("sim: lengths must match and be nonzero");
    return 1.0 - 2.0 * static_cast<double>(hamming_distance(a, b)) / static_cast<double>(a.size());
}

namespace detail {

inline std::size_t field_hamming(const BitVector& field, std::uint64_t id) {
    std::size_t d = 0;
    const unsigned w = static_cast<unsigned>(field.size());
    for (unsigned i = 0; i < w; ++i) d += (field[i] ^ static_cast<std::uint8_t>((id >> (w - 1 - i)) & 1u)) & 1u;
    return d;
}

// Top three ids of `candidates` by descending similarity to the received
// field, ties to the lower id; padded by repeating the best when fewer exist.
template <class IdRange>
std::array<std::uint32_t, 3> top3_of(const BitVector& field, const IdRange& candidates) {
    std::array<std::uint64_t, 3> best_dist{~0ull, ~0ull, ~0ull};
    std::array<std::uint32_t, 3> best_id{0, 0, 0};
    for (auto id : candidates) {
        const std::uint64_t d = field_hamming(field, id);
        for (int slot = 0; slot < 3; ++slot) {
            if (d < best_dist[slot]) {
                for (int j = 2; j > slot; --j) {
                    best_dist[j] = best_dist[j - 1];
                    best_id[j] = best_id[j - 1];
                }
                best_dist[slot] = d;
                best_id[slot] = static_cast<std::uint32_t>(id);
                break;
            }
        }
    }
    for (int slot = 1; slot < 3; ++slot)
        if (best_dist[slot] == ~0ull) {
            best_dist[slot] = best_dist[0];
            best_id[slot] = best_id[0];
        }
    return best_id;
}

}  // namespace detail

// Role-specific candidate search of the correction algorithm: heads come from
// entities seen as heads, tails from entities seen as tails, relations from
// the whole relation set.
inline std::array<std::uint32_t, 3> top3(const BitVector& field, Role role, const Codebook& cb,
                                         const KnowledgeGraph& kg) {
    if (field.size() != cb.width_for(role)) throw std::invalid_argument("top3: field width mismatch");
    switch (role) {
        case Role::head: return detail::top3_of(field, kg.head_entities());
        case Role::tail: return detail::top3_of(field, kg.tail_entities());
        case Role::relation: {
            std::vector<RelationId> all(kg.n_relations());
            for (RelationId r = 0; r < kg.n_relations(); ++r) all[r] = r;
            return detail::top3_of(field, all);
        }
    }
    throw std::logic_error("top3: unknown role");
}

// Exactly three candidates per slot, descending similarity.
struct CandidateSet {
    std::array<EntityId, 3> heads{};
    std::array<RelationId, 3> relations{};
    std::array<EntityId, 3> tails{};
};

inline CandidateSet candidate_sets(const BitVector& symbol, const Codebook& cb, const KnowledgeGraph& kg) {
    if (symbol.size() != cb.symbol_width()) throw std::invalid_argument("candidate_sets: wrong symbol length");
    const BitVector head_field(symbol.begin(), symbol.begin() + cb.entity_width);
    const BitVector rel_field(symbol.begin() + cb.entity_width, symbol.begin() + cb.entity_width + cb.relation_width);
    const BitVector tail_field(symbol.begin() + cb.entity_width + cb.relation_width, symbol.end());
    return CandidateSet{top3(head_field, Role::head, cb, kg), top3(rel_field, Role::relation, cb, kg),
                        top3(tail_field, Role::tail, cb, kg)};
}

// Semantic correction of one received symbol. A hard decode that is already a
// true triplet of the graph passes through untouched (the inference stage is
// idle on clean receptions); otherwise all 27 candidate combinations are
// scored and the best one wins, ties going to enumeration order (heads major,
// then relations, then tails).
inline Triplet correct(const BitVector& symbol, const Codebook& cb, const KnowledgeGraph& kg,
                       const ComplExModel& model) {
    const auto decoded = decode_symbol(symbol, cb, kg);
    if (decoded.valid() && kg.contains(decoded.raw)) return decoded.raw;

    const auto cands = candidate_sets(symbol, cb, kg);
    Triplet best{};
    double best_score = -std::numeric_limits<double>::infinity();
    for (auto h : cands.heads)
        for (auto r : cands.relations)
            for (auto t : cands.tails) {
                const Triplet candidate{h, r, t};
                const double s = model.score(candidate);
                if (s > best_score) {
                    best_score = s;
                    best = candidate;
                }
            }
    return best;
}

// Message recovery (one symbol per user): the symbol most similar to the
// user's private graph, similarity taken over concatenated symbol codewords.
struct Recovery {
    std::size_t index = 0;
    Triplet symbol{};
    double similarity = -1.0;
};

namespace detail {

inline double private_similarity(const Triplet& symbol, const KnowledgeGraph& private_kg, const Codebook& cb) {
    const auto sym_bits = raw_symbol_bits(symbol, cb);  // total even on flagged raw decodes
    double best = -1.0;
    for (const auto& t : private_kg.triplets()) best = std::max(best, sim(sym_bits, encode_symbol(t, cb)));
    return best;
}

}  // namespace detail

inline Recovery recover_for_user(const std::vector<Triplet>& symbols, const KnowledgeGraph& private_kg,
                                 const Codebook& cb) {
    if (symbols.empty()) throw std::invalid_argument("recover_for_user: no symbols");
    if (private_kg.empty()) throw std::invalid_argument("recover_for_user: empty private knowledge graph");
    Recovery best;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const double s = detail::private_similarity(symbols[i], private_kg, cb);
        if (s > best.similarity) best = Recovery{i, symbols[i], s};  // ties keep the lowest index
    }
    return best;
}

// Extended mode: indexes of every symbol whose best private-graph similarity
// reaches tau. The default tau = 1 selects exactly the private-graph members.
inline std::vector<std::size_t> recover_all_for_user(const std::vector<Triplet>& symbols,
                                                     const KnowledgeGraph& private_kg, const Codebook& cb,
                                                     double tau = 1.0) {
    if (symbols.empty()) throw std::invalid_argument("recover_all_for_user: no symbols");
    if (private_kg.empty()) throw std::invalid_argument("recover_all_for_user: empty private knowledge graph");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < symbols.size(); ++i)
        if (detail::private_similarity(symbols[i], private_kg, cb) >= tau) out.push_back(i);
    return out;
}

// Relation-label -> sentence pattern with {h} and {t} slots. The fallback
// additionally takes {r} for relations without a pattern of their own.
class TemplateTable {
public:
    // TSV rows: relation<TAB>pattern. A '*' relation overrides the fallback.
    static TemplateTable load(std::istream& in) {
        TemplateTable table;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            const auto tab = line.find('\t');
            if (tab == std::string::npos)
                throw std::runtime_error("template parse error at line " + std::to_string(line_no) +
                                         ": expected relation<TAB>pattern");
            const auto relation = line.substr(0, tab);
            const auto pattern = line.substr(tab + 1);
            validate_pattern(pattern, line_no);
            if (relation == "*")
                table.fallback_ = pattern;
            else
                table.patterns_[relation] = pattern;
        }
        return table;
    }

    static TemplateTable load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("template load: cannot open " + path);
        return load(in);
    }

    void set(const std::string& relation, const std::string& pattern) {
        validate_pattern(pattern, 0);
        patterns_[relation] = pattern;
    }

    const std::string* pattern_for(const std::string& relation) const {
        auto it = patterns_.find(relation);
        return it == patterns_.end() ? nullptr : &it->second;
    }

    const std::string& fallback() const { return fallback_; }

private:
    static void validate_pattern(const std::string& pattern, std::size_t line_no) {
        auto count = [&](std::string_view slot) {
            std::size_t n = 0, pos = 0;
            while ((pos = pattern.find(slot, pos)) != std::string::npos) {
                ++n;
                pos += slot.size();
            }
            return n;
        };
        if (count("{h}") != 1 || count("{t}") != 1)
            throw std::runtime_error("template pattern at line " + std::to_string(line_no) +
                                     " must contain {h} and {t} exactly once");
    }

    std::unordered_map<std::string, std::string> patterns_;
    std::string fallback_ = "{h} {r} {t}.";
};

namespace detail {

inline std::string label_surface(std::string label) {
    std::replace(label.begin(), label.end(), '_', ' ');
    return label;
}

inline void replace_once(std::string& text, std::string_view slot, const std::string& value) {
    const auto pos = text.find(slot);
    if (pos != std::string::npos) text.replace(pos, slot.size(), value);
}

}  // namespace detail

// Template stand-in for the learned triplet-to-text stage: instantiate the
// relation's pattern with the entity labels (underscores read as spaces).
inline std::string verbalize(const Triplet& t, const KnowledgeGraph& kg, const TemplateTable& templates) {
    const auto& relation_label = kg.relation_label(t.relation);
    const std::string* pattern = templates.pattern_for(relation_label);
    std::string text = pattern ? *pattern : templates.fallback();
    detail::replace_once(text, "{h}", detail::label_surface(kg.entity_label(t.head)));
    detail::replace_once(text, "{r}", detail::label_surface(relation_label));
    detail::replace_once(text, "{t}", detail::label_surface(kg.entity_label(t.tail)));
    return text;
}

}  // namespace kgsc
