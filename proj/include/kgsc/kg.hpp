#pragma once
// Knowledge graph storage and the semantic symbol codec.
//
// A graph is two dense vocabularies (entities, relations) plus a deduplicated
// triplet list. Vocabulary order is first appearance in the source, so ids and
// codebooks are stable across runs. Symbols travel as fixed-width bit fields:
// head | relation | tail, each big-endian.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bits.hpp"

namespace kgsc {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

struct Triplet {
    EntityId head = 0;
    RelationId relation = 0;
    EntityId tail = 0;

    friend bool operator==(const Triplet&, const Triplet&) = default;
};

struct TripletHash {
    std::size_t operator()(const Triplet& t) const {
        std::uint64_t x = (std::uint64_t(t.head) << 32) ^ (std::uint64_t(t.relation) << 16) ^ t.tail;
        return static_cast<std::size_t>(splitmix64(x));
    }
};

// Slot of a triplet; used by the receiver's candidate search and by ranking.
enum class Role { head, relation, tail };

class KnowledgeGraph {
public:
    // Inserts vocabulary entries on first sight; returns false for duplicate triplets.
    bool add(std::string_view head, std::string_view relation, std::string_view tail) {
        Triplet t{intern(entities_, entity_ids_, head), intern(relations_, relation_ids_, relation),
                  intern(entities_, entity_ids_, tail)};
        if (!membership_.insert(t).second) return false;
        triplets_.push_back(t);
        role_index_dirty_ = true;
        return true;
    }

    // TSV loader: head<TAB>relation<TAB>tail, one triplet per line, '#' comments
    // and blank lines ignored. Duplicate lines collapse to one triplet.
    static KnowledgeGraph load(std::istream& in) {
        KnowledgeGraph kg;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            const auto tab1 = line.find('\t');
            const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
            const auto tab3 = tab2 == std::string::npos ? std::string::npos : line.find('\t', tab2 + 1);
            if (tab1 == std::string::npos || tab2 == std::string::npos || tab3 != std::string::npos)
                throw std::runtime_error("kg parse error at line " + std::to_string(line_no) +
                                         ": expected 3 tab-separated fields");
            std::string_view sv(line);
            const auto head = sv.substr(0, tab1);
            const auto rel = sv.substr(tab1 + 1, tab2 - tab1 - 1);
            const auto tail = sv.substr(tab2 + 1);
            if (head.empty() || rel.empty() || tail.empty())
                throw std::runtime_error("kg parse error at line " + std::to_string(line_no) + ": empty field");
            kg.add(head, rel, tail);
        }
        if (kg.triplets_.empty()) throw std::runtime_error("kg load: input contains no triplets");
        kg.rebuild_role_index();  // finalized graphs are safe for concurrent reads
        return kg;
    }

    static KnowledgeGraph load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("kg load: cannot open " + path);
        return load(in);
    }

    // Serialization: one TSV line per triplet in insertion order. Reloading the
    // output reproduces vocabularies and ids exactly.
    void save(std::ostream& out) const {
        for (const auto& t : triplets_)
            out << entities_[t.head] << '\t' << relations_[t.relation] << '\t' << entities_[t.tail] << '\n';
    }

    void save_file(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("kg save: cannot open " + path);
        save(out);
    }

    // A graph over the same vocabularies (ids stay valid) restricted to the
    // given triplets. Used for per-user private graphs.
    static KnowledgeGraph subset(const KnowledgeGraph& base, const std::vector<Triplet>& triplets) {
        KnowledgeGraph kg;
        kg.entities_ = base.entities_;
        kg.relations_ = base.relations_;
        kg.entity_ids_ = base.entity_ids_;
        kg.relation_ids_ = base.relation_ids_;
        for (const auto& t : triplets) {
            if (t.head >= kg.entities_.size() || t.tail >= kg.entities_.size() || t.relation >= kg.relations_.size())
                throw std::out_of_range("kg subset: triplet id outside base vocabulary");
            if (kg.membership_.insert(t).second) kg.triplets_.push_back(t);
        }
        kg.rebuild_role_index();  // finalized graphs are safe for concurrent reads
        return kg;
    }

    const std::vector<std::string>& entities() const { return entities_; }
    const std::vector<std::string>& relations() const { return relations_; }
    const std::vector<Triplet>& triplets() const { return triplets_; }
    std::size_t n_entities() const { return entities_.size(); }
    std::size_t n_relations() const { return relations_.size(); }
    std::size_t size() const { return triplets_.size(); }
    bool empty() const { return triplets_.empty(); }

    bool contains(const Triplet& t) const { return membership_.count(t) != 0; }

    std::optional<EntityId> entity_id(std::string_view label) const {
        auto it = entity_ids_.find(std::string(label));
        if (it == entity_ids_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<RelationId> relation_id(std::string_view label) const {
        auto it = relation_ids_.find(std::string(label));
        if (it == relation_ids_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& entity_label(EntityId id) const {
        if (id >= entities_.size()) throw std::out_of_range("entity id out of range");
        return entities_[id];
    }

    const std::string& relation_label(RelationId id) const {
        if (id >= relations_.size()) throw std::out_of_range("relation id out of range");
        return relations_[id];
    }

    // Entities that occur as heads / as tails, ascending id order.
    const std::vector<EntityId>& head_entities() const {
        rebuild_role_index();
        return head_entities_;
    }

    const std::vector<EntityId>& tail_entities() const {
        rebuild_role_index();
        return tail_entities_;
    }

    // Resolves a label triple against existing vocabularies (no insertion).
    Triplet resolve(std::string_view head, std::string_view relation, std::string_view tail) const {
        auto h = entity_id(head);
        auto r = relation_id(relation);
        auto t = entity_id(tail);
        if (!h || !r || !t) throw std::runtime_error("kg resolve: unknown label");
        return Triplet{*h, *r, *t};
    }

private:
    template <class Map>
    static std::uint32_t intern(std::vector<std::string>& vocab, Map& ids, std::string_view label) {
        auto it = ids.find(std::string(label));
        if (it != ids.end()) return it->second;
        const auto id = static_cast<std::uint32_t>(vocab.size());
        vocab.emplace_back(label);
        ids.emplace(vocab.back(), id);
        return id;
    }

    void rebuild_role_index() const {
        if (!role_index_dirty_) return;
        std::vector<char> is_head(entities_.size(), 0), is_tail(entities_.size(), 0);
        for (const auto& t : triplets_) {
            is_head[t.head] = 1;
            is_tail[t.tail] = 1;
        }
        head_entities_.clear();
        tail_entities_.clear();
        for (EntityId e = 0; e < entities_.size(); ++e) {
            if (is_head[e]) head_entities_.push_back(e);
            if (is_tail[e]) tail_entities_.push_back(e);
        }
        role_index_dirty_ = false;
    }

    std::vector<std::string> entities_;
    std::vector<std::string> relations_;
    std::unordered_map<std::string, EntityId> entity_ids_;
    std::unordered_map<std::string, RelationId> relation_ids_;
    std::vector<Triplet> triplets_;
    std::unordered_set<Triplet, TripletHash> membership_;
    mutable std::vector<EntityId> head_entities_, tail_entities_;
    mutable bool role_index_dirty_ = true;
};

// Loads triplets whose labels must already exist in `vocab` (ids are taken
// from it). Used for private per-user graph files that share the main graph.
inline std::vector<Triplet> load_triplets(std::istream& in, const KnowledgeGraph& vocab) {
    std::vector<Triplet> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string h, r, t, extra;
        if (!std::getline(ls, h, '\t') || !std::getline(ls, r, '\t') || !std::getline(ls, t, '\t') ||
            std::getline(ls, extra, '\t'))
            throw std::runtime_error("triplet parse error at line " + std::to_string(line_no));
        out.push_back(vocab.resolve(h, r, t));
    }
    return out;
}

// Smallest width with 2^width >= n; singleton vocabularies still get one bit.
inline unsigned min_bit_width(std::uint64_t n) {
    unsigned w = 1;
    while (w < 63 && (1ull << w) < n) ++w;
    return w;
}

struct Codebook {
    unsigned entity_width = 1;
    unsigned relation_width = 1;
    std::uint64_t entity_count = 0;
    std::uint64_t relation_count = 0;

    unsigned symbol_width() const { return 2 * entity_width + relation_width; }
    unsigned width_for(Role role) const { return role == Role::relation ? relation_width : entity_width; }
};

inline Codebook make_codebook(std::uint64_t n_entities, std::uint64_t n_relations) {
    if (n_entities == 0 || n_relations == 0) throw std::invalid_argument("codebook: empty vocabulary");
    return Codebook{min_bit_width(n_entities), min_bit_width(n_relations), n_entities, n_relations};
}

// Ids equal vocabulary indexes, so the (label, integer) dictionary is the
// graph's vocabulary order and the codebook only carries widths and ranges.
inline Codebook build_codebook(const KnowledgeGraph& kg) {
    if (kg.empty()) throw std::invalid_argument("codebook: empty knowledge graph");
    return make_codebook(kg.n_entities(), kg.n_relations());
}

inline BitVector encode_symbol(const Triplet& t, const Codebook& cb) {
    if (t.head >= cb.entity_count || t.tail >= cb.entity_count || t.relation >= cb.relation_count)
        throw std::out_of_range("encode_symbol: id outside codebook range");
    BitVector bits;
    bits.reserve(cb.symbol_width());
    append_uint(bits, t.head, cb.entity_width);
    append_uint(bits, t.relation, cb.relation_width);
    append_uint(bits, t.tail, cb.entity_width);
    return bits;
}

// Width-masked field concatenation. Unlike encode_symbol this accepts flagged
// (out-of-vocabulary) ids, so receiver-side bit-space comparisons stay total;
// on valid ids it produces exactly the encode_symbol codeword.
inline BitVector raw_symbol_bits(const Triplet& t, const Codebook& cb) {
    const auto mask = [](std::uint64_t v, unsigned w) { return w >= 64 ? v : v & ((1ull << w) - 1); };
    BitVector bits;
    bits.reserve(cb.symbol_width());
    append_uint(bits, mask(t.head, cb.entity_width), cb.entity_width);
    append_uint(bits, mask(t.relation, cb.relation_width), cb.relation_width);
    append_uint(bits, mask(t.tail, cb.entity_width), cb.entity_width);
    return bits;
}

// Raw field-wise decode. Corrupted bits can name ids beyond the vocabulary;
// they are flagged, not clamped - repair belongs to the correction stage.
struct DecodedSymbol {
    Triplet raw;
    bool head_valid = false;
    bool relation_valid = false;
    bool tail_valid = false;

    bool valid() const { return head_valid && relation_valid && tail_valid; }
};

inline DecodedSymbol decode_symbol(const BitVector& bits, const Codebook& cb, const KnowledgeGraph& kg) {
    if (bits.size() != cb.symbol_width()) throw std::invalid_argument("decode_symbol: wrong bit length");
    DecodedSymbol d;
    const auto h = read_uint(bits, 0, cb.entity_width);
    const auto r = read_uint(bits, cb.entity_width, cb.relation_width);
    const auto t = read_uint(bits, cb.entity_width + cb.relation_width, cb.entity_width);
    d.raw = Triplet{static_cast<EntityId>(h), static_cast<RelationId>(r), static_cast<EntityId>(t)};
    d.head_valid = h < kg.n_entities();
    d.relation_valid = r < kg.n_relations();
    d.tail_valid = t < kg.n_entities();
    return d;
}

}  // namespace kgsc
