#pragma once
// Semantic symbol abstraction: sentence -> knowledge graph triplets.
//
// A triplet aligns to a sentence when some synonym of its head label and some
// synonym of its tail label both occur in the sentence as whole-token
// contiguous phrases. Relations are never matched. Matching is
// case-insensitive; '_' and punctuation act as token separators, so graph
// labels like "Alba_Iulia" match the surface text "Alba Iulia".

#include <fstream>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kg.hpp"

namespace kgsc {

// Lower-cased token list; token characters are ASCII alphanumerics and any
// non-ASCII byte, everything else separates.
inline std::vector<std::string> surface_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (unsigned char c : text) {
        const bool token_char = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
        if (token_char) {
            cur.push_back(static_cast<char>((c >= 'A' && c <= 'Z') ? c - 'A' + 'a' : c));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

// Canonical form used as synonym-table key: tokens joined by single spaces.
inline std::string normalize_phrase(std::string_view text) {
    std::string out;
    for (const auto& tok : surface_tokens(text)) {
        if (!out.empty()) out.push_back(' ');
        out += tok;
    }
    return out;
}

class SynonymTable {
public:
    // TSV rows: word<TAB>syn1|syn2|...  ('#' comments ignored). Keys and
    // synonyms are normalized; each key is always a member of its own set.
    static SynonymTable load(std::istream& in) {
        SynonymTable table;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            const auto tab = line.find('\t');
            if (tab == std::string::npos)
                throw std::runtime_error("synonym parse error at line " + std::to_string(line_no) +
                                         ": expected word<TAB>synonyms");
            const auto key = normalize_phrase(std::string_view(line).substr(0, tab));
            if (key.empty())
                throw std::runtime_error("synonym parse error at line " + std::to_string(line_no) + ": empty word");
            std::string_view rest = std::string_view(line).substr(tab + 1);
            auto& set = table.sets_[key];
            if (set.empty()) set.push_back(key);
            while (!rest.empty()) {
                const auto bar = rest.find('|');
                const auto piece = rest.substr(0, bar);
                const auto syn = normalize_phrase(piece);
                if (!syn.empty() && std::find(set.begin(), set.end(), syn) == set.end()) set.push_back(syn);
                if (bar == std::string_view::npos) break;
                rest.remove_prefix(bar + 1);
            }
        }
        return table;
    }

    static SynonymTable load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("synonym load: cannot open " + path);
        return load(in);
    }

    void add(std::string_view word, const std::vector<std::string>& synonyms) {
        const auto key = normalize_phrase(word);
        if (key.empty()) throw std::invalid_argument("synonym add: empty word");
        auto& set = sets_[key];
        if (set.empty()) set.push_back(key);
        for (const auto& s : synonyms) {
            const auto syn = normalize_phrase(s);
            if (!syn.empty() && std::find(set.begin(), set.end(), syn) == set.end()) set.push_back(syn);
        }
    }

    const std::vector<std::string>* find(const std::string& normalized_key) const {
        auto it = sets_.find(normalized_key);
        return it == sets_.end() ? nullptr : &it->second;
    }

    std::size_t size() const { return sets_.size(); }

private:
    std::unordered_map<std::string, std::vector<std::string>> sets_;
};

// Synonym set of a word: its table entry plus the word itself, or just the
// word when no entry exists.
inline std::vector<std::string> synonyms(std::string_view word, const SynonymTable& table) {
    const auto key = normalize_phrase(word);
    if (key.empty()) throw std::invalid_argument("synonyms: word empty after normalization");
    std::vector<std::string> out;
    if (const auto* set = table.find(key)) out = *set;
    if (std::find(out.begin(), out.end(), key) == out.end()) out.insert(out.begin(), key);
    return out;
}

// Sentence boundaries: . ! ? followed by whitespace or end of text.
inline std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> sentences;
    std::string cur;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        cur.push_back(c);
        const bool terminator = c == '.' || c == '!' || c == '?';
        const bool at_break = i + 1 >= text.size() || text[i + 1] == ' ' || text[i + 1] == '\t' ||
                              text[i + 1] == '\n' || text[i + 1] == '\r';
        if (terminator && at_break) {
            while (!cur.empty() && (cur.front() == ' ' || cur.front() == '\t')) cur.erase(cur.begin());
            if (!cur.empty()) sentences.push_back(cur);
            cur.clear();
        }
    }
    while (!cur.empty() && (cur.front() == ' ' || cur.front() == '\t')) cur.erase(cur.begin());
    while (!cur.empty() && (cur.back() == '\n' || cur.back() == '\r' || cur.back() == ' ')) cur.pop_back();
    if (!cur.empty()) sentences.push_back(cur);
    return sentences;
}

struct AlignedMessage {
    std::string sentence;
    std::vector<Triplet> triplets;
};

namespace detail {

inline bool contains_phrase(const std::vector<std::string>& sentence_tokens, const std::vector<std::string>& phrase) {
    if (phrase.empty() || phrase.size() > sentence_tokens.size()) return false;
    for (std::size_t start = 0; start + phrase.size() <= sentence_tokens.size(); ++start) {
        bool match = true;
        for (std::size_t j = 0; j < phrase.size(); ++j) {
            if (sentence_tokens[start + j] != phrase[j]) {
                match = false;
                break;
            }
        }
        if (match) return true;
    }
    return false;
}

}  // namespace detail

// One pass of the alignment algorithm: for every sentence, every triplet whose
// head and tail (or synonyms of them) occur in it. Output triplet order is the
// graph's iteration order, so alignment is deterministic.
inline std::vector<AlignedMessage> align(std::string_view text, const KnowledgeGraph& kg, const SynonymTable& table) {
    std::vector<AlignedMessage> out;
    const auto sentences = split_sentences(text);
    if (sentences.empty()) return out;

    // Tokenized synonym phrases per entity, shared across sentences.
    std::vector<std::vector<std::vector<std::string>>> entity_phrases(kg.n_entities());
    std::vector<char> built(kg.n_entities(), 0);
    auto phrases_of = [&](EntityId e) -> const std::vector<std::vector<std::string>>& {
        if (!built[e]) {
            for (const auto& syn : synonyms(kg.entity_label(e), table)) entity_phrases[e].push_back(surface_tokens(syn));
            built[e] = 1;
        }
        return entity_phrases[e];
    };

    for (const auto& sentence : sentences) {
        AlignedMessage msg;
        msg.sentence = sentence;
        const auto tokens = surface_tokens(sentence);
        std::vector<signed char> occurs(kg.n_entities(), -1);  // per-sentence memo
        auto entity_in_sentence = [&](EntityId e) {
            if (occurs[e] < 0) {
                occurs[e] = 0;
                for (const auto& p : phrases_of(e)) {
                    if (detail::contains_phrase(tokens, p)) {
                        occurs[e] = 1;
                        break;
                    }
                }
            }
            return occurs[e] == 1;
        };
        for (const auto& t : kg.triplets()) {
            if (entity_in_sentence(t.head) && entity_in_sentence(t.tail)) msg.triplets.push_back(t);
        }
        out.push_back(std::move(msg));
    }
    return out;
}

}  // namespace kgsc
