#pragma once
// Desk-scale synthetic dataset generator.
//
// The graph mimics the person/club/country flavour of the large public KGs:
// clubs sit in countries, cities sit in countries, persons play for clubs,
// are born in cities, and hold the citizenship implied by their club's
// country. That compositional redundancy is what makes held-out citizenship
// facts inferable by an embedding model. Every entity and relation is covered
// by the emitted triplets, so reloading the files reproduces the requested
// vocabulary sizes exactly.
//
// Outputs (TSV/text, loadable by the library loaders):
//   kg.tsv        exactly spec.triplets training triplets
//   heldout.tsv   spec.heldout unseen-but-inferable citizenship triplets
//   corpus.txt    one template-verbalized sentence per training triplet
//   templates.tsv relation patterns
//   synonyms.tsv  a few alias rows
//   user<k>.tsv   disjoint private splits whose union is the training graph

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "align.hpp"
#include "kg.hpp"
#include "receiver.hpp"
#include "rng.hpp"

namespace kgsc {

struct FixtureSpec {
    std::size_t entities = 50;
    std::size_t relations = 5;
    std::size_t triplets = 200;
    std::size_t heldout = 20;
    std::size_t users = 2;
};

struct FixtureFiles {
    std::string kg;
    std::string heldout;
    std::string corpus;
    std::string templates;
    std::string synonyms;
    std::vector<std::string> private_kgs;
};

namespace detail {

inline std::string zero_pad(std::size_t v, int width) {
    std::string s = std::to_string(v);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

template <class T>
inline void seeded_shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

}  // namespace detail

inline FixtureFiles generate_toy_fixture(const FixtureSpec& spec, std::uint64_t seed, const std::string& out_dir) {
    if (spec.entities < 4 || spec.relations < 2)
        throw std::invalid_argument("fixture: need at least 4 entities and 2 relations");
    if (spec.users < 1) throw std::invalid_argument("fixture: need at least 1 user");
    if (spec.heldout > 0 && spec.relations < 3)
        throw std::invalid_argument("fixture: held-out citizenship facts need at least 3 relations");

    const std::size_t n_rel = spec.relations;
    const bool has_citizen = n_rel >= 3;
    const bool has_birth = n_rel >= 4;
    const bool has_city_in = n_rel >= 5;

    // Entity type allocation: minimum one of each used type, then grow toward
    // countries ~ E/10, cities ~ E/10, clubs ~ E/5, remainder persons.
    std::size_t nc = 1, nt = has_birth ? 1 : 0, ncl = 1;
    {
        const std::size_t base = nc + nt + ncl + 1;
        if (spec.entities < base) throw std::invalid_argument("fixture: too few entities for the relation roster");
        std::size_t spare = spec.entities - base;
        auto grow = [&](std::size_t& n, std::size_t target) {
            const std::size_t inc = std::min(spare, target > n ? target - n : 0);
            n += inc;
            spare -= inc;
        };
        grow(nc, spec.entities / 10);
        if (has_birth) grow(nt, spec.entities / 10);
        grow(ncl, std::max(spec.entities / 5, nc));
        if (ncl < nc) throw std::invalid_argument("fixture: cannot cover all countries with clubs");
    }
    const std::size_t np = spec.entities - nc - nt - ncl;
    if (np < 1) throw std::invalid_argument("fixture: no room for persons");
    if (has_birth && !has_city_in && np < nt)
        throw std::invalid_argument("fixture: cities cannot all be covered by birthplaces");

    std::vector<std::string> persons, clubs, countries, cities;
    for (std::size_t i = 0; i < np; ++i) persons.push_back("Person" + detail::zero_pad(i, 2));
    for (std::size_t i = 0; i < ncl; ++i) clubs.push_back("Club" + detail::zero_pad(i, 2));
    for (std::size_t i = 0; i < nc; ++i) countries.push_back("Country" + detail::zero_pad(i, 2));
    for (std::size_t i = 0; i < nt; ++i) cities.push_back("City" + detail::zero_pad(i, 2));

    // Relation roster; indexes into `rel_names`.
    std::vector<std::string> rel_names = {"plays_for", "located_in"};
    if (has_citizen) rel_names.push_back("citizen_of");
    if (has_birth) rel_names.push_back("born_in");
    if (has_city_in) rel_names.push_back("city_in");
    const std::vector<std::string> extra_pool = {"supports", "sponsors", "admires", "scouts"};
    for (std::size_t i = rel_names.size(); i < n_rel; ++i) {
        const std::size_t k = i - (has_city_in ? 5 : rel_names.size());
        rel_names.push_back(k < extra_pool.size() ? extra_pool[k] : "linked_" + std::to_string(k));
    }
    rel_names.resize(n_rel);

    Rng rng(splitmix64(seed ^ 0xf1c7u));
    std::vector<std::size_t> club_of_person(np), city_of_person(np), country_of_club(ncl), country_of_city(nt);
    {
        std::vector<std::size_t> perm(ncl);
        for (std::size_t i = 0; i < ncl; ++i) perm[i] = i;
        detail::seeded_shuffle(perm, rng);
        for (std::size_t p = 0; p < np; ++p) club_of_person[p] = perm[p % ncl];
        for (std::size_t c = 0; c < ncl; ++c) country_of_club[c] = c % nc;
        for (std::size_t t = 0; t < nt; ++t) country_of_city[t] = t % nc;
        for (std::size_t p = 0; p < np; ++p) city_of_person[p] = nt ? p % nt : 0;
    }

    std::vector<std::array<std::string, 3>> train, held;
    std::vector<std::size_t> relation_use(n_rel, 0);
    auto emit = [&](std::vector<std::array<std::string, 3>>& sink, const std::string& h, std::size_t rel,
                    const std::string& t) {
        sink.push_back({h, rel_names[rel], t});
        if (&sink == &train) ++relation_use[rel];
    };

    // Coverage core.
    for (std::size_t c = 0; c < ncl; ++c) emit(train, clubs[c], 1, countries[country_of_club[c]]);
    if (has_city_in)
        for (std::size_t t = 0; t < nt; ++t) emit(train, cities[t], 4, countries[country_of_city[t]]);
    if (has_birth)
        for (std::size_t p = 0; p < np; ++p) emit(train, persons[p], 3, cities[city_of_person[p]]);
    for (std::size_t p = 0; p < np; ++p) emit(train, persons[p], 0, clubs[club_of_person[p]]);
    if (has_citizen)
        for (std::size_t p = 0; p < np; ++p) emit(train, persons[p], 2, countries[country_of_club[club_of_person[p]]]);

    if (train.size() + spec.heldout > spec.triplets)
        throw std::invalid_argument("fixture: triplet quota too small for entity coverage");

    // Person/club pairing state: one club link per (person, club) across all
    // relations, one citizenship per (person, country).
    std::vector<std::vector<char>> club_used(np, std::vector<char>(ncl, 0));
    std::vector<std::vector<char>> citizen_used(np, std::vector<char>(nc, 0));
    for (std::size_t p = 0; p < np; ++p) {
        club_used[p][club_of_person[p]] = 1;
        if (has_citizen) citizen_used[p][country_of_club[club_of_person[p]]] = 1;
    }

    // next_pair(fresh_country): first (person, club) slot in round-robin order
    // that is unused and, when requested, leads to a new citizenship country.
    std::size_t person_cursor = 0;
    auto next_pair = [&](bool fresh_country, std::size_t& out_p, std::size_t& out_c) {
        for (std::size_t tries = 0; tries < np; ++tries) {
            const std::size_t p = (person_cursor + tries) % np;
            for (std::size_t k = 1; k <= ncl; ++k) {
                const std::size_t c = (club_of_person[p] + k) % ncl;
                if (club_used[p][c]) continue;
                if (fresh_country && citizen_used[p][country_of_club[c]]) continue;
                out_p = p;
                out_c = c;
                person_cursor = p + 1;
                return true;
            }
        }
        return false;
    };

    // Padding up to the train quota, cycling plays_for (with its implied
    // citizenship) and the relations that got no core edge so each is covered.
    std::vector<std::size_t> pad_rels = {0};
    for (std::size_t r = 0; r < n_rel; ++r)
        if (relation_use[r] == 0) pad_rels.push_back(r);
    const std::size_t pad_target = spec.triplets - spec.heldout;
    std::size_t pad_i = 0;
    while (train.size() < pad_target) {
        const std::size_t rel = pad_rels[pad_i++ % pad_rels.size()];
        std::size_t p = 0, c = 0;
        const bool with_citizen = rel == 0 && has_citizen && train.size() + 2 <= pad_target;
        if (!next_pair(with_citizen, p, c))
            throw std::runtime_error("fixture: person/club pairing space exhausted before quota");
        emit(train, persons[p], rel, clubs[c]);
        club_used[p][c] = 1;
        if (with_citizen) {
            emit(train, persons[p], 2, countries[country_of_club[c]]);
            citizen_used[p][country_of_club[c]] = 1;
        }
    }
    for (std::size_t r = 0; r < n_rel; ++r)
        if (relation_use[r] == 0) throw std::runtime_error("fixture: quota too small to cover relation " + rel_names[r]);

    // Held-out citizenships: the club evidence goes into the training graph,
    // the implied citizenship fact is written to heldout.tsv only.
    for (std::size_t k = 0; k < spec.heldout; ++k) {
        std::size_t p = 0, c = 0;
        if (!next_pair(true, p, c)) throw std::runtime_error("fixture: cannot place held-out facts");
        emit(train, persons[p], 0, clubs[c]);
        club_used[p][c] = 1;
        emit(held, persons[p], 2, countries[country_of_club[c]]);
        citizen_used[p][country_of_club[c]] = 1;
    }

    // Templates for the roster; extras go through the fallback-style pattern.
    std::vector<std::pair<std::string, std::string>> templates = {
        {"plays_for", "{h} plays for {t}."},
        {"located_in", "{h} is located in {t}."},
    };
    if (has_citizen) templates.push_back({"citizen_of", "{h} is a citizen of {t}."});
    if (has_birth) templates.push_back({"born_in", "{h} was born in {t}."});
    if (has_city_in) templates.push_back({"city_in", "{h} is a city of {t}."});
    for (const auto& name : rel_names) {
        bool known = false;
        for (const auto& [rel, _] : templates) known = known || rel == name;
        if (!known) templates.push_back({name, "{h} " + detail::label_surface(name) + " {t}."});
    }

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    FixtureFiles files;
    files.kg = (fs::path(out_dir) / "kg.tsv").string();
    files.heldout = (fs::path(out_dir) / "heldout.tsv").string();
    files.corpus = (fs::path(out_dir) / "corpus.txt").string();
    files.templates = (fs::path(out_dir) / "templates.tsv").string();
    files.synonyms = (fs::path(out_dir) / "synonyms.tsv").string();

    auto write_triplets = [](const std::string& path, const std::vector<std::array<std::string, 3>>& rows) {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("fixture: cannot write " + path);
        for (const auto& row : rows) out << row[0] << '\t' << row[1] << '\t' << row[2] << '\n';
    };
    write_triplets(files.kg, train);
    write_triplets(files.heldout, held);

    {
        std::ofstream out(files.templates);
        for (const auto& [rel, pattern] : templates) out << rel << '\t' << pattern << '\n';
    }
    {
        std::ofstream out(files.synonyms);
        for (std::size_t i = 0; i < std::min<std::size_t>(3, np); ++i)
            out << persons[i] << '\t' << persons[i] << "|Alias" << detail::zero_pad(i, 2) << '\n';
    }

    // Verbalize the training triplets through the real library path so corpus
    // sentences align back to exactly their generating triplet.
    KnowledgeGraph kg;
    for (const auto& row : train) kg.add(row[0], row[1], row[2]);
    std::ifstream template_in(files.templates);
    const auto template_table = TemplateTable::load(template_in);
    {
        std::ofstream out(files.corpus);
        for (const auto& t : kg.triplets()) out << verbalize(t, kg, template_table) << '\n';
    }

    for (std::size_t u = 0; u < spec.users; ++u) {
        const auto path = (fs::path(out_dir) / ("user" + std::to_string(u) + ".tsv")).string();
        std::ofstream out(path);
        if (!out) throw std::runtime_error("fixture: cannot write " + path);
        const auto& triplets = kg.triplets();
        for (std::size_t i = u; i < triplets.size(); i += spec.users) {
            const auto& t = triplets[i];
            out << kg.entity_label(t.head) << '\t' << kg.relation_label(t.relation) << '\t'
                << kg.entity_label(t.tail) << '\n';
        }
        files.private_kgs.push_back(path);
    }
    return files;
}

}  // namespace kgsc
