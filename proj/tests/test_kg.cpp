#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "kgsc/kg.hpp"

using namespace kgsc;

namespace {

// Independent width oracle: exhaustive doubling until 2^w covers n.
unsigned width_oracle(std::uint64_t n) {
    unsigned w = 1;
    std::uint64_t p = 2;
    while (p < n) {
        p *= 2;
        ++w;
    }
    return w;
}

KnowledgeGraph kg_from(const std::string& tsv) {
    std::istringstream in(tsv);
    return KnowledgeGraph::load(in);
}

}  // namespace

TEST_CASE("kg loader builds vocabularies in first-appearance order") {
    const auto kg = kg_from(
        "Alba_Iulia\tcountry\tRomania\n"
        "Chatou\tisLocatedIn\tFrance\n"
        "Chatou\tcountry\tFrance\n");
    CHECK(kg.n_entities() == 4);
    CHECK(kg.n_relations() == 2);
    CHECK(kg.size() == 3);
    CHECK(kg.entity_label(0) == "Alba_Iulia");
    CHECK(kg.entity_label(1) == "Romania");
    CHECK(kg.relation_label(0) == "country");
    CHECK(kg.relation_label(1) == "isLocatedIn");
    CHECK(kg.contains(kg.resolve("Chatou", "country", "France")));
}

TEST_CASE("kg loader collapses duplicate lines") {
    const auto kg = kg_from("a\tr\tb\na\tr\tb\n");
    CHECK(kg.size() == 1);
}

TEST_CASE("kg loader ignores comments and reports malformed lines") {
    const auto kg = kg_from("# comment\na\tr\tb\n\n");
    CHECK(kg.size() == 1);

    std::istringstream two_fields("a\tr\tb\nx\ty\n");
    CHECK_THROWS_WITH(KnowledgeGraph::load(two_fields), Catch::Matchers::ContainsSubstring("line 2"));

    std::istringstream four_fields("a\tb\tc\td\n");
    CHECK_THROWS(KnowledgeGraph::load(four_fields));

    std::istringstream empty("# nothing\n");
    CHECK_THROWS(KnowledgeGraph::load(empty));
}

TEST_CASE("kg role indexes track heads and tails") {
    const auto kg = kg_from("a\tr\tb\nc\tr\tb\nb\tr\td\n");
    const auto a = *kg.entity_id("a");
    const auto b = *kg.entity_id("b");
    const auto c = *kg.entity_id("c");
    const auto d = *kg.entity_id("d");
    CHECK(kg.head_entities() == std::vector<EntityId>{a, b, c});
    CHECK(kg.tail_entities() == std::vector<EntityId>{b, d});
}

TEST_CASE("kg load is idempotent through serialization") {
    const auto kg = kg_from("u\tr1\tv\nw\tr2\tu\nv\tr1\tw\n");
    std::ostringstream out;
    kg.save(out);
    const auto again = kg_from(out.str());
    CHECK(again.entities() == kg.entities());
    CHECK(again.relations() == kg.relations());
    CHECK(again.triplets() == kg.triplets());
}

TEST_CASE("codebook widths are minimal") {
    CHECK(make_codebook(123182, 37).entity_width == width_oracle(123182));
    CHECK(make_codebook(123182, 37).entity_width == 17);
    CHECK(make_codebook(123182, 37).relation_width == width_oracle(37));
    CHECK(make_codebook(123182, 37).relation_width == 6);
    CHECK(make_codebook(1, 1).entity_width == 1);  // singleton vocabulary stays one bit wide

    // 2^(w-1) < n <= 2^w for n > 1, across a sweep.
    for (std::uint64_t n = 2; n <= 5000; n += 7) {
        const unsigned w = min_bit_width(n);
        CHECK((1ull << (w - 1)) < n);
        CHECK(n <= (1ull << w));
    }
}

TEST_CASE("symbol codec layout is head|relation|tail, big-endian") {
    const auto cb = make_codebook(4, 2);  // widths (2, 1)
    REQUIRE(cb.entity_width == 2);
    REQUIRE(cb.relation_width == 1);
    const auto bits = encode_symbol(Triplet{2, 1, 3}, cb);
    CHECK(bits_to_string(bits) == "10111");
    CHECK(bits.size() == 5);

    CHECK(make_codebook(123182, 37).symbol_width() == 17 + 6 + 17);  // 40-bit symbols at YAGO scale
    CHECK_THROWS(encode_symbol(Triplet{4, 0, 0}, cb));
}

TEST_CASE("symbol decode flags out-of-vocabulary fields") {
    const auto kg = kg_from("a\tr\tb\nb\ts\tc\n");  // |E|=3, |R|=2
    const auto cb = build_codebook(kg);
    REQUIRE(cb.entity_width == 2);
    REQUIRE(cb.relation_width == 1);

    const auto d = decode_symbol(bits_from_string("11 0 00"), cb, kg);
    CHECK(d.raw.head == 3);
    CHECK_FALSE(d.head_valid);
    CHECK(d.relation_valid);
    CHECK(d.tail_valid);
    CHECK_FALSE(d.valid());

    // |R|=2 occupies the whole 1-bit code space: the relation field can never be invalid.
    for (int b = 0; b <= 1; ++b) {
        BitVector bits = bits_from_string(b ? "00 1 00" : "00 0 00");
        CHECK(decode_symbol(bits, cb, kg).relation_valid);
    }

    CHECK_THROWS(decode_symbol(bits_from_string("0000"), cb, kg));
}

TEST_CASE("symbol codec round-trips over random valid triplets") {
    const auto kg = kg_from(
        "e0\tr0\te1\ne1\tr1\te2\ne2\tr2\te3\ne3\tr0\te4\n"
        "e4\tr1\te5\ne5\tr2\te6\ne6\tr0\te0\n");
    const auto cb = build_codebook(kg);
    Rng rng(2024);
    for (int i = 0; i < 500; ++i) {
        const Triplet t{static_cast<EntityId>(uniform_below(rng, kg.n_entities())),
                        static_cast<RelationId>(uniform_below(rng, kg.n_relations())),
                        static_cast<EntityId>(uniform_below(rng, kg.n_entities()))};
        const auto bits = encode_symbol(t, cb);
        REQUIRE(bits.size() == cb.symbol_width());
        const auto d = decode_symbol(bits, cb, kg);
        CHECK(d.valid());
        CHECK(d.raw == t);
    }
}

TEST_CASE("kg subset shares vocabulary ids") {
    const auto kg = kg_from("a\tr\tb\nb\tr\tc\nc\tr\ta\n");
    const auto sub = KnowledgeGraph::subset(kg, {kg.triplets()[1]});
    CHECK(sub.size() == 1);
    CHECK(sub.n_entities() == kg.n_entities());
    CHECK(sub.contains(kg.triplets()[1]));
    CHECK_FALSE(sub.contains(kg.triplets()[0]));
}

// Full-scale corpus check, exercised only when a local copy of the public
// dataset is present (YAGO3-10 train split: 1079029 triplets, 123182
// entities, 37 relations).
TEST_CASE("kg loader at dataset scale", "[.][dataset]") {
    const char* path = std::getenv("KGSC_YAGO3_TRAIN");
    if (!path) SKIP("set KGSC_YAGO3_TRAIN to run");
    const auto kg = KnowledgeGraph::load_file(path);
    CHECK(kg.size() == 1079029);
    CHECK(kg.n_entities() == 123182);
    CHECK(kg.n_relations() == 37);
}
