#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "kgsc/source_coding.hpp"

using namespace kgsc;

TEST_CASE("fixed7 encodes 7 bits per character, big-endian") {
    CHECK(bits_to_string(fixed7_encode("A")) == "1000001");  // code point 65
    CHECK(fixed7_encode("").empty());
    CHECK_THROWS(fixed7_encode("caf\xc3\xa9"));

    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        std::string s;
        const auto len = uniform_below(rng, 40);
        for (std::size_t k = 0; k < len; ++k) s.push_back(static_cast<char>(32 + uniform_below(rng, 95)));
        const auto bits = fixed7_encode(s);
        CHECK(bits.size() == 7 * s.size());
        CHECK(fixed7_decode(bits) == s);
    }
    CHECK_THROWS(fixed7_decode(bits_from_string("101")));
}

TEST_CASE("huffman gives shorter codes to frequent symbols") {
    const auto table = HuffmanTable::build("aab");
    const auto codes = table.codes();
    REQUIRE(codes.size() == 2);
    CHECK(codes.at('a').size() <= codes.at('b').size());
    // Brute-force optimum for a two-symbol alphabet is one bit each,
    // so "aab" costs exactly 3 bits.
    CHECK(table.encode("aab").size() == 3);
}

TEST_CASE("huffman single-symbol corpus gets a one-bit code") {
    const auto table = HuffmanTable::build("zzzz");
    CHECK(table.codes().at('z').size() == 1);
    CHECK(table.decode(table.encode("zzz")) == "zzz");
}

TEST_CASE("huffman round-trips and rejects bad input") {
    const std::string corpus = "the quick brown fox jumps over the lazy dog";
    const auto table = HuffmanTable::build(corpus);
    CHECK(table.decode(table.encode(corpus)) == corpus);
    CHECK(table.decode(table.encode("dog over fox")) == "dog over fox");
    CHECK_THROWS(table.encode("symbols # not ! in corpus?"));

    auto bits = table.encode("the dog");
    bits.pop_back();  // mid-codeword truncation
    CHECK_THROWS(table.decode(bits));
}

TEST_CASE("huffman satisfies kraft equality and is prefix-free") {
    const auto table = HuffmanTable::build("abracadabra zoo! 123");
    CHECK(table.kraft_sum() == 1.0);  // complete code

    const auto codes = table.codes();
    for (const auto& [s1, c1] : codes)
        for (const auto& [s2, c2] : codes) {
            if (s1 == s2 || c1.size() > c2.size()) continue;
            CHECK_FALSE(std::equal(c1.begin(), c1.end(), c2.begin()));
        }
}

TEST_CASE("huffman beats fixed7 on skewed corpora") {
    const std::string corpus =
        "eee eee ee e the letter e dominates this corpus entirely, as e does in english text";
    const auto table = HuffmanTable::build(corpus);
    CHECK(table.encoded_length(corpus) < 7 * corpus.size());
}

TEST_CASE("huffman never loses to fixed7 over sub-128-symbol alphabets") {
    // Optimality of the prefix code: the 7-bit fixed code is itself a prefix
    // code over any <=128-symbol alphabet, so Huffman can only match or win.
    Rng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        std::string corpus;
        const auto len = 10 + uniform_below(rng, 400);
        const auto alphabet = 2 + uniform_below(rng, 60);
        for (std::size_t i = 0; i < len; ++i)
            corpus.push_back(static_cast<char>(' ' + uniform_below(rng, alphabet)));
        const auto table = HuffmanTable::build(corpus);
        CHECK(table.encoded_length(corpus) <= 7 * corpus.size());
    }
}

TEST_CASE("huffman tables are deterministic") {
    const std::string corpus = "deterministic tie break check: aabbccdd eeff";
    const auto a = HuffmanTable::build(corpus).codes();
    const auto b = HuffmanTable::build(corpus).codes();
    CHECK(a == b);
}

TEST_CASE("compression report counts source bits per scheme") {
    std::istringstream kg_in("Alba_Iulia\tcountry\tRomania\n");
    const auto kg = KnowledgeGraph::load(kg_in);
    SynonymTable syn;
    const auto cb = make_codebook(123182, 37);  // 40-bit symbols

    const std::string sentence = "Alba Iulia is actually located inside Romania too.";
    REQUIRE(sentence.size() == 50);
    const auto huffman = HuffmanTable::build(sentence + " Nothing shared here.");

    const auto rows = compression_report(sentence, kg, syn, huffman, cb);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].triplet_count == 1);
    CHECK(rows[0].bits_semantic == 40);
    CHECK(rows[0].bits_fixed7 == 350);
    CHECK(rows[0].transmittable);

    const auto none = compression_report("Nothing shared here.", kg, syn, huffman, cb);
    REQUIRE(none.size() == 1);
    CHECK(none[0].bits_semantic == 0);
    CHECK_FALSE(none[0].transmittable);
}

TEST_CASE("semantic bits grow with triplet count, not characters") {
    std::istringstream kg_in(
        "a\tr\tb\n"
        "c\tr\td\n");
    const auto kg = KnowledgeGraph::load(kg_in);
    SynonymTable syn;
    const auto cb = build_codebook(kg);
    const std::string text =
        "a saw b. a saw b across a very very very long sentence stuffed with words. a saw b and c saw d.";
    const auto huffman = HuffmanTable::build(text);
    const auto rows = compression_report(text, kg, syn, huffman, cb);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].bits_semantic == rows[1].bits_semantic);   // same 1 triplet, different lengths
    CHECK(rows[0].bits_fixed7 < rows[1].bits_fixed7);
    CHECK(rows[2].bits_semantic == 2 * rows[0].bits_semantic);  // 2 triplets
}
