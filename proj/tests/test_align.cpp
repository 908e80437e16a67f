#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "kgsc/align.hpp"

using namespace kgsc;

namespace {

KnowledgeGraph kg_from(const std::string& tsv) {
    std::istringstream in(tsv);
    return KnowledgeGraph::load(in);
}

}  // namespace

TEST_CASE("synonyms fall back to the word itself") {
    SynonymTable table;
    CHECK(synonyms("Chatou", table) == std::vector<std::string>{"chatou"});
    CHECK_THROWS(synonyms("  ...  ", table));  // empty after normalization
}

TEST_CASE("synonyms include the table entry plus the word") {
    SynonymTable table;
    table.add("USA", {"America", "the United States", "the US"});
    const auto set = synonyms("USA", table);
    CHECK(std::find(set.begin(), set.end(), "usa") != set.end());
    CHECK(std::find(set.begin(), set.end(), "america") != set.end());
    CHECK(std::find(set.begin(), set.end(), "the united states") != set.end());
    CHECK(std::find(set.begin(), set.end(), "the us") != set.end());
}

TEST_CASE("alignment matches head and tail in a sentence") {
    const auto kg = kg_from("Alba_Iulia\tcountry\tRomania\n");
    SynonymTable table;
    const auto msgs = align("Alba Iulia is located in Romania.", kg, table);
    REQUIRE(msgs.size() == 1);
    REQUIRE(msgs[0].triplets.size() == 1);
    CHECK(msgs[0].triplets[0] == kg.triplets()[0]);
}

TEST_CASE("alignment goes through the synonym table") {
    const auto kg = kg_from("University_of_Tampa\tisLocatedIn\tthe_United_States\n");
    SynonymTable table;
    table.add("the_United_States", {"the US", "America"});
    const auto msgs = align("The University of Tampa is located in the US.", kg, table);
    REQUIRE(msgs.size() == 1);
    REQUIRE(msgs[0].triplets.size() == 1);

    // Without the synonym row the tail cannot match.
    SynonymTable empty;
    CHECK(align("The University of Tampa is located in the US.", kg, empty)[0].triplets.empty());
}

TEST_CASE("sentences sharing no entity pair align to nothing") {
    const auto kg = kg_from("a\tr\tb\n");
    SynonymTable table;
    const auto msgs = align("Nothing relevant here.", kg, table);
    REQUIRE(msgs.size() == 1);
    CHECK(msgs[0].triplets.empty());
    CHECK(align("", kg, table).empty());
}

TEST_CASE("matching is whole-token, not substring") {
    // "art" must not align inside "party".
    const auto kg = kg_from("art\tr\tparis\n");
    SynonymTable table;
    CHECK(align("The party is in paris.", kg, table)[0].triplets.empty());
    CHECK(align("The art is in paris.", kg, table)[0].triplets.size() == 1);
}

TEST_CASE("multi-word entities match as token sequences") {
    const auto kg = kg_from("Boo_Young-tae\tplaysFor\tYangju_Citizen_FC\n");
    SynonymTable table;
    const auto msgs = align("Boo Young-tae plays for Yangju Citizen FC.", kg, table);
    REQUIRE(msgs[0].triplets.size() == 1);
    // Tokens out of order do not form the phrase.
    CHECK(align("Citizen Yangju FC hosts Boo Young-tae.", kg, table)[0].triplets.empty());
}

TEST_CASE("a sentence can align to several triplets") {
    const auto kg = kg_from("a\tr1\tb\na\tr2\tb\nc\tr1\tb\n");
    SynonymTable table;
    const auto msgs = align("a met b and c.", kg, table);
    REQUIRE(msgs.size() == 1);
    CHECK(msgs[0].triplets.size() == 3);
    // Output order equals graph iteration order.
    CHECK(msgs[0].triplets == kg.triplets());
}

TEST_CASE("sentence segmentation splits on terminators before whitespace") {
    const auto sentences = split_sentences("One here. Two there! Three? four");
    REQUIRE(sentences.size() == 4);
    CHECK(sentences[0] == "One here.");
    CHECK(sentences[1] == "Two there!");
    CHECK(sentences[2] == "Three?");
    CHECK(sentences[3] == "four");
    // Periods inside abbreviations do not split when not followed by space.
    CHECK(split_sentences("Blackpool F.C. rules").size() == 2);
}

TEST_CASE("alignment is case-insensitive") {
    const auto kg = kg_from("Chatou\tisLocatedIn\tFrance\n");
    SynonymTable table;
    const auto lower = align("chatou is located in france.", kg, table);
    const auto upper = align("CHATOU IS LOCATED IN FRANCE.", kg, table);
    REQUIRE(lower[0].triplets.size() == 1);
    CHECK(lower[0].triplets == upper[0].triplets);
}

TEST_CASE("alignment is monotone in the synonym table") {
    const auto kg = kg_from(
        "Paris\tcapital_of\tFrance\n"
        "Lyon\tlocated_in\tFrance\n"
        "Paris\ttwinned_with\tLyon\n");
    const std::string text = "The capital Paris lies in France. Lyon is in France too.";

    SynonymTable small;
    SynonymTable large;
    large.add("Paris", {"the capital"});
    large.add("France", {"the republic"});

    Rng rng(7);
    const auto before = align(text, kg, small);
    const auto after = align(text, kg, large);
    REQUIRE(before.size() == after.size());
    for (std::size_t s = 0; s < before.size(); ++s)
        for (const auto& t : before[s].triplets)
            CHECK(std::find(after[s].triplets.begin(), after[s].triplets.end(), t) != after[s].triplets.end());
}

TEST_CASE("synonym table loads from TSV") {
    std::istringstream in(
        "# aliases\n"
        "USA\tAmerica|the United States|the US\n"
        "Paris\tParis\n");
    const auto table = SynonymTable::load(in);
    CHECK(table.size() == 2);
    const auto set = synonyms("usa", table);
    CHECK(set.size() == 4);

    std::istringstream bad("notab\n");
    CHECK_THROWS(SynonymTable::load(bad));
}
