#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "support.hpp"
#include "vsp/augment.hpp"
#include "vsp/errors.hpp"

using namespace vsp;

namespace {

using Tokens = std::vector<std::string>;

ConceptLexicon urinate_lexicon() {
    return parse_lexicon("concept: ~urinate [ urinate pee ]\nconcept: ~pain [ pain ache hurt ]\n");
}

std::set<Tokens> as_set(const Expansion& e) { return {e.variants.begin(), e.variants.end()}; }

}  // namespace

TEST_CASE("urinate and pee give two variants") {
    const auto ex = expand({"trouble", "urinate"}, urinate_lexicon());
    CHECK(ex.variants == std::vector<Tokens>{{"trouble", "pee"}, {"trouble", "urinate"}});
    CHECK(ex.product == 2);
    CHECK_FALSE(ex.truncated);
}

TEST_CASE("no concept member gives the question itself") {
    const auto ex = expand({"open", "mouth"}, urinate_lexicon());
    CHECK(ex.variants == std::vector<Tokens>{{"open", "mouth"}});
    CHECK(ex.product == 1);
    CHECK(expand({}, urinate_lexicon()).variants == std::vector<Tokens>{{}});
}

TEST_CASE("two concept positions multiply") {
    const auto ex = expand({"pee", "pain"}, urinate_lexicon());
    CHECK(ex.variants.size() == 6);
    CHECK(ex.product == 6);
    std::set<Tokens> expected;
    for (const char* a : {"urinate", "pee"})
        for (const char* b : {"pain", "ache", "hurt"}) expected.insert({a, b});
    CHECK(as_set(ex) == expected);
}

TEST_CASE("repeated concept positions are counted before dedup") {
    const auto ex = expand({"pee", "pee"}, urinate_lexicon());
    CHECK(ex.product == 4);
    CHECK(ex.variants.size() == 4);
}

TEST_CASE("ambiguous token names both concepts") {
    ConceptLexicon lex;
    lex.add("~a", {"x", "y"});
    lex.add("~b", {"x", "z"});
    try {
        expand({"x"}, lex);
        FAIL("expected AmbiguityError");
    } catch (const AmbiguityError& e) {
        const std::string what = e.what();
        CHECK(what.find("~a") != std::string::npos);
        CHECK(what.find("~b") != std::string::npos);
    }
    CHECK_NOTHROW(expand({"y", "z"}, lex));
}

TEST_CASE("cap truncates lexicographically and keeps the original") {
    ConceptLexicon lex;
    lex.add("~big", {"a", "b", "c", "d"});
    const Tokens q{"d", "d", "d"};
    const auto ex = expand(q, lex, 10);
    CHECK(ex.product == 64);
    CHECK(ex.truncated);
    CHECK(ex.variants.size() == 10);
    CHECK(std::is_sorted(ex.variants.begin(), ex.variants.end()));
    CHECK(std::find(ex.variants.begin(), ex.variants.end(), q) != ex.variants.end());
    CHECK(ex.variants.front() == Tokens{"a", "a", "a"});

    const auto full = expand(q, lex, 64);
    CHECK_FALSE(full.truncated);
    CHECK(full.variants.size() == 64);
}

TEST_CASE("randomized count law, closure and original membership") {
    std::mt19937_64 rng(42);
    for (int fixture = 0; fixture < 100; ++fixture) {
        ConceptLexicon lex;
        std::vector<std::vector<std::string>> concepts;
        const std::size_t n_concepts = 1 + rng() % 4;
        for (std::size_t c = 0; c < n_concepts; ++c) {
            std::set<std::string> members;
            const std::size_t size = 1 + rng() % 4;
            for (std::size_t m = 0; m < size; ++m) members.insert("c" + std::to_string(c) + "m" + std::to_string(m));
            concepts.emplace_back(members.begin(), members.end());
            lex.add("~k" + std::to_string(c), members);
        }
        Tokens q;
        std::size_t expected = 1;
        for (std::size_t i = 0, n = 1 + rng() % 5; i < n; ++i) {
            if (rng() % 2) {
                const auto& c = concepts[rng() % concepts.size()];
                q.push_back(c[rng() % c.size()]);
                expected *= c.size();
            } else {
                q.push_back("plain" + std::to_string(rng() % 3));
            }
        }
        const auto ex = expand(q, lex);
        CAPTURE(fixture);
        CHECK(ex.product == expected);
        CHECK(ex.variants.size() == expected);
        CHECK(std::find(ex.variants.begin(), ex.variants.end(), q) != ex.variants.end());
        const auto set = as_set(ex);
        CHECK(set.size() == ex.variants.size());
        for (const auto& v : ex.variants) CHECK(as_set(expand(v, lex)) == set);
    }
}

TEST_CASE("corpus augmentation keeps originals and reports factors") {
    const auto norm = vsp_test::fixture_normalizer();
    const auto lex = parse_lexicon("concept: ~urinate [ urinate pee ]\n", norm);
    const std::vector<KbRecord> recs{{"Do you have trouble urinating?", "No", Category::symptoms, 1},
                                     {"How old are you?", "42", Category::personal, 2}};
    const auto out = augment_records(recs, norm, lex);
    REQUIRE(out.records.size() == 3);
    CHECK(out.records[0].question == recs[0].question);
    CHECK(out.records[1].question == "trouble pee");
    CHECK(out.records[1].answer == "No");
    CHECK(out.records[1].category == Category::symptoms);
    CHECK(out.records[2].question == recs[1].question);
    CHECK(out.report.input_count == 2);
    CHECK(out.report.output_count == 3);
    CHECK(out.report.factors == std::vector<std::size_t>{2, 1});
    const auto j = out.report.to_json();
    CHECK(j["output_count"] == 3);
    CHECK(j["truncated"].empty());
}
