#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support.hpp"
#include "vsp/errors.hpp"
#include "vsp/normalizer.hpp"

using namespace vsp;
using Tokens = std::vector<std::string>;

TEST_CASE("hand-applied fixture tables") {
    const auto cfg = vsp_test::fixture_normalizer();
    CHECK(normalize("Do you have trouble urinating?", cfg).tokens == Tokens{"trouble", "urinate"});
    CHECK(normalize("Do you have trouble urinatting?", cfg).tokens == Tokens{"trouble", "urinate"});
    CHECK(normalize("How much did you take?", cfg).tokens == Tokens{"take"});
    CHECK(normalize("", cfg).tokens.empty());
    CHECK(normalize("   \t\n ", cfg).tokens.empty());
    CHECK(normalize("?!...", cfg).tokens.empty());
    CHECK(normalize("Do you have trouble urinating?", cfg).raw == "Do you have trouble urinating?");
}

TEST_CASE("punctuation and symbols become separators") {
    NormalizerConfig cfg;
    CHECK(normalize("pain,fever;nausea", cfg).tokens == Tokens{"pain", "fever", "nausea"});
    CHECK(normalize("I'm (really) sick!", cfg).tokens == Tokens{"i", "m", "really", "sick"});
    CHECK(normalize("10€ + 5$ = ok", cfg).tokens == Tokens{"10", "5", "ok"});
    CHECK(normalize("«avez-vous» mal ?", cfg).tokens == Tokens{"avez", "vous", "mal"});
}

TEST_CASE("unicode folding: NFC before lowercase") {
    NormalizerConfig cfg;
    // e + combining acute composes to é
    CHECK(normalize("Fie\xCC\x81vre", cfg).tokens == Tokens{"fi\xC3\xA9vre"});
    CHECK(normalize("FI\xC3\x89VRE", cfg).tokens == Tokens{"fi\xC3\xA9vre"});
    CHECK(fold_text("DOULEUR\xE2\x80\xA6") == "douleur ");
    // non-breaking space separates tokens
    CHECK(normalize("mal\xC2\xA0" "au ventre", cfg).tokens == Tokens{"mal", "au", "ventre"});
}

TEST_CASE("truncation at max_len") {
    NormalizerConfig cfg;
    std::string text;
    for (int i = 0; i < 80; ++i) text += "w" + std::to_string(i) + " ";
    const auto out = normalize(text, cfg);
    REQUIRE(out.tokens.size() == kMaxTokens);
    CHECK(out.tokens.front() == "w0");
    CHECK(out.tokens.back() == "w49");

    cfg.max_len = 3;
    CHECK(normalize("a b c d e", cfg).tokens == Tokens{"a", "b", "c"});
}

TEST_CASE("stopwords are removed after lemmatization") {
    NormalizerConfig cfg;
    cfg.stopwords = {"be"};
    cfg.lemma_map = {{"is", "be"}, {"was", "be"}};
    CHECK(normalize("it is what it was", cfg).tokens == Tokens{"it", "what", "it"});
}

TEST_CASE("table parsing") {
    const auto stop = parse_stopwords("# comment\nthe\n  A  \n\nyou # trailing\n");
    CHECK(stop == std::unordered_set<std::string>{"the", "a", "you"});

    const auto m = parse_mapping("Urinating\turinate\n# c\ntook\ttake\n");
    CHECK(m.at("urinating") == "urinate");
    CHECK(m.at("took") == "take");

    CHECK_THROWS_AS(parse_mapping("took take\n"), ParseError);
    try {
        parse_mapping("a\tb\nc\td\na\te\n");
        FAIL("duplicate not rejected");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_stopwords("two words\n"), ParseError);
}

TEST_CASE("validate rejects tables that break idempotence") {
    NormalizerConfig cfg;
    cfg.lemma_map = {{"took", "take"}, {"take", "taken"}};
    CHECK_THROWS_AS(cfg.validate(), ParseError);

    cfg.lemma_map = {{"took", "take"}};
    cfg.spell_map = {{"take", "tak"}};
    CHECK_THROWS_AS(cfg.validate(), ParseError);

    cfg.spell_map = {{"a", "b"}, {"b", "c"}};
    cfg.lemma_map.clear();
    CHECK_THROWS_AS(cfg.validate(), ParseError);

    CHECK_NOTHROW(vsp_test::fixture_normalizer().validate());
}

TEST_CASE("load_normalizer_config reports the failing file and line") {
    vsp_test::TempDir dir;
    vsp_test::write_file(dir / "stop.txt", "the\n");
    vsp_test::write_file(dir / "lemmas.tsv", "took\ttake\nbroken line\n");
    vsp_test::write_file(dir / "spell.tsv", "");
    try {
        load_normalizer_config(dir / "stop.txt", dir / "lemmas.tsv", dir / "spell.tsv");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("lemmas.tsv") != std::string::npos);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

namespace {

std::string random_utterance(std::mt19937_64& rng) {
    static const std::vector<std::string> pieces = {
        "Do",    "you",   "HAVE",       "trouble", "urinating", "urinatting", "?",   "!",    ",",  "took",
        "the",   "pains", "paine",      "much",    "É",         "e\xCC\x81",  "   ", "\t",   "-",  "a",
        "Pees",  "x",     "struggled",  "how",     "€",         "medications", "(",  "ok)", "'s", "\xC2\xA0"};
    std::uniform_int_distribution<std::size_t> len(0, 70), pick(0, pieces.size() - 1);
    std::string s;
    for (std::size_t i = 0, n = len(rng); i < n; ++i) {
        s += pieces[pick(rng)];
        if (rng() % 3) s += ' ';
    }
    return s;
}

}  // namespace

TEST_CASE("properties on random utterances") {
    const auto cfg = vsp_test::fixture_normalizer();
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::string raw = random_utterance(rng);
        const auto out = normalize(raw, cfg);
        CAPTURE(raw);
        CHECK(out.tokens.size() <= kMaxTokens);
        CHECK(normalize(join_tokens(out.tokens), cfg).tokens == out.tokens);
        for (const auto& t : out.tokens) {
            CHECK_FALSE(t.empty());
            CHECK_FALSE(cfg.stopwords.contains(t));
            CHECK(t.find(' ') == std::string::npos);
            CHECK(fold_text(t) == t);
            if (auto it = cfg.lemma_map.find(t); it != cfg.lemma_map.end()) CHECK(it->second == t);
        }
        CHECK(normalize(raw, cfg).tokens == out.tokens);
    }
}

TEST_CASE("shipped scenario tables validate") {
    const auto dir = vsp_test::scenario_dir();
    const auto cfg =
        load_normalizer_config(dir / "stopwords.txt", dir / "lemmas.tsv", dir / "spell.tsv");
    CHECK(normalize("Do you have trouble urinating?", cfg).tokens == Tokens{"trouble", "urinate"});
    CHECK(normalize("did you take medication?", cfg).tokens == Tokens{"take", "medication"});
    CHECK(normalize("how much did you take?", cfg).tokens == Tokens{"much", "take"});
}
