#include <doctest.h>

#include <random>
#include <string>

#include "linkpred/error.hpp"
#include "linkpred/textclean.hpp"
#include "linkpred/utf8.hpp"
#include "oracles.hpp"

using namespace linkpred;
using namespace linkpred::textclean;

namespace {

std::u32string random_text(std::mt19937_64& rng, std::u32string_view alphabet, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::u32string s(len(rng), U' ');
    for (auto& c : s) c = alphabet[pick(rng)];
    return s;
}

}  // namespace

TEST_CASE("balance_curly_braces worked examples") {
    // Expected values were traced by the literal interpreter and frozen.
    CHECK(oracle::balance_curly_braces(U"{{{foo}}") == U"{{foo}}");
    CHECK(oracle::balance_curly_braces(U"foo}} ") == U"foo");

    CHECK(balance_curly_braces(std::string_view{"{{foo}}"}) == "{{foo}}");
    CHECK(balance_curly_braces(std::string_view{"{{{foo}}"}) == "{{foo}}");
    CHECK(balance_curly_braces(std::string_view{"foo}} "}) == "foo");
    CHECK(balance_curly_braces(std::string_view{""}) == "");
}

TEST_CASE("balance strips even when already balanced") {
    CHECK(balance_curly_braces(std::string_view{"  {a} \n"}) == "{a}");
    CHECK(balance_curly_braces(std::string_view{"\t plain \v"}) == "plain");
}

TEST_CASE("balance drops leftmost surplus opens and rightmost surplus closes") {
    CHECK(balance_curly_braces(std::string_view{"{a{b}"}) == "a{b}");
    CHECK(balance_curly_braces(std::string_view{"{a}b}c}"}) == "{a}bc");
    CHECK(balance_curly_braces(std::string_view{"}}}"}) == "");
}

TEST_CASE("remove_brace_spans worked examples") {
    CHECK(oracle::remove_brace_spans(U"a{{b}}c") == U"ac");
    CHECK(oracle::remove_brace_spans(U"x{a{b}c}y") == U"xy");
    CHECK(oracle::remove_brace_spans(U"}{ab") == U"");

    CHECK(remove_brace_spans(std::string_view{"plain text"}) == "plain text");
    CHECK(remove_brace_spans(std::string_view{"a{{b}}c"}) == "ac");
    CHECK(remove_brace_spans(std::string_view{"x{a{b}c}y"}) == "xy");
    CHECK(remove_brace_spans(std::string_view{"}{ab"}) == "");
    CHECK(remove_brace_spans(std::string_view{""}) == "");
}

TEST_CASE("remove_brace_spans: stray close dropped, unmatched open swallows the rest") {
    CHECK(remove_brace_spans(std::string_view{"a}b"}) == "ab");
    CHECK(remove_brace_spans(std::string_view{"ab{cd"}) == "ab");
}

TEST_CASE("space-initialised buffer differs only by a leading space that despace removes") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        const auto t = random_text(rng, U"{} ab", 20);
        const auto literal = oracle::remove_brace_spans(t, U" ");
        CHECK(literal == U" " + remove_brace_spans(t));
        CHECK(normalize_whitespace(literal) == normalize_whitespace(remove_brace_spans(t)));
    }
}

TEST_CASE("strip_punctuation") {
    const CleanConfig cfg;
    CHECK(strip_punctuation(std::string_view{"Hello, world!"}, cfg) == "Hello world");
    CHECK(strip_punctuation(std::string_view{"a.b?c"}, cfg) == "abc");
    CHECK(strip_punctuation(std::string_view{"no punct here"}, cfg) == "no punct here");
    CHECK(strip_punctuation(std::string_view{"{x}"}, cfg) == "{x}");
    // Non-ASCII punctuation is kept unless configured.
    CHECK(strip_punctuation(std::string_view{"«ok»"}, cfg) == "«ok»");

    CleanConfig extended;
    extended.punctuation_set.insert(U'«');
    extended.punctuation_set.insert(U'»');
    CHECK(strip_punctuation(std::string_view{"«ok»"}, extended) == "ok");
}

TEST_CASE("punctuation set rejects braces and whitespace") {
    PunctuationSet set;
    CHECK_THROWS_AS(set.insert(U'{'), Error);
    CHECK_THROWS_AS(set.insert(U'}'), Error);
    CHECK_THROWS_AS(set.insert(U'\t'), Error);
    CHECK(PunctuationSet::ascii_default().size() == 30);
    CHECK_FALSE(PunctuationSet::ascii_default().contains(U'{'));
    CHECK(PunctuationSet::ascii_default().contains(U'\\'));
    CHECK(PunctuationSet::ascii_default().contains(U'`'));
}

TEST_CASE("normalize_whitespace") {
    CHECK(normalize_whitespace(std::string_view{"a  b\t c"}) == "a b c");
    CHECK(normalize_whitespace(std::string_view{"  x  "}) == "x");
    CHECK(normalize_whitespace(std::string_view{""}) == "");
    CHECK(normalize_whitespace(std::string_view{"a\r\n\f\vb"}) == "a b");
}

TEST_CASE("clean composes the stages in order") {
    const CleanConfig cfg;
    auto [out, report] = clean(std::string_view{"Intro {{Infobox | x=1}} text,  here."}, cfg);
    CHECK(out == "Intro text here");
    CHECK(report.input_length == 36);
    CHECK(report.output_length == 15);
    CHECK(report.braces_removed_balance == 0);
    CHECK(report.chars_removed_debrace == 17);

    CHECK(clean(std::string_view{""}, cfg).first == "");
    CHECK(clean(std::string_view{"{{a}}"}, cfg).first == "");

    auto [unbalanced, r2] = clean(std::string_view{"{{{x}} y"}, cfg);
    CHECK(unbalanced == "y");
    CHECK(r2.braces_removed_balance == 1);
}

TEST_CASE("stage mask switches stages off") {
    CleanConfig cfg;
    cfg.stages = StageMask::all().without(Stage::debrace);
    CHECK(clean(std::string_view{"a {{b}},  c"}, cfg).first == "a {{b}} c");

    cfg.stages = StageMask::none();
    CHECK(clean(std::string_view{" {a}, "}, cfg).first == " {a}, ");

    cfg.stages = StageMask::none().with(Stage::depunct);
    CHECK(clean(std::string_view{"a,{b}"}, cfg).first == "a{b}");
}

TEST_CASE("cleaning works on scalar values, not bytes") {
    const CleanConfig cfg;
    CHECK(clean(std::string_view{"Ханой {{инфо}}, Việt  Nam!"}, cfg).first == "Ханой Việt Nam");
    auto [_, report] = clean(std::string_view{"é{x}"}, cfg);
    CHECK(report.input_length == 4);
    CHECK(report.output_length == 1);
}

TEST_CASE("utf8 decode replaces malformed bytes") {
    CHECK(utf8::decode("a\xFF" "b") == U"a�b");
    CHECK(utf8::decode("\xC0\xAF") == U"��");  // overlong
    CHECK(utf8::decode("\xE2\x82") == U"��");  // truncated
    CHECK(utf8::encode(utf8::decode("€𝄞")) == "€𝄞");
}

TEST_CASE("differential: both brace stages agree with the literal interpreter") {
    std::mt19937_64 rng(20231);
    for (int i = 0; i < 5000; ++i) {
        const auto t = random_text(rng, U"{}a ", 20);
        REQUIRE(balance_curly_braces(std::u32string_view{t}) == oracle::balance_curly_braces(t));
        REQUIRE(remove_brace_spans(std::u32string_view{t}) == oracle::remove_brace_spans(t));
    }
}

TEST_CASE("properties over random text") {
    std::mt19937_64 rng(99);
    const CleanConfig cfg;
    for (int i = 0; i < 3000; ++i) {
        const auto t = random_text(rng, U"{}ab ,.!\t\n-é", 30);

        const auto balanced = balance_curly_braces(std::u32string_view{t});
        REQUIRE(oracle::count(balanced, U'{') == oracle::count(balanced, U'}'));

        // Debrace output is a subsequence of the non-brace characters.
        const auto debraced = remove_brace_spans(std::u32string_view{t});
        std::size_t k = 0;
        for (char32_t c : t) {
            if (k < debraced.size() && c == debraced[k]) ++k;
        }
        REQUIRE(k == debraced.size());
        REQUIRE(debraced.find_first_of(U"{}") == std::u32string::npos);

        const auto [once, report] = clean(std::u32string_view{t}, cfg);
        const auto twice = clean(std::u32string_view{once}, cfg).first;
        REQUIRE(once == twice);
        REQUIRE(report.output_length <= report.input_length);
        for (std::size_t j = 0; j < once.size(); ++j) {
            REQUIRE_FALSE(cfg.punctuation_set.contains(once[j]));
            if (j > 0) REQUIRE_FALSE((is_space(once[j]) && is_space(once[j - 1])));
        }
    }
}
