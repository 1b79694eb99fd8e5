#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sdqa/phrase.hpp"

using namespace sdqa;

namespace {

FixedPhraseSet two_phrases() {
    return FixedPhraseSet::build({{"what", "is", "the", "name"},
                                  {"when", "did", "it", "happen"}});
}

}  // namespace

TEST_CASE("prefix lookup follows the trie") {
    FixedPhraseSet p = two_phrases();
    CHECK(p.is_prefix({"what"}));
    CHECK(p.is_prefix({"what", "is"}));
    CHECK(p.is_prefix({"what", "is", "the", "name"}));
    CHECK_FALSE(p.is_prefix({"is"}));
    CHECK_FALSE(p.is_prefix({"what", "the"}));
    CHECK_FALSE(p.is_prefix({}));
}

TEST_CASE("is_phrase requires a terminal node") {
    FixedPhraseSet p = two_phrases();
    CHECK(p.is_phrase({"when", "did", "it", "happen"}));
    CHECK_FALSE(p.is_phrase({"when", "did", "it"}));
}

TEST_CASE("duplicate phrases collapse") {
    TokenSeq a = {"x", "y"};
    FixedPhraseSet p = FixedPhraseSet::build({a, a, a});
    CHECK(p.phrases().size() == 1);
}

TEST_CASE("build rejects empty input") {
    CHECK_THROWS_AS(FixedPhraseSet::build({}), std::invalid_argument);
    CHECK_THROWS_AS(FixedPhraseSet::build({{}}), std::invalid_argument);
}

TEST_CASE("substring index holds every contiguous piece and nothing else") {
    TokenSeq phrase = {"a", "b", "c"};
    FixedPhraseSet p = FixedPhraseSet::build({phrase});
    for (std::size_t i = 0; i < phrase.size(); ++i)
        for (std::size_t len = 1; i + len <= phrase.size(); ++len)
            CHECK(p.is_substring(TokenSeq(phrase.begin() + static_cast<std::ptrdiff_t>(i),
                                          phrase.begin() +
                                              static_cast<std::ptrdiff_t>(i + len))));
    CHECK_FALSE(p.is_substring({"a", "c"}));
    CHECK_FALSE(p.is_substring({"c", "b"}));
}

TEST_CASE("find_longest_occurrence prefers length, then earliest start") {
    FixedPhraseSet p = FixedPhraseSet::build({{"b", "c"}, {"a", "b", "c", "d"}});
    TokenSeq text = {"x", "a", "b", "c", "d", "y"};
    auto hit = p.find_longest_occurrence(text);
    REQUIRE(hit.has_value());
    CHECK(hit->first == 1);
    CHECK(hit->second == 4);

    FixedPhraseSet q = FixedPhraseSet::build({{"u", "v"}});
    TokenSeq twice = {"u", "v", "w", "u", "v"};
    auto h2 = q.find_longest_occurrence(twice);
    REQUIRE(h2.has_value());
    CHECK(h2->first == 0);

    CHECK_FALSE(q.find_longest_occurrence({"w", "w"}).has_value());
}

TEST_CASE("phrase files are one phrase per line") {
    std::stringstream ss("what is the name\nwhen did it happen\n");
    auto phrases = read_phrase_lines(ss);
    REQUIRE(phrases.size() == 2);
    CHECK(phrases[0] == TokenSeq{"what", "is", "the", "name"});

    std::stringstream bad("what is the name\n\nwhen did it happen\n");
    CHECK_THROWS_WITH_AS(read_phrase_lines(bad), doctest::Contains("line 2"),
                         std::runtime_error);
}

TEST_CASE("classification of hand examples") {
    FixedPhraseSet p = two_phrases();

    NGramClass c = classify_ngram({"1976", "what"}, p, 3);
    CHECK(c.kind == NGramClass::kBoundaryMatch);
    CHECK(c.prefix_len == 1);

    c = classify_ngram({"said", "what", "is"}, p, 3);
    CHECK(c.kind == NGramClass::kBoundaryMatch);
    CHECK(c.prefix_len == 2);

    // whole gram inside a phrase, no postfix that starts one
    c = classify_ngram({"is", "the", "name"}, p, 3);
    CHECK(c.kind == NGramClass::kInteriorMatch);

    c = classify_ngram({"the", "name", "of"}, p, 3);
    CHECK(c.kind == NGramClass::kNoMatch);

    CHECK_THROWS_AS(classify_ngram({}, p, 3), std::invalid_argument);
    CHECK_THROWS_AS(classify_ngram({"a", "b", "c", "d"}, p, 3), std::invalid_argument);
}

TEST_CASE("a boundary postfix wins over an interior match") {
    // "the what": interior nowhere, but also "did it" sits inside a phrase
    // while its postfix "it" is not a phrase prefix.
    FixedPhraseSet p = two_phrases();
    NGramClass c = classify_ngram({"did", "it"}, p, 2);
    CHECK(c.kind == NGramClass::kInteriorMatch);

    // postfix "when" starts a phrase even though "it happen when" is nowhere
    c = classify_ngram({"it", "happen", "when"}, p, 3);
    CHECK(c.kind == NGramClass::kBoundaryMatch);
    CHECK(c.prefix_len == 1);
}

TEST_CASE("gamma = 1 leaves every count bit-identical") {
    NGramTable t = count_ngrams({{"ask", "what", "is", "the", "name"}}, 2, 100);
    FixedPhraseSet p = two_phrases();
    NGramTable e = emphasize_counts(t, p, {1.0, 2});
    for (int n = 1; n <= 2; ++n)
        CHECK(t.counts[static_cast<std::size_t>(n - 1)] ==
              e.counts[static_cast<std::size_t>(n - 1)]);
}

TEST_CASE("emphasis scales boundary bigrams and interior top-order grams") {
    NGramTable t = count_ngrams({{"ask", "what", "is", "the", "name"}}, 2, 100);
    FixedPhraseSet p = two_phrases();
    NGramTable e = emphasize_counts(t, p, {50.0, 2});
    auto id = [&](const char* w) { return t.vocab.id(w); };

    CHECK(e.count({id("ask"), id("what")}) == 50.0);   // boundary, k = 1
    CHECK(e.count({id("what"), id("is")}) == 50.0);    // interior at top order
    CHECK(e.count({id("is"), id("the")}) == 50.0);
    CHECK(e.count({id("the"), id("name")}) == 50.0);
    CHECK(e.count({Vocabulary::kStartId, id("ask")}) == 1.0);
    CHECK(e.count({id("name"), Vocabulary::kEndId}) == 1.0);

    // unigrams are interior matches below the top order: untouched
    for (const char* w : {"what", "is", "the", "name", "ask"})
        CHECK(e.count({id(w)}) == t.count({id(w)}));
}

TEST_CASE("order mismatch and gamma below one are rejected") {
    NGramTable t = count_ngrams({{"a", "b"}}, 2, 100);
    FixedPhraseSet p = two_phrases();
    CHECK_THROWS_AS(emphasize_counts(t, p, {50.0, 3}), std::invalid_argument);
    CHECK_THROWS_AS(emphasize_counts(t, p, {0.5, 2}), std::invalid_argument);
}

TEST_CASE("adapted models stay normalized") {
    std::vector<TokenSeq> corpus = {
        {"ask", "what", "is", "the", "name", "of", "it"},
        {"they", "ask", "when", "did", "it", "happen"},
        {"the", "name", "was", "lost"}};
    NGramTable t = count_ngrams(corpus, 3, 100);
    BackoffModel m = adapt(t, two_phrases(), {50.0, 3}, 0.5);
    for (int n = 1; n < m.order(); ++n) {
        for (const auto& [gram, entry] : m.grams(n)) {
            if (!entry.has_bow) continue;
            double sum = 0.0;
            for (int w = 1; w < static_cast<int>(m.vocab().size()); ++w)
                sum += std::exp(m.token_log_prob(gram, w));
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("raising gamma raises the phrase-continuation probability") {
    std::vector<TokenSeq> corpus = {
        {"ask", "what", "is", "the", "name"},
        {"what", "went", "wrong"},
        {"is", "it", "done"}};
    NGramTable t = count_ngrams(corpus, 2, 100);
    FixedPhraseSet p = two_phrases();
    std::vector<int> h = {t.vocab.id("what")};
    int w = t.vocab.id("is");

    double prev = -1.0;
    for (double gamma : {1.0, 5.0, 50.0, 500.0}) {
        BackoffModel m = adapt(t, p, {gamma, 2}, 0.5);
        double cur = std::exp(m.token_log_prob(h, w));
        CHECK(cur > prev);
        prev = cur;
    }
    CHECK(prev < 1.0);
}

TEST_CASE("adapt equals emphasize then fit") {
    std::vector<TokenSeq> corpus = {{"ask", "what", "is", "the", "name"}};
    NGramTable t = count_ngrams(corpus, 2, 100);
    FixedPhraseSet p = two_phrases();
    BackoffModel a = adapt(t, p, {50.0, 2}, 0.5);
    BackoffModel b = fit_backoff(emphasize_counts(t, p, {50.0, 2}), 0.5);
    CHECK(a.log_prob({"ask", "what", "is"}) == b.log_prob({"ask", "what", "is"}));
}
