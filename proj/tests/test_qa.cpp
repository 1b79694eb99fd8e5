#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sdqa/qa.hpp"

using namespace sdqa;

namespace {

Document doc(const std::string& id, std::vector<TokenSeq> sentences,
             TokenSeq headline = {"headline"}) {
    Document d;
    d.id = id;
    d.date = Date{1998, 5, 17};
    d.headline = std::move(headline);
    d.sentences = std::move(sentences);
    return d;
}

FixedPhraseSet qa_phrases() {
    return FixedPhraseSet::build({{"what", "was", "the", "name"},
                                  {"what", "year", "was", "it"}});
}

TypeMap qa_types() {
    return {{{"what", "was", "the", "name"}, AnswerType::kArtifact},
            {{"what", "year", "was", "it"}, AnswerType::kDate}};
}

}  // namespace

TEST_CASE("answer type names round trip") {
    for (auto t : {AnswerType::kPerson, AnswerType::kDate, AnswerType::kMoney,
                   AnswerType::kArtifact, AnswerType::kOther})
        CHECK(answer_type_from_string(to_string(t)) == t);
    CHECK_THROWS_AS(answer_type_from_string("gadget"), std::invalid_argument);
}

TEST_CASE("classify_question strips the longest phrase and stop words") {
    FixedPhraseSet p = qa_phrases();
    TypeMap tm = qa_types();
    TermSet stop = {"the", "of", "was"};

    Question q = classify_question(
        {"what", "was", "the", "name", "of", "the", "probe"}, p, tm, stop);
    REQUIRE(q.matched_phrase.has_value());
    CHECK(*q.matched_phrase == TokenSeq{"what", "was", "the", "name"});
    CHECK(q.expected_type == AnswerType::kArtifact);
    CHECK(q.terms == TermSet{"probe"});
}

TEST_CASE("a question without any phrase keeps type other") {
    Question q = classify_question({"tell", "me", "more"}, qa_phrases(), qa_types(), {});
    CHECK_FALSE(q.matched_phrase.has_value());
    CHECK(q.expected_type == AnswerType::kOther);
    CHECK(q.terms == TermSet{"tell", "me", "more"});
}

TEST_CASE("rule tagger patterns") {
    RuleTagger tagger;
    auto spans = tagger.tag({"Vostok", "cost", "$400", "or", "12", "dollars", "in", "1961",
                             "buying", "7", "units"});
    REQUIRE(spans.size() == 5);

    CHECK(spans[0].surface == TokenSeq{"Vostok"});
    CHECK(spans[0].type == AnswerType::kArtifact);
    CHECK(spans[1].surface == TokenSeq{"$400"});
    CHECK(spans[1].type == AnswerType::kMoney);
    CHECK(spans[2].surface == TokenSeq{"12", "dollars"});
    CHECK(spans[2].type == AnswerType::kMoney);
    CHECK(spans[3].surface == TokenSeq{"1961"});
    CHECK(spans[3].type == AnswerType::kDate);
    CHECK(spans[4].surface == TokenSeq{"7"});
    CHECK(spans[4].type == AnswerType::kNumeric);
}

TEST_CASE("capitalized runs are maximal") {
    RuleTagger tagger;
    auto spans = tagger.tag({"the", "Mars", "Pathfinder", "mission"});
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].surface == TokenSeq{"Mars", "Pathfinder"});
    CHECK(spans[0].span.p_s == 1);
    CHECK(spans[0].span.p_f == 3);
}

TEST_CASE("gazetteer hits absorb overlapping shorter spans") {
    RuleTagger tagger({{{"Mars", "Pathfinder", "mission"}, AnswerType::kArtifact}});
    auto spans = tagger.tag({"the", "Mars", "Pathfinder", "mission", "ended"});
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].surface == TokenSeq{"Mars", "Pathfinder", "mission"});
}

TEST_CASE("year spans are not repeated as numerics") {
    RuleTagger tagger;
    auto spans = tagger.tag({"in", "1998", "again"});
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].type == AnswerType::kDate);
}

TEST_CASE("extract_candidates enforces the length cap and records positions") {
    RuleTagger tagger;
    Document d = doc("d1", {{"Alpha", "Beta", "Gamma", "stop"}, {"in", "1961"}});
    auto all = extract_candidates(d, tagger, 6);
    REQUIRE(all.size() == 2);
    CHECK(all[0].span.doc_id == "d1");
    CHECK(all[0].span.sentence_index == 0);
    CHECK(all[1].span.sentence_index == 1);

    auto capped = extract_candidates(d, tagger, 2);
    REQUIRE(capped.size() == 1);  // the three-token run is dropped
    CHECK(capped[0].surface == TokenSeq{"1961"});
}

TEST_CASE("type mismatch multiplies the context score by lambda") {
    CorpusIndex idx = CorpusIndex::ingest({
        doc("d1", {{"the", "probe", "Vostok", "landed", "in", "1961"}}),
        doc("d2", {{"probe", "talk"}}),
        doc("d3", {{"unrelated", "text"}}),
        doc("d4", {{"more", "filler"}}),
    });
    QaConfig cfg;
    Question q;
    q.expected_type = AnswerType::kArtifact;
    q.terms = {"probe", "landed"};

    CandidateSpan name;
    name.span = {"d1", 0, 2, 3};
    name.type = AnswerType::kArtifact;
    CandidateSpan year;
    year.span = {"d1", 0, 5, 6};
    year.type = AnswerType::kDate;

    auto [l_name, ctx_name] = score_answer(idx, q, name, cfg);
    auto [l_year, ctx_year] = score_answer(idx, q, year, cfg);
    CHECK(l_name > 0.0);
    CHECK(ctx_name.f == doctest::Approx(ctx_year.f));
    CHECK(l_year == doctest::Approx(0.1 * l_name));

    // expected type "other" never penalizes
    q.expected_type = AnswerType::kOther;
    CHECK(score_answer(idx, q, year, cfg).first == doctest::Approx(l_name));
}

TEST_CASE("score_answer rejects unknown documents") {
    CorpusIndex idx = CorpusIndex::ingest({doc("d1", {{"a"}}), doc("d2", {{"b"}})});
    Question q;
    q.terms = {"a"};
    CandidateSpan c;
    c.span = {"nope", 0, 0, 1};
    CHECK_THROWS_AS(score_answer(idx, q, c, QaConfig{}), std::invalid_argument);
}

TEST_CASE("end-to-end answering ranks the planted fact first") {
    CorpusIndex idx = CorpusIndex::ingest(
        {
            doc("d1", {{"filler", "opening", "line"},
                       {"the", "probe", "Vostok", "landed", "on", "luna", "in", "1961"},
                       {"closing", "line"}},
                {"probe", "reaches", "luna"}),
            doc("d2", {{"the", "Kite", "company", "grew"}}),
            doc("d3", {{"weather", "report", "for", "luna"}}),
            doc("d4", {{"unrelated", "sports", "Final"}}),
        },
        {"the", "on", "in", "was", "what", "it", "year"});
    RuleTagger tagger;
    QaConfig cfg;

    auto ranked = answer(idx, {"the", "probe", "that", "landed", "on", "luna", "what",
                               "was", "the", "name"},
                         qa_phrases(), qa_types(), tagger, cfg);
    REQUIRE(!ranked.empty());
    CHECK(ranked[0].surface == TokenSeq{"Vostok"});
    CHECK(ranked[0].l > 0.0);
    CHECK(static_cast<int>(ranked.size()) <= cfg.max_answers);
    for (std::size_t i = 1; i < ranked.size(); ++i) CHECK(ranked[i].l <= ranked[i - 1].l);

    auto year = answer(idx, {"the", "probe", "Vostok", "landed", "on", "luna", "what",
                             "year", "was", "it"},
                       qa_phrases(), qa_types(), tagger, cfg);
    REQUIRE(!year.empty());
    CHECK(year[0].surface == TokenSeq{"1961"});
}

TEST_CASE("answers deduplicate by case-folded surface") {
    CorpusIndex idx = CorpusIndex::ingest({
        doc("d1", {{"the", "probe", "Vostok", "flew"},
                   {"later", "VOSTOK", "returned", "probe"}}),
        doc("d2", {{"x"}}),
        doc("d3", {{"y"}}),
        doc("d4", {{"z"}}),
    });
    RuleTagger tagger;
    auto ranked = answer(idx, {"probe", "what", "was", "the", "name"}, qa_phrases(),
                         qa_types(), tagger, QaConfig{});
    int vostoks = 0;
    for (const auto& r : ranked)
        if (fold_case(r.surface) == fold_case(TokenSeq{"Vostok"})) ++vostoks;
    CHECK(vostoks == 1);
}

TEST_CASE("empty questions are rejected") {
    RuleTagger tagger;
    CorpusIndex idx = CorpusIndex::ingest({doc("d1", {{"a"}}), doc("d2", {{"b"}})});
    CHECK_THROWS_AS(answer(idx, {}, qa_phrases(), qa_types(), tagger, QaConfig{}),
                    std::invalid_argument);
}
