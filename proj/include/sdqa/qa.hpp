#ifndef SDQA_QA_HPP
#define SDQA_QA_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sdqa/phrase.hpp"
#include "sdqa/retrieval.hpp"

namespace sdqa {

enum class AnswerType {
    kPerson,
    kOrganization,
    kLocation,
    kDate,
    kMoney,
    kNumeric,
    kArtifact,
    kOther
};

const char* to_string(AnswerType type);
AnswerType answer_type_from_string(const std::string& name);

using TypeMap = std::map<TokenSeq, AnswerType>;

struct Question {
    TokenSeq tokens;
    std::optional<TokenSeq> matched_phrase;
    AnswerType expected_type = AnswerType::kOther;
    TermSet terms;  // content words, phrase tokens stripped
};

struct CandidateSpan {
    AnswerSpan span;
    AnswerType type = AnswerType::kOther;
    TokenSeq surface;
};

/// Pluggable answer-candidate annotator over a single sentence.
class SpanTagger {
public:
    virtual ~SpanTagger() = default;
    virtual std::vector<CandidateSpan> tag(const TokenSeq& sentence) const = 0;
};

/// Default tagger: date/numeric/money patterns, capitalized proper-noun runs
/// (tagged artifact), and an optional gazetteer of exact token sequences.
class RuleTagger : public SpanTagger {
public:
    RuleTagger() = default;
    explicit RuleTagger(std::map<TokenSeq, AnswerType> gazetteer)
        : gazetteer_(std::move(gazetteer)) {}

    std::vector<CandidateSpan> tag(const TokenSeq& sentence) const override;

private:
    std::map<TokenSeq, AnswerType> gazetteer_;
};

struct QaConfig {
    RetrievalConfig retrieval;
    double type_mismatch_weight = 0.1;  // lambda
    int max_answer_len = 6;
    int max_answers = 5;
};

/// Finds the longest fixed phrase in the question, attaches its mapped answer
/// type, and builds the retrieval term set from the remaining content words.
Question classify_question(const TokenSeq& tokens, const FixedPhraseSet& phrases,
                           const TypeMap& type_map, const TermSet& stoplist);

/// All maximal tagged spans of length <= max_len, in document order.
std::vector<CandidateSpan> extract_candidates(const Document& doc, const SpanTagger& tagger,
                                              int max_len);

/// L = F(best context) * type weight.
std::pair<double, ContextCandidate> score_answer(const CorpusIndex& index, const Question& q,
                                                 const CandidateSpan& a, const QaConfig& cfg);

struct ScoredAnswer {
    AnswerSpan span;
    TokenSeq surface;
    double l = 0.0;
    ContextCandidate context;
    AnswerType tagged_type = AnswerType::kOther;
};

/// End-to-end factoid answering: classify, retrieve, score, deduplicate by
/// case-folded surface, return the top answers (at most cfg.max_answers).
std::vector<ScoredAnswer> answer(const CorpusIndex& index, const TokenSeq& question,
                                 const FixedPhraseSet& phrases, const TypeMap& type_map,
                                 const SpanTagger& tagger, const QaConfig& cfg);

}  // namespace sdqa

#endif
