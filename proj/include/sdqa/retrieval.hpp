#ifndef SDQA_RETRIEVAL_HPP
#define SDQA_RETRIEVAL_HPP

#include <string>
#include <vector>

#include "sdqa/corpus.hpp"

namespace sdqa {

enum class ContextKind { kHeadline, kTemporal, kSentence };

const char* to_string(ContextKind kind);

struct ContextElement {
    ContextKind kind = ContextKind::kSentence;
    TokenSeq tokens;
    int sentence_index = -1;  // valid for kSentence only
};

/// Candidate answer substring: token positions [p_s, p_f) within one sentence.
struct AnswerSpan {
    std::string doc_id;
    int sentence_index = 0;
    int p_s = 0;
    int p_f = 0;
};

struct RetrievalConfig {
    int k = 1;            // sentence window radius
    double f_beta = 2.0;  // recall weight of the F-measure
    int top_m = 30;       // document pre-filter size
};

struct FScore {
    double f = 0.0;
    double r = 0.0;
    double p = 0.0;
};

struct ContextCandidate {
    std::vector<std::size_t> element_indices;  // positions within the S_i list
    std::vector<ContextKind> element_kinds;
    TermSet terms;
    double f = 0.0;
    double r = 0.0;
    double p = 0.0;
};

/// The candidate context set S_i: headline, temporal tokens, the k sentences
/// on each side, and the candidate's own sentence with the answer removed.
std::vector<ContextElement> candidate_window(const Document& doc, int sentence_index,
                                             const AnswerSpan& answer,
                                             const RetrievalConfig& cfg);

/// (1+beta^2) / (beta^2/recall + 1/precision); 0 when either input is 0.
double weighted_f(double recall, double precision, double beta);

/// Weighted F over IDF sums; F = 0 when the overlap is empty.
/// Throws when score(q) = 0 (degenerate query).
FScore f_measure(const CorpusIndex& index, const TermSet& q, const TermSet& c, double beta);

/// Exhaustive maximization of F over all non-empty subsets of S_i.
/// Ties: fewer elements first, then lexicographically earliest positions.
ContextCandidate best_context(const CorpusIndex& index, const TermSet& q,
                              const std::vector<ContextElement>& s_i,
                              const RetrievalConfig& cfg);

/// Documents ranked by query overlap, truncated to top_m. Ties by id.
std::vector<const Document*> top_documents(const CorpusIndex& index, const TermSet& q,
                                           int top_m);

struct RetrievedPassage {
    AnswerSpan span;
    ContextCandidate context;
};

/// best_context for every candidate within the top_m documents by query
/// overlap, sorted descending by F with deterministic tie-breaking.
std::vector<RetrievedPassage> search_passages(const CorpusIndex& index, const TermSet& q,
                                              const std::vector<AnswerSpan>& candidates,
                                              const RetrievalConfig& cfg);

}  // namespace sdqa

#endif
