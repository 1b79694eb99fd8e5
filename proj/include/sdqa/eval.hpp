#ifndef SDQA_EVAL_HPP
#define SDQA_EVAL_HPP

#include <map>
#include <string>
#include <vector>

#include "sdqa/corpus.hpp"

namespace sdqa {

enum class EditOp { kMatch, kSubstitute, kDelete, kInsert };

struct WerReport {
    int substitutions = 0;
    int deletions = 0;
    int insertions = 0;
    int ref_len = 0;
    double wer = 0.0;

    int errors() const { return substitutions + deletions + insertions; }
};

struct Alignment {
    std::vector<EditOp> ops;
    WerReport report;
};

/// Minimal-edit alignment with unit costs; ties prefer substitution over
/// deletion over insertion. Throws on empty reference.
Alignment align(const TokenSeq& ref, const TokenSeq& hyp);

WerReport wer(const TokenSeq& ref, const TokenSeq& hyp);

struct HalfSplit {
    bool has_wh = false;
    TokenSeq ref_fh, ref_lh, hyp_fh, hyp_lh;
};

/// Splits the reference immediately before its last WH-word (the latter half
/// includes it) and the hypothesis at the aligned position. has_wh is false
/// when the reference contains no WH-word.
HalfSplit split_halves(const TokenSeq& ref, const TokenSeq& hyp, const TermSet& wh_lexicon);

struct HalfWer {
    bool has_wh = false;
    WerReport bh, fh, lh;
};

/// BH report plus FH/LH reports obtained by partitioning the BH alignment at
/// the WH boundary, so the half components sum to the whole.
HalfWer wer_halves(const TokenSeq& ref, const TokenSeq& hyp, const TermSet& wh_lexicon);

struct MrrReport {
    std::map<std::string, double> per_question;  // qid -> reciprocal rank
    double mean = 0.0;
    int question_count = 0;  // questions with non-empty gold
};

/// Reciprocal-rank scoring: 1/rank of the first correct answer among at most
/// five; 0 otherwise. Surfaces are compared case-folded against any gold
/// variant. Questions with empty gold sets are excluded from the mean.
MrrReport mrr(const std::map<std::string, std::vector<TokenSeq>>& results,
              const std::map<std::string, std::vector<TokenSeq>>& gold);

struct TTestReport {
    double t = 0.0;
    int df = 0;
    double p = 1.0;  // two-tailed
};

TTestReport paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

/// Two-tailed p for the Student t distribution with df degrees of freedom.
double student_t_two_tailed_p(double t, int df);

}  // namespace sdqa

#endif
