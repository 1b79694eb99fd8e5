#include "sdqa/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sdqa {

Alignment align(const TokenSeq& ref, const TokenSeq& hyp) {
    if (ref.empty()) throw std::invalid_argument("align: empty reference");
    std::size_t R = ref.size(), H = hyp.size();

    std::vector<std::vector<int>> cost(R + 1, std::vector<int>(H + 1, 0));
    std::vector<std::vector<EditOp>> back(R + 1, std::vector<EditOp>(H + 1, EditOp::kMatch));
    for (std::size_t i = 1; i <= R; ++i) {
        cost[i][0] = static_cast<int>(i);
        back[i][0] = EditOp::kDelete;
    }
    for (std::size_t j = 1; j <= H; ++j) {
        cost[0][j] = static_cast<int>(j);
        back[0][j] = EditOp::kInsert;
    }
    for (std::size_t i = 1; i <= R; ++i) {
        for (std::size_t j = 1; j <= H; ++j) {
            bool same = ref[i - 1] == hyp[j - 1];
            int diag = cost[i - 1][j - 1] + (same ? 0 : 1);
            int del = cost[i - 1][j] + 1;
            int ins = cost[i][j - 1] + 1;
            // tie preference: substitution/match, then deletion, then insertion
            int best = diag;
            EditOp op = same ? EditOp::kMatch : EditOp::kSubstitute;
            if (del < best) {
                best = del;
                op = EditOp::kDelete;
            }
            if (ins < best) {
                best = ins;
                op = EditOp::kInsert;
            }
            cost[i][j] = best;
            back[i][j] = op;
        }
    }

    Alignment a;
    std::size_t i = R, j = H;
    while (i > 0 || j > 0) {
        EditOp op = back[i][j];
        a.ops.push_back(op);
        switch (op) {
            case EditOp::kMatch:
            case EditOp::kSubstitute: --i; --j; break;
            case EditOp::kDelete: --i; break;
            case EditOp::kInsert: --j; break;
        }
    }
    std::reverse(a.ops.begin(), a.ops.end());

    for (EditOp op : a.ops) {
        if (op == EditOp::kSubstitute) ++a.report.substitutions;
        else if (op == EditOp::kDelete) ++a.report.deletions;
        else if (op == EditOp::kInsert) ++a.report.insertions;
    }
    a.report.ref_len = static_cast<int>(R);
    a.report.wer = static_cast<double>(a.report.errors()) / static_cast<double>(R);
    return a;
}

WerReport wer(const TokenSeq& ref, const TokenSeq& hyp) { return align(ref, hyp).report; }

namespace {

// Index of the token starting the latter half: the last WH-word occurrence.
// -1 when absent.
int wh_boundary(const TokenSeq& ref, const TermSet& wh_lexicon) {
    for (int i = static_cast<int>(ref.size()) - 1; i >= 0; --i)
        if (wh_lexicon.count(fold_case(ref[static_cast<std::size_t>(i)]))) return i;
    return -1;
}

// Number of alignment ops belonging to the first half: ops are consumed until
// the ref cursor reaches the boundary; insertions at the boundary go to the
// latter half.
std::size_t split_ops(const std::vector<EditOp>& ops, int boundary, int* hyp_boundary) {
    int r = 0, h = 0;
    std::size_t k = 0;
    for (; k < ops.size(); ++k) {
        if (r == boundary) break;
        switch (ops[k]) {
            case EditOp::kMatch:
            case EditOp::kSubstitute: ++r; ++h; break;
            case EditOp::kDelete: ++r; break;
            case EditOp::kInsert: ++h; break;
        }
    }
    if (hyp_boundary) *hyp_boundary = h;
    return k;
}

WerReport report_from_ops(const std::vector<EditOp>& ops, std::size_t begin, std::size_t end,
                          int ref_len) {
    WerReport rep;
    for (std::size_t k = begin; k < end; ++k) {
        if (ops[k] == EditOp::kSubstitute) ++rep.substitutions;
        else if (ops[k] == EditOp::kDelete) ++rep.deletions;
        else if (ops[k] == EditOp::kInsert) ++rep.insertions;
    }
    rep.ref_len = ref_len;
    rep.wer = rep.errors() == 0 ? 0.0
                                : static_cast<double>(rep.errors()) /
                                      static_cast<double>(std::max(ref_len, 1));
    return rep;
}

}  // namespace

HalfSplit split_halves(const TokenSeq& ref, const TokenSeq& hyp, const TermSet& wh_lexicon) {
    HalfSplit out;
    int b = wh_boundary(ref, wh_lexicon);
    if (b < 0) return out;
    out.has_wh = true;

    Alignment a = align(ref, hyp);
    int hb = 0;
    split_ops(a.ops, b, &hb);

    out.ref_fh.assign(ref.begin(), ref.begin() + b);
    out.ref_lh.assign(ref.begin() + b, ref.end());
    out.hyp_fh.assign(hyp.begin(), hyp.begin() + hb);
    out.hyp_lh.assign(hyp.begin() + hb, hyp.end());
    return out;
}

HalfWer wer_halves(const TokenSeq& ref, const TokenSeq& hyp, const TermSet& wh_lexicon) {
    HalfWer out;
    Alignment a = align(ref, hyp);
    out.bh = a.report;

    int b = wh_boundary(ref, wh_lexicon);
    if (b < 0) return out;
    out.has_wh = true;

    std::size_t cut = split_ops(a.ops, b, nullptr);
    out.fh = report_from_ops(a.ops, 0, cut, b);
    out.lh = report_from_ops(a.ops, cut, a.ops.size(), static_cast<int>(ref.size()) - b);
    return out;
}

MrrReport mrr(const std::map<std::string, std::vector<TokenSeq>>& results,
              const std::map<std::string, std::vector<TokenSeq>>& gold) {
    std::string missing;
    for (const auto& [qid, _] : results)
        if (!gold.count(qid)) missing += (missing.empty() ? "" : ", ") + qid;
    if (!missing.empty())
        throw std::invalid_argument("mrr: result qids missing from gold: " + missing);

    MrrReport rep;
    double sum = 0.0;
    for (const auto& [qid, answers] : gold) {
        if (answers.empty()) continue;  // unanswerable, excluded
        std::vector<TokenSeq> folded_gold;
        for (const auto& g : answers) folded_gold.push_back(fold_case(g));

        double score = 0.0;
        auto rit = results.find(qid);
        if (rit != results.end()) {
            const auto& ranked = rit->second;
            std::size_t limit = std::min<std::size_t>(ranked.size(), 5);
            for (std::size_t r = 0; r < limit; ++r) {
                TokenSeq surf = fold_case(ranked[r]);
                if (std::find(folded_gold.begin(), folded_gold.end(), surf) !=
                    folded_gold.end()) {
                    score = 1.0 / static_cast<double>(r + 1);
                    break;
                }
            }
        }
        rep.per_question[qid] = score;
        sum += score;
        ++rep.question_count;
    }
    rep.mean = rep.question_count == 0 ? 0.0 : sum / rep.question_count;
    return rep;
}

TTestReport paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("paired_t_test: length mismatch");
    std::size_t n = a.size();
    if (n < 2) throw std::invalid_argument("paired_t_test: need at least 2 pairs");

    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i] - mean;
        ss += d * d;
    }
    double sd = std::sqrt(ss / static_cast<double>(n - 1));

    TTestReport rep;
    rep.df = static_cast<int>(n) - 1;
    if (sd == 0.0) {
        rep.t = mean == 0.0 ? 0.0
                            : std::copysign(std::numeric_limits<double>::infinity(), mean);
        rep.p = mean == 0.0 ? 1.0 : 0.0;
        return rep;
    }
    rep.t = mean * std::sqrt(static_cast<double>(n)) / sd;
    rep.p = student_t_two_tailed_p(rep.t, rep.df);
    return rep;
}

namespace {

// Regularized incomplete beta via Lentz continued fraction.
double betacf(double a, double b, double x) {
    const int kMaxIter = 300;
    const double kEps = 3e-14, kFpMin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

double incbeta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log(1.0 - x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

double student_t_two_tailed_p(double t, int df) {
    if (df < 1) throw std::invalid_argument("student_t_two_tailed_p: df must be >= 1");
    if (std::isinf(t)) return 0.0;
    double x = df / (df + t * t);
    return incbeta(df / 2.0, 0.5, x);
}

}  // namespace sdqa
