#include "sdqa/retrieval.hpp"

#include <algorithm>
#include <stdexcept>

namespace sdqa {

const char* to_string(ContextKind kind) {
    switch (kind) {
        case ContextKind::kHeadline: return "headline";
        case ContextKind::kTemporal: return "temporal";
        case ContextKind::kSentence: return "sentence";
    }
    return "?";
}

std::vector<ContextElement> candidate_window(const Document& doc, int sentence_index,
                                             const AnswerSpan& answer,
                                             const RetrievalConfig& cfg) {
    int n = static_cast<int>(doc.sentences.size());
    if (sentence_index < 0 || sentence_index >= n)
        throw std::invalid_argument("candidate_window: sentence index out of range");
    const TokenSeq& sent = doc.sentences[static_cast<std::size_t>(sentence_index)];
    if (answer.p_s < 0 || answer.p_f > static_cast<int>(sent.size()) ||
        answer.p_s >= answer.p_f)
        throw std::invalid_argument("candidate_window: answer span outside sentence");

    std::vector<ContextElement> s_i;
    s_i.push_back({ContextKind::kHeadline, doc.headline, -1});
    s_i.push_back({ContextKind::kTemporal, temporal_tokens(doc.date), -1});
    for (int j = sentence_index - cfg.k; j <= sentence_index + cfg.k; ++j) {
        if (j < 0 || j >= n) continue;
        if (j == sentence_index) {
            TokenSeq without;  // s'_i = s_i - {a}
            for (int p = 0; p < static_cast<int>(sent.size()); ++p)
                if (p < answer.p_s || p >= answer.p_f)
                    without.push_back(sent[static_cast<std::size_t>(p)]);
            s_i.push_back({ContextKind::kSentence, std::move(without), j});
        } else {
            s_i.push_back({ContextKind::kSentence, doc.sentences[static_cast<std::size_t>(j)], j});
        }
    }
    return s_i;
}

double weighted_f(double recall, double precision, double beta) {
    if (recall <= 0.0 || precision <= 0.0) return 0.0;
    return (1.0 + beta * beta) / (beta * beta / recall + 1.0 / precision);
}

FScore f_measure(const CorpusIndex& index, const TermSet& q, const TermSet& c, double beta) {
    double sq = index.score(q);
    if (sq <= 0.0) throw std::invalid_argument("f_measure: degenerate query, score(q) = 0");
    double overlap = index.overlap_score(q, c);
    if (overlap <= 0.0) return {0.0, 0.0, 0.0};
    double r = overlap / sq;
    double p = overlap / index.score(c);
    return {weighted_f(r, p, beta), r, p};
}

ContextCandidate best_context(const CorpusIndex& index, const TermSet& q,
                              const std::vector<ContextElement>& s_i,
                              const RetrievalConfig& cfg) {
    if (s_i.empty()) throw std::invalid_argument("best_context: empty candidate set");

    std::vector<TermSet> element_terms;
    element_terms.reserve(s_i.size());
    for (const auto& e : s_i) element_terms.push_back(index.term_set(e.tokens));

    ContextCandidate best;
    bool have = false;
    std::size_t m = s_i.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
        ContextCandidate cand;
        for (std::size_t j = 0; j < m; ++j) {
            if (!(mask & (std::size_t{1} << j))) continue;
            cand.element_indices.push_back(j);
            cand.terms.insert(element_terms[j].begin(), element_terms[j].end());
        }
        FScore fs = f_measure(index, q, cand.terms, cfg.f_beta);
        cand.f = fs.f;
        cand.r = fs.r;
        cand.p = fs.p;

        if (!have || cand.f > best.f ||
            (cand.f == best.f &&
             (cand.element_indices.size() < best.element_indices.size() ||
              (cand.element_indices.size() == best.element_indices.size() &&
               cand.element_indices < best.element_indices)))) {
            best = std::move(cand);
            have = true;
        }
    }
    for (std::size_t j : best.element_indices) best.element_kinds.push_back(s_i[j].kind);
    return best;
}

std::vector<const Document*> top_documents(const CorpusIndex& index, const TermSet& q,
                                           int top_m) {
    std::vector<std::pair<double, const Document*>> ranked;
    for (const auto& d : index.documents()) {
        TokenSeq all = d.headline;
        for (const auto& s : d.sentences) all.insert(all.end(), s.begin(), s.end());
        ranked.emplace_back(index.overlap_score(q, index.term_set(all)), &d);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second->id < b.second->id;
    });
    std::vector<const Document*> out;
    for (std::size_t i = 0; i < ranked.size() && i < static_cast<std::size_t>(top_m); ++i)
        out.push_back(ranked[i].second);
    return out;
}

std::vector<RetrievedPassage> search_passages(const CorpusIndex& index, const TermSet& q,
                                              const std::vector<AnswerSpan>& candidates,
                                              const RetrievalConfig& cfg) {
    std::set<std::string> kept;
    for (const Document* d : top_documents(index, q, cfg.top_m)) kept.insert(d->id);

    bool degenerate = index.score(q) <= 0.0;
    std::vector<RetrievedPassage> out;
    for (const auto& a : candidates) {
        if (!kept.count(a.doc_id)) continue;
        const Document* doc = index.find(a.doc_id);
        if (!doc) continue;
        RetrievedPassage rp;
        rp.span = a;
        if (degenerate) {
            rp.context.element_indices = {0};
        } else {
            rp.context = best_context(index, q,
                                      candidate_window(*doc, a.sentence_index, a, cfg), cfg);
        }
        out.push_back(std::move(rp));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.context.f != b.context.f) return a.context.f > b.context.f;
        if (a.span.doc_id != b.span.doc_id) return a.span.doc_id < b.span.doc_id;
        if (a.span.sentence_index != b.span.sentence_index)
            return a.span.sentence_index < b.span.sentence_index;
        if (a.span.p_s != b.span.p_s) return a.span.p_s < b.span.p_s;
        return a.span.p_f < b.span.p_f;
    });
    return out;
}

}  // namespace sdqa
