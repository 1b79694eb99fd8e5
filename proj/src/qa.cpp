#include "sdqa/qa.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace sdqa {

const char* to_string(AnswerType type) {
    switch (type) {
        case AnswerType::kPerson: return "person";
        case AnswerType::kOrganization: return "organization";
        case AnswerType::kLocation: return "location";
        case AnswerType::kDate: return "date";
        case AnswerType::kMoney: return "money";
        case AnswerType::kNumeric: return "numeric";
        case AnswerType::kArtifact: return "artifact";
        case AnswerType::kOther: return "other";
    }
    return "other";
}

AnswerType answer_type_from_string(const std::string& name) {
    static const std::map<std::string, AnswerType> table = {
        {"person", AnswerType::kPerson},       {"organization", AnswerType::kOrganization},
        {"location", AnswerType::kLocation},   {"date", AnswerType::kDate},
        {"money", AnswerType::kMoney},         {"numeric", AnswerType::kNumeric},
        {"artifact", AnswerType::kArtifact},   {"other", AnswerType::kOther},
    };
    auto it = table.find(name);
    if (it == table.end()) throw std::invalid_argument("unknown answer type: " + name);
    return it->second;
}

namespace {

bool all_digits(const Token& t) {
    if (t.empty()) return false;
    return std::all_of(t.begin(), t.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

bool is_year(const Token& t) {
    return t.size() == 4 && all_digits(t) && t[0] >= '1' && t[0] <= '2';
}

bool is_capitalized(const Token& t) {
    return !t.empty() && std::isupper(static_cast<unsigned char>(t[0]));
}

bool is_currency_word(const Token& t) {
    return t == "yen" || t == "dollar" || t == "dollars" || t == "euro" || t == "euros";
}

}  // namespace

std::vector<CandidateSpan> RuleTagger::tag(const TokenSeq& sentence) const {
    std::vector<CandidateSpan> spans;
    int n = static_cast<int>(sentence.size());

    auto add = [&](int s, int f, AnswerType type) {
        CandidateSpan c;
        c.span.p_s = s;
        c.span.p_f = f;
        c.type = type;
        c.surface.assign(sentence.begin() + s, sentence.begin() + f);
        spans.push_back(std::move(c));
    };

    // Gazetteer entries, longest match per start position.
    for (int i = 0; i < n; ++i) {
        for (int len = std::min(n - i, 6); len >= 1; --len) {
            TokenSeq piece(sentence.begin() + i, sentence.begin() + i + len);
            auto it = gazetteer_.find(piece);
            if (it != gazetteer_.end()) {
                add(i, i + len, it->second);
                break;
            }
        }
    }

    for (int i = 0; i < n; ++i) {
        const Token& t = sentence[static_cast<std::size_t>(i)];
        if (t.size() > 1 && t[0] == '$' && all_digits(t.substr(1))) {
            add(i, i + 1, AnswerType::kMoney);
        } else if (all_digits(t) && i + 1 < n &&
                   is_currency_word(sentence[static_cast<std::size_t>(i + 1)])) {
            add(i, i + 2, AnswerType::kMoney);
        } else if (is_year(t)) {
            add(i, i + 1, AnswerType::kDate);
        } else if (all_digits(t)) {
            add(i, i + 1, AnswerType::kNumeric);
        }
    }

    // Maximal runs of capitalized tokens.
    for (int i = 0; i < n;) {
        if (!is_capitalized(sentence[static_cast<std::size_t>(i)])) {
            ++i;
            continue;
        }
        int j = i;
        while (j < n && is_capitalized(sentence[static_cast<std::size_t>(j)])) ++j;
        add(i, j, AnswerType::kArtifact);
        i = j;
    }

    // Keep maximal spans only: drop spans contained in an earlier, longer one.
    std::stable_sort(spans.begin(), spans.end(), [](const auto& a, const auto& b) {
        if (a.span.p_s != b.span.p_s) return a.span.p_s < b.span.p_s;
        return a.span.p_f > b.span.p_f;
    });
    std::vector<CandidateSpan> kept;
    for (auto& s : spans) {
        bool contained = std::any_of(kept.begin(), kept.end(), [&](const auto& k) {
            return k.span.p_s <= s.span.p_s && s.span.p_f <= k.span.p_f;
        });
        if (!contained) kept.push_back(std::move(s));
    }
    return kept;
}

Question classify_question(const TokenSeq& tokens, const FixedPhraseSet& phrases,
                           const TypeMap& type_map, const TermSet& stoplist) {
    Question q;
    q.tokens = tokens;

    TokenSeq rest = tokens;
    auto hit = phrases.find_longest_occurrence(tokens);
    if (hit) {
        auto [pos, len] = *hit;
        q.matched_phrase = TokenSeq(tokens.begin() + static_cast<std::ptrdiff_t>(pos),
                                    tokens.begin() + static_cast<std::ptrdiff_t>(pos + len));
        auto it = type_map.find(*q.matched_phrase);
        q.expected_type = it == type_map.end() ? AnswerType::kOther : it->second;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pos),
                   rest.begin() + static_cast<std::ptrdiff_t>(pos + len));
    }
    for (const auto& t : rest)
        if (!stoplist.count(t)) q.terms.insert(t);
    return q;
}

std::vector<CandidateSpan> extract_candidates(const Document& doc, const SpanTagger& tagger,
                                              int max_len) {
    std::vector<CandidateSpan> out;
    for (int si = 0; si < static_cast<int>(doc.sentences.size()); ++si) {
        for (auto& c : tagger.tag(doc.sentences[static_cast<std::size_t>(si)])) {
            if (c.span.p_f - c.span.p_s > max_len) continue;
            c.span.doc_id = doc.id;
            c.span.sentence_index = si;
            out.push_back(std::move(c));
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.span.sentence_index != b.span.sentence_index)
            return a.span.sentence_index < b.span.sentence_index;
        if (a.span.p_s != b.span.p_s) return a.span.p_s < b.span.p_s;
        return a.span.p_f < b.span.p_f;
    });
    return out;
}

std::pair<double, ContextCandidate> score_answer(const CorpusIndex& index, const Question& q,
                                                 const CandidateSpan& a, const QaConfig& cfg) {
    const Document* doc = index.find(a.span.doc_id);
    if (!doc) throw std::invalid_argument("score_answer: unknown document " + a.span.doc_id);

    ContextCandidate ctx;
    if (index.score(q.terms) > 0.0) {
        ctx = best_context(index, q.terms,
                           candidate_window(*doc, a.span.sentence_index, a.span, cfg.retrieval),
                           cfg.retrieval);
    }
    double weight = 1.0;
    if (q.expected_type != AnswerType::kOther && a.type != q.expected_type)
        weight = cfg.type_mismatch_weight;
    return {ctx.f * weight, ctx};
}

std::vector<ScoredAnswer> answer(const CorpusIndex& index, const TokenSeq& question,
                                 const FixedPhraseSet& phrases, const TypeMap& type_map,
                                 const SpanTagger& tagger, const QaConfig& cfg) {
    if (question.empty()) throw std::invalid_argument("answer: empty question");

    Question q = classify_question(question, phrases, type_map, index.stoplist());

    std::vector<ScoredAnswer> scored;
    for (const Document* doc : top_documents(index, q.terms, cfg.retrieval.top_m)) {
        for (const auto& cand : extract_candidates(*doc, tagger, cfg.max_answer_len)) {
            auto [l, ctx] = score_answer(index, q, cand, cfg);
            ScoredAnswer sa;
            sa.span = cand.span;
            sa.surface = cand.surface;
            sa.l = l;
            sa.context = std::move(ctx);
            sa.tagged_type = cand.type;
            scored.push_back(std::move(sa));
        }
    }

    auto before = [](const ScoredAnswer& a, const ScoredAnswer& b) {
        if (a.l != b.l) return a.l > b.l;
        if (a.span.doc_id != b.span.doc_id) return a.span.doc_id < b.span.doc_id;
        if (a.span.sentence_index != b.span.sentence_index)
            return a.span.sentence_index < b.span.sentence_index;
        if (a.span.p_s != b.span.p_s) return a.span.p_s < b.span.p_s;
        return a.span.p_f < b.span.p_f;
    };
    std::stable_sort(scored.begin(), scored.end(), before);

    // Deduplicate by case-folded surface, keeping the best-ranked occurrence.
    std::set<TokenSeq> seen;
    std::vector<ScoredAnswer> out;
    for (auto& sa : scored) {
        if (!seen.insert(fold_case(sa.surface)).second) continue;
        out.push_back(std::move(sa));
        if (static_cast<int>(out.size()) >= cfg.max_answers) break;
    }
    return out;
}

}  // namespace sdqa
