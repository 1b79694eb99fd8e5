#include "sdqa/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdqa {

namespace {
// log10(p) = -99 marks entries that exist only as back-off histories (<s>).
constexpr double kLogSentinel = -99.0 * 2.302585092994046;
}  // namespace

Vocabulary::Vocabulary() {
    tokens_ = {kSentStart, kSentEnd, kUnknown};
    for (int i = 0; i < 3; ++i) index_[tokens_[i]] = i;
}

Vocabulary Vocabulary::build(const std::vector<TokenSeq>& sentences, std::size_t cap) {
    std::map<Token, std::size_t> freq;
    for (const auto& s : sentences)
        for (const auto& t : s)
            if (t != kSentStart && t != kSentEnd && t != kUnknown) ++freq[t];

    std::vector<std::pair<Token, std::size_t>> ranked(freq.begin(), freq.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) {
                         if (a.second != b.second) return a.second > b.second;
                         return a.first < b.first;
                     });
    if (ranked.size() > cap) ranked.resize(cap);

    Vocabulary v;
    for (const auto& [t, _] : ranked) {
        v.index_[t] = static_cast<int>(v.tokens_.size());
        v.tokens_.push_back(t);
    }
    return v;
}

Vocabulary Vocabulary::from_tokens(const std::vector<Token>& tokens) {
    Vocabulary v;
    for (const auto& t : tokens) {
        if (v.index_.count(t)) continue;
        v.index_[t] = static_cast<int>(v.tokens_.size());
        v.tokens_.push_back(t);
    }
    return v;
}

int Vocabulary::id(const Token& t) const {
    auto it = index_.find(t);
    return it == index_.end() ? kUnkId : it->second;
}

const Token& Vocabulary::token(int id) const {
    return tokens_.at(static_cast<std::size_t>(id));
}

std::vector<int> Vocabulary::ids(const TokenSeq& tokens) const {
    std::vector<int> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(id(t));
    return out;
}

double NGramTable::count(const std::vector<int>& gram) const {
    if (gram.empty() || gram.size() > counts.size()) return 0.0;
    const auto& m = counts[gram.size() - 1];
    auto it = m.find(gram);
    return it == m.end() ? 0.0 : it->second;
}

NGramTable count_ngrams(const std::vector<TokenSeq>& sentences, int order,
                        std::size_t vocab_cap) {
    if (order < 1) throw std::invalid_argument("count_ngrams: order must be >= 1");
    if (vocab_cap < 1) throw std::invalid_argument("count_ngrams: vocab_cap must be >= 1");
    if (sentences.empty()) throw std::invalid_argument("count_ngrams: empty corpus");

    NGramTable table;
    table.order = order;
    table.vocab = Vocabulary::build(sentences, vocab_cap);
    table.counts.resize(static_cast<std::size_t>(order));

    for (const auto& sent : sentences) {
        std::vector<int> padded(static_cast<std::size_t>(order - 1), Vocabulary::kStartId);
        for (const auto& t : sent) padded.push_back(table.vocab.id(t));
        padded.push_back(Vocabulary::kEndId);

        for (std::size_t i = static_cast<std::size_t>(order - 1); i < padded.size(); ++i) {
            for (int n = 1; n <= order; ++n) {
                if (n == 1 && padded[i] == Vocabulary::kEndId) continue;
                std::vector<int> gram(padded.begin() + static_cast<std::ptrdiff_t>(i) - n + 1,
                                      padded.begin() + static_cast<std::ptrdiff_t>(i) + 1);
                table.counts[static_cast<std::size_t>(n - 1)][gram] += 1.0;
            }
        }
    }
    return table;
}

NGramTable count_ngrams(const CorpusIndex& index, int order, std::size_t vocab_cap) {
    std::vector<TokenSeq> sentences;
    for (const auto& d : index.documents())
        for (const auto& s : d.sentences) sentences.push_back(s);
    return count_ngrams(sentences, order, vocab_cap);
}

double ml_estimate(const NGramTable& table, const std::vector<int>& history, int word) {
    std::size_t n = history.size() + 1;
    if (n < 1 || n > table.counts.size())
        throw std::invalid_argument("ml_estimate: history length out of range");

    const auto& m = table.counts[n - 1];
    double denom = 0.0;
    auto it = m.lower_bound(history);
    for (; it != m.end() && std::equal(history.begin(), history.end(), it->first.begin());
         ++it) {
        denom += it->second;
    }
    if (denom <= 0.0) throw std::invalid_argument("ml_estimate: unseen history");

    std::vector<int> gram = history;
    gram.push_back(word);
    auto git = m.find(gram);
    double c = git == m.end() ? 0.0 : git->second;
    return c / denom;
}

BackoffModel fit_backoff(const NGramTable& table, double discount) {
    if (discount <= 0.0 || discount >= 1.0)
        throw std::invalid_argument("fit_backoff: discount must be in (0,1)");
    if (table.order < 1 || table.counts.empty() || table.counts[0].empty())
        throw std::invalid_argument("fit_backoff: empty count table");

    BackoffModel model;
    model.order_ = table.order;
    model.vocab_ = table.vocab;
    model.grams_.resize(static_cast<std::size_t>(table.order));

    const double d = discount;

    // Unigrams: discounted counts plus a uniform floor carrying the reserved
    // mass, so every predictable token (including <unk> and </s>) has positive
    // probability. <s> is never predicted and gets a sentinel.
    {
        double total = 0.0;
        for (const auto& [g, c] : table.counts[0]) total += c;
        double reserved = 0.0;
        std::map<int, double> disc;
        for (const auto& [g, c] : table.counts[0]) {
            double p = std::max(c - d, 0.0) / total;
            disc[g[0]] = p;
            reserved += c / total - p;
        }
        std::size_t n_pred = model.vocab_.size() - 1;  // everything but <s>
        double floor = reserved / static_cast<double>(n_pred);
        for (int w = 1; w < static_cast<int>(model.vocab_.size()); ++w) {
            auto it = disc.find(w);
            double p = (it == disc.end() ? 0.0 : it->second) + floor;
            model.grams_[0][{w}].log_prob = std::log(p);
        }
        model.grams_[0][{Vocabulary::kStartId}].log_prob = kLogSentinel;
    }

    for (int n = 2; n <= table.order; ++n) {
        const auto& cnts = table.counts[static_cast<std::size_t>(n - 1)];
        auto it = cnts.begin();
        while (it != cnts.end()) {
            std::vector<int> hist(it->first.begin(), it->first.end() - 1);
            double total = 0.0, kept = 0.0;
            auto run_end = it;
            for (; run_end != cnts.end() &&
                   std::equal(hist.begin(), hist.end(), run_end->first.begin());
                 ++run_end) {
                total += run_end->second;
                kept += std::max(run_end->second - d, 0.0) / 1.0;
            }
            double alpha = 1.0 - kept / total;

            std::vector<int> lower_hist(hist.begin() + 1, hist.end());
            for (auto e = it; e != run_end; ++e) {
                int w = e->first.back();
                double p_low =
                    std::exp(model.token_log_prob(lower_hist, w));
                double p = std::max(e->second - d, 0.0) / total + alpha * p_low;
                model.grams_[static_cast<std::size_t>(n - 1)][e->first].log_prob =
                    std::log(p);
            }

            auto& hmap = model.grams_[static_cast<std::size_t>(n - 2)];
            auto hit = hmap.find(hist);
            if (hit == hmap.end())
                hit = hmap.emplace(hist, BackoffModel::Entry{kLogSentinel, 1.0, false}).first;
            hit->second.bow = alpha;
            hit->second.has_bow = true;

            it = run_end;
        }
    }
    return model;
}

double BackoffModel::token_log_prob(const std::vector<int>& history, int word) const {
    std::size_t maxlen = static_cast<std::size_t>(order_ - 1);
    std::vector<int> h(history.end() - static_cast<std::ptrdiff_t>(
                                           std::min(history.size(), maxlen)),
                       history.end());

    double log_bow = 0.0;
    while (!h.empty()) {
        std::vector<int> full = h;
        full.push_back(word);
        const auto& m = grams_[h.size()];
        auto it = m.find(full);
        if (it != m.end()) return log_bow + it->second.log_prob;

        const auto& hm = grams_[h.size() - 1];
        auto hit = hm.find(h);
        if (hit != hm.end() && hit->second.has_bow)
            log_bow += std::log(hit->second.bow);
        h.erase(h.begin());
    }
    auto it = grams_[0].find({word});
    if (it == grams_[0].end()) return kLogSentinel;
    return log_bow + it->second.log_prob;
}

double BackoffModel::log_prob(const TokenSeq& tokens) const {
    std::vector<int> context(static_cast<std::size_t>(order_ - 1), Vocabulary::kStartId);
    std::vector<int> ids = vocab_.ids(tokens);
    ids.push_back(Vocabulary::kEndId);

    double sum = 0.0;
    for (int id : ids) {
        sum += token_log_prob(context, id);
        context.push_back(id);
    }
    return sum;
}

double BackoffModel::perplexity(const std::vector<TokenSeq>& sentences) const {
    double sum = 0.0;
    std::size_t predicted = 0;
    for (const auto& s : sentences) {
        sum += log_prob(s);
        predicted += s.size() + 1;  // end token included
    }
    if (predicted == 0) throw std::invalid_argument("perplexity: no predicted tokens");
    return std::exp(-sum / static_cast<double>(predicted));
}

}  // namespace sdqa
