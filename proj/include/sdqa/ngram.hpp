#ifndef SDQA_NGRAM_HPP
#define SDQA_NGRAM_HPP

#include <map>
#include <string>
#include <vector>

#include "sdqa/corpus.hpp"

namespace sdqa {

inline constexpr const char* kSentStart = "<s>";
inline constexpr const char* kSentEnd = "</s>";
inline constexpr const char* kUnknown = "<unk>";

/// Frequency-capped token inventory with reserved start/end/unknown tokens.
/// Ids: 0 = <s>, 1 = </s>, 2 = <unk>, then corpus tokens by descending frequency.
class Vocabulary {
public:
    static constexpr int kStartId = 0;
    static constexpr int kEndId = 1;
    static constexpr int kUnkId = 2;

    Vocabulary();
    static Vocabulary build(const std::vector<TokenSeq>& sentences, std::size_t cap);
    /// Vocabulary listing exactly the given tokens (reserved tokens prepended).
    static Vocabulary from_tokens(const std::vector<Token>& tokens);

    int id(const Token& t) const;  // kUnkId for absent tokens
    const Token& token(int id) const;
    std::size_t size() const { return tokens_.size(); }
    bool reserved(int id) const { return id < 3; }

    std::vector<int> ids(const TokenSeq& tokens) const;

private:
    std::vector<Token> tokens_;
    std::map<Token, int> index_;
};

/// Real-valued N-gram counts for all orders 1..N. Counts are reals so that
/// emphasized tables flow through fit_backoff unchanged.
struct NGramTable {
    int order = 0;
    Vocabulary vocab;
    // counts[n-1]: n-gram (token ids) -> count
    std::vector<std::map<std::vector<int>, double>> counts;

    double count(const std::vector<int>& gram) const;
};

/// Counts n-grams over sentences padded with N-1 start tokens and one end
/// token. Unigram counts cover real tokens only; higher orders predict every
/// real token and the end token. OOV tokens map to <unk>.
NGramTable count_ngrams(const std::vector<TokenSeq>& sentences, int order,
                        std::size_t vocab_cap);
NGramTable count_ngrams(const CorpusIndex& index, int order, std::size_t vocab_cap);

/// count(history+word) / sum_w count(history+word). Throws on unseen history.
double ml_estimate(const NGramTable& table, const std::vector<int>& history, int word);

/// Back-off model with interpolated absolute discounting. Immutable after fit;
/// concurrent read scoring is safe.
class BackoffModel {
public:
    struct Entry {
        double log_prob = 0.0;  // natural log
        double bow = 1.0;       // back-off weight, linear domain
        bool has_bow = false;
    };

    int order() const { return order_; }
    const Vocabulary& vocab() const { return vocab_; }

    /// ln P(word | history); history longer than order-1 is truncated.
    double token_log_prob(const std::vector<int>& history, int word) const;

    /// Sum of per-token conditional ln probabilities with start padding and
    /// end token; OOV mapped to <unk>.
    double log_prob(const TokenSeq& tokens) const;

    double perplexity(const std::vector<TokenSeq>& sentences) const;

    const std::map<std::vector<int>, Entry>& grams(int n) const { return grams_[n - 1]; }

private:
    int order_ = 0;
    Vocabulary vocab_;
    std::vector<std::map<std::vector<int>, Entry>> grams_;

    friend BackoffModel fit_backoff(const NGramTable&, double);
    friend class ArpaReader;
};

/// Fits the smoothed model from (possibly emphasized) real-valued counts.
/// discount must lie in (0,1).
BackoffModel fit_backoff(const NGramTable& table, double discount);

}  // namespace sdqa

#endif
