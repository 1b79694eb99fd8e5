#ifndef SDQA_PHRASE_HPP
#define SDQA_PHRASE_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "sdqa/ngram.hpp"

namespace sdqa {

/// Trie over fixed-phrase token sequences, with a substring index for
/// interior-match queries. Immutable after build.
class FixedPhraseSet {
public:
    static FixedPhraseSet build(const std::vector<TokenSeq>& phrases);

    const std::vector<TokenSeq>& phrases() const { return phrases_; }

    /// True iff the sequence is a prefix (of the given exact length) of some phrase.
    bool is_prefix(const TokenSeq& tokens) const;

    /// True iff the sequence is a contiguous subsequence of some phrase.
    bool is_substring(const TokenSeq& tokens) const;

    bool is_phrase(const TokenSeq& tokens) const;

    /// Longest phrase occurring contiguously in tokens; returns (position, length).
    /// Earlier positions win ties of equal length.
    std::optional<std::pair<std::size_t, std::size_t>> find_longest_occurrence(
        const TokenSeq& tokens) const;

private:
    struct Node {
        std::map<Token, int> children;
        bool terminal = false;
    };
    std::vector<Node> nodes_{1};
    std::vector<TokenSeq> phrases_;
    std::set<TokenSeq> substrings_;

    int walk(const TokenSeq& tokens) const;  // -1 if no such path
};

/// One phrase per line, tokens space-separated. Empty lines are an error.
std::vector<TokenSeq> read_phrase_lines(std::istream& in);

struct EmphasisConfig {
    double gamma = 50.0;
    int order = 3;
};

struct NGramClass {
    enum Kind { kBoundaryMatch, kInteriorMatch, kNoMatch };
    Kind kind = kNoMatch;
    int prefix_len = 0;  // matched k for kBoundaryMatch
};

/// Classification of one n-gram against the phrase set:
/// first, the longest postfix of length k (1 <= k < n) equal to a phrase
/// prefix wins (boundary match); otherwise a whole-gram substring of a phrase
/// is an interior match; otherwise no match.
NGramClass classify_ngram(const TokenSeq& gram, const FixedPhraseSet& phrases, int order);

/// Multiplies matched counts by gamma: boundary matches at every order,
/// interior matches only at the top order. Each entry is scaled at most once.
NGramTable emphasize_counts(const NGramTable& table, const FixedPhraseSet& phrases,
                            const EmphasisConfig& cfg);

/// emphasize_counts followed by fit_backoff.
BackoffModel adapt(const NGramTable& table, const FixedPhraseSet& phrases,
                   const EmphasisConfig& cfg, double discount);

}  // namespace sdqa

#endif
