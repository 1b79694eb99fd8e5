#include "sdqa/phrase.hpp"

#include <istream>
#include <sstream>
#include <stdexcept>

namespace sdqa {

FixedPhraseSet FixedPhraseSet::build(const std::vector<TokenSeq>& phrases) {
    if (phrases.empty()) throw std::invalid_argument("phrase set: at least one phrase required");

    FixedPhraseSet set;
    std::set<TokenSeq> unique;
    for (const auto& p : phrases) {
        if (p.empty()) throw std::invalid_argument("phrase set: empty phrase");
        if (!unique.insert(p).second) continue;
        set.phrases_.push_back(p);

        int node = 0;
        for (const auto& t : p) {
            auto it = set.nodes_[static_cast<std::size_t>(node)].children.find(t);
            if (it == set.nodes_[static_cast<std::size_t>(node)].children.end()) {
                int next = static_cast<int>(set.nodes_.size());
                set.nodes_[static_cast<std::size_t>(node)].children[t] = next;
                set.nodes_.emplace_back();
                node = next;
            } else {
                node = it->second;
            }
        }
        set.nodes_[static_cast<std::size_t>(node)].terminal = true;

        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t len = 1; i + len <= p.size(); ++len)
                set.substrings_.insert(TokenSeq(p.begin() + static_cast<std::ptrdiff_t>(i),
                                                p.begin() + static_cast<std::ptrdiff_t>(i + len)));
    }
    return set;
}

int FixedPhraseSet::walk(const TokenSeq& tokens) const {
    int node = 0;
    for (const auto& t : tokens) {
        auto it = nodes_[static_cast<std::size_t>(node)].children.find(t);
        if (it == nodes_[static_cast<std::size_t>(node)].children.end()) return -1;
        node = it->second;
    }
    return node;
}

bool FixedPhraseSet::is_prefix(const TokenSeq& tokens) const {
    return !tokens.empty() && walk(tokens) >= 0;
}

bool FixedPhraseSet::is_substring(const TokenSeq& tokens) const {
    return substrings_.count(tokens) > 0;
}

bool FixedPhraseSet::is_phrase(const TokenSeq& tokens) const {
    int node = walk(tokens);
    return node >= 0 && nodes_[static_cast<std::size_t>(node)].terminal;
}

std::optional<std::pair<std::size_t, std::size_t>> FixedPhraseSet::find_longest_occurrence(
    const TokenSeq& tokens) const {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        int node = 0;
        for (std::size_t j = i; j < tokens.size(); ++j) {
            auto it = nodes_[static_cast<std::size_t>(node)].children.find(tokens[j]);
            if (it == nodes_[static_cast<std::size_t>(node)].children.end()) break;
            node = it->second;
            std::size_t len = j - i + 1;
            if (nodes_[static_cast<std::size_t>(node)].terminal &&
                (!best || len > best->second))
                best = {i, len};
        }
    }
    return best;
}

std::vector<TokenSeq> read_phrase_lines(std::istream& in) {
    std::vector<TokenSeq> phrases;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        TokenSeq p;
        Token t;
        while (ss >> t) p.push_back(t);
        if (p.empty())
            throw std::runtime_error("phrase file line " + std::to_string(lineno) +
                                     ": empty phrase");
        phrases.push_back(std::move(p));
    }
    return phrases;
}

NGramClass classify_ngram(const TokenSeq& gram, const FixedPhraseSet& phrases, int order) {
    int n = static_cast<int>(gram.size());
    if (n < 1 || n > order)
        throw std::invalid_argument("classify_ngram: gram length out of range");

    // Step (1): longest postfix of length k < n that is a phrase prefix.
    for (int k = n - 1; k >= 1; --k) {
        TokenSeq postfix(gram.end() - k, gram.end());
        if (phrases.is_prefix(postfix)) return {NGramClass::kBoundaryMatch, k};
    }
    // Step (2): the whole gram inside a phrase.
    if (phrases.is_substring(gram)) return {NGramClass::kInteriorMatch, 0};
    // Step (3): untouched.
    return {NGramClass::kNoMatch, 0};
}

NGramTable emphasize_counts(const NGramTable& table, const FixedPhraseSet& phrases,
                            const EmphasisConfig& cfg) {
    if (table.order != cfg.order)
        throw std::invalid_argument("emphasize_counts: table order does not match config");
    if (cfg.gamma < 1.0) throw std::invalid_argument("emphasize_counts: gamma must be >= 1");

    NGramTable out = table;
    for (int n = 1; n <= out.order; ++n) {
        for (auto& [gram, c] : out.counts[static_cast<std::size_t>(n - 1)]) {
            TokenSeq toks;
            toks.reserve(gram.size());
            for (int id : gram) toks.push_back(out.vocab.token(id));
            NGramClass cls = classify_ngram(toks, phrases, cfg.order);
            if (cls.kind == NGramClass::kBoundaryMatch ||
                (cls.kind == NGramClass::kInteriorMatch && n == cfg.order))
                c *= cfg.gamma;
        }
    }
    return out;
}

BackoffModel adapt(const NGramTable& table, const FixedPhraseSet& phrases,
                   const EmphasisConfig& cfg, double discount) {
    return fit_backoff(emphasize_counts(table, phrases, cfg), discount);
}

}  // namespace sdqa
