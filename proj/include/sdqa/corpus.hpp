#ifndef SDQA_CORPUS_HPP
#define SDQA_CORPUS_HPP

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace sdqa {

using Token = std::string;
using TokenSeq = std::vector<Token>;
using TermSet = std::set<Token>;

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    bool valid() const;
    static Date parse(const std::string& iso);  // "YYYY-MM-DD"
    std::string to_string() const;
};

struct Document {
    std::string id;
    Date date;
    TokenSeq headline;
    std::vector<TokenSeq> sentences;
};

/// Three concretized date tokens: "YYYY", "YYYY-MM", "YYYY-MM-DD".
TokenSeq temporal_tokens(const Date& date);

/// Immutable document collection with document-frequency statistics.
/// All queries are read-only and safe for concurrent readers.
class CorpusIndex {
public:
    static CorpusIndex ingest(std::vector<Document> docs, TermSet stoplist = {});

    std::size_t doc_count() const { return documents_.size(); }
    const std::vector<Document>& documents() const { return documents_; }
    const Document* find(const std::string& id) const;
    const TermSet& stoplist() const { return stoplist_; }

    /// Document frequency; 0 for tokens never indexed.
    std::size_t df(const Token& term) const;

    /// ln(doc_count / max(df, 1)). Unseen terms get the maximal finite weight.
    double idf(const Token& term) const;

    /// Sum of IDFs over the set.
    double score(const TermSet& terms) const;

    /// score(a intersect b).
    double overlap_score(const TermSet& a, const TermSet& b) const;

    /// Content-word set of a token sequence: stoplist removed, duplicates collapsed.
    TermSet term_set(const TokenSeq& tokens) const;

private:
    std::vector<Document> documents_;
    std::map<Token, std::size_t> df_;
    std::map<std::string, std::size_t> by_id_;
    TermSet stoplist_;
};

/// JSON-lines corpus: one document per line,
/// {"id": str, "date": "YYYY-MM-DD", "headline": [tokens], "sentences": [[tokens], ...]}
std::vector<Document> read_corpus_jsonl(std::istream& in);
void write_corpus_jsonl(std::ostream& out, const std::vector<Document>& docs);

/// Plain text, one token per line. Blank lines ignored.
TermSet read_token_lines(std::istream& in);

Token fold_case(const Token& t);
TokenSeq fold_case(const TokenSeq& ts);

}  // namespace sdqa

#endif
