#include "sdqa/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sdqa {

bool Date::valid() const {
    if (year < 1 || month < 1 || month > 12 || day < 1) return false;
    static const int days[] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return day <= days[month - 1];
}

Date Date::parse(const std::string& iso) {
    Date d;
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-' ||
        std::sscanf(iso.c_str(), "%4d-%2d-%2d", &d.year, &d.month, &d.day) != 3 ||
        !d.valid()) {
        throw std::invalid_argument("invalid date: '" + iso + "'");
    }
    return d;
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

TokenSeq temporal_tokens(const Date& date) {
    if (!date.valid()) throw std::invalid_argument("temporal_tokens: invalid date");
    char y[16], ym[16];
    std::snprintf(y, sizeof(y), "%04d", date.year);
    std::snprintf(ym, sizeof(ym), "%04d-%02d", date.year, date.month);
    return {y, ym, date.to_string()};
}

CorpusIndex CorpusIndex::ingest(std::vector<Document> docs, TermSet stoplist) {
    CorpusIndex index;
    index.stoplist_ = std::move(stoplist);
    for (const auto& doc : docs) {
        if (!doc.date.valid())
            throw std::invalid_argument("document '" + doc.id + "': invalid date");
        if (doc.sentences.empty())
            throw std::invalid_argument("document '" + doc.id + "': empty sentence list");
        for (const auto& s : doc.sentences)
            if (s.empty())
                throw std::invalid_argument("document '" + doc.id + "': empty sentence");
        if (!index.by_id_.emplace(doc.id, index.by_id_.size()).second)
            throw std::invalid_argument("duplicate document id '" + doc.id + "'");

        // df counts each token at most once per document; headline included.
        std::set<Token> seen(doc.headline.begin(), doc.headline.end());
        for (const auto& s : doc.sentences) seen.insert(s.begin(), s.end());
        for (const auto& t : seen) ++index.df_[t];
    }
    index.documents_ = std::move(docs);
    return index;
}

const Document* CorpusIndex::find(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &documents_[it->second];
}

std::size_t CorpusIndex::df(const Token& term) const {
    auto it = df_.find(term);
    return it == df_.end() ? 0 : it->second;
}

double CorpusIndex::idf(const Token& term) const {
    if (documents_.empty()) throw std::logic_error("idf on empty index");
    std::size_t f = std::max<std::size_t>(df(term), 1);
    return std::log(static_cast<double>(documents_.size()) / static_cast<double>(f));
}

double CorpusIndex::score(const TermSet& terms) const {
    double sum = 0.0;
    for (const auto& t : terms) sum += idf(t);
    return sum;
}

double CorpusIndex::overlap_score(const TermSet& a, const TermSet& b) const {
    const TermSet& small = a.size() <= b.size() ? a : b;
    const TermSet& large = a.size() <= b.size() ? b : a;
    double sum = 0.0;
    for (const auto& t : small)
        if (large.count(t)) sum += idf(t);
    return sum;
}

TermSet CorpusIndex::term_set(const TokenSeq& tokens) const {
    TermSet out;
    for (const auto& t : tokens)
        if (!stoplist_.count(t)) out.insert(t);
    return out;
}

std::vector<Document> read_corpus_jsonl(std::istream& in) {
    std::vector<Document> docs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("corpus line " + std::to_string(lineno) + ": " + e.what());
        }
        Document d;
        d.id = j.at("id").get<std::string>();
        d.date = Date::parse(j.at("date").get<std::string>());
        d.headline = j.at("headline").get<TokenSeq>();
        for (const auto& s : j.at("sentences")) d.sentences.push_back(s.get<TokenSeq>());
        docs.push_back(std::move(d));
    }
    return docs;
}

void write_corpus_jsonl(std::ostream& out, const std::vector<Document>& docs) {
    for (const auto& d : docs) {
        nlohmann::ordered_json j;
        j["id"] = d.id;
        j["date"] = d.date.to_string();
        j["headline"] = d.headline;
        j["sentences"] = d.sentences;
        out << j.dump() << '\n';
    }
}

TermSet read_token_lines(std::istream& in) {
    TermSet out;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        Token t;
        if (ss >> t) out.insert(t);
    }
    return out;
}

Token fold_case(const Token& t) {
    Token out = t;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

TokenSeq fold_case(const TokenSeq& ts) {
    TokenSeq out;
    out.reserve(ts.size());
    for (const auto& t : ts) out.push_back(fold_case(t));
    return out;
}

}  // namespace sdqa
