#include "sdqa/fixture.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace sdqa {

namespace {

const std::vector<Token> kStopWords = {
    "the", "a",    "an",  "of",  "in",  "on",   "to",  "was", "is",  "and",
    "that", "it",  "its", "by",  "for", "with", "at",  "as",  "from"};

const std::vector<Token> kFillerWords = {
    "market",   "minister", "report",   "officials", "announced", "city",
    "company",  "government", "plan",   "budget",    "talks",     "agreement",
    "season",   "team",     "game",     "music",     "festival",  "river",
    "bridge",   "storm",    "weather",  "farmers",   "harvest",   "prices",
    "trade",    "exports",  "science",  "museum",    "school",    "students",
    "library",  "garden",   "traffic",  "railway",   "airport",   "hospital",
    "doctors",  "election", "votes",    "council",   "mayor",     "police",
    "rescue",   "mountain", "valley",   "coast",     "island",    "forest"};

const std::vector<Token> kSyllables = {"bar", "ten", "kor", "vel", "mar", "sil",
                                       "dor", "nak", "rin", "zu",  "pal", "gos",
                                       "tra", "lum", "fex"};

struct PhraseSpec {
    TokenSeq tokens;
    AnswerType type;
};

const std::vector<PhraseSpec> kPhrases = {
    {{"what", "was", "the", "name"}, AnswerType::kArtifact},
    {{"what", "is", "the", "name"}, AnswerType::kArtifact},
    {{"what", "was", "it", "called"}, AnswerType::kArtifact},
    {{"what", "year", "was", "it"}, AnswerType::kDate},
    {{"what", "year", "did", "it", "happen"}, AnswerType::kDate},
    {{"when", "did", "it", "happen"}, AnswerType::kDate},
};

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::size_t pick(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
    }

    Token filler() { return kFillerWords[pick(kFillerWords.size())]; }

    TokenSeq filler_sentence() {
        std::size_t len = 6 + pick(5);
        TokenSeq s;
        for (std::size_t i = 0; i < len; ++i) {
            if (i % 3 == 0 && pick(2) == 0) s.push_back(kStopWords[pick(kStopWords.size())]);
            s.push_back(filler());
        }
        return s;
    }

    Token entity() {
        for (;;) {
            std::size_t syl = 2 + pick(2);
            std::string name;
            for (std::size_t i = 0; i < syl; ++i) name += kSyllables[pick(kSyllables.size())];
            name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
            if (used_.insert(name).second) return name;
        }
    }

    Token year() { return std::to_string(1950 + static_cast<int>(pick(60))); }

    Date date() {
        return Date{1998, 1 + static_cast<int>(pick(12)), 1 + static_cast<int>(pick(28))};
    }

private:
    std::mt19937_64 rng_;
    std::set<Token> used_;
};

}  // namespace

Fixture make_fixture(std::uint64_t seed, int n_docs, int n_questions) {
    if (n_questions < 1 || n_docs < n_questions)
        throw std::invalid_argument("make_fixture: need n_docs >= n_questions >= 1");

    Fixture fx;
    fx.stoplist.insert(kStopWords.begin(), kStopWords.end());
    fx.wh_lexicon = {"what", "when", "which", "who", "where", "how"};
    for (const auto& p : kPhrases) {
        fx.phrases.push_back(p.tokens);
        fx.type_map[p.tokens] = p.type;
    }

    Gen gen(seed);

    for (int qi = 0; qi < n_questions; ++qi) {
        std::string qid = "q" + std::to_string(qi + 1);
        std::string doc_id = "d" + std::to_string(qi + 1);

        int kind = qi % 3;
        Document doc;
        doc.id = doc_id;
        doc.date = gen.date();
        TokenSeq question;
        TokenSeq gold;

        if (kind == 0) {
            // name of a probe that landed somewhere in some year
            Token probe = gen.entity(), place = gen.entity(), year = gen.year();
            doc.headline = {"probe", "lands", "on", place};
            doc.sentences.push_back(gen.filler_sentence());
            doc.sentences.push_back(
                {"the", "probe", probe, "landed", "on", place, "in", year});
            doc.sentences.push_back(gen.filler_sentence());
            question = {"the", "probe", "that", "landed", "on", place, "in", year};
            const auto& phrase = kPhrases[(qi / 3) % 3].tokens;
            question.insert(question.end(), phrase.begin(), phrase.end());
            gold = {probe};
        } else if (kind == 1) {
            // name of a company founded by someone in some year
            Token founder = gen.entity(), company = gen.entity(), year = gen.year();
            doc.headline = {"new", "company", "founded"};
            doc.sentences.push_back(gen.filler_sentence());
            doc.sentences.push_back(
                {founder, "founded", "the", "company", company, "in", year});
            doc.sentences.push_back(gen.filler_sentence());
            question = {"the", "company", "that", founder, "founded", "in", year};
            const auto& phrase = kPhrases[(qi / 3) % 3].tokens;
            question.insert(question.end(), phrase.begin(), phrase.end());
            gold = {company};
        } else {
            // year in which a probe landed
            Token probe = gen.entity(), place = gen.entity(), year = gen.year();
            doc.headline = {"probe", probe, "reaches", place};
            doc.sentences.push_back(gen.filler_sentence());
            doc.sentences.push_back(
                {"the", "probe", probe, "landed", "on", place, "in", year});
            doc.sentences.push_back(gen.filler_sentence());
            question = {"the", "probe", probe, "landed", "on", place};
            const auto& phrase = kPhrases[3 + (qi / 3) % 3].tokens;
            question.insert(question.end(), phrase.begin(), phrase.end());
            gold = {year};
        }

        fx.corpus.push_back(std::move(doc));
        fx.questions.emplace_back(qid, std::move(question));
        fx.gold[qid] = {gold};
    }

    // Filler documents; a few carry quoted fixed phrases so the background
    // counts contain the phrase n-grams at low frequency.
    for (int di = n_questions; di < n_docs; ++di) {
        Document doc;
        doc.id = "d" + std::to_string(di + 1);
        doc.date = gen.date();
        doc.headline = {gen.filler(), gen.filler()};
        std::size_t n_sent = 2 + gen.pick(3);
        for (std::size_t s = 0; s < n_sent; ++s) doc.sentences.push_back(gen.filler_sentence());
        if ((di - n_questions) % 7 == 0) {
            const auto& phrase = kPhrases[static_cast<std::size_t>(di - n_questions) / 7 %
                                          kPhrases.size()]
                                     .tokens;
            TokenSeq quote = {"reporters", "asked"};
            quote.insert(quote.end(), phrase.begin(), phrase.end());
            doc.sentences.push_back(std::move(quote));
        }
        fx.corpus.push_back(std::move(doc));
    }

    return fx;
}

void write_fixture(const Fixture& fixture, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto path = [&](const char* name) { return (fs::path(dir) / name).string(); };

    {
        std::ofstream out(path("corpus.jsonl"));
        write_corpus_jsonl(out, fixture.corpus);
    }
    {
        std::ofstream out(path("questions.jsonl"));
        for (const auto& [qid, toks] : fixture.questions) {
            nlohmann::ordered_json j;
            j["qid"] = qid;
            j["tokens"] = toks;
            out << j.dump() << '\n';
        }
    }
    {
        std::ofstream out(path("gold.jsonl"));
        for (const auto& [qid, answers] : fixture.gold) {
            nlohmann::ordered_json j;
            j["qid"] = qid;
            j["answers"] = answers;
            out << j.dump() << '\n';
        }
    }
    {
        std::ofstream out(path("phrases.txt"));
        for (const auto& p : fixture.phrases) {
            for (std::size_t i = 0; i < p.size(); ++i) out << (i ? " " : "") << p[i];
            out << '\n';
        }
    }
    {
        std::ofstream out(path("stoplist.txt"));
        for (const auto& t : fixture.stoplist) out << t << '\n';
    }
    {
        std::ofstream out(path("wh_lexicon.txt"));
        for (const auto& t : fixture.wh_lexicon) out << t << '\n';
    }
    {
        std::ofstream out(path("type_map.json"));
        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        for (const auto& [phrase, type] : fixture.type_map) {
            std::string key;
            for (std::size_t i = 0; i < phrase.size(); ++i) key += (i ? " " : "") + phrase[i];
            j[key] = to_string(type);
        }
        out << j.dump(2) << '\n';
    }
}

}  // namespace sdqa
