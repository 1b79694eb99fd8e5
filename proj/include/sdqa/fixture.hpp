#ifndef SDQA_FIXTURE_HPP
#define SDQA_FIXTURE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sdqa/corpus.hpp"
#include "sdqa/qa.hpp"

namespace sdqa {

/// Synthetic newspaper-like corpus with planted facts, questions built as
/// topic part + fixed phrase, and gold answers. Deterministic given the seed.
struct Fixture {
    std::vector<Document> corpus;
    std::vector<std::pair<std::string, TokenSeq>> questions;  // (qid, tokens)
    std::map<std::string, std::vector<TokenSeq>> gold;        // qid -> answer variants
    std::vector<TokenSeq> phrases;
    TypeMap type_map;
    TermSet stoplist;
    TermSet wh_lexicon;
};

Fixture make_fixture(std::uint64_t seed, int n_docs, int n_questions);

/// Writes corpus.jsonl, questions.jsonl, gold.jsonl, phrases.txt,
/// stoplist.txt, wh_lexicon.txt, type_map.json into the directory.
void write_fixture(const Fixture& fixture, const std::string& dir);

}  // namespace sdqa

#endif
