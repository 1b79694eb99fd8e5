#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sdqa/experiment.hpp"
#include "sdqa/fixture.hpp"

using namespace sdqa;
namespace fs = std::filesystem;

namespace {

std::string fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("sdqa_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig config_for(const std::string& fixture_dir, const std::string& out_dir) {
    ExperimentConfig cfg;
    auto at = [&](const char* f) { return (fs::path(fixture_dir) / f).string(); };
    cfg.corpus_path = at("corpus.jsonl");
    cfg.phrases_path = at("phrases.txt");
    cfg.stoplist_path = at("stoplist.txt");
    cfg.wh_lexicon_path = at("wh_lexicon.txt");
    cfg.questions_path = at("questions.jsonl");
    cfg.gold_path = at("gold.jsonl");
    cfg.type_map_path = at("type_map.json");
    cfg.order = 3;
    cfg.vocab_cap = 60000;
    cfg.gamma = 50.0;
    cfg.discount = 0.5;
    NoiseRates r;
    r.p_sub = 0.15;
    r.p_del = 0.05;
    r.p_ins = 0.05;
    cfg.noise_rates = r;
    cfg.n_hypotheses = 5;
    cfg.seed = 11;
    cfg.out_dir = out_dir;
    return cfg;
}

bool contains_subsequence(const TokenSeq& haystack, const TokenSeq& needle) {
    if (needle.empty() || needle.size() > haystack.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i)
        if (std::equal(needle.begin(), needle.end(), haystack.begin() + i)) return true;
    return false;
}

}  // namespace

TEST_CASE("fixtures are deterministic in the seed") {
    Fixture a = make_fixture(7, 30, 9);
    Fixture b = make_fixture(7, 30, 9);
    std::stringstream sa, sb;
    write_corpus_jsonl(sa, a.corpus);
    write_corpus_jsonl(sb, b.corpus);
    CHECK(sa.str() == sb.str());
    CHECK(a.questions == b.questions);
    CHECK(a.gold == b.gold);

    Fixture c = make_fixture(8, 30, 9);
    std::stringstream sc;
    write_corpus_jsonl(sc, c.corpus);
    CHECK(sa.str() != sc.str());
}

TEST_CASE("fixture questions end in a known phrase and gold lives in the corpus") {
    Fixture fx = make_fixture(7, 30, 9);
    REQUIRE(fx.corpus.size() == 30);
    REQUIRE(fx.questions.size() == 9);
    FixedPhraseSet phrases = FixedPhraseSet::build(fx.phrases);

    for (std::size_t i = 0; i < fx.questions.size(); ++i) {
        const auto& [qid, toks] = fx.questions[i];
        auto hit = phrases.find_longest_occurrence(toks);
        REQUIRE(hit.has_value());
        CHECK(hit->first + hit->second == toks.size());  // phrase is the suffix
        TokenSeq matched(toks.begin() + static_cast<std::ptrdiff_t>(hit->first), toks.end());
        CHECK(fx.type_map.count(matched) == 1);

        REQUIRE(fx.gold.count(qid) == 1);
        REQUIRE(fx.gold.at(qid).size() == 1);
        const Document& doc = fx.corpus[i];
        bool found = false;
        for (const auto& s : doc.sentences)
            if (contains_subsequence(s, fx.gold.at(qid)[0])) found = true;
        CHECK(found);
    }
}

TEST_CASE("fixture validation") {
    CHECK_THROWS_AS(make_fixture(1, 3, 5), std::invalid_argument);
    CHECK_THROWS_AS(make_fixture(1, 5, 0), std::invalid_argument);
}

TEST_CASE("written fixture files read back") {
    Fixture fx = make_fixture(5, 12, 3);
    std::string dir = fresh_dir("fixture_roundtrip");
    write_fixture(fx, dir);

    std::ifstream corpus_in(dir + "/corpus.jsonl");
    auto docs = read_corpus_jsonl(corpus_in);
    CHECK(docs.size() == fx.corpus.size());

    std::ifstream q_in(dir + "/questions.jsonl");
    CHECK(read_questions_jsonl(q_in) == fx.questions);

    std::ifstream g_in(dir + "/gold.jsonl");
    CHECK(read_gold_jsonl(g_in) == fx.gold);

    std::ifstream t_in(dir + "/type_map.json");
    CHECK(read_type_map_json(t_in) == fx.type_map);
}

TEST_CASE("experiment summary has the expected shape and bounds") {
    std::string fdir = fresh_dir("exp_fixture");
    write_fixture(make_fixture(7, 40, 12), fdir);
    ExperimentConfig cfg = config_for(fdir, fresh_dir("exp_out"));
    auto summary = run_experiment(cfg).summary;

    CHECK(summary.at("schema_version") == 1);
    for (const char* model : {"base", "emp"}) {
        CHECK(summary.at("ppl").at(model).at("fh").get<double>() >= 1.0);
        CHECK(summary.at("ppl").at(model).at("lh").get<double>() >= 1.0);
        for (const char* half : {"BH", "FH", "LH"})
            CHECK(summary.at("wer").at(model).at(half).get<double>() >= 0.0);
    }
    for (const char* cond : {"clean", "base", "emp"}) {
        double m = summary.at("mrr").at(cond).get<double>();
        CHECK(m >= 0.0);
        CHECK(m <= 1.0);
    }
    CHECK(summary.at("mrr").at("clean").get<double>() == doctest::Approx(1.0));
    CHECK(summary.at("ttest").at("df") == 11);

    for (const char* f : {"base.arpa", "emp.arpa", "corrupted_base.jsonl",
                          "corrupted_emp.jsonl", "answers_clean.jsonl",
                          "answers_base.jsonl", "answers_emp.jsonl", "summary.json"})
        CHECK(fs::exists(fs::path(cfg.out_dir) / f));
}

TEST_CASE("gamma of one makes both conditions identical") {
    std::string fdir = fresh_dir("gamma1_fixture");
    write_fixture(make_fixture(3, 24, 6), fdir);
    ExperimentConfig cfg = config_for(fdir, fresh_dir("gamma1_out"));
    cfg.gamma = 1.0;
    auto summary = run_experiment(cfg).summary;

    CHECK(summary.at("ppl").at("base") == summary.at("ppl").at("emp"));
    CHECK(summary.at("wer").at("base") == summary.at("wer").at("emp"));
    CHECK(summary.at("mrr").at("base") == summary.at("mrr").at("emp"));
    CHECK(summary.at("ttest").at("t").get<double>() == 0.0);
    CHECK(summary.at("ttest").at("p").get<double>() == 1.0);
    CHECK(slurp(cfg.out_dir + "/corrupted_base.jsonl") ==
          slurp(cfg.out_dir + "/corrupted_emp.jsonl"));
}

TEST_CASE("zero noise reduces corrupted conditions to the clean one") {
    std::string fdir = fresh_dir("zeronoise_fixture");
    write_fixture(make_fixture(3, 24, 6), fdir);
    ExperimentConfig cfg = config_for(fdir, fresh_dir("zeronoise_out"));
    cfg.noise_rates = NoiseRates{};
    auto summary = run_experiment(cfg).summary;

    for (const char* model : {"base", "emp"})
        for (const char* half : {"BH", "FH", "LH"})
            CHECK(summary.at("wer").at(model).at(half).get<double>() == 0.0);
    CHECK(summary.at("mrr").at("base") == summary.at("mrr").at("clean"));
    CHECK(summary.at("mrr").at("emp") == summary.at("mrr").at("clean"));
    CHECK(slurp(cfg.out_dir + "/answers_base.jsonl") ==
          slurp(cfg.out_dir + "/answers_clean.jsonl"));
}

TEST_CASE("the whole experiment is deterministic") {
    std::string fdir = fresh_dir("det_fixture");
    write_fixture(make_fixture(9, 28, 6), fdir);
    ExperimentConfig cfg1 = config_for(fdir, fresh_dir("det_out1"));
    ExperimentConfig cfg2 = config_for(fdir, fresh_dir("det_out2"));
    run_experiment(cfg1);
    run_experiment(cfg2);
    for (const char* f : {"summary.json", "base.arpa", "emp.arpa",
                          "corrupted_base.jsonl", "answers_emp.jsonl"})
        CHECK(slurp(cfg1.out_dir + "/" + f) == slurp(cfg2.out_dir + "/" + f));
}

TEST_CASE("the summary matches the committed golden run") {
    std::string fdir = fresh_dir("golden_fixture");
    write_fixture(make_fixture(21, 35, 10), fdir);
    ExperimentConfig cfg = config_for(fdir, fresh_dir("golden_out"));
    cfg.seed = 17;
    run_experiment(cfg);
    CHECK(slurp(cfg.out_dir + "/summary.json") ==
          slurp(std::string(SDQA_TEST_DATA_DIR) + "/summary_golden.json"));
}

TEST_CASE("experiment failures name the stage") {
    ExperimentConfig cfg = config_for(fresh_dir("missing_fixture"), fresh_dir("missing_out"));
    CHECK_THROWS_WITH_AS(run_experiment(cfg), doctest::Contains("stage 'load'"),
                         std::runtime_error);
}
