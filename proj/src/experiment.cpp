#include "sdqa/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <istream>
#include <stdexcept>

#include "sdqa/arpa.hpp"
#include "sdqa/eval.hpp"
#include "sdqa/fixture.hpp"
#include "sdqa/ngram.hpp"
#include "sdqa/phrase.hpp"

namespace sdqa {

namespace {

[[noreturn]] void stage_fail(const std::string& stage, const std::exception& e) {
    throw std::runtime_error("experiment stage '" + stage + "' failed: " + e.what());
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return in;
}

int last_wh_index(const TokenSeq& tokens, const TermSet& wh) {
    for (int i = static_cast<int>(tokens.size()) - 1; i >= 0; --i)
        if (wh.count(fold_case(tokens[static_cast<std::size_t>(i)]))) return i;
    return -1;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.corpus_path = j.at("corpus").get<std::string>();
    c.phrases_path = j.at("phrases").get<std::string>();
    c.stoplist_path = j.at("stoplist").get<std::string>();
    c.wh_lexicon_path = j.at("wh_lexicon").get<std::string>();
    c.questions_path = j.at("questions").get<std::string>();
    c.gold_path = j.at("gold").get<std::string>();
    c.type_map_path = j.value("type_map", std::string{});

    c.order = j.value("order", 3);
    c.vocab_cap = j.value("vocab_cap", std::size_t{60000});
    c.gamma = j.value("gamma", 50.0);
    c.discount = j.value("discount", 0.5);
    c.f_beta = j.value("f_beta", 2.0);
    c.k = j.value("k", 1);
    c.top_m = j.value("top_m", 30);
    c.max_answer_len = j.value("max_answer_len", 6);
    c.type_mismatch_weight = j.value("type_mismatch_weight", 0.1);
    c.n_hypotheses = j.value("n_hypotheses", 5);
    c.seed = j.value("seed", std::uint64_t{0});
    c.out_dir = j.at("out_dir").get<std::string>();

    const auto& noise = j.at("noise");
    if (noise.contains("target_wer")) {
        c.target_wer = noise.at("target_wer").get<double>();
        c.wer_tolerance = noise.value("tolerance", 0.02);
    } else {
        NoiseRates r;
        r.p_sub = noise.value("p_sub", 0.0);
        r.p_del = noise.value("p_del", 0.0);
        r.p_ins = noise.value("p_ins", 0.0);
        c.noise_rates = r;
    }
    return c;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    auto out_path = [&](const char* name) { return (fs::path(cfg.out_dir) / name).string(); };

    // ---- load inputs ----
    CorpusIndex index;
    std::vector<TokenSeq> phrase_lines;
    TermSet wh;
    std::vector<std::pair<std::string, TokenSeq>> questions;
    std::map<std::string, std::vector<TokenSeq>> gold;
    TypeMap type_map;
    try {
        auto corpus_in = open_input(cfg.corpus_path);
        auto stop_in = open_input(cfg.stoplist_path);
        index = CorpusIndex::ingest(read_corpus_jsonl(corpus_in), read_token_lines(stop_in));
        auto phr_in = open_input(cfg.phrases_path);
        phrase_lines = read_phrase_lines(phr_in);
        auto wh_in = open_input(cfg.wh_lexicon_path);
        wh = read_token_lines(wh_in);
        auto q_in = open_input(cfg.questions_path);
        questions = read_questions_jsonl(q_in);
        auto g_in = open_input(cfg.gold_path);
        gold = read_gold_jsonl(g_in);
        if (!cfg.type_map_path.empty()) {
            auto t_in = open_input(cfg.type_map_path);
            type_map = read_type_map_json(t_in);
        }
    } catch (const std::exception& e) {
        stage_fail("load", e);
    }

    // ---- models ----
    NGramTable base_table;
    BackoffModel base, emp;
    try {
        base_table = count_ngrams(index, cfg.order, cfg.vocab_cap);
        base = fit_backoff(base_table, cfg.discount);
        save_arpa(base, out_path("base.arpa"));
        FixedPhraseSet phrases = FixedPhraseSet::build(phrase_lines);
        emp = adapt(base_table, phrases, {cfg.gamma, cfg.order}, cfg.discount);
        save_arpa(emp, out_path("emp.arpa"));
    } catch (const std::exception& e) {
        stage_fail("model", e);
    }

    // ---- perplexity of question halves ----
    nlohmann::ordered_json ppl;
    try {
        std::vector<TokenSeq> fh, lh;
        for (const auto& [qid, toks] : questions) {
            int b = last_wh_index(toks, wh);
            if (b < 0) continue;
            fh.emplace_back(toks.begin(), toks.begin() + b);
            lh.emplace_back(toks.begin() + b, toks.end());
        }
        if (!lh.empty()) {
            ppl["base"] = {{"fh", base.perplexity(fh)}, {"lh", base.perplexity(lh)}};
            ppl["emp"] = {{"fh", emp.perplexity(fh)}, {"lh", emp.perplexity(lh)}};
        }
    } catch (const std::exception& e) {
        stage_fail("perplexity", e);
    }

    // ---- noise calibration ----
    NoiseRates rates;
    double achieved_wer = 0.0;
    std::vector<Token> noise_vocab;
    try {
        for (std::size_t id = 3; id < base_table.vocab.size(); ++id)
            noise_vocab.push_back(base_table.vocab.token(static_cast<int>(id)));
        std::vector<TokenSeq> sample;
        for (const auto& [qid, toks] : questions) sample.push_back(toks);
        if (cfg.target_wer) {
            auto cal = calibrate(*cfg.target_wer, sample, cfg.wer_tolerance, noise_vocab,
                                 cfg.seed);
            rates = cal.rates;
            achieved_wer = cal.achieved_wer;
        } else {
            rates = cfg.noise_rates.value_or(NoiseRates{});
            rates.seed = cfg.seed;
        }
    } catch (const std::exception& e) {
        stage_fail("noise", e);
    }

    // ---- simulated recognition: corrupt, pick the LM-best hypothesis ----
    // The candidate pool is identical for both models; only the LM choice
    // differs, mirroring recognition with different language models.
    std::map<std::string, std::vector<TokenSeq>> transcripts;  // label -> per-question
    nlohmann::ordered_json wer_summary;
    try {
        for (const auto& [label, model] :
             std::vector<std::pair<std::string, const BackoffModel*>>{{"base", &base},
                                                                      {"emp", &emp}}) {
            std::vector<TokenSeq> chosen;
            for (std::size_t i = 0; i < questions.size(); ++i) {
                const TokenSeq& ref = questions[i].second;
                TokenSeq best_hyp;
                double best_lp = 0.0;
                bool have = false;
                for (int h = 0; h < cfg.n_hypotheses; ++h) {
                    TokenSeq hyp = corrupt(ref, rates, noise_vocab,
                                           i * 1000 + static_cast<std::size_t>(h));
                    double lp = model->log_prob(hyp);
                    if (!have || lp > best_lp) {
                        best_lp = lp;
                        best_hyp = std::move(hyp);
                        have = true;
                    }
                }
                chosen.push_back(std::move(best_hyp));
            }

            std::ofstream out(out_path(("corrupted_" + label + ".jsonl").c_str()));
            std::vector<std::pair<std::string, TokenSeq>> rows;
            for (std::size_t i = 0; i < questions.size(); ++i)
                rows.emplace_back(questions[i].first, chosen[i]);
            write_questions_jsonl(out, rows);

            WerReport bh_sum, fh_sum, lh_sum;
            for (std::size_t i = 0; i < questions.size(); ++i) {
                HalfWer hw = wer_halves(questions[i].second, chosen[i], wh);
                bh_sum.substitutions += hw.bh.substitutions;
                bh_sum.deletions += hw.bh.deletions;
                bh_sum.insertions += hw.bh.insertions;
                bh_sum.ref_len += hw.bh.ref_len;
                if (hw.has_wh) {
                    fh_sum.substitutions += hw.fh.substitutions;
                    fh_sum.deletions += hw.fh.deletions;
                    fh_sum.insertions += hw.fh.insertions;
                    fh_sum.ref_len += hw.fh.ref_len;
                    lh_sum.substitutions += hw.lh.substitutions;
                    lh_sum.deletions += hw.lh.deletions;
                    lh_sum.insertions += hw.lh.insertions;
                    lh_sum.ref_len += hw.lh.ref_len;
                }
            }
            auto rate = [](const WerReport& r) {
                return r.ref_len == 0 ? 0.0
                                      : static_cast<double>(r.errors()) / r.ref_len;
            };
            wer_summary[label] = {{"BH", rate(bh_sum)}, {"FH", rate(fh_sum)},
                                  {"LH", rate(lh_sum)}};
            transcripts[label] = std::move(chosen);
        }
    } catch (const std::exception& e) {
        stage_fail("recognition", e);
    }

    // ---- question answering ----
    std::map<std::string, MrrReport> mrr_by_condition;
    try {
        FixedPhraseSet phrases = FixedPhraseSet::build(phrase_lines);
        RuleTagger tagger;
        QaConfig qa_cfg;
        qa_cfg.retrieval = {cfg.k, cfg.f_beta, cfg.top_m};
        qa_cfg.type_mismatch_weight = cfg.type_mismatch_weight;
        qa_cfg.max_answer_len = cfg.max_answer_len;

        auto run_condition = [&](const std::string& label,
                                 const std::vector<TokenSeq>& inputs) {
            std::map<std::string, std::vector<TokenSeq>> results;
            std::ofstream out(out_path(("answers_" + label + ".jsonl").c_str()));
            for (std::size_t i = 0; i < questions.size(); ++i) {
                std::vector<ScoredAnswer> ranked;
                if (!inputs[i].empty())
                    ranked = answer(index, inputs[i], phrases, type_map, tagger, qa_cfg);
                nlohmann::ordered_json j;
                j["qid"] = questions[i].first;
                j["ranked"] = nlohmann::ordered_json::array();
                std::vector<TokenSeq> surfaces;
                for (const auto& sa : ranked) {
                    std::string surface;
                    for (std::size_t k = 0; k < sa.surface.size(); ++k)
                        surface += (k ? " " : "") + sa.surface[k];
                    j["ranked"].push_back({{"surface", surface},
                                           {"doc", sa.span.doc_id},
                                           {"p_s", sa.span.p_s},
                                           {"p_f", sa.span.p_f},
                                           {"L", sa.l}});
                    surfaces.push_back(sa.surface);
                }
                out << j.dump() << '\n';
                results[questions[i].first] = std::move(surfaces);
            }
            mrr_by_condition[label] = mrr(results, gold);
        };

        std::vector<TokenSeq> clean;
        for (const auto& [qid, toks] : questions) clean.push_back(toks);
        run_condition("clean", clean);
        run_condition("base", transcripts.at("base"));
        run_condition("emp", transcripts.at("emp"));
    } catch (const std::exception& e) {
        stage_fail("qa", e);
    }

    // ---- significance ----
    TTestReport ttest;
    try {
        std::vector<double> emp_rr, base_rr;
        for (const auto& [qid, rr] : mrr_by_condition.at("emp").per_question) {
            emp_rr.push_back(rr);
            base_rr.push_back(mrr_by_condition.at("base").per_question.at(qid));
        }
        ttest = paired_t_test(emp_rr, base_rr);
    } catch (const std::exception& e) {
        stage_fail("ttest", e);
    }

    ExperimentReport report;
    auto& s = report.summary;
    s["schema_version"] = 1;
    s["ppl"] = ppl;
    s["wer"] = wer_summary;
    s["noise"] = {{"p_sub", rates.p_sub},
                  {"p_del", rates.p_del},
                  {"p_ins", rates.p_ins},
                  {"achieved_wer", achieved_wer}};
    s["mrr"] = {{"clean", mrr_by_condition.at("clean").mean},
                {"base", mrr_by_condition.at("base").mean},
                {"emp", mrr_by_condition.at("emp").mean}};
    s["ttest"] = {{"t", ttest.t}, {"df", ttest.df}, {"p", ttest.p}};

    std::ofstream out(out_path("summary.json"));
    out << s.dump(2) << '\n';
    return report;
}

std::vector<std::pair<std::string, TokenSeq>> read_questions_jsonl(std::istream& in) {
    std::vector<std::pair<std::string, TokenSeq>> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        out.emplace_back(j.at("qid").get<std::string>(), j.at("tokens").get<TokenSeq>());
    }
    return out;
}

void write_questions_jsonl(std::ostream& out,
                           const std::vector<std::pair<std::string, TokenSeq>>& questions) {
    for (const auto& [qid, toks] : questions) {
        nlohmann::ordered_json j;
        j["qid"] = qid;
        j["tokens"] = toks;
        out << j.dump() << '\n';
    }
}

std::map<std::string, std::vector<TokenSeq>> read_gold_jsonl(std::istream& in) {
    std::map<std::string, std::vector<TokenSeq>> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        std::vector<TokenSeq> answers;
        for (const auto& a : j.at("answers")) answers.push_back(a.get<TokenSeq>());
        out[j.at("qid").get<std::string>()] = std::move(answers);
    }
    return out;
}

std::map<std::string, std::vector<TokenSeq>> read_results_jsonl(std::istream& in) {
    std::map<std::string, std::vector<TokenSeq>> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        std::vector<TokenSeq> ranked;
        for (const auto& r : j.at("ranked")) {
            std::string surface = r.at("surface").get<std::string>();
            TokenSeq toks;
            std::string tok;
            std::istringstream ss(surface);
            while (ss >> tok) toks.push_back(tok);
            ranked.push_back(std::move(toks));
        }
        out[j.at("qid").get<std::string>()] = std::move(ranked);
    }
    return out;
}

TypeMap read_type_map_json(std::istream& in) {
    nlohmann::json j;
    in >> j;
    TypeMap out;
    for (const auto& [key, value] : j.items()) {
        TokenSeq phrase;
        std::istringstream ss(key);
        Token t;
        while (ss >> t) phrase.push_back(t);
        out[phrase] = answer_type_from_string(value.get<std::string>());
    }
    return out;
}

}  // namespace sdqa
