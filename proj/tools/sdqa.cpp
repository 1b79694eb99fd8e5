#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdqa/arpa.hpp"
#include "sdqa/eval.hpp"
#include "sdqa/experiment.hpp"
#include "sdqa/fixture.hpp"
#include "sdqa/ngram.hpp"
#include "sdqa/phrase.hpp"
#include "sdqa/qa.hpp"

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

sdqa::CorpusIndex load_index(const std::string& corpus_path, const std::string& stoplist_path) {
    auto corpus_in = open_input(corpus_path);
    sdqa::TermSet stoplist;
    if (!stoplist_path.empty()) {
        auto in = open_input(stoplist_path);
        stoplist = sdqa::read_token_lines(in);
    }
    return sdqa::CorpusIndex::ingest(sdqa::read_corpus_jsonl(corpus_in), std::move(stoplist));
}

std::string join(const sdqa::TokenSeq& toks) {
    std::string s;
    for (std::size_t i = 0; i < toks.size(); ++i) s += (i ? " " : "") + toks[i];
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-phrase LM adaptation and error-robust passage-retrieval QA"};
    app.require_subcommand(1);

    // ---- adapt-lm ----
    auto* adapt_cmd = app.add_subcommand("adapt-lm", "build BASE and EMP back-off models");
    std::string al_corpus, al_phrases, al_out_base, al_out_emp;
    double al_gamma = 50.0, al_discount = 0.5;
    int al_order = 3;
    std::size_t al_cap = 60000;
    adapt_cmd->add_option("--corpus", al_corpus, "corpus JSONL")->required();
    adapt_cmd->add_option("--phrases", al_phrases, "fixed-phrase file")->required();
    adapt_cmd->add_option("--gamma", al_gamma, "emphasis multiplier");
    adapt_cmd->add_option("--order", al_order, "n-gram order");
    adapt_cmd->add_option("--discount", al_discount, "absolute discount");
    adapt_cmd->add_option("--vocab-cap", al_cap, "vocabulary cap");
    adapt_cmd->add_option("--out-base", al_out_base, "BASE ARPA output path");
    adapt_cmd->add_option("--out-emp", al_out_emp, "EMP ARPA output path")->required();

    // ---- retrieve ----
    auto* retrieve_cmd = app.add_subcommand("retrieve", "passage retrieval per query");
    std::string rt_corpus, rt_stoplist, rt_queries;
    sdqa::RetrievalConfig rt_cfg;
    retrieve_cmd->add_option("--corpus", rt_corpus)->required();
    retrieve_cmd->add_option("--stoplist", rt_stoplist);
    retrieve_cmd->add_option("--query-file", rt_queries, "questions JSONL")->required();
    retrieve_cmd->add_option("--k", rt_cfg.k, "sentence window radius");
    retrieve_cmd->add_option("--f-beta", rt_cfg.f_beta, "recall weight");
    retrieve_cmd->add_option("--top-m", rt_cfg.top_m, "document pre-filter size");

    // ---- answer ----
    auto* answer_cmd = app.add_subcommand("answer", "factoid question answering");
    std::string an_lm, an_phrases, an_corpus, an_stoplist, an_questions, an_type_map;
    sdqa::QaConfig an_cfg;
    answer_cmd->add_option("--lm", an_lm, "ARPA model (validated; QA scoring is LM-free)");
    answer_cmd->add_option("--phrases", an_phrases)->required();
    answer_cmd->add_option("--corpus", an_corpus)->required();
    answer_cmd->add_option("--stoplist", an_stoplist);
    answer_cmd->add_option("--questions", an_questions)->required();
    answer_cmd->add_option("--type-map", an_type_map, "phrase -> answer type JSON");
    answer_cmd->add_option("--k", an_cfg.retrieval.k);
    answer_cmd->add_option("--f-beta", an_cfg.retrieval.f_beta);
    answer_cmd->add_option("--top-m", an_cfg.retrieval.top_m);
    answer_cmd->add_option("--max-answer-len", an_cfg.max_answer_len);
    answer_cmd->add_option("--lambda", an_cfg.type_mismatch_weight, "type mismatch weight");

    // ---- corrupt ----
    auto* corrupt_cmd = app.add_subcommand("corrupt", "simulate ASR transcription errors");
    std::string co_input, co_rates, co_corpus, co_confusion;
    double co_target = -1.0, co_tol = 0.02;
    std::uint64_t co_seed = 42;
    corrupt_cmd->add_option("--input", co_input, "questions JSONL")->required();
    corrupt_cmd->add_option("--rates", co_rates, "JSON {\"p_sub\":..,\"p_del\":..,\"p_ins\":..}");
    corrupt_cmd->add_option("--target-wer", co_target, "calibrate rates to this mean WER");
    corrupt_cmd->add_option("--tolerance", co_tol, "calibration tolerance");
    corrupt_cmd->add_option("--vocab-from", co_corpus, "corpus JSONL supplying the vocabulary")
        ->required();
    corrupt_cmd->add_option("--confusion", co_confusion, "JSON map token -> [tokens]");
    corrupt_cmd->add_option("--seed", co_seed);

    // ---- eval-wer ----
    auto* wer_cmd = app.add_subcommand("eval-wer", "WER with BH/FH/LH breakdown");
    std::string we_ref, we_hyp, we_wh;
    wer_cmd->add_option("--ref", we_ref)->required();
    wer_cmd->add_option("--hyp", we_hyp)->required();
    wer_cmd->add_option("--wh-lexicon", we_wh)->required();

    // ---- eval-mrr ----
    auto* mrr_cmd = app.add_subcommand("eval-mrr", "mean reciprocal rank");
    std::string mr_results, mr_gold;
    mrr_cmd->add_option("--results", mr_results)->required();
    mrr_cmd->add_option("--gold", mr_gold)->required();

    // ---- eval-ttest ----
    auto* tt_cmd = app.add_subcommand("eval-ttest", "paired t-test over score files");
    std::string tt_a, tt_b;
    tt_cmd->add_option("--a", tt_a, "JSONL {\"qid\":..,\"score\":..}")->required();
    tt_cmd->add_option("--b", tt_b)->required();

    // ---- run ----
    auto* run_cmd = app.add_subcommand("run", "full experiment from a config file");
    std::string run_config;
    run_cmd->add_option("--config", run_config, "experiment JSON")->required();

    // ---- make-fixture ----
    auto* fix_cmd = app.add_subcommand("make-fixture", "generate a synthetic corpus");
    std::uint64_t fx_seed = 1;
    int fx_docs = 100, fx_questions = 20;
    std::string fx_out;
    fix_cmd->add_option("--seed", fx_seed);
    fix_cmd->add_option("--docs", fx_docs);
    fix_cmd->add_option("--questions", fx_questions);
    fix_cmd->add_option("--out", fx_out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*adapt_cmd) {
            auto index = load_index(al_corpus, "");
            auto table = sdqa::count_ngrams(index, al_order, al_cap);
            if (!al_out_base.empty())
                sdqa::save_arpa(sdqa::fit_backoff(table, al_discount), al_out_base);
            auto phr_in = open_input(al_phrases);
            auto phrases = sdqa::FixedPhraseSet::build(sdqa::read_phrase_lines(phr_in));
            sdqa::save_arpa(
                sdqa::adapt(table, phrases, {al_gamma, al_order}, al_discount), al_out_emp);
        } else if (*retrieve_cmd) {
            auto index = load_index(rt_corpus, rt_stoplist);
            auto q_in = open_input(rt_queries);
            sdqa::RuleTagger tagger;
            for (const auto& [qid, toks] : sdqa::read_questions_jsonl(q_in)) {
                sdqa::TermSet q = index.term_set(toks);
                std::vector<sdqa::AnswerSpan> spans;
                for (const sdqa::Document* d : sdqa::top_documents(index, q, rt_cfg.top_m))
                    for (const auto& c : sdqa::extract_candidates(*d, tagger, 6))
                        spans.push_back(c.span);
                for (const auto& rp : sdqa::search_passages(index, q, spans, rt_cfg)) {
                    nlohmann::ordered_json j;
                    j["qid"] = qid;
                    j["doc"] = rp.span.doc_id;
                    j["sentence"] = rp.span.sentence_index;
                    j["kinds"] = nlohmann::json::array();
                    for (auto kind : rp.context.element_kinds)
                        j["kinds"].push_back(sdqa::to_string(kind));
                    j["F"] = rp.context.f;
                    j["R"] = rp.context.r;
                    j["P"] = rp.context.p;
                    std::cout << j.dump() << '\n';
                }
            }
        } else if (*answer_cmd) {
            if (!an_lm.empty()) sdqa::load_arpa(an_lm);
            auto index = load_index(an_corpus, an_stoplist);
            auto phr_in = open_input(an_phrases);
            auto phrases = sdqa::FixedPhraseSet::build(sdqa::read_phrase_lines(phr_in));
            sdqa::TypeMap type_map;
            if (!an_type_map.empty()) {
                auto t_in = open_input(an_type_map);
                type_map = sdqa::read_type_map_json(t_in);
            }
            sdqa::RuleTagger tagger;
            auto q_in = open_input(an_questions);
            for (const auto& [qid, toks] : sdqa::read_questions_jsonl(q_in)) {
                nlohmann::ordered_json j;
                j["qid"] = qid;
                j["ranked"] = nlohmann::json::array();
                for (const auto& sa :
                     sdqa::answer(index, toks, phrases, type_map, tagger, an_cfg)) {
                    j["ranked"].push_back({{"surface", join(sa.surface)},
                                           {"doc", sa.span.doc_id},
                                           {"p_s", sa.span.p_s},
                                           {"p_f", sa.span.p_f},
                                           {"L", sa.l}});
                }
                std::cout << j.dump() << '\n';
            }
        } else if (*corrupt_cmd) {
            auto q_in = open_input(co_input);
            auto questions = sdqa::read_questions_jsonl(q_in);
            auto corpus_in = open_input(co_corpus);
            std::set<sdqa::Token> vocab_set;
            for (const auto& d : sdqa::read_corpus_jsonl(corpus_in))
                for (const auto& s : d.sentences) vocab_set.insert(s.begin(), s.end());
            std::vector<sdqa::Token> vocab(vocab_set.begin(), vocab_set.end());

            sdqa::NoiseRates rates;
            if (co_target >= 0.0) {
                std::vector<sdqa::TokenSeq> sample;
                for (const auto& [qid, toks] : questions) sample.push_back(toks);
                rates = sdqa::calibrate(co_target, sample, co_tol, vocab, co_seed).rates;
            } else {
                if (co_rates.empty())
                    throw std::runtime_error("corrupt: give --rates or --target-wer");
                auto j = nlohmann::json::parse(co_rates);
                rates.p_sub = j.value("p_sub", 0.0);
                rates.p_del = j.value("p_del", 0.0);
                rates.p_ins = j.value("p_ins", 0.0);
                rates.seed = co_seed;
            }
            if (!co_confusion.empty()) {
                auto c_in = open_input(co_confusion);
                nlohmann::json j;
                c_in >> j;
                for (const auto& [tok, repl] : j.items())
                    rates.confusion[tok] = repl.get<std::vector<sdqa::Token>>();
            }
            for (std::size_t i = 0; i < questions.size(); ++i) {
                nlohmann::ordered_json j;
                j["qid"] = questions[i].first;
                j["tokens"] = sdqa::corrupt(questions[i].second, rates, vocab, i);
                std::cout << j.dump() << '\n';
            }
        } else if (*wer_cmd) {
            auto ref_in = open_input(we_ref);
            auto hyp_in = open_input(we_hyp);
            auto wh_in = open_input(we_wh);
            auto refs = sdqa::read_questions_jsonl(ref_in);
            auto hyps = sdqa::read_questions_jsonl(hyp_in);
            sdqa::TermSet wh = sdqa::read_token_lines(wh_in);
            std::map<std::string, sdqa::TokenSeq> hyp_by_qid(hyps.begin(), hyps.end());

            sdqa::WerReport bh_sum, fh_sum, lh_sum;
            for (const auto& [qid, ref] : refs) {
                auto it = hyp_by_qid.find(qid);
                if (it == hyp_by_qid.end())
                    throw std::runtime_error("eval-wer: missing hypothesis for " + qid);
                sdqa::HalfWer hw = sdqa::wer_halves(ref, it->second, wh);
                nlohmann::ordered_json j;
                j["qid"] = qid;
                j["BH"] = hw.bh.wer;
                if (hw.has_wh) {
                    j["FH"] = hw.fh.wer;
                    j["LH"] = hw.lh.wer;
                } else {
                    j["no_wh"] = true;
                }
                std::cout << j.dump() << '\n';
                auto acc = [](sdqa::WerReport& sum, const sdqa::WerReport& r) {
                    sum.substitutions += r.substitutions;
                    sum.deletions += r.deletions;
                    sum.insertions += r.insertions;
                    sum.ref_len += r.ref_len;
                };
                acc(bh_sum, hw.bh);
                if (hw.has_wh) {
                    acc(fh_sum, hw.fh);
                    acc(lh_sum, hw.lh);
                }
            }
            auto rate = [](const sdqa::WerReport& r) {
                return r.ref_len == 0 ? 0.0 : static_cast<double>(r.errors()) / r.ref_len;
            };
            nlohmann::ordered_json agg;
            agg["aggregate"] = {{"BH", rate(bh_sum)}, {"FH", rate(fh_sum)},
                                {"LH", rate(lh_sum)}};
            std::cout << agg.dump() << '\n';
        } else if (*mrr_cmd) {
            auto r_in = open_input(mr_results);
            auto g_in = open_input(mr_gold);
            auto rep = sdqa::mrr(sdqa::read_results_jsonl(r_in), sdqa::read_gold_jsonl(g_in));
            nlohmann::ordered_json j;
            j["mrr"] = rep.mean;
            j["questions"] = rep.question_count;
            j["per_question"] = rep.per_question;
            std::cout << j.dump(2) << '\n';
        } else if (*tt_cmd) {
            auto read_scores = [](const std::string& path) {
                auto in = open_input(path);
                std::map<std::string, double> out;
                std::string line;
                while (std::getline(in, line)) {
                    if (line.empty()) continue;
                    auto j = nlohmann::json::parse(line);
                    out[j.at("qid").get<std::string>()] = j.at("score").get<double>();
                }
                return out;
            };
            auto sa = read_scores(tt_a);
            auto sb = read_scores(tt_b);
            std::vector<double> a, b;
            for (const auto& [qid, score] : sa) {
                auto it = sb.find(qid);
                if (it == sb.end())
                    throw std::runtime_error("eval-ttest: qid " + qid + " missing from --b");
                a.push_back(score);
                b.push_back(it->second);
            }
            auto rep = sdqa::paired_t_test(a, b);
            nlohmann::ordered_json j;
            j["t"] = rep.t;
            j["df"] = rep.df;
            j["p"] = rep.p;
            std::cout << j.dump() << '\n';
        } else if (*run_cmd) {
            auto c_in = open_input(run_config);
            nlohmann::json j;
            c_in >> j;
            auto report = sdqa::run_experiment(sdqa::ExperimentConfig::from_json(j));
            std::cout << report.summary.dump(2) << '\n';
        } else if (*fix_cmd) {
            sdqa::write_fixture(sdqa::make_fixture(fx_seed, fx_docs, fx_questions), fx_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
