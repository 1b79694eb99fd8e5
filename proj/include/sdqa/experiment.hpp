#ifndef SDQA_EXPERIMENT_HPP
#define SDQA_EXPERIMENT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdqa/corpus.hpp"
#include "sdqa/noise.hpp"
#include "sdqa/qa.hpp"

namespace sdqa {

struct ExperimentConfig {
    std::string corpus_path;
    std::string phrases_path;
    std::string stoplist_path;
    std::string wh_lexicon_path;
    std::string questions_path;
    std::string gold_path;
    std::string type_map_path;  // optional

    int order = 3;
    std::size_t vocab_cap = 60000;
    double gamma = 50.0;
    double discount = 0.5;
    double f_beta = 2.0;
    int k = 1;
    int top_m = 30;
    int max_answer_len = 6;
    double type_mismatch_weight = 0.1;

    std::optional<NoiseRates> noise_rates;  // exactly one of the two noise settings
    std::optional<double> target_wer;
    double wer_tolerance = 0.02;
    int n_hypotheses = 5;

    std::uint64_t seed = 0;
    std::string out_dir;

    static ExperimentConfig from_json(const nlohmann::json& j);
};

struct ExperimentReport {
    nlohmann::ordered_json summary;
};

/// Full protocol: BASE build, EMP adaptation, half perplexities, question
/// corruption with LM-based hypothesis selection, QA on clean and corrupted
/// inputs under both models, MRR, and the paired t-test. Every stage persists
/// its output under out_dir.
ExperimentReport run_experiment(const ExperimentConfig& config);

// JSON-lines helpers shared by the pipeline and the CLI.
std::vector<std::pair<std::string, TokenSeq>> read_questions_jsonl(std::istream& in);
void write_questions_jsonl(std::ostream& out,
                           const std::vector<std::pair<std::string, TokenSeq>>& questions);
std::map<std::string, std::vector<TokenSeq>> read_gold_jsonl(std::istream& in);
std::map<std::string, std::vector<TokenSeq>> read_results_jsonl(std::istream& in);
TypeMap read_type_map_json(std::istream& in);

}  // namespace sdqa

#endif
