#ifndef SDQA_NOISE_HPP
#define SDQA_NOISE_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "sdqa/corpus.hpp"

namespace sdqa {

/// Token-level corruption rates standing in for ASR transcription errors.
struct NoiseRates {
    double p_sub = 0.0;
    double p_del = 0.0;
    double p_ins = 0.0;
    std::uint64_t seed = 0;
    std::map<Token, std::vector<Token>> confusion;  // optional replacements

    void validate() const;  // throws on out-of-range rates
};

/// Corrupts one token sequence: substitution or deletion per token (exclusive
/// events), insertion per gap (n+1 gap positions). Randomness derives from
/// (rates.seed, sentence_index), so the same seed gives identical output and
/// corpus order does not alter individual corruptions. Substitutions never
/// reproduce the original token; reserved LM tokens are never emitted.
TokenSeq corrupt(const TokenSeq& tokens, const NoiseRates& rates,
                 const std::vector<Token>& vocabulary, std::uint64_t sentence_index = 0);

struct CalibrationResult {
    NoiseRates rates;
    double achieved_wer = 0.0;
};

/// Bisects a scale on the 6:2:2 sub:del:ins profile until the mean WER over
/// the sample is within tolerance of the target. Throws when the target is
/// outside the achievable range, reporting that range.
CalibrationResult calibrate(double target_wer, const std::vector<TokenSeq>& sample,
                            double tolerance, const std::vector<Token>& vocabulary,
                            std::uint64_t seed);

}  // namespace sdqa

#endif
