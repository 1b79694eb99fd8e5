#include "sdqa/noise.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "sdqa/eval.hpp"
#include "sdqa/ngram.hpp"

namespace sdqa {

void NoiseRates::validate() const {
    auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!in_unit(p_sub) || !in_unit(p_del) || !in_unit(p_ins))
        throw std::invalid_argument("noise rates must lie in [0,1]");
    if (p_sub + p_del > 1.0)
        throw std::invalid_argument("p_sub + p_del must not exceed 1");
}

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    // splitmix64 step over the combined value
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<Token> usable_vocab(const std::vector<Token>& vocabulary) {
    std::vector<Token> out;
    for (const auto& t : vocabulary)
        if (t != kSentStart && t != kSentEnd && t != kUnknown) out.push_back(t);
    return out;
}

Token draw_other(const std::vector<Token>& vocab, const Token& original,
                 std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    for (int tries = 0; tries < 64; ++tries) {
        const Token& t = vocab[pick(rng)];
        if (t != original) return t;
    }
    // vocabulary of size 1 equal to the original
    throw std::invalid_argument("corrupt: no substitute token available");
}

}  // namespace

TokenSeq corrupt(const TokenSeq& tokens, const NoiseRates& rates,
                 const std::vector<Token>& vocabulary, std::uint64_t sentence_index) {
    rates.validate();
    std::vector<Token> vocab = usable_vocab(vocabulary);
    if (vocab.empty() && (rates.p_sub > 0.0 || rates.p_ins > 0.0))
        throw std::invalid_argument("corrupt: empty vocabulary with nonzero sub/ins rates");

    std::mt19937_64 rng(mix(rates.seed, sentence_index));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, vocab.empty() ? 0 : vocab.size() - 1);

    TokenSeq out;
    auto maybe_insert = [&] {
        if (rates.p_ins > 0.0 && unit(rng) < rates.p_ins) out.push_back(vocab[pick(rng)]);
    };

    for (const auto& tok : tokens) {
        maybe_insert();
        double u = unit(rng);
        if (u < rates.p_sub) {
            auto cit = rates.confusion.find(tok);
            if (cit != rates.confusion.end() && !cit->second.empty()) {
                std::uniform_int_distribution<std::size_t> cpick(0, cit->second.size() - 1);
                out.push_back(cit->second[cpick(rng)]);
            } else {
                out.push_back(draw_other(vocab, tok, rng));
            }
        } else if (u < rates.p_sub + rates.p_del) {
            // deleted
        } else {
            out.push_back(tok);
        }
    }
    maybe_insert();
    return out;
}

CalibrationResult calibrate(double target_wer, const std::vector<TokenSeq>& sample,
                            double tolerance, const std::vector<Token>& vocabulary,
                            std::uint64_t seed) {
    if (sample.empty()) throw std::invalid_argument("calibrate: empty sample");
    if (tolerance <= 0.0) throw std::invalid_argument("calibrate: tolerance must be > 0");
    if (target_wer < 0.0 || target_wer >= 1.0)
        throw std::invalid_argument("calibrate: target WER must lie in [0,1)");

    auto rates_at = [&](double scale) {
        NoiseRates r;
        r.p_sub = 0.6 * scale;
        r.p_del = 0.2 * scale;
        r.p_ins = 0.2 * scale;
        r.seed = seed;
        return r;
    };
    auto mean_wer = [&](double scale) {
        NoiseRates r = rates_at(scale);
        double sum = 0.0;
        for (std::size_t i = 0; i < sample.size(); ++i)
            sum += wer(sample[i], corrupt(sample[i], r, vocabulary, i)).wer;
        return sum / static_cast<double>(sample.size());
    };

    if (target_wer == 0.0) return {rates_at(0.0), 0.0};

    const double kMaxScale = 1.25;  // keeps p_sub + p_del at 1
    double hi_wer = mean_wer(kMaxScale);
    if (target_wer > hi_wer + tolerance)
        throw std::invalid_argument("calibrate: target WER " + std::to_string(target_wer) +
                                    " unreachable; achievable range [0, " +
                                    std::to_string(hi_wer) + "]");

    double lo = 0.0, hi = kMaxScale;
    double scale = hi, achieved = hi_wer;
    for (int iter = 0; iter < 60; ++iter) {
        scale = 0.5 * (lo + hi);
        achieved = mean_wer(scale);
        if (std::abs(achieved - target_wer) <= tolerance) break;
        if (achieved < target_wer) lo = scale;
        else hi = scale;
    }
    return {rates_at(scale), achieved};
}

}  // namespace sdqa
