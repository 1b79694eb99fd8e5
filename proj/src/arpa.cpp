#include "sdqa/arpa.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sdqa {

namespace {
constexpr double kLn10 = 2.302585092994046;

[[noreturn]] void parse_fail(std::size_t lineno, const std::string& msg) {
    throw std::runtime_error("ARPA parse error at line " + std::to_string(lineno) + ": " + msg);
}
}  // namespace

void export_arpa(const BackoffModel& model, std::ostream& out) {
    out << "\\data\\\n";
    for (int n = 1; n <= model.order(); ++n)
        out << "ngram " << n << "=" << model.grams(n).size() << "\n";

    out << std::setprecision(17);
    for (int n = 1; n <= model.order(); ++n) {
        out << "\n\\" << n << "-grams:\n";
        for (const auto& [gram, e] : model.grams(n)) {
            out << e.log_prob / kLn10;
            for (int id : gram) out << ' ' << model.vocab().token(id);
            if (e.has_bow) out << ' ' << std::log10(e.bow);
            out << "\n";
        }
    }
    out << "\n\\end\\\n";
}

class ArpaReader {
public:
    BackoffModel read(std::istream& in) {
        std::string line;
        std::size_t lineno = 0;

        auto next_content = [&](std::string& out_line) {
            while (std::getline(in, out_line)) {
                ++lineno;
                if (out_line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
            }
            return false;
        };

        if (!next_content(line) || line.rfind("\\data\\", 0) != 0)
            parse_fail(lineno, "missing \\data\\ section");

        std::vector<std::size_t> declared;
        while (next_content(line)) {
            if (line.rfind("ngram", 0) != 0) break;
            int n;
            std::size_t k;
            if (std::sscanf(line.c_str(), "ngram %d=%zu", &n, &k) != 2)
                parse_fail(lineno, "malformed ngram count line");
            if (n != static_cast<int>(declared.size()) + 1)
                parse_fail(lineno, "ngram counts out of order");
            declared.push_back(k);
        }
        if (declared.empty()) parse_fail(lineno, "no ngram counts declared");

        model_.order_ = static_cast<int>(declared.size());
        model_.grams_.resize(declared.size());
        std::vector<Token> unigrams;
        std::vector<std::vector<std::pair<TokenSeq, BackoffModel::Entry>>> pending(
            declared.size());

        bool saw_end = false;
        for (int n = 1; n <= model_.order_; ++n) {
            std::string expect = "\\" + std::to_string(n) + "-grams:";
            if (line.rfind(expect, 0) != 0)
                parse_fail(lineno, "missing " + expect + " section");
            bool section_done = false;
            while (next_content(line)) {
                if (line[0] == '\\') {
                    section_done = true;
                    break;
                }
                std::istringstream ss(line);
                double lp10;
                if (!(ss >> lp10)) parse_fail(lineno, "expected log10 probability");
                TokenSeq toks;
                std::string tok;
                std::vector<std::string> fields;
                while (ss >> tok) fields.push_back(tok);
                if (fields.size() < static_cast<std::size_t>(n))
                    parse_fail(lineno, "too few tokens for a " + std::to_string(n) + "-gram");
                BackoffModel::Entry e;
                e.log_prob = lp10 * kLn10;
                std::size_t ntoks = static_cast<std::size_t>(n);
                if (fields.size() == ntoks + 1) {
                    e.bow = std::pow(10.0, std::stod(fields.back()));
                    e.has_bow = true;
                    fields.pop_back();
                } else if (fields.size() != ntoks) {
                    parse_fail(lineno, "unexpected field count");
                }
                toks.assign(fields.begin(), fields.end());
                if (n == 1) unigrams.push_back(toks[0]);
                pending[static_cast<std::size_t>(n - 1)].emplace_back(std::move(toks),
                                                                      e);
            }
            if (!section_done)
                parse_fail(lineno, n < model_.order_
                                       ? "missing \\" + std::to_string(n + 1) + "-grams: section"
                                       : "missing \\end\\ section");
        }
        if (line.rfind("\\end\\", 0) == 0) saw_end = true;
        if (!saw_end) parse_fail(lineno, "missing \\end\\ section");

        model_.vocab_ = Vocabulary::from_tokens(unigrams);
        for (std::size_t i = 0; i < pending.size(); ++i) {
            if (pending[i].size() != declared[i])
                throw std::runtime_error(
                    "ARPA parse error: declared " + std::to_string(declared[i]) + " " +
                    std::to_string(i + 1) + "-grams but found " +
                    std::to_string(pending[i].size()));
            for (auto& [toks, e] : pending[i])
                model_.grams_[i][model_.vocab_.ids(toks)] = e;
        }
        return std::move(model_);
    }

private:
    BackoffModel model_;
};

BackoffModel import_arpa(std::istream& in) { return ArpaReader().read(in); }

void save_arpa(const BackoffModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    export_arpa(model, out);
}

BackoffModel load_arpa(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return import_arpa(in);
}

}  // namespace sdqa
