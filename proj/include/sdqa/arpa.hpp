#ifndef SDQA_ARPA_HPP
#define SDQA_ARPA_HPP

#include <iosfwd>
#include <string>

#include "sdqa/ngram.hpp"

namespace sdqa {

/// Standard ARPA n-gram format, log10 probabilities and back-off weights.
void export_arpa(const BackoffModel& model, std::ostream& out);
BackoffModel import_arpa(std::istream& in);

void save_arpa(const BackoffModel& model, const std::string& path);
BackoffModel load_arpa(const std::string& path);

}  // namespace sdqa

#endif
