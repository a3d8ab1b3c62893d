#pragma once

#include "supportsum/corpus.hpp"
#include "supportsum/ranking.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace supportsum::summarizer {

struct SizeBudget {
    enum class Kind { words, sentences, compression };
    Kind kind = Kind::sentences;
    double limit = 1.0;  // word or sentence count, or a fraction in (0,1)

    static SizeBudget words(std::size_t n);
    static SizeBudget sentences(std::size_t n);
    static SizeBudget compression(double rate);
    // words:N | sentences:N | compression:F
    static SizeBudget parse(std::string_view text);
    std::string name() const;
};

struct Summary {
    std::string doc_id;
    std::vector<std::size_t> selected;  // ascending passage indices
    std::string text;                   // selected raw passages, one per line
    std::size_t word_count = 0;

    // Tokens of the selected passages, in source order.
    std::vector<std::string> tokens(const corpus::InputSource& source) const;
};

// Walks the ranking from the top. Word and compression budgets keep adding
// passages while the running word total is below the limit, so the passage
// that crosses it is kept. Sentence budgets take exactly min(limit, N).
Summary compose(const Ranking& ranking, const corpus::InputSource& source, const SizeBudget& budget);

// {"doc_id", "indices", "text"}
std::string summary_to_json(const Summary& summary);

} // namespace supportsum::summarizer
