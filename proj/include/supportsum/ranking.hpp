#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace supportsum {

struct RankedPassage {
    std::size_t index = 0;
    double score = 0.0;

    friend bool operator==(const RankedPassage&, const RankedPassage&) = default;
};

// Passage scores from any centrality model, sorted by score descending and
// then by passage index ascending. Every model funnels its score vector
// through from_scores() so tie handling is identical across models.
class Ranking {
public:
    Ranking() = default;

    // scores[i] is the score of passage i.
    static Ranking from_scores(std::span<const double> scores);

    const std::vector<RankedPassage>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    // Passage indices in rank order.
    std::vector<std::size_t> order() const;

    // Scores indexed by passage (inverse of from_scores).
    std::vector<double> scores_by_index() const;

    friend bool operator==(const Ranking&, const Ranking&) = default;

private:
    std::vector<RankedPassage> entries_;
};

} // namespace supportsum
