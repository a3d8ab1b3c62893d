#include "supportsum/ranking.hpp"

#include <algorithm>

namespace supportsum {

Ranking Ranking::from_scores(std::span<const double> scores)
{
    Ranking r;
    r.entries_.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        r.entries_.push_back({i, scores[i]});
    }
    std::stable_sort(r.entries_.begin(), r.entries_.end(),
                     [](const RankedPassage& a, const RankedPassage& b) {
                         return a.score > b.score;
                     });
    return r;
}

std::vector<std::size_t> Ranking::order() const
{
    std::vector<std::size_t> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) {
        out.push_back(e.index);
    }
    return out;
}

std::vector<double> Ranking::scores_by_index() const
{
    std::vector<double> out(entries_.size(), 0.0);
    for (const auto& e : entries_) {
        if (e.index < out.size()) {
            out[e.index] = e.score;
        }
    }
    return out;
}

} // namespace supportsum
