#pragma once

#include "supportsum/config.hpp"
#include "supportsum/corpus.hpp"
#include "supportsum/eval.hpp"
#include "supportsum/graphrank.hpp"
#include "supportsum/ranking.hpp"
#include "supportsum/summarizer.hpp"
#include "supportsum/vectorspace.hpp"

#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace supportsum::pipeline {

struct RankOutput {
    Ranking ranking;
    vectorspace::TermPassageMatrix matrix;
    // Only for the graph models.
    std::optional<graphrank::SimilarityGraph> graph;
    // Power-iteration models only.
    std::size_t iterations = 0;
    bool converged = true;
};

// Background passages take part only for the support-set model with
// mixed_source on; they never appear in the ranking.
RankOutput rank_document(const corpus::InputSource& doc, std::span<const corpus::InputSource> background,
                         const RunConfig& config);

// The configured budget, or the references' mean word count (rounded up)
// when the config sizes summaries after them.
summarizer::SizeBudget budget_for(const RunConfig& config, std::span<const corpus::ReferenceSummary> references);

// {"doc_id", "model", "metric", "strategy", "ranking": [{"index", "score"}], ...}
std::string ranking_to_json(const std::string& doc_id, const RankOutput& output, const RunConfig& config);

struct CorpusRun {
    std::vector<summarizer::Summary> summaries;  // in document order
    eval::EvalReport report;
};

// Throws MissingReference when a document has no reference, and
// InvalidArgument when mixed_source is on but the corpus has no background.
CorpusRun evaluate_corpus(const corpus::Corpus& corpus, const RunConfig& config);

// Runs fn(i) for i in [0, n) on at most `jobs` threads. The first exception,
// in index order, is rethrown after every task has finished.
template <class Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn)
{
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min(std::max<std::size_t>(jobs, 1), n);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace supportsum::pipeline
