#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace supportsum::eval {

struct RougeScore {
    std::size_t n = 1;
    double recall = 0.0;
    std::size_t match_count = 0;
    std::size_t total_count = 0;

    friend bool operator==(const RougeScore&, const RougeScore&) = default;
};

// N-gram recall pooled over all references: the numerator sums clipped
// matches min(count in candidate, count in reference) per reference, the
// denominator the reference n-gram counts. Throws DegenerateReference when
// a reference has fewer than n tokens.
RougeScore rouge_n(std::span<const std::string> candidate,
                   std::span<const std::vector<std::string>> references, std::size_t n);

struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;
    double level = 0.95;
};

// Arithmetic mean, accumulated in extended precision.
double mean(std::span<const double> values);

// Percentile bootstrap of the mean: resample with replacement, take the
// empirical (1-level)/2 and (1+level)/2 quantiles of the resampled means.
ConfidenceInterval bootstrap_ci(std::span<const double> scores, std::size_t resamples = 1000,
                                double level = 0.95, std::uint64_t seed = 42);

struct WilcoxonResult {
    double statistic = 0.0;  // W: sum of the ranks of positive differences
    std::size_t informative_pairs = 0;
    double z = 0.0;
    double p_value = 1.0;  // one-sided, alternative a > b
};

// Paired signed-rank test of a > b with the normal approximation. Zero
// differences are dropped, tied magnitudes share their average rank and the
// variance carries the tie correction. Throws TooFewPairs below 6 pairs.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    bool continuity_correction = true);

struct EvalReport {
    std::string system;
    std::size_t rouge_n = 1;
    std::map<std::string, RougeScore> per_doc;
    double mean = 0.0;
    ConfidenceInterval ci;
    std::size_t resamples = 1000;
    std::uint64_t seed = 42;

    std::vector<double> recalls() const;  // in doc_id order
};

EvalReport make_report(std::string system, std::size_t n, std::map<std::string, RougeScore> per_doc,
                       std::size_t resamples, double level, std::uint64_t seed);

std::string report_to_json(const EvalReport& report);

// system, mean, ci_low, ci_high with 4 decimals.
std::string tsv_header();
std::string tsv_row(const EvalReport& report);

} // namespace supportsum::eval
