#include "supportsum/eval.hpp"

#include "supportsum/errors.hpp"
#include "supportsum/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

namespace supportsum::eval {
namespace {

using NgramCounts = std::unordered_map<std::string, std::size_t>;

NgramCounts count_ngrams(std::span<const std::string> tokens, std::size_t n)
{
    NgramCounts counts;
    if (tokens.size() < n) {
        return counts;
    }
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key = tokens[i];
        for (std::size_t k = 1; k < n; ++k) {
            key += '\x1f';
            key += tokens[i + k];
        }
        ++counts[key];
    }
    return counts;
}

// Linear interpolation between order statistics (R's default, type 7).
double quantile(std::span<const double> sorted, double q)
{
    const double h = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    const double frac = h - static_cast<double>(lo);
    if (frac == 0.0) {
        return sorted[lo];
    }
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

} // namespace

RougeScore rouge_n(std::span<const std::string> candidate,
                   std::span<const std::vector<std::string>> references, std::size_t n)
{
    if (n == 0) {
        throw InvalidArgument("ROUGE-N needs n >= 1");
    }
    if (references.empty()) {
        throw InvalidArgument("ROUGE-N needs at least one reference");
    }
    const auto candidate_counts = count_ngrams(candidate, n);
    RougeScore score;
    score.n = n;
    for (const auto& ref : references) {
        if (ref.size() < n) {
            throw DegenerateReference("reference with " + std::to_string(ref.size())
                                      + " tokens has no " + std::to_string(n) + "-gram");
        }
        for (const auto& [gram, count] : count_ngrams(ref, n)) {
            score.total_count += count;
            const auto it = candidate_counts.find(gram);
            if (it != candidate_counts.end()) {
                score.match_count += std::min(count, it->second);
            }
        }
    }
    score.recall = static_cast<double>(score.match_count) / static_cast<double>(score.total_count);
    return score;
}

double mean(std::span<const double> values)
{
    if (values.empty()) {
        throw InvalidArgument("mean of an empty sample");
    }
    long double sum = 0.0L;
    for (double v : values) {
        sum += v;
    }
    return static_cast<double>(sum / static_cast<long double>(values.size()));
}

ConfidenceInterval bootstrap_ci(std::span<const double> scores, std::size_t resamples, double level,
                                std::uint64_t seed)
{
    if (scores.empty()) {
        throw InvalidArgument("bootstrap needs at least one score");
    }
    if (resamples == 0) {
        throw InvalidArgument("bootstrap needs at least one resample");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw InvalidArgument("confidence level must lie in (0,1)");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, scores.size() - 1);
    std::vector<double> means(resamples);
    std::vector<double> sample(scores.size());
    for (auto& m : means) {
        for (auto& s : sample) {
            s = scores[pick(rng)];
        }
        m = mean(sample);
    }
    std::sort(means.begin(), means.end());
    const double tail = (1.0 - level) / 2.0;
    return {quantile(means, tail), quantile(means, 1.0 - tail), level};
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    bool continuity_correction)
{
    if (a.size() != b.size()) {
        throw InvalidArgument("signed-rank test needs paired samples of equal length");
    }
    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) {
            diffs.push_back(d);
        }
    }
    const std::size_t m = diffs.size();
    if (m < 6) {
        throw TooFewPairs("signed-rank test has " + std::to_string(m)
                          + " informative pairs; the normal approximation needs 6");
    }
    std::sort(diffs.begin(), diffs.end(),
              [](double x, double y) { return std::abs(x) < std::abs(y); });

    double statistic = 0.0;
    double tie_term = 0.0;
    for (std::size_t i = 0; i < m;) {
        std::size_t j = i;
        while (j < m && std::abs(diffs[j]) == std::abs(diffs[i])) {
            ++j;
        }
        // Positions i..j-1 hold ranks i+1..j.
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (diffs[k] > 0.0) {
                statistic += rank;
            }
        }
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }

    const double md = static_cast<double>(m);
    const double expected = md * (md + 1.0) / 4.0;
    const double variance = md * (md + 1.0) * (2.0 * md + 1.0) / 24.0 - tie_term / 48.0;
    WilcoxonResult result;
    result.statistic = statistic;
    result.informative_pairs = m;
    result.z = (statistic - expected - (continuity_correction ? 0.5 : 0.0)) / std::sqrt(variance);
    result.p_value = 0.5 * std::erfc(result.z / std::sqrt(2.0));
    return result;
}

std::vector<double> EvalReport::recalls() const
{
    std::vector<double> out;
    out.reserve(per_doc.size());
    for (const auto& [id, score] : per_doc) {
        out.push_back(score.recall);
    }
    return out;
}

EvalReport make_report(std::string system, std::size_t n, std::map<std::string, RougeScore> per_doc,
                       std::size_t resamples, double level, std::uint64_t seed)
{
    EvalReport report;
    report.system = std::move(system);
    report.rouge_n = n;
    report.per_doc = std::move(per_doc);
    report.resamples = resamples;
    report.seed = seed;
    const auto recalls = report.recalls();
    report.mean = mean(recalls);
    report.ci = bootstrap_ci(recalls, resamples, level, seed);
    return report;
}

std::string report_to_json(const EvalReport& report)
{
    nlohmann::ordered_json j;
    j["system"] = report.system;
    j["rouge_n"] = report.rouge_n;
    auto docs = nlohmann::ordered_json::object();
    for (const auto& [id, s] : report.per_doc) {
        docs[id] = {{"recall", s.recall}, {"match_count", s.match_count}, {"total_count", s.total_count}};
    }
    j["per_doc"] = std::move(docs);
    j["mean"] = report.mean;
    j["ci"] = {{"low", report.ci.low}, {"high", report.ci.high}, {"level", report.ci.level}};
    j["resamples"] = report.resamples;
    j["seed"] = report.seed;
    return j.dump(2);
}

std::string tsv_header()
{
    return "system\tmean\tci_low\tci_high";
}

std::string tsv_row(const EvalReport& report)
{
    return report.system + '\t' + format_fixed(report.mean, 4) + '\t' + format_fixed(report.ci.low, 4)
           + '\t' + format_fixed(report.ci.high, 4);
}

} // namespace supportsum::eval
