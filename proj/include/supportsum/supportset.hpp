#pragma once

#include "supportsum/ranking.hpp"
#include "supportsum/vectorspace.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace supportsum::supportset {

// Threshold strategies. Each decides, for one owner passage, which of the
// remaining passages enter its support set, from their distances alone.
namespace strategy {

// k nearest neighbours (support set cardinality).
struct FixedCardinality {
    std::size_t k = 1;
};
// ceil(fraction * candidates) nearest neighbours, at least one.
struct RelativeCardinality {
    double fraction = 0.1;
};
// One radius shared by every passage (the epsilon-NN special case).
struct Radius {
    double epsilon = 0.0;
};
// H0: closer than the average distance.
struct AverageDistance {};
// H1.1: closer than mean - alpha * stddev.
struct StdDev {
    double alpha = 0.0;
};
// H1.2: the sorted distances up to where consecutive gaps stop shrinking.
struct DiminishingDifferences {};
// H1.3: the sorted distances up to the first gap not below the mean gap.
struct AverageGap {};
// H2.x: two-representative split over candidates in source order.
struct OrderMinAvg {};
struct OrderMinMax {};
struct OrderFirstSecond {};
// H3.1 and H3.2: weight functions cut at delta.
struct GaussianWeight {
    double alpha = 1.0;
    double delta = 0.5;
};
struct TanhWeight {
    double alpha = 1.0;
    double delta = 0.5;
};

} // namespace strategy

using ThresholdStrategy =
    std::variant<strategy::FixedCardinality, strategy::RelativeCardinality, strategy::Radius,
                 strategy::AverageDistance, strategy::StdDev, strategy::DiminishingDifferences,
                 strategy::AverageGap, strategy::OrderMinAvg, strategy::OrderMinMax,
                 strategy::OrderFirstSecond, strategy::GaussianWeight, strategy::TanhWeight>;

// Grammar: knn:K | relative:F | radius:E | h0 | h1.1:A | h1.2 | h1.3 | h2.1 |
// h2.2 | h2.3 | h3.1:A,D | h3.2:A,D, with long aliases (ssc:K, avg-distance,
// stddev:A, diminishing, avg-gap, order-min-avg, order-min-max,
// order-first-second, gaussian:A,D, tanh:A,D). Throws InvalidArgument.
ThresholdStrategy parse_strategy(std::string_view text);
std::string strategy_name(const ThresholdStrategy& s);
// Throws InvalidArgument when a parameter is out of range.
void validate(const ThresholdStrategy& s);

struct Candidate {
    std::size_t index = 0;  // matrix column
    double distance = 0.0;

    friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct SupportSet {
    std::size_t owner = 0;              // matrix column
    std::vector<std::size_t> members;   // matrix columns, ascending
    // Realized threshold in distance units. For rules that are not a plain
    // comparison (cardinality, order split, weight functions) it is the
    // largest admitted distance.
    double epsilon = 0.0;
    // Members satisfy distance <= epsilon when true, distance < epsilon otherwise.
    bool inclusive = false;

    bool contains(std::size_t column) const;
};

struct SupportSetCollection {
    std::vector<SupportSet> sets;  // one per input passage, in passage order
    vectorspace::MetricSpec metric = vectorspace::MetricSpec::manhattan();
    ThresholdStrategy strategy;
    std::size_t first_selectable = 0;  // first input column; earlier ones are background
    std::size_t num_columns = 0;
};

// Distances from column `owner` to every other column, in column order.
std::vector<Candidate> distances_from(const vectorspace::TermPassageMatrix& matrix,
                                      std::size_t owner, const vectorspace::MetricSpec& metric);

SupportSet build_support_set(std::size_t owner, std::span<const Candidate> candidates,
                             const ThresholdStrategy& strategy);

// mu - alpha * sigma with the population standard deviation.
double threshold_stddev(std::span<const double> distances, double alpha);

// Threshold of the diminishing-differences rule over ascending distances,
// or nullopt when the gaps never shrink (or fewer than three distances).
std::optional<double> threshold_diminishing(std::span<const double> sorted);

// Threshold of the average-gap rule over ascending distances, or nullopt
// when the first gap is not below the mean gap (or fewer than three).
std::optional<double> threshold_avg_gap(std::span<const double> sorted);

// Two-representative split of candidates given in source order; returns
// the columns of the subset that holds the nearest candidate. Ties between
// the two representatives go to the second one.
std::vector<std::size_t> partition_by_order(std::span<const Candidate> candidates, double r1,
                                            double r2);

bool membership_gaussian(double d, std::span<const double> distances, double alpha, double delta);
bool membership_tanh(double d, std::span<const double> distances, double alpha, double delta);

// One support set per input passage; candidates are all other columns,
// background included. Needs at least two columns.
SupportSetCollection build_collection(const vectorspace::TermPassageMatrix& matrix,
                                      const vectorspace::MetricSpec& metric,
                                      const ThresholdStrategy& strategy);

// Score of an input passage = number of support sets it belongs to.
Ranking centrality_ranking(const SupportSetCollection& collection);

} // namespace supportsum::supportset
