#include "supportsum/supportset.hpp"

#include "supportsum/errors.hpp"
#include "supportsum/format.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace supportsum::supportset {
namespace {

using vectorspace::MetricSpec;
using vectorspace::TermPassageMatrix;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<double> distances_of(std::span<const Candidate> candidates)
{
    std::vector<double> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) {
        out.push_back(c.distance);
    }
    return out;
}

// Sums in the order given so every caller sees the same rounding.
double mean_of(std::span<const double> values)
{
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

std::vector<Candidate> nearest_first(std::span<const Candidate> candidates)
{
    std::vector<Candidate> sorted(candidates.begin(), candidates.end());
    std::sort(sorted.begin(), sorted.end(), [](const Candidate& a, const Candidate& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
    });
    return sorted;
}

SupportSet take_nearest(std::size_t owner, std::span<const Candidate> candidates, std::size_t count)
{
    SupportSet set{owner, {}, 0.0, false};
    const auto sorted = nearest_first(candidates);
    count = std::min(count, sorted.size());
    for (std::size_t i = 0; i < count; ++i) {
        set.members.push_back(sorted[i].index);
        set.epsilon = sorted[i].distance;
        set.inclusive = true;
    }
    return set;
}

template <typename Admit>
SupportSet admit_where(std::size_t owner, std::span<const Candidate> candidates, Admit admit)
{
    SupportSet set{owner, {}, 0.0, true};
    bool any = false;
    for (const auto& c : candidates) {
        if (admit(c.distance)) {
            set.members.push_back(c.index);
            set.epsilon = any ? std::max(set.epsilon, c.distance) : c.distance;
            any = true;
        }
    }
    if (!any) {
        set.inclusive = false;
    }
    return set;
}

SupportSet below(std::size_t owner, std::span<const Candidate> candidates, double epsilon,
                 bool inclusive)
{
    SupportSet set{owner, {}, epsilon, inclusive};
    for (const auto& c : candidates) {
        if (inclusive ? c.distance <= epsilon : c.distance < epsilon) {
            set.members.push_back(c.index);
        }
    }
    return set;
}

// Shared by H1.2 and H1.3: the rule's threshold, or the nearest distance
// (admitting the nearest candidate and its exact ties) when it never fires.
SupportSet progression_rule(std::size_t owner, std::span<const Candidate> candidates,
                            std::optional<double> (*rule)(std::span<const double>))
{
    auto sorted = distances_of(candidates);
    std::sort(sorted.begin(), sorted.end());
    const auto epsilon = rule(sorted);
    return below(owner, candidates, epsilon.value_or(sorted.front()), true);
}

SupportSet order_split(std::size_t owner, std::span<const Candidate> candidates, double r1, double r2)
{
    auto members = partition_by_order(candidates, r1, r2);
    std::sort(members.begin(), members.end());
    SupportSet set{owner, {}, 0.0, true};
    for (const auto& c : candidates) {
        if (std::binary_search(members.begin(), members.end(), c.index)) {
            set.epsilon = set.members.empty() ? c.distance : std::max(set.epsilon, c.distance);
            set.members.push_back(c.index);
        }
    }
    return set;
}

std::pair<std::string_view, std::string_view> split_head(std::string_view text)
{
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        return {text, {}};
    }
    return {text.substr(0, colon), text.substr(colon + 1)};
}

std::pair<double, double> parse_pair(std::string_view arg, std::string_view whole)
{
    const auto comma = arg.find(',');
    if (comma == std::string_view::npos) {
        throw InvalidArgument("strategy '" + std::string(whole) + "' needs ALPHA,DELTA");
    }
    return {parse_double(arg.substr(0, comma)), parse_double(arg.substr(comma + 1))};
}

} // namespace

ThresholdStrategy parse_strategy(std::string_view text)
{
    const auto [head, arg] = split_head(text);
    const bool has_arg = !arg.empty();
    ThresholdStrategy s;
    if ((head == "knn" || head == "ssc") && has_arg) {
        if (arg.ends_with('%')) {
            s = strategy::RelativeCardinality{parse_double(arg.substr(0, arg.size() - 1)) / 100.0};
        } else {
            s = strategy::FixedCardinality{parse_count(arg)};
        }
    } else if (head == "relative" && has_arg) {
        s = strategy::RelativeCardinality{parse_double(arg)};
    } else if ((head == "radius" || head == "enn") && has_arg) {
        s = strategy::Radius{parse_double(arg)};
    } else if ((head == "h0" || head == "avg-distance") && !has_arg) {
        s = strategy::AverageDistance{};
    } else if ((head == "h1.1" || head == "stddev") && has_arg) {
        s = strategy::StdDev{parse_double(arg)};
    } else if ((head == "h1.2" || head == "diminishing") && !has_arg) {
        s = strategy::DiminishingDifferences{};
    } else if ((head == "h1.3" || head == "avg-gap") && !has_arg) {
        s = strategy::AverageGap{};
    } else if ((head == "h2.1" || head == "order-min-avg") && !has_arg) {
        s = strategy::OrderMinAvg{};
    } else if ((head == "h2.2" || head == "order-min-max") && !has_arg) {
        s = strategy::OrderMinMax{};
    } else if ((head == "h2.3" || head == "order-first-second") && !has_arg) {
        s = strategy::OrderFirstSecond{};
    } else if ((head == "h3.1" || head == "gaussian") && has_arg) {
        const auto [a, d] = parse_pair(arg, text);
        s = strategy::GaussianWeight{a, d};
    } else if ((head == "h3.2" || head == "tanh") && has_arg) {
        const auto [a, d] = parse_pair(arg, text);
        s = strategy::TanhWeight{a, d};
    } else {
        throw InvalidArgument("unknown threshold strategy '" + std::string(text) + "'");
    }
    validate(s);
    return s;
}

std::string strategy_name(const ThresholdStrategy& s)
{
    return std::visit(
        overloaded{
            [](const strategy::FixedCardinality& v) { return "knn:" + std::to_string(v.k); },
            [](const strategy::RelativeCardinality& v) {
                return "relative:" + format_shortest(v.fraction);
            },
            [](const strategy::Radius& v) { return "radius:" + format_shortest(v.epsilon); },
            [](const strategy::AverageDistance&) { return std::string("h0"); },
            [](const strategy::StdDev& v) { return "h1.1:" + format_shortest(v.alpha); },
            [](const strategy::DiminishingDifferences&) { return std::string("h1.2"); },
            [](const strategy::AverageGap&) { return std::string("h1.3"); },
            [](const strategy::OrderMinAvg&) { return std::string("h2.1"); },
            [](const strategy::OrderMinMax&) { return std::string("h2.2"); },
            [](const strategy::OrderFirstSecond&) { return std::string("h2.3"); },
            [](const strategy::GaussianWeight& v) {
                return "h3.1:" + format_shortest(v.alpha) + "," + format_shortest(v.delta);
            },
            [](const strategy::TanhWeight& v) {
                return "h3.2:" + format_shortest(v.alpha) + "," + format_shortest(v.delta);
            },
        },
        s);
}

void validate(const ThresholdStrategy& s)
{
    std::visit(overloaded{
                   [](const strategy::FixedCardinality& v) {
                       if (v.k < 1) throw InvalidArgument("support set cardinality must be >= 1");
                   },
                   [](const strategy::RelativeCardinality& v) {
                       if (!(v.fraction > 0.0 && v.fraction <= 1.0))
                           throw InvalidArgument("relative cardinality must lie in (0,1]");
                   },
                   [](const strategy::Radius& v) {
                       if (!std::isfinite(v.epsilon)) throw InvalidArgument("radius must be finite");
                   },
                   [](const strategy::StdDev& v) {
                       if (!std::isfinite(v.alpha)) throw InvalidArgument("alpha must be finite");
                   },
                   [](const strategy::GaussianWeight& v) {
                       if (!(v.alpha > 0.0)) throw InvalidArgument("alpha must be > 0");
                       if (!(v.delta > 0.0 && v.delta < 1.0))
                           throw InvalidArgument("delta must lie in (0,1)");
                   },
                   [](const strategy::TanhWeight& v) {
                       if (!(v.alpha > 0.0)) throw InvalidArgument("alpha must be > 0");
                       if (!(v.delta > 0.0 && v.delta < 1.0))
                           throw InvalidArgument("delta must lie in (0,1)");
                   },
                   [](const auto&) {},
               },
               s);
}

bool SupportSet::contains(std::size_t column) const
{
    return std::binary_search(members.begin(), members.end(), column);
}

std::vector<Candidate> distances_from(const TermPassageMatrix& matrix, std::size_t owner,
                                      const MetricSpec& metric)
{
    if (owner >= matrix.num_columns()) {
        throw InvalidArgument("passage column out of range");
    }
    std::vector<Candidate> out;
    out.reserve(matrix.num_columns() - 1);
    for (std::size_t j = 0; j < matrix.num_columns(); ++j) {
        if (j != owner) {
            out.push_back({j, vectorspace::pair_distance(matrix, j, owner, metric)});
        }
    }
    return out;
}

double threshold_stddev(std::span<const double> distances, double alpha)
{
    const double mu = mean_of(distances);
    double squares = 0.0;
    for (double d : distances) {
        squares += (d - mu) * (d - mu);
    }
    const double sigma = std::sqrt(squares / static_cast<double>(distances.size()));
    return mu - alpha * sigma;
}

std::optional<double> threshold_diminishing(std::span<const double> sorted)
{
    if (sorted.size() < 3) {
        return std::nullopt;
    }
    // Count the leading positions j where gap j+1 is strictly smaller than
    // gap j; the threshold is the distance closing the last shrinking gap.
    std::size_t k = 0;
    while (k + 2 < sorted.size()) {
        const double gap = sorted[k + 1] - sorted[k];
        const double next_gap = sorted[k + 2] - sorted[k + 1];
        if (!(next_gap < gap)) {
            break;
        }
        ++k;
    }
    if (k == 0) {
        return std::nullopt;
    }
    return sorted[k + 1];
}

std::optional<double> threshold_avg_gap(std::span<const double> sorted)
{
    if (sorted.size() < 3) {
        return std::nullopt;
    }
    const double mean_gap = (sorted.back() - sorted.front()) / static_cast<double>(sorted.size() - 1);
    std::size_t k = 0;
    while (k + 1 < sorted.size() && sorted[k + 1] - sorted[k] < mean_gap) {
        ++k;
    }
    if (k == 0) {
        return std::nullopt;
    }
    return sorted[k];
}

std::vector<std::size_t> partition_by_order(std::span<const Candidate> candidates, double r1, double r2)
{
    if (candidates.empty()) {
        return {};
    }
    if (candidates.size() == 1) {
        return {candidates.front().index};
    }
    std::vector<std::size_t> first;
    std::vector<std::size_t> second;
    std::size_t nearest = 0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        const double d = candidates[k].distance;
        if (std::abs(r1 - d) < std::abs(r2 - d)) {
            r1 = (r1 + d) / 2.0;
            first.push_back(candidates[k].index);
        } else {
            r2 = (r2 + d) / 2.0;
            second.push_back(candidates[k].index);
        }
        if (d < candidates[nearest].distance) {
            nearest = k;
        }
    }
    const auto target = candidates[nearest].index;
    if (std::find(first.begin(), first.end(), target) != first.end()) {
        return first;
    }
    return second;
}

bool membership_gaussian(double d, std::span<const double> distances, double alpha, double delta)
{
    const double nearest = *std::min_element(distances.begin(), distances.end());
    const double offset = d - nearest;
    return std::exp(-(offset * offset) / (alpha * alpha)) > delta;
}

bool membership_tanh(double d, std::span<const double> distances, double alpha, double delta)
{
    const double mean = mean_of(distances);
    return (std::tanh(-alpha * (d - mean)) + 1.0) / 2.0 > delta;
}

SupportSet build_support_set(std::size_t owner, std::span<const Candidate> candidates,
                             const ThresholdStrategy& strategy)
{
    if (candidates.empty()) {
        return SupportSet{owner, {}, 0.0, false};
    }
    const auto distances = distances_of(candidates);
    SupportSet set = std::visit(
        overloaded{
            [&](const strategy::FixedCardinality& v) {
                return take_nearest(owner, candidates, v.k);
            },
            [&](const strategy::RelativeCardinality& v) {
                // The small slack keeps products such as 0.3 * 10 from
                // rounding up past an exact integer.
                const double wanted = std::ceil(v.fraction * static_cast<double>(candidates.size()) - 1e-9);
                return take_nearest(owner, candidates, std::max<std::size_t>(1, static_cast<std::size_t>(wanted)));
            },
            [&](const strategy::Radius& v) { return below(owner, candidates, v.epsilon, false); },
            [&](const strategy::AverageDistance&) {
                return below(owner, candidates, mean_of(distances), false);
            },
            [&](const strategy::StdDev& v) {
                return below(owner, candidates, threshold_stddev(distances, v.alpha), false);
            },
            [&](const strategy::DiminishingDifferences&) {
                return progression_rule(owner, candidates, &threshold_diminishing);
            },
            [&](const strategy::AverageGap&) {
                return progression_rule(owner, candidates, &threshold_avg_gap);
            },
            [&](const strategy::OrderMinAvg&) {
                const double lo = *std::min_element(distances.begin(), distances.end());
                return order_split(owner, candidates, lo, mean_of(distances));
            },
            [&](const strategy::OrderMinMax&) {
                const auto [lo, hi] = std::minmax_element(distances.begin(), distances.end());
                return order_split(owner, candidates, *lo, *hi);
            },
            [&](const strategy::OrderFirstSecond&) {
                const double second = candidates.size() > 1 ? distances[1] : distances[0];
                return order_split(owner, candidates, distances[0], second);
            },
            [&](const strategy::GaussianWeight& v) {
                return admit_where(owner, candidates, [&](double d) {
                    return membership_gaussian(d, distances, v.alpha, v.delta);
                });
            },
            [&](const strategy::TanhWeight& v) {
                return admit_where(owner, candidates, [&](double d) {
                    return membership_tanh(d, distances, v.alpha, v.delta);
                });
            },
        },
        strategy);
    std::sort(set.members.begin(), set.members.end());
    return set;
}

SupportSetCollection build_collection(const TermPassageMatrix& matrix, const MetricSpec& metric,
                                      const ThresholdStrategy& strategy)
{
    validate(strategy);
    if (matrix.num_columns() < 2) {
        throw InvalidArgument("support sets need at least two passages");
    }
    SupportSetCollection collection;
    collection.metric = metric;
    collection.strategy = strategy;
    collection.first_selectable = matrix.background_columns();
    collection.num_columns = matrix.num_columns();
    collection.sets.reserve(matrix.input_columns());
    for (std::size_t p = 0; p < matrix.input_columns(); ++p) {
        const auto owner = matrix.input_column(p);
        const auto candidates = distances_from(matrix, owner, metric);
        collection.sets.push_back(build_support_set(owner, candidates, strategy));
    }
    return collection;
}

Ranking centrality_ranking(const SupportSetCollection& collection)
{
    const std::size_t selectable = collection.num_columns - collection.first_selectable;
    std::vector<double> scores(selectable, 0.0);
    for (const auto& set : collection.sets) {
        for (auto member : set.members) {
            if (member >= collection.first_selectable) {
                scores[member - collection.first_selectable] += 1.0;
            }
        }
    }
    return Ranking::from_scores(scores);
}

} // namespace supportsum::supportset
