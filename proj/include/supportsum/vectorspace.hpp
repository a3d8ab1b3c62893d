#pragma once

#include "supportsum/corpus.hpp"

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace supportsum::vectorspace {

enum class TermWeight { normalized_tf, binary };

struct WeightingScheme {
    TermWeight base = TermWeight::normalized_tf;
    bool idf = false;

    std::string name() const;
    friend bool operator==(const WeightingScheme&, const WeightingScheme&) = default;
};

// Dense term-by-passage matrix. Background passages (if any) occupy the
// leading columns, followed by the passages of the source being summarized.
class TermPassageMatrix {
public:
    TermPassageMatrix() = default;

    // Builds a matrix straight from weight columns; the term set of a column
    // is its non-zero entries. Intended for synthetic instances.
    static TermPassageMatrix from_columns(std::vector<std::vector<double>> columns,
                                          std::size_t background_columns = 0);

    const std::vector<std::string>& terms() const { return terms_; }
    std::size_t num_terms() const { return terms_.size(); }
    std::size_t num_columns() const { return columns_.size(); }
    std::size_t background_columns() const { return background_; }
    std::size_t input_columns() const { return columns_.size() - background_; }
    std::size_t input_column(std::size_t passage) const { return background_ + passage; }

    std::span<const double> column(std::size_t j) const { return columns_.at(j); }
    // Sorted ids of the terms that occur in column j.
    std::span<const std::size_t> column_terms(std::size_t j) const { return column_terms_.at(j); }
    // Number of columns each term occurs in.
    const std::vector<std::size_t>& doc_frequencies() const { return doc_frequencies_; }

    // Every weight multiplied by factor (> 0); term sets are unchanged.
    TermPassageMatrix scaled(double factor) const;

private:
    friend TermPassageMatrix build_matrix(const corpus::InputSource&, const WeightingScheme&,
                                          std::span<const corpus::InputSource>);

    std::vector<std::string> terms_;
    std::vector<std::vector<double>> columns_;
    std::vector<std::vector<std::size_t>> column_terms_;
    std::vector<std::size_t> doc_frequencies_;
    std::size_t background_ = 0;
};

// Vocabulary is sorted lexicographically. With idf on, each weight is
// multiplied by ln(#columns / df(term)) over all columns of this matrix.
TermPassageMatrix build_matrix(const corpus::InputSource& source, const WeightingScheme& scheme,
                               std::span<const corpus::InputSource> background = {});

enum class MetricKind {
    minkowski,            // rooted form; an order in (0,1) is not a metric
    fractional,           // rootless sum of |x_i - y_i|^N, N in (0,1)
    manhattan,
    euclidean,
    chebyshev,
    dimension_minkowski,  // rooted form with the order set to the dimension
    cosine,
    manhattan_sim,
    content_overlap,
    jaccard,
};

enum class Polarity { distance, similarity };

class MetricSpec {
public:
    static MetricSpec minkowski(double order);
    static MetricSpec fractional(double order);
    static MetricSpec manhattan() { return MetricSpec(MetricKind::manhattan); }
    static MetricSpec euclidean() { return MetricSpec(MetricKind::euclidean); }
    static MetricSpec chebyshev() { return MetricSpec(MetricKind::chebyshev); }
    static MetricSpec dimension_minkowski() { return MetricSpec(MetricKind::dimension_minkowski); }
    static MetricSpec cosine() { return MetricSpec(MetricKind::cosine); }
    static MetricSpec manhattan_sim() { return MetricSpec(MetricKind::manhattan_sim); }
    static MetricSpec content_overlap() { return MetricSpec(MetricKind::content_overlap); }
    static MetricSpec jaccard() { return MetricSpec(MetricKind::jaccard); }

    // Accepts the names produced by name(), plus the aliases
    // "raw-minkowski-fractional:N", "l1", "l2", "cosine-sim".
    static MetricSpec parse(std::string_view text);

    MetricKind kind() const { return kind_; }
    double order() const { return order_; }
    Polarity polarity() const;
    // Compares term sets rather than weight vectors.
    bool is_set_metric() const;
    std::string name() const;

    friend bool operator==(const MetricSpec&, const MetricSpec&) = default;

private:
    explicit MetricSpec(MetricKind kind, double order = 0.0) : kind_(kind), order_(order) {}

    MetricKind kind_ = MetricKind::manhattan;
    double order_ = 0.0;
};

// Distance between two weight vectors; spec must have distance polarity.
double distance(std::span<const double> x, std::span<const double> y, const MetricSpec& spec);

// cosine or manhattan-sim between two weight vectors. A zero vector has
// cosine 0 with everything.
double similarity(std::span<const double> x, std::span<const double> y, const MetricSpec& spec);

// |P ∩ Q| / (ln|P| + ln|Q|), falling back to Jaccard when both sets are
// singletons. Inputs are sorted, duplicate-free term ids.
double content_overlap(std::span<const std::size_t> p, std::span<const std::size_t> q);
double content_overlap(const std::set<std::string>& p, const std::set<std::string>& q);

double jaccard(std::span<const std::size_t> p, std::span<const std::size_t> q);
double jaccard(const std::set<std::string>& p, const std::set<std::string>& q);

// Metric value between columns i and j of a matrix, in canonical distance
// form. Similarities are converted: 1 - s for cosine and jaccard, the
// underlying Manhattan distance for manhattan-sim, 1 / (1 + s) for content
// overlap (which is unbounded above).
double pair_distance(const TermPassageMatrix& matrix, std::size_t i, std::size_t j,
                     const MetricSpec& spec);

// Metric value between columns i and j in similarity form: similarities as
// they are, distances mapped through 1 / (1 + d).
double pair_similarity(const TermPassageMatrix& matrix, std::size_t i, std::size_t j,
                       const MetricSpec& spec);

// Converts a similarity of the given metric to its canonical distance.
double similarity_to_distance(double similarity, const MetricSpec& spec);

// Debug dump: {"terms", "columns", "doc_frequencies", "background_columns"}.
std::string matrix_to_json(const TermPassageMatrix& matrix);

} // namespace supportsum::vectorspace
