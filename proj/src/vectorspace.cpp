#include "supportsum/vectorspace.hpp"

#include "supportsum/errors.hpp"
#include "supportsum/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>

namespace supportsum::vectorspace {
namespace {

void check_dimensions(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) {
        throw DimensionMismatch("vectors of dimension " + std::to_string(x.size()) + " and "
                                + std::to_string(y.size()));
    }
    if (x.empty()) {
        throw DimensionMismatch("vectors must have at least one dimension");
    }
}

// Rooted Minkowski distance of any positive order. Coordinates are divided
// by the largest difference first so high orders (64, or the dimension of
// the space) neither underflow nor overflow.
double rooted_minkowski(std::span<const double> x, std::span<const double> y, double order)
{
    double largest = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        largest = std::max(largest, std::abs(x[i] - y[i]));
    }
    if (largest == 0.0) {
        return 0.0;
    }
    if (order > 64.0) {
        // A power-of-two scale leaves the top ratio in [0.5, 1), which would
        // underflow at these orders; pin it to exactly 1 instead.
        double sum = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sum += std::pow(std::abs(x[i] - y[i]) / largest, order);
        }
        return largest * std::pow(sum, 1.0 / order);
    }
    // Dividing by a power of two is exact, so the scaled sum of squares
    // matches the unscaled one bit for bit and ties survive.
    const int exponent = std::ilogb(largest) + 1;
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double ratio = std::ldexp(std::abs(x[i] - y[i]), -exponent);
        sum += order == 2.0 ? ratio * ratio : std::pow(ratio, order);
    }
    return std::ldexp(order == 2.0 ? std::sqrt(sum) : std::pow(sum, 1.0 / order), exponent);
}

template <typename Range>
std::size_t intersection_size(const Range& p, const Range& q)
{
    std::size_t shared = 0;
    auto a = p.begin();
    auto b = q.begin();
    while (a != p.end() && b != q.end()) {
        if (*a < *b) {
            ++a;
        } else if (*b < *a) {
            ++b;
        } else {
            ++shared;
            ++a;
            ++b;
        }
    }
    return shared;
}

template <typename Range>
double jaccard_impl(const Range& p, const Range& q)
{
    if (p.empty() || q.empty()) {
        throw EmptyPassage("jaccard of an empty term set");
    }
    const auto shared = intersection_size(p, q);
    return static_cast<double>(shared) / static_cast<double>(p.size() + q.size() - shared);
}

template <typename Range>
double content_overlap_impl(const Range& p, const Range& q)
{
    if (p.empty() || q.empty()) {
        throw EmptyPassage("content overlap of an empty term set");
    }
    const double denominator = std::log(static_cast<double>(p.size()))
                               + std::log(static_cast<double>(q.size()));
    if (denominator == 0.0) {
        return jaccard_impl(p, q);
    }
    return static_cast<double>(intersection_size(p, q)) / denominator;
}

double parse_order(std::string_view text, std::string_view metric)
{
    try {
        return parse_double(text);
    } catch (const InvalidArgument&) {
        throw InvalidArgument("metric '" + std::string(metric) + "' needs a numeric order, got '"
                              + std::string(text) + "'");
    }
}

} // namespace

std::string WeightingScheme::name() const
{
    std::string out = base == TermWeight::binary ? "binary" : "tf";
    if (idf) {
        out += "+idf";
    }
    return out;
}

TermPassageMatrix TermPassageMatrix::from_columns(std::vector<std::vector<double>> columns,
                                                  std::size_t background_columns)
{
    TermPassageMatrix m;
    const std::size_t dims = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns) {
        if (c.size() != dims) {
            throw DimensionMismatch("columns of a matrix must share one dimension");
        }
        for (double w : c) {
            if (!(w >= 0.0)) {
                throw InvalidArgument("matrix weights must be non-negative");
            }
        }
    }
    if (background_columns > columns.size()) {
        throw InvalidArgument("more background columns than columns");
    }
    for (std::size_t t = 0; t < dims; ++t) {
        m.terms_.push_back("t" + std::to_string(t));
    }
    m.doc_frequencies_.assign(dims, 0);
    for (const auto& c : columns) {
        std::vector<std::size_t> present;
        for (std::size_t t = 0; t < dims; ++t) {
            if (c[t] != 0.0) {
                present.push_back(t);
                ++m.doc_frequencies_[t];
            }
        }
        m.column_terms_.push_back(std::move(present));
    }
    m.columns_ = std::move(columns);
    m.background_ = background_columns;
    return m;
}

TermPassageMatrix TermPassageMatrix::scaled(double factor) const
{
    if (!(factor > 0.0)) {
        throw InvalidArgument("scale factor must be positive");
    }
    TermPassageMatrix out = *this;
    for (auto& c : out.columns_) {
        for (auto& w : c) {
            w *= factor;
        }
    }
    return out;
}

TermPassageMatrix build_matrix(const corpus::InputSource& source, const WeightingScheme& scheme,
                               std::span<const corpus::InputSource> background)
{
    if (source.passages.empty()) {
        throw EmptySource("cannot build a matrix for an empty source '" + source.doc_id + "'");
    }
    std::vector<const corpus::Passage*> passages;
    for (const auto& doc : background) {
        for (const auto& p : doc.passages) {
            passages.push_back(&p);
        }
    }
    const std::size_t background_count = passages.size();
    for (const auto& p : source.passages) {
        passages.push_back(&p);
    }

    std::map<std::string, std::size_t> vocabulary;
    for (const auto* p : passages) {
        for (const auto& t : p->tokens) {
            vocabulary.emplace(t, 0);
        }
    }
    TermPassageMatrix m;
    m.background_ = background_count;
    m.terms_.reserve(vocabulary.size());
    for (auto& [term, id] : vocabulary) {
        id = m.terms_.size();
        m.terms_.push_back(term);
    }

    const std::size_t dims = m.terms_.size();
    m.doc_frequencies_.assign(dims, 0);
    std::vector<std::vector<std::size_t>> counts;
    counts.reserve(passages.size());
    for (const auto* p : passages) {
        std::vector<std::size_t> c(dims, 0);
        for (const auto& t : p->tokens) {
            ++c[vocabulary.at(t)];
        }
        std::vector<std::size_t> present;
        for (std::size_t t = 0; t < dims; ++t) {
            if (c[t] > 0) {
                present.push_back(t);
                ++m.doc_frequencies_[t];
            }
        }
        m.column_terms_.push_back(std::move(present));
        counts.push_back(std::move(c));
    }

    const double columns = static_cast<double>(passages.size());
    for (const auto& c : counts) {
        std::size_t total = 0;
        for (auto n : c) {
            total += n;
        }
        std::vector<double> weights(dims, 0.0);
        for (std::size_t t = 0; t < dims; ++t) {
            if (c[t] == 0) {
                continue;
            }
            double w = scheme.base == TermWeight::binary
                           ? 1.0
                           : static_cast<double>(c[t]) / static_cast<double>(total);
            if (scheme.idf) {
                w *= std::log(columns / static_cast<double>(m.doc_frequencies_[t]));
            }
            weights[t] = w;
        }
        m.columns_.push_back(std::move(weights));
    }
    return m;
}

MetricSpec MetricSpec::minkowski(double order)
{
    if (!(order > 0.0) || !std::isfinite(order)) {
        throw InvalidArgument("minkowski order must be a finite value > 0");
    }
    return MetricSpec(MetricKind::minkowski, order);
}

MetricSpec MetricSpec::fractional(double order)
{
    if (!(order > 0.0 && order < 1.0)) {
        throw InvalidArgument("fractional order must lie strictly between 0 and 1");
    }
    return MetricSpec(MetricKind::fractional, order);
}

MetricSpec MetricSpec::parse(std::string_view text)
{
    const auto colon = text.find(':');
    const auto head = text.substr(0, colon);
    const auto arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    const bool has_arg = colon != std::string_view::npos;

    if (head == "minkowski" && has_arg) {
        return minkowski(parse_order(arg, text));
    }
    if (head == "raw-minkowski-fractional" && has_arg) {
        const double order = parse_order(arg, text);
        if (!(order > 0.0 && order < 1.0)) {
            throw InvalidArgument("raw-minkowski-fractional order must lie in (0,1)");
        }
        return minkowski(order);
    }
    if (head == "fractional" && has_arg) {
        return fractional(parse_order(arg, text));
    }
    if (!has_arg) {
        if (text == "manhattan" || text == "l1") return manhattan();
        if (text == "euclidean" || text == "l2") return euclidean();
        if (text == "chebyshev") return chebyshev();
        if (text == "dimension-minkowski") return dimension_minkowski();
        if (text == "cosine" || text == "cosine-sim") return cosine();
        if (text == "manhattan-sim") return manhattan_sim();
        if (text == "content-overlap") return content_overlap();
        if (text == "jaccard") return jaccard();
    }
    throw InvalidArgument("unknown metric '" + std::string(text) + "'");
}

Polarity MetricSpec::polarity() const
{
    switch (kind_) {
    case MetricKind::cosine:
    case MetricKind::manhattan_sim:
    case MetricKind::content_overlap:
    case MetricKind::jaccard:
        return Polarity::similarity;
    default:
        return Polarity::distance;
    }
}

bool MetricSpec::is_set_metric() const
{
    return kind_ == MetricKind::content_overlap || kind_ == MetricKind::jaccard;
}

std::string MetricSpec::name() const
{
    switch (kind_) {
    case MetricKind::minkowski: return "minkowski:" + format_shortest(order_);
    case MetricKind::fractional: return "fractional:" + format_shortest(order_);
    case MetricKind::manhattan: return "manhattan";
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::chebyshev: return "chebyshev";
    case MetricKind::dimension_minkowski: return "dimension-minkowski";
    case MetricKind::cosine: return "cosine";
    case MetricKind::manhattan_sim: return "manhattan-sim";
    case MetricKind::content_overlap: return "content-overlap";
    case MetricKind::jaccard: return "jaccard";
    }
    return "unknown";
}

double distance(std::span<const double> x, std::span<const double> y, const MetricSpec& spec)
{
    if (spec.polarity() != Polarity::distance) {
        throw InvalidArgument("metric '" + spec.name() + "' is a similarity, not a distance");
    }
    check_dimensions(x, y);
    switch (spec.kind()) {
    case MetricKind::manhattan: {
        double sum = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sum += std::abs(x[i] - y[i]);
        }
        return sum;
    }
    case MetricKind::fractional: {
        double sum = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sum += std::pow(std::abs(x[i] - y[i]), spec.order());
        }
        return sum;
    }
    case MetricKind::chebyshev: {
        double largest = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            largest = std::max(largest, std::abs(x[i] - y[i]));
        }
        return largest;
    }
    case MetricKind::euclidean:
        return rooted_minkowski(x, y, 2.0);
    case MetricKind::minkowski:
        return rooted_minkowski(x, y, spec.order());
    case MetricKind::dimension_minkowski:
        return rooted_minkowski(x, y, static_cast<double>(x.size()));
    default:
        break;
    }
    throw InvalidArgument("unsupported distance metric");
}

double similarity(std::span<const double> x, std::span<const double> y, const MetricSpec& spec)
{
    check_dimensions(x, y);
    if (spec.kind() == MetricKind::manhattan_sim) {
        return 1.0 / (1.0 + distance(x, y, MetricSpec::manhattan()));
    }
    if (spec.kind() != MetricKind::cosine) {
        throw InvalidArgument("metric '" + spec.name() + "' is not a vector similarity");
    }
    double dot = 0.0;
    double xx = 0.0;
    double yy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        dot += x[i] * y[i];
        xx += x[i] * x[i];
        yy += y[i] * y[i];
    }
    if (xx == 0.0 || yy == 0.0) {
        return 0.0;
    }
    return std::clamp(dot / (std::sqrt(xx) * std::sqrt(yy)), -1.0, 1.0);
}

double content_overlap(std::span<const std::size_t> p, std::span<const std::size_t> q)
{
    return content_overlap_impl(p, q);
}

double content_overlap(const std::set<std::string>& p, const std::set<std::string>& q)
{
    return content_overlap_impl(p, q);
}

double jaccard(std::span<const std::size_t> p, std::span<const std::size_t> q)
{
    return jaccard_impl(p, q);
}

double jaccard(const std::set<std::string>& p, const std::set<std::string>& q)
{
    return jaccard_impl(p, q);
}

double similarity_to_distance(double similarity, const MetricSpec& spec)
{
    switch (spec.kind()) {
    case MetricKind::cosine:
    case MetricKind::jaccard:
        return 1.0 - similarity;
    case MetricKind::manhattan_sim:
        return 1.0 / similarity - 1.0;
    case MetricKind::content_overlap:
        return 1.0 / (1.0 + similarity);
    default:
        throw InvalidArgument("metric '" + spec.name() + "' is not a similarity");
    }
}

double pair_distance(const TermPassageMatrix& matrix, std::size_t i, std::size_t j,
                     const MetricSpec& spec)
{
    switch (spec.kind()) {
    case MetricKind::content_overlap:
        return 1.0 / (1.0 + content_overlap(matrix.column_terms(i), matrix.column_terms(j)));
    case MetricKind::jaccard:
        return 1.0 - jaccard(matrix.column_terms(i), matrix.column_terms(j));
    case MetricKind::cosine:
        return 1.0 - similarity(matrix.column(i), matrix.column(j), spec);
    case MetricKind::manhattan_sim:
        // Inverting 1 / (1 + d) recovers the Manhattan distance; compute it
        // directly to keep it exact.
        return distance(matrix.column(i), matrix.column(j), MetricSpec::manhattan());
    default:
        return distance(matrix.column(i), matrix.column(j), spec);
    }
}

double pair_similarity(const TermPassageMatrix& matrix, std::size_t i, std::size_t j,
                       const MetricSpec& spec)
{
    switch (spec.kind()) {
    case MetricKind::content_overlap:
        return content_overlap(matrix.column_terms(i), matrix.column_terms(j));
    case MetricKind::jaccard:
        return jaccard(matrix.column_terms(i), matrix.column_terms(j));
    case MetricKind::cosine:
    case MetricKind::manhattan_sim:
        return similarity(matrix.column(i), matrix.column(j), spec);
    default:
        return 1.0 / (1.0 + distance(matrix.column(i), matrix.column(j), spec));
    }
}

std::string matrix_to_json(const TermPassageMatrix& matrix)
{
    nlohmann::ordered_json j;
    j["terms"] = matrix.terms();
    auto columns = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < matrix.num_columns(); ++c) {
        const auto col = matrix.column(c);
        columns.push_back(std::vector<double>(col.begin(), col.end()));
    }
    j["columns"] = std::move(columns);
    j["doc_frequencies"] = matrix.doc_frequencies();
    j["background_columns"] = matrix.background_columns();
    return j.dump(2);
}

} // namespace supportsum::vectorspace
