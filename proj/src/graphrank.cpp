#include "supportsum/graphrank.hpp"

#include "supportsum/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace supportsum::graphrank {
namespace {

using vectorspace::MetricSpec;
using vectorspace::TermPassageMatrix;

// Fixed point of x = base + factor * sum_t w(t,s) / out(t) * x(t), iterated
// from start. Vertices with no outgoing weight pass nothing on.
IterationResult iterate(const SimilarityGraph& graph, const PowerIterationConfig& config,
                        double base, double factor, double start)
{
    const std::size_t n = graph.size();
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        out[t] = graph.out_weight(t);
    }

    IterationResult result;
    std::vector<double> current(n, start);
    std::vector<double> next(n);
    for (std::size_t it = 0; it < config.max_iterations; ++it) {
        double change = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            double flow = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                const double w = graph.weight(t, s);
                if (w > 0.0 && out[t] > 0.0) {
                    flow += w / out[t] * current[t];
                }
            }
            next[s] = base + factor * flow;
            change = std::max(change, std::abs(next[s] - current[s]));
        }
        current.swap(next);
        result.iterations = it + 1;
        if (change < config.tolerance) {
            result.converged = true;
            break;
        }
    }
    result.scores = std::move(current);
    return result;
}

IterationResult damped_walk(const SimilarityGraph& graph, const PowerIterationConfig& config)
{
    validate(config);
    if (graph.orientation() != Orientation::undirected) {
        throw InvalidArgument("lexrank needs an undirected graph");
    }
    const std::size_t n = graph.size();
    if (n == 0) {
        return {};
    }
    const double d = config.damping;
    auto result = iterate(graph, config, d / static_cast<double>(n), 1.0 - d,
                          1.0 / static_cast<double>(n));
    const double total = std::accumulate(result.scores.begin(), result.scores.end(), 0.0);
    if (total > 0.0) {
        for (auto& s : result.scores) {
            s /= total;
        }
    }
    result.ranking = Ranking::from_scores(result.scores);
    return result;
}

SimilarityGraph binarized(const SimilarityGraph& graph)
{
    SimilarityGraph out(graph.size(), graph.orientation());
    for (const auto& e : graph.edges()) {
        out.set_weight(e.from, e.to, 1.0);
    }
    return out;
}

} // namespace

std::string orientation_name(Orientation o)
{
    return o == Orientation::backward ? "backward" : "undirected";
}

Orientation parse_orientation(std::string_view text)
{
    if (text == "undirected") return Orientation::undirected;
    if (text == "backward") return Orientation::backward;
    throw InvalidArgument("unknown graph orientation '" + std::string(text) + "'");
}

SimilarityGraph::SimilarityGraph(std::size_t n, Orientation orientation)
    : n_(n), orientation_(orientation), weights_(n * n, 0.0)
{
}

void SimilarityGraph::set_weight(std::size_t from, std::size_t to, double weight)
{
    if (from >= n_ || to >= n_) {
        throw InvalidArgument("edge endpoint out of range");
    }
    if (from == to) {
        throw InvalidArgument("similarity graphs have no self-loops");
    }
    if (!(weight >= 0.0)) {
        throw InvalidArgument("edge weights must be non-negative");
    }
    weights_[from * n_ + to] = weight;
    if (orientation_ == Orientation::undirected) {
        weights_[to * n_ + from] = weight;
    }
}

std::size_t SimilarityGraph::degree(std::size_t v) const
{
    std::size_t count = 0;
    for (std::size_t u = 0; u < n_; ++u) {
        if (u != v && (weight(v, u) > 0.0 || weight(u, v) > 0.0)) {
            ++count;
        }
    }
    return count;
}

double SimilarityGraph::out_weight(std::size_t v) const
{
    double sum = 0.0;
    for (std::size_t u = 0; u < n_; ++u) {
        sum += weight(v, u);
    }
    return sum;
}

std::vector<Edge> SimilarityGraph::edges() const
{
    std::vector<Edge> out;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            const double w = weight(i, j);
            if (w > 0.0 && (orientation_ != Orientation::undirected || i < j)) {
                out.push_back({i, j, w});
            }
        }
    }
    return out;
}

SimilarityGraph build_graph(const TermPassageMatrix& matrix, const MetricSpec& metric,
                            const GraphOptions& options)
{
    const std::size_t n = matrix.input_columns();
    SimilarityGraph graph(n, options.orientation);
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            const double sim = vectorspace::pair_similarity(matrix, matrix.input_column(i),
                                                            matrix.input_column(j), metric);
            if (!(sim > options.threshold)) {
                continue;
            }
            // Backward graphs point from the later passage to the earlier one.
            graph.set_weight(j, i, options.binarize ? 1.0 : sim);
        }
    }
    return graph;
}

void validate(const PowerIterationConfig& config)
{
    if (!(config.damping > 0.0 && config.damping < 1.0)) {
        throw InvalidArgument("damping factor must lie in (0,1)");
    }
    if (!(config.tolerance > 0.0)) {
        throw InvalidArgument("tolerance must be > 0");
    }
    if (config.max_iterations == 0) {
        throw InvalidArgument("max_iterations must be >= 1");
    }
}

Ranking degree_centrality(const SimilarityGraph& graph)
{
    std::vector<double> scores(graph.size());
    for (std::size_t v = 0; v < graph.size(); ++v) {
        scores[v] = static_cast<double>(graph.degree(v));
    }
    return Ranking::from_scores(scores);
}

IterationResult lexrank(const SimilarityGraph& graph, const PowerIterationConfig& config)
{
    return damped_walk(binarized(graph), config);
}

IterationResult continuous_lexrank(const SimilarityGraph& graph, const PowerIterationConfig& config)
{
    return damped_walk(graph, config);
}

IterationResult textrank(const SimilarityGraph& graph, const PowerIterationConfig& config)
{
    validate(config);
    const double d = config.damping;
    auto result = iterate(graph, config, 1.0 - d, d, 1.0);
    result.ranking = Ranking::from_scores(result.scores);
    return result;
}

IterationResult textrank(std::span<const corpus::Passage> passages, Orientation orientation,
                         const PowerIterationConfig& config)
{
    corpus::InputSource source;
    source.passages.assign(passages.begin(), passages.end());
    const auto matrix = vectorspace::build_matrix(source, {});
    return textrank(build_graph(matrix, MetricSpec::content_overlap(), {orientation, 0.0, false}),
                    config);
}

CollectionModel::CollectionModel(std::span<const corpus::Passage> passages)
{
    for (const auto& p : passages) {
        for (const auto& t : p.tokens) {
            ++counts_[t];
            ++total_;
        }
    }
}

double CollectionModel::probability(const std::string& term) const
{
    const auto it = counts_.find(term);
    if (it == counts_.end() || total_ == 0) {
        return 0.0;
    }
    return static_cast<double>(it->second) / static_cast<double>(total_);
}

SmoothedLanguageModel::SmoothedLanguageModel(std::span<const std::string> tokens,
                                             std::shared_ptr<const CollectionModel> collection,
                                             double mu)
    : length_(tokens.size()), collection_(std::move(collection)), mu_(mu)
{
    if (!(mu > 0.0)) {
        throw InvalidArgument("Dirichlet smoothing parameter must be > 0");
    }
    if (!collection_) {
        throw InvalidArgument("smoothed language model needs a collection model");
    }
    for (const auto& t : tokens) {
        ++counts_[t];
    }
}

double SmoothedLanguageModel::probability(const std::string& term) const
{
    const auto it = counts_.find(term);
    const double count = it == counts_.end() ? 0.0 : static_cast<double>(it->second);
    return (count + mu_ * collection_->probability(term)) / (static_cast<double>(length_) + mu_);
}

double generation_probability(const SmoothedLanguageModel& target, std::span<const std::string> source)
{
    if (source.empty()) {
        throw EmptyPassage("generation probability of an empty passage");
    }
    std::map<std::string, std::size_t> counts;
    for (const auto& t : source) {
        ++counts[t];
    }
    const double length = static_cast<double>(source.size());
    double kl = 0.0;
    for (const auto& [term, count] : counts) {
        const double p = static_cast<double>(count) / length;
        kl += p * std::log(p / target.probability(term));
    }
    return std::exp(-kl);
}

Ranking uniform_influx(std::span<const corpus::Passage> passages, const InfluxConfig& config)
{
    if (config.k < 1) {
        throw InvalidArgument("influx neighbourhood size must be >= 1");
    }
    const std::size_t n = passages.size();
    auto collection = std::make_shared<const CollectionModel>(passages);
    std::vector<SmoothedLanguageModel> models;
    models.reserve(n);
    for (const auto& p : passages) {
        models.emplace_back(p.tokens, collection, config.mu);
    }

    std::vector<double> scores(n, 0.0);
    const std::size_t k = std::min(config.k, n == 0 ? 0 : n - 1);
    for (std::size_t o = 0; o < n; ++o) {
        std::vector<std::pair<double, std::size_t>> generators;
        for (std::size_t d = 0; d < n; ++d) {
            if (d != o) {
                generators.emplace_back(generation_probability(models[d], passages[o].tokens), d);
            }
        }
        std::sort(generators.begin(), generators.end(), [](const auto& a, const auto& b) {
            return a.first > b.first || (a.first == b.first && a.second < b.second);
        });
        for (std::size_t r = 0; r < k; ++r) {
            scores[generators[r].second] += config.weighted ? generators[r].first : 1.0;
        }
    }
    return Ranking::from_scores(scores);
}

Ranking pairwise_average_centrality(const TermPassageMatrix& matrix, const MetricSpec& metric)
{
    const std::size_t n = matrix.input_columns();
    std::vector<double> scores(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
        double sum = 0.0;
        for (std::size_t y = 0; y < n; ++y) {
            if (y != x) {
                sum += vectorspace::pair_similarity(matrix, matrix.input_column(x),
                                                    matrix.input_column(y), metric);
            }
        }
        scores[x] = sum / static_cast<double>(n);
    }
    return Ranking::from_scores(scores);
}

Ranking centroid_centrality(const TermPassageMatrix& matrix, const MetricSpec& metric)
{
    if (metric.is_set_metric()) {
        throw InvalidArgument("centroid centrality needs a vector metric, not " + metric.name());
    }
    const std::size_t n = matrix.input_columns();
    std::vector<double> centroid(matrix.num_terms(), 0.0);
    for (std::size_t p = 0; p < n; ++p) {
        const auto col = matrix.column(matrix.input_column(p));
        for (std::size_t t = 0; t < centroid.size(); ++t) {
            centroid[t] += col[t];
        }
    }
    for (auto& c : centroid) {
        c /= static_cast<double>(n);
    }
    std::vector<double> scores(n, 0.0);
    for (std::size_t p = 0; p < n; ++p) {
        const auto col = matrix.column(matrix.input_column(p));
        scores[p] = metric.polarity() == vectorspace::Polarity::similarity
                        ? vectorspace::similarity(col, centroid, metric)
                        : 1.0 / (1.0 + vectorspace::distance(col, centroid, metric));
    }
    return Ranking::from_scores(scores);
}

Ranking position_baseline(std::size_t passages)
{
    std::vector<double> scores(passages);
    for (std::size_t i = 0; i < passages; ++i) {
        scores[i] = static_cast<double>(passages - i);
    }
    return Ranking::from_scores(scores);
}

std::string graph_to_json(const SimilarityGraph& graph)
{
    nlohmann::ordered_json j;
    j["n"] = graph.size();
    j["orientation"] = orientation_name(graph.orientation());
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : graph.edges()) {
        edges.push_back({{"from", e.from}, {"to", e.to}, {"weight", e.weight}});
    }
    j["edges"] = std::move(edges);
    return j.dump(2);
}

} // namespace supportsum::graphrank
