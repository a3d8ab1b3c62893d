#pragma once

#include "supportsum/corpus.hpp"
#include "supportsum/ranking.hpp"
#include "supportsum/vectorspace.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace supportsum::graphrank {

enum class Orientation { undirected, backward };

std::string orientation_name(Orientation o);
Orientation parse_orientation(std::string_view text);

struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    double weight = 0.0;
};

// Dense weighted graph over passages. Undirected edges are stored in both
// directions; a backward graph only has edges from a passage to earlier ones.
class SimilarityGraph {
public:
    SimilarityGraph(std::size_t n, Orientation orientation);

    std::size_t size() const { return n_; }
    Orientation orientation() const { return orientation_; }

    double weight(std::size_t from, std::size_t to) const { return weights_[from * n_ + to]; }
    // For undirected graphs the reverse edge is set too. Self-loops are rejected.
    void set_weight(std::size_t from, std::size_t to, double weight);

    // Number of distinct vertices adjacent to v through an edge in either direction.
    std::size_t degree(std::size_t v) const;
    // Sum of the weights of the edges leaving v.
    double out_weight(std::size_t v) const;

    // Each undirected edge once (from < to); directed edges as stored.
    std::vector<Edge> edges() const;

private:
    std::size_t n_;
    Orientation orientation_;
    std::vector<double> weights_;
};

struct GraphOptions {
    Orientation orientation = Orientation::undirected;
    // Pairs whose similarity is <= threshold get no edge.
    double threshold = 0.0;
    // Kept edges get weight 1 (degree centrality, LexRank).
    bool binarize = false;
};

// Edge weights are the metric's similarity (distances map to 1 / (1 + d)).
// Only the input columns of the matrix take part.
SimilarityGraph build_graph(const vectorspace::TermPassageMatrix& matrix,
                            const vectorspace::MetricSpec& metric, const GraphOptions& options);

struct PowerIterationConfig {
    double damping = 0.15;
    double tolerance = 1e-6;
    std::size_t max_iterations = 200;
};

void validate(const PowerIterationConfig& config);

struct IterationResult {
    Ranking ranking;
    std::vector<double> scores;  // by passage index
    std::size_t iterations = 0;
    bool converged = false;
};

Ranking degree_centrality(const SimilarityGraph& graph);

// Damped random walk with teleport mass d/N over an undirected graph, each
// neighbour counting once. The fixed point is rescaled to sum to one.
IterationResult lexrank(const SimilarityGraph& graph, const PowerIterationConfig& config = {});

// As lexrank, with transitions proportional to edge weight.
IterationResult continuous_lexrank(const SimilarityGraph& graph, const PowerIterationConfig& config = {});

// TR(s) = (1 - d) + d * sum over incoming t of w(t,s) / out(t) * TR(t).
// Vertices without incoming edges settle at 1 - d. Not normalized.
IterationResult textrank(const SimilarityGraph& graph, const PowerIterationConfig& config = {});

// TextRank over the content-overlap graph of the passages' token sets.
IterationResult textrank(std::span<const corpus::Passage> passages, Orientation orientation,
                         const PowerIterationConfig& config = {});

// Term distribution pooled over a set of passages.
class CollectionModel {
public:
    explicit CollectionModel(std::span<const corpus::Passage> passages);
    double probability(const std::string& term) const;

private:
    std::map<std::string, std::size_t> counts_;
    std::size_t total_ = 0;
};

// Dirichlet-smoothed unigram model of one passage:
// p(t) = (count(t) + mu * p(t | collection)) / (|passage| + mu).
class SmoothedLanguageModel {
public:
    SmoothedLanguageModel(std::span<const std::string> tokens,
                          std::shared_ptr<const CollectionModel> collection, double mu);

    double probability(const std::string& term) const;
    double mu() const { return mu_; }

private:
    std::map<std::string, std::size_t> counts_;
    std::size_t length_ = 0;
    std::shared_ptr<const CollectionModel> collection_;
    double mu_;
};

// exp(-KL(MLE of source || target)): how well the target model generates the source.
double generation_probability(const SmoothedLanguageModel& target,
                              std::span<const std::string> source);

struct InfluxConfig {
    std::size_t k = 1;
    double mu = 500.0;
    bool weighted = false;
};

// For every passage o, edges o -> d to the k passages whose models generate
// o best; a passage's score is the total weight of its incoming edges.
Ranking uniform_influx(std::span<const corpus::Passage> passages, const InfluxConfig& config);

// (1/N) * sum of similarities to every other input passage.
Ranking pairwise_average_centrality(const vectorspace::TermPassageMatrix& matrix,
                                    const vectorspace::MetricSpec& metric);

// Similarity to the coordinate-wise mean of the input columns.
Ranking centroid_centrality(const vectorspace::TermPassageMatrix& matrix,
                            const vectorspace::MetricSpec& metric);

// Earlier passages first: score(i) = N - i.
Ranking position_baseline(std::size_t passages);

// Debug dump: {"n", "orientation", "edges": [{"from", "to", "weight"}]}.
std::string graph_to_json(const SimilarityGraph& graph);

} // namespace supportsum::graphrank
