#include "supportsum/corpus.hpp"
#include "supportsum/errors.hpp"
#include "supportsum/graphrank.hpp"

#include "support/oracles.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <map>
#include <numeric>

using namespace supportsum;
using namespace supportsum::graphrank;
using vectorspace::MetricSpec;
using vectorspace::TermPassageMatrix;
using Order = std::vector<std::size_t>;

namespace {

corpus::InputSource lines(const std::string& text)
{
    return corpus::segment(text, corpus::Segmentation{});
}

SimilarityGraph graph_from(const oracle::Matrix& w, Orientation o)
{
    SimilarityGraph g(w.size(), o);
    for (std::size_t u = 0; u < w.size(); ++u) {
        for (std::size_t v = 0; v < w.size(); ++v) {
            if (w[u][v] > 0.0 && (o == Orientation::backward || u < v)) {
                g.set_weight(u, v, w[u][v]);
            }
        }
    }
    return g;
}

oracle::Matrix weights_of(const SimilarityGraph& g)
{
    oracle::Matrix w(g.size(), oracle::Vector(g.size(), 0.0));
    for (std::size_t u = 0; u < g.size(); ++u) {
        for (std::size_t v = 0; v < g.size(); ++v) {
            w[u][v] = g.weight(u, v);
        }
    }
    return w;
}

SimilarityGraph complete(std::size_t n)
{
    SimilarityGraph g(n, Orientation::undirected);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            g.set_weight(u, v, 1.0);
        }
    }
    return g;
}

const PowerIterationConfig kTight{0.15, 1e-14, 10000};

double sum(const std::vector<double>& v)
{
    return std::accumulate(v.begin(), v.end(), 0.0);
}

// Dirichlet-smoothed generation probability written from the formulas.
double generation_oracle(const std::vector<std::string>& target, const std::vector<std::string>& source,
                         const std::vector<std::vector<std::string>>& all, double mu)
{
    std::map<std::string, double> coll;
    double total = 0.0;
    for (const auto& p : all) {
        for (const auto& t : p) {
            coll[t] += 1.0;
            total += 1.0;
        }
    }
    std::map<std::string, double> tc;
    for (const auto& t : target) {
        tc[t] += 1.0;
    }
    std::map<std::string, double> sc;
    for (const auto& t : source) {
        sc[t] += 1.0;
    }
    double kl = 0.0;
    for (const auto& [t, c] : sc) {
        const double p = c / static_cast<double>(source.size());
        const double q = (tc[t] + mu * coll[t] / total) / (static_cast<double>(target.size()) + mu);
        kl += p * std::log(p / q);
    }
    return std::exp(-kl);
}

} // namespace

TEST_CASE("graph construction")
{
    const auto twins = vectorspace::build_matrix(lines("a b\na b\n"), {});
    const auto g = build_graph(twins, MetricSpec::cosine(), {});
    const auto edges = g.edges();
    REQUIRE(edges.size() == 1);
    CHECK(edges[0].weight == doctest::Approx(1.0).epsilon(1e-15));

    const auto three = vectorspace::build_matrix(lines("a b\na c\na d\n"), {});
    const auto back = build_graph(three, MetricSpec::cosine(), {Orientation::backward, 0.0, false});
    CHECK(back.weight(1, 0) > 0.0);
    CHECK(back.weight(2, 0) > 0.0);
    CHECK(back.weight(2, 1) > 0.0);
    CHECK(back.weight(0, 1) == 0.0);
    CHECK(back.weight(0, 2) == 0.0);
    CHECK(back.weight(1, 2) == 0.0);
    CHECK(back.edges().size() == 3);

    // cosine of these columns is 0.3.
    const auto low = TermPassageMatrix::from_columns({{0.3, std::sqrt(0.91), 0.0}, {1.0, 0.0, 0.0}});
    CHECK(build_graph(low, MetricSpec::cosine(), {}).edges().size() == 1);
    CHECK(build_graph(low, MetricSpec::cosine(), {Orientation::undirected, 0.5, false}).edges().empty());

    // Distances become 1 / (1 + d).
    const auto pair = TermPassageMatrix::from_columns({{0, 0}, {1, 1}});
    CHECK(build_graph(pair, MetricSpec::manhattan(), {}).weight(0, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(build_graph(pair, MetricSpec::manhattan(), {Orientation::undirected, 0.0, true}).weight(1, 0) == 1.0);

    SimilarityGraph bad(2, Orientation::undirected);
    CHECK_THROWS_AS(bad.set_weight(1, 1, 1.0), InvalidArgument);
    CHECK_THROWS_AS(bad.set_weight(0, 1, -1.0), InvalidArgument);
}

TEST_CASE("graph dump")
{
    const auto g = complete(3);
    const auto j = nlohmann::json::parse(graph_to_json(g));
    CHECK(j["n"] == 3);
    CHECK(j["orientation"] == "undirected");
    CHECK(j["edges"].size() == 3);
}

TEST_CASE("degree centrality")
{
    SimilarityGraph star(4, Orientation::undirected);
    star.set_weight(0, 1, 1.0);
    star.set_weight(0, 2, 1.0);
    star.set_weight(0, 3, 1.0);
    CHECK(degree_centrality(star).scores_by_index() == std::vector<double>{3, 1, 1, 1});
    CHECK(degree_centrality(SimilarityGraph(3, Orientation::undirected)).scores_by_index() ==
          std::vector<double>{0, 0, 0});

    oracle::Rng rng(2);
    for (int round = 0; round < 100; ++round) {
        oracle::Matrix w(5, oracle::Vector(5, 0.0));
        for (std::size_t u = 0; u < 5; ++u) {
            for (std::size_t v = u + 1; v < 5; ++v) {
                if (rng.coin()) {
                    w[u][v] = w[v][u] = 1.0;
                }
            }
        }
        std::vector<double> expect(5);
        for (std::size_t u = 0; u < 5; ++u) {
            expect[u] = sum(w[u]);
        }
        CHECK(degree_centrality(graph_from(w, Orientation::undirected)).scores_by_index() == expect);
    }
}

TEST_CASE("LexRank")
{
    const auto k3 = lexrank(complete(3));
    CHECK(k3.converged);
    for (double s : k3.scores) {
        CHECK(s == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    }

    SimilarityGraph dyads(4, Orientation::undirected);
    dyads.set_weight(0, 1, 1.0);
    dyads.set_weight(2, 3, 1.0);
    for (double s : lexrank(dyads).scores) {
        CHECK(s == doctest::Approx(0.25).epsilon(1e-9));
    }

    SimilarityGraph path(4, Orientation::undirected);
    path.set_weight(0, 1, 1.0);
    path.set_weight(1, 2, 1.0);
    path.set_weight(2, 3, 1.0);
    const auto expect = oracle::lexrank_solution(weights_of(path), 0.15);
    const auto got = lexrank(path, kTight);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(got.scores[i] - expect[i]) <= 1e-10);
    }

    // Weights are ignored: LexRank binarizes.
    SimilarityGraph heavy(3, Orientation::undirected);
    heavy.set_weight(0, 1, 0.2);
    heavy.set_weight(1, 2, 0.9);
    SimilarityGraph flat(3, Orientation::undirected);
    flat.set_weight(0, 1, 1.0);
    flat.set_weight(1, 2, 1.0);
    CHECK(lexrank(heavy).scores == lexrank(flat).scores);

    CHECK_THROWS_AS(lexrank(SimilarityGraph(3, Orientation::backward)), InvalidArgument);
}

TEST_CASE("isolated vertices keep only the teleport mass")
{
    SimilarityGraph g(3, Orientation::undirected);
    g.set_weight(0, 1, 1.0);
    const double d = 0.15;
    const auto r = lexrank(g, kTight);
    // Before rescaling: the dyad holds 1/3 each, the isolated vertex d/3.
    const double total = 2.0 / 3.0 + d / 3.0;
    CHECK(r.scores[2] == doctest::Approx((d / 3.0) / total).epsilon(1e-12));
    CHECK(sum(r.scores) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("continuous LexRank")
{
    SimilarityGraph uniform(4, Orientation::undirected);
    uniform.set_weight(0, 1, 0.4);
    uniform.set_weight(1, 2, 0.4);
    uniform.set_weight(1, 3, 0.4);
    const auto a = continuous_lexrank(uniform, kTight).scores;
    const auto b = lexrank(uniform, kTight).scores;
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }

    SimilarityGraph two(2, Orientation::undirected);
    two.set_weight(0, 1, 0.7);
    for (double s : continuous_lexrank(two).scores) {
        CHECK(s == doctest::Approx(0.5).epsilon(1e-12));
    }

    SimilarityGraph w(4, Orientation::undirected);
    w.set_weight(0, 1, 0.9);
    w.set_weight(0, 2, 0.1);
    w.set_weight(1, 2, 0.5);
    w.set_weight(2, 3, 0.3);
    const auto expect = oracle::lexrank_solution(weights_of(w), 0.15);
    const auto got = continuous_lexrank(w, kTight).scores;
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(got[i] - expect[i]) <= 1e-10);
    }
}

TEST_CASE("PageRank-family scores sum to one")
{
    oracle::Rng rng(13);
    for (int round = 0; round < 100; ++round) {
        const auto n = rng.index(2, 12);
        SimilarityGraph g(n, Orientation::undirected);
        for (std::size_t u = 0; u < n; ++u) {
            for (std::size_t v = u + 1; v < n; ++v) {
                if (rng.coin(0.4)) {
                    g.set_weight(u, v, rng.real(0.01, 1.0));
                }
            }
        }
        for (const auto& r : {lexrank(g), continuous_lexrank(g)}) {
            CHECK(std::abs(sum(r.scores) - 1.0) <= 1e-6);
            for (double s : r.scores) {
                CHECK(s >= 0.0);
            }
        }
    }
}

TEST_CASE("non-convergence is reported")
{
    SimilarityGraph path(4, Orientation::undirected);
    path.set_weight(0, 1, 1.0);
    path.set_weight(1, 2, 1.0);
    path.set_weight(2, 3, 1.0);
    const auto r = lexrank(path, {0.15, 1e-15, 1});
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 1);
    CHECK(r.ranking.size() == 4);
    CHECK_THROWS_AS(lexrank(path, {1.5, 1e-6, 10}), InvalidArgument);
    CHECK_THROWS_AS(lexrank(path, {0.15, 0.0, 10}), InvalidArgument);
    CHECK_THROWS_AS(lexrank(path, {0.15, 1e-6, 0}), InvalidArgument);
}

TEST_CASE("TextRank")
{
    const double d = 0.15;
    const auto twins = lines("red green blue\nred green blue\n");
    const auto t = textrank(twins.passages, Orientation::undirected);
    CHECK(t.scores[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(t.scores[1] == doctest::Approx(1.0).epsilon(1e-9));

    const auto apart = lines("a b\nc d\ne f\n");
    for (double s : textrank(apart.passages, Orientation::backward).scores) {
        CHECK(s == doctest::Approx(1.0 - d).epsilon(1e-12));
    }

    const auto overlap = lines("a b c\nb c d\na c d e\nc e f g\n");
    const auto matrix = vectorspace::build_matrix(overlap, {});
    const auto g = build_graph(matrix, MetricSpec::content_overlap(), {Orientation::backward, 0.0, false});
    const auto expect = oracle::textrank_solution(weights_of(g), d);
    const auto got = textrank(overlap.passages, Orientation::backward, kTight);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(got.scores[i] - expect[i]) <= 1e-10);
    }
    // The last passage has no incoming edges in a backward graph.
    CHECK(got.scores[3] == doctest::Approx(1.0 - d).epsilon(1e-12));
    CHECK(got.scores == textrank(g, kTight).scores);

    // Content-overlap weights straight from the token sets.
    const auto w = weights_of(g);
    CHECK(w[1][0] == doctest::Approx(2.0 / (2.0 * std::log(3.0))));
    CHECK(w[3][2] == doctest::Approx(2.0 / (std::log(4.0) + std::log(4.0))));
}

TEST_CASE("smoothed language models")
{
    const auto src = lines("a b c d\n");
    auto coll = std::make_shared<const CollectionModel>(src.passages);
    const SmoothedLanguageModel lm(src.passages[0].tokens, coll, 500.0);
    CHECK(lm.probability("a") == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(generation_probability(lm, std::vector<std::string>{"a"}) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(generation_probability(lm, std::vector<std::string>{"a", "b", "c", "d"}) ==
          doctest::Approx(1.0).epsilon(1e-12));

    const auto two = lines("a a b\nb\nc\n");
    auto coll2 = std::make_shared<const CollectionModel>(two.passages);
    double total = 0.0;
    for (const auto* t : {"a", "b", "c"}) {
        total += SmoothedLanguageModel(two.passages[1].tokens, coll2, 3.0).probability(t);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(SmoothedLanguageModel(two.passages[1].tokens, coll2, 3.0).probability("c") > 0.0);

    // Huge mu: the model is the collection (a 2/5, b 2/5, c 1/5).
    const std::vector<std::string> s{"a", "a", "a", "b"};
    const double kl = 0.75 * std::log(0.75 / 0.4) + 0.25 * std::log(0.25 / 0.4);
    const SmoothedLanguageModel flat(two.passages[2].tokens, coll2, 1e12);
    CHECK(generation_probability(flat, s) == doctest::Approx(std::exp(-kl)).epsilon(1e-9));

    CHECK_THROWS_AS(SmoothedLanguageModel(src.passages[0].tokens, coll, 0.0), InvalidArgument);
    CHECK_THROWS_AS(generation_probability(lm, std::vector<std::string>{}), EmptyPassage);
}

TEST_CASE("generation probabilities lie in (0, 1]")
{
    oracle::Rng rng(8);
    const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
    for (int round = 0; round < 100; ++round) {
        std::string text;
        for (int p = 0; p < 4; ++p) {
            const auto n = rng.index(1, 5);
            for (std::size_t i = 0; i < n; ++i) {
                text += vocab[rng.index(0, vocab.size() - 1)] + " ";
            }
            text += "\n";
        }
        const auto src = lines(text);
        auto coll = std::make_shared<const CollectionModel>(src.passages);
        std::vector<std::vector<std::string>> all;
        for (const auto& p : src.passages) {
            all.push_back(p.tokens);
        }
        const double mu = rng.real(0.5, 1000.0);
        for (const auto& target : src.passages) {
            const SmoothedLanguageModel lm(target.tokens, coll, mu);
            for (const auto& source : src.passages) {
                const double g = generation_probability(lm, source.tokens);
                CHECK(g > 0.0);
                CHECK(g <= 1.0);
                CHECK(g == doctest::Approx(generation_oracle(target.tokens, source.tokens, all, mu)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("uniform influx")
{
    const auto pair = lines("a b\nc d\n");
    CHECK(uniform_influx(pair.passages, {1, 500.0, false}).scores_by_index() == std::vector<double>{1, 1});

    // Passage 0 contains everything the others say; it is their best generator.
    const auto hub = lines("a b c d e f\na b\nd e\n");
    const auto r = uniform_influx(hub.passages, {1, 10.0, false});
    CHECK(r.scores_by_index()[0] == 2.0);
    CHECK(r.order()[0] == 0);

    // Brute force: weighted and unweighted incoming links.
    oracle::Rng rng(21);
    const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f"};
    for (int round = 0; round < 50; ++round) {
        std::string text;
        const auto n = rng.index(2, 6);
        for (std::size_t p = 0; p < n; ++p) {
            const auto len = rng.index(1, 5);
            for (std::size_t i = 0; i < len; ++i) {
                text += vocab[rng.index(0, vocab.size() - 1)] + " ";
            }
            text += "\n";
        }
        const auto src = lines(text);
        std::vector<std::vector<std::string>> all;
        for (const auto& p : src.passages) {
            all.push_back(p.tokens);
        }
        const auto k = rng.index(1, 3);
        const double mu = 50.0;
        std::vector<double> unweighted(all.size(), 0.0);
        std::vector<double> weighted(all.size(), 0.0);
        for (std::size_t o = 0; o < all.size(); ++o) {
            std::vector<std::pair<double, std::size_t>> gen;
            for (std::size_t dd = 0; dd < all.size(); ++dd) {
                if (dd != o) {
                    gen.emplace_back(-generation_oracle(all[dd], all[o], all, mu), dd);
                }
            }
            std::sort(gen.begin(), gen.end());
            for (std::size_t i = 0; i < std::min(k, gen.size()); ++i) {
                unweighted[gen[i].second] += 1.0;
                weighted[gen[i].second] += -gen[i].first;
            }
        }
        const auto u = uniform_influx(src.passages, {k, mu, false}).scores_by_index();
        const auto w = uniform_influx(src.passages, {k, mu, true}).scores_by_index();
        CHECK(u == unweighted);
        for (std::size_t i = 0; i < w.size(); ++i) {
            CHECK(w[i] == doctest::Approx(weighted[i]).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(uniform_influx(pair.passages, {0, 500.0, false}), InvalidArgument);
}

TEST_CASE("pairwise average centrality")
{
    const auto same = vectorspace::build_matrix(lines("a b\na b\na b\n"), {});
    for (double s : pairwise_average_centrality(same, MetricSpec::cosine()).scores_by_index()) {
        CHECK(s == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    }
    const auto ortho = TermPassageMatrix::from_columns({{1, 0}, {0, 1}});
    CHECK(pairwise_average_centrality(ortho, MetricSpec::cosine()).scores_by_index() == std::vector<double>{0, 0});

    oracle::Rng rng(4);
    const auto cols = oracle::random_tf_columns(rng, 4, 5);
    const auto m = TermPassageMatrix::from_columns(cols);
    const auto got = pairwise_average_centrality(m, MetricSpec::cosine()).scores_by_index();
    for (std::size_t x = 0; x < 4; ++x) {
        double s = 0.0;
        for (std::size_t y = 0; y < 4; ++y) {
            if (x != y) {
                s += oracle::cosine(cols[x], cols[y]);
            }
        }
        CHECK(got[x] == doctest::Approx(s / 4.0).epsilon(1e-12));
    }
}

TEST_CASE("centroid centrality")
{
    const auto same = vectorspace::build_matrix(lines("a b\na b\n"), {});
    for (double s : centroid_centrality(same, MetricSpec::cosine()).scores_by_index()) {
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
    const auto ortho = TermPassageMatrix::from_columns({{1, 0}, {0, 1}});
    for (double s : centroid_centrality(ortho, MetricSpec::cosine()).scores_by_index()) {
        CHECK(s == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    }
    const auto single = TermPassageMatrix::from_columns({{0.2, 0.8}});
    CHECK(centroid_centrality(single, MetricSpec::cosine()).scores_by_index()[0] == doctest::Approx(1.0));
    CHECK_THROWS_AS(centroid_centrality(ortho, MetricSpec::jaccard()), InvalidArgument);
}

TEST_CASE("position baseline")
{
    CHECK(position_baseline(3).order() == Order{0, 1, 2});
    CHECK(position_baseline(1).order() == Order{0});
    const auto s = position_baseline(6).scores_by_index();
    for (std::size_t i = 1; i < s.size(); ++i) {
        CHECK(s[i] < s[i - 1]);
    }
}
