#include "supportsum/pipeline.hpp"

#include "supportsum/errors.hpp"
#include "supportsum/supportset.hpp"

#include <json.hpp>

#include <cmath>
#include <map>

namespace supportsum::pipeline {

namespace {

using graphrank::GraphOptions;

void apply_iteration(RankOutput& out, graphrank::IterationResult result)
{
    out.ranking = std::move(result.ranking);
    out.iterations = result.iterations;
    out.converged = result.converged;
}

} // namespace

RankOutput rank_document(const corpus::InputSource& doc, std::span<const corpus::InputSource> background,
                         const RunConfig& config)
{
    const bool use_background = config.model == Model::support_sets && config.mixed_source;
    RankOutput out;
    out.matrix = vectorspace::build_matrix(doc, config.weighting,
                                           use_background ? background : std::span<const corpus::InputSource>{});
    const std::size_t n = doc.size();

    if (n == 1 && config.model != Model::support_sets) {
        out.ranking = graphrank::position_baseline(1);
        return out;
    }

    switch (config.model) {
    case Model::support_sets: {
        if (out.matrix.num_columns() < 2) {
            const double score = 0.0;
            out.ranking = Ranking::from_scores(std::span<const double>(&score, 1));
            break;
        }
        const auto collection = supportset::build_collection(out.matrix, config.metric, *config.strategy);
        out.ranking = supportset::centrality_ranking(collection);
        break;
    }
    case Model::degree: {
        out.graph = graphrank::build_graph(out.matrix, config.metric,
                                           GraphOptions{graphrank::Orientation::undirected, config.threshold, true});
        out.ranking = graphrank::degree_centrality(*out.graph);
        break;
    }
    case Model::lexrank: {
        out.graph = graphrank::build_graph(out.matrix, config.metric,
                                           GraphOptions{graphrank::Orientation::undirected, config.threshold, true});
        apply_iteration(out, graphrank::lexrank(*out.graph, config.power));
        break;
    }
    case Model::continuous_lexrank: {
        out.graph = graphrank::build_graph(out.matrix, config.metric,
                                           GraphOptions{graphrank::Orientation::undirected, config.threshold, false});
        apply_iteration(out, graphrank::continuous_lexrank(*out.graph, config.power));
        break;
    }
    case Model::textrank: {
        out.graph = graphrank::build_graph(out.matrix, config.metric,
                                           GraphOptions{config.orientation, config.threshold, false});
        apply_iteration(out, graphrank::textrank(*out.graph, config.power));
        break;
    }
    case Model::influx: {
        graphrank::InfluxConfig influx;
        influx.k = config.influx_k.value_or(static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(n))));
        influx.mu = config.mu;
        influx.weighted = config.influx_weighted;
        out.ranking = graphrank::uniform_influx(doc.passages, influx);
        break;
    }
    case Model::pairwise_avg:
        out.ranking = graphrank::pairwise_average_centrality(out.matrix, config.metric);
        break;
    case Model::centroid:
        out.ranking = graphrank::centroid_centrality(out.matrix, config.metric);
        break;
    case Model::position:
        out.ranking = graphrank::position_baseline(n);
        break;
    }
    return out;
}

summarizer::SizeBudget budget_for(const RunConfig& config, std::span<const corpus::ReferenceSummary> references)
{
    if (!config.budget_from_reference) {
        return config.budget;
    }
    if (references.empty()) {
        throw InvalidArgument("budget=reference needs reference summaries");
    }
    std::size_t total = 0;
    for (const auto& r : references) {
        total += r.tokens.size();
    }
    const std::size_t words = (total + references.size() - 1) / references.size();
    return summarizer::SizeBudget::words(std::max<std::size_t>(words, 1));
}

std::string ranking_to_json(const std::string& doc_id, const RankOutput& output, const RunConfig& config)
{
    nlohmann::ordered_json j;
    j["doc_id"] = doc_id;
    j["model"] = model_name(config.model);
    if (config.model != Model::influx && config.model != Model::position) {
        j["metric"] = config.metric.name();
        j["weighting"] = config.weighting.name();
    }
    if (config.strategy) {
        j["strategy"] = supportset::strategy_name(*config.strategy);
    }
    if (config.model == Model::lexrank || config.model == Model::continuous_lexrank ||
        config.model == Model::textrank) {
        j["iterations"] = output.iterations;
        j["converged"] = output.converged;
    }
    auto entries = nlohmann::ordered_json::array();
    for (const auto& e : output.ranking.entries()) {
        nlohmann::ordered_json item;
        item["index"] = e.index;
        item["score"] = e.score;
        entries.push_back(std::move(item));
    }
    j["ranking"] = std::move(entries);
    return j.dump(2);
}

CorpusRun evaluate_corpus(const corpus::Corpus& corpus, const RunConfig& config)
{
    if (config.model == Model::support_sets && config.mixed_source && corpus.background.empty()) {
        throw InvalidArgument("mixed-source needs a corpus with background material");
    }
    const auto& docs = corpus.documents;
    for (const auto& doc : docs) {
        if (corpus.references_for(doc.doc_id).empty()) {
            throw MissingReference("no reference summary for document '" + doc.doc_id + "'");
        }
    }

    std::vector<summarizer::Summary> summaries(docs.size());
    std::vector<eval::RougeScore> scores(docs.size());
    parallel_for(docs.size(), config.jobs, [&](std::size_t i) {
        const auto& doc = docs[i];
        const auto& refs = corpus.references_for(doc.doc_id);
        const auto ranked = rank_document(doc, corpus.background_for(doc.doc_id), config);
        summaries[i] = summarizer::compose(ranked.ranking, doc, budget_for(config, refs));
        std::vector<std::vector<std::string>> ref_tokens;
        ref_tokens.reserve(refs.size());
        for (const auto& r : refs) {
            ref_tokens.push_back(r.tokens);
        }
        scores[i] = eval::rouge_n(summaries[i].tokens(doc), ref_tokens, config.rouge_n);
    });

    std::map<std::string, eval::RougeScore> per_doc;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        per_doc.emplace(docs[i].doc_id, scores[i]);
    }
    CorpusRun run;
    run.summaries = std::move(summaries);
    run.report = eval::make_report(config.system_name(), config.rouge_n, std::move(per_doc), config.resamples,
                                   config.level, config.seed);
    return run;
}

} // namespace supportsum::pipeline
