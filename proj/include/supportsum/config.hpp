#pragma once

#include "supportsum/corpus.hpp"
#include "supportsum/graphrank.hpp"
#include "supportsum/summarizer.hpp"
#include "supportsum/supportset.hpp"
#include "supportsum/vectorspace.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace supportsum {

enum class Model {
    support_sets,
    degree,
    lexrank,
    continuous_lexrank,
    textrank,
    influx,
    pairwise_avg,
    centroid,
    position,
};

std::string model_name(Model m);
Model parse_model(std::string_view text);

// Raw settings as they appear in config files and on the command line.
using KeyValues = std::map<std::string, std::string>;

struct RunConfig {
    Model model = Model::support_sets;
    vectorspace::MetricSpec metric = vectorspace::MetricSpec::manhattan();
    // Present iff model == support_sets.
    std::optional<supportset::ThresholdStrategy> strategy;
    vectorspace::WeightingScheme weighting;

    summarizer::SizeBudget budget = summarizer::SizeBudget::compression(0.25);
    // Size each summary to the word count of the document's references.
    bool budget_from_reference = false;

    // Graph models.
    graphrank::PowerIterationConfig power;
    double threshold = 0.0;
    graphrank::Orientation orientation = graphrank::Orientation::undirected;
    // Influx. Unset k means ceil(0.1 * N).
    std::optional<std::size_t> influx_k;
    double mu = 500.0;
    bool influx_weighted = false;

    bool mixed_source = false;
    std::uint64_t seed = 42;

    corpus::Segmentation segmentation;
    std::size_t rouge_n = 1;
    std::size_t resamples = 1000;
    double level = 0.95;
    std::size_t jobs = 1;

    // Canonical settings that define the ranking model, in a fixed order.
    KeyValues model_settings() const;
    // Human-readable label built from model_settings(), e.g.
    // "support-sets metric=manhattan strategy=knn:2 weighting=tf".
    std::string system_name() const;
};

// Builds a configuration from key/value settings. Keys that do not apply to
// the chosen model (a strategy for a graph model, a damping factor for the
// support-set model, ...) are rejected with InvalidArgument.
RunConfig parse_run_config(const KeyValues& settings, std::uint64_t default_seed = 42);

// Every key parse_run_config understands.
const std::vector<std::string>& known_keys();

// "key = value" lines; '#' starts a comment, values may be double-quoted.
// Section headers ("[name]") are ignored.
KeyValues parse_key_values(std::string_view text);
KeyValues read_key_values(const std::filesystem::path& path);

// Inline form "key=value;key=value".
KeyValues parse_inline_key_values(std::string_view text);

// A sweep grid: settings shared by every run plus one or more sections whose
// keys list alternative values (whitespace separated or ["a", "b"]). Each
// section expands to the cartesian product of its keys, in file order with
// the last key varying fastest.
std::vector<KeyValues> expand_grid(std::string_view text);

// Seed taken from SUPPORTSUM_SEED when set, otherwise 42.
std::uint64_t default_seed_from_env();

} // namespace supportsum
