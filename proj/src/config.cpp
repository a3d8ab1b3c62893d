#include "supportsum/config.hpp"

#include "supportsum/errors.hpp"
#include "supportsum/format.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <utility>

namespace supportsum {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::string unquote(std::string_view s)
{
    s = trim(s);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    return std::string(s);
}

// Drops a trailing '#' comment that is not inside double quotes.
std::string_view strip_comment(std::string_view line)
{
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') {
            quoted = !quoted;
        } else if (line[i] == '#' && !quoted) {
            return line.substr(0, i);
        }
    }
    return line;
}

std::vector<std::string_view> split_lines(std::string_view text)
{
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

bool is_section_header(std::string_view line)
{
    return line.size() >= 2 && line.front() == '[' && line.back() == ']';
}

std::pair<std::string, std::string_view> split_assignment(std::string_view line, std::size_t line_no)
{
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
        throw InvalidArgument("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    auto key = std::string(trim(line.substr(0, eq)));
    if (key.empty()) {
        throw InvalidArgument("line " + std::to_string(line_no) + ": empty key");
    }
    return {std::move(key), trim(line.substr(eq + 1))};
}

// `a b "c d"` or `["a", "b,c"]`.
std::vector<std::string> split_values(std::string_view value)
{
    const bool array = value.size() >= 2 && value.front() == '[' && value.back() == ']';
    if (array) {
        value = value.substr(1, value.size() - 2);
    }
    std::vector<std::string> items;
    std::string current;
    bool quoted = false;
    bool pending = false;
    auto flush = [&] {
        if (pending) {
            items.push_back(current);
        }
        current.clear();
        pending = false;
    };
    for (const char c : value) {
        if (c == '"') {
            quoted = !quoted;
            pending = true;
        } else if (!quoted && (array ? c == ',' : (c == ' ' || c == '\t'))) {
            flush();
        } else if (!quoted && array && (c == ' ' || c == '\t')) {
            // whitespace around array items
        } else {
            current.push_back(c);
            pending = true;
        }
    }
    if (quoted) {
        throw InvalidArgument("unterminated quote in '" + std::string(value) + "'");
    }
    flush();
    return items;
}

bool parse_bool(const std::string& key, std::string_view text)
{
    if (text == "true" || text == "1" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no" || text == "off") {
        return false;
    }
    throw InvalidArgument(key + ": expected true or false, got '" + std::string(text) + "'");
}

const std::vector<std::string> kCommonKeys = {"model",  "budget",    "seed",         "rouge-n", "resamples",
                                              "level",  "jobs",      "segmentation", "delimiters"};

const std::vector<std::string> kVectorKeys = {"metric", "weighting", "idf"};

std::vector<std::string> model_keys(Model m)
{
    switch (m) {
    case Model::support_sets:
        return {"metric", "weighting", "idf", "strategy", "mixed-source"};
    case Model::degree:
        return {"metric", "weighting", "idf", "threshold"};
    case Model::lexrank:
    case Model::continuous_lexrank:
        return {"metric", "weighting", "idf", "threshold", "damping", "tolerance", "max-iterations"};
    case Model::textrank:
        return {"metric",  "weighting", "idf",           "threshold",
                "damping", "tolerance", "max-iterations", "orientation"};
    case Model::influx:
        return {"influx-k", "mu", "influx-weighted"};
    case Model::pairwise_avg:
    case Model::centroid:
        return {"metric", "weighting", "idf"};
    case Model::position:
        return {};
    }
    return {};
}

vectorspace::MetricSpec default_metric(Model m)
{
    switch (m) {
    case Model::support_sets:
        return vectorspace::MetricSpec::manhattan();
    case Model::textrank:
        return vectorspace::MetricSpec::content_overlap();
    default:
        return vectorspace::MetricSpec::cosine();
    }
}

double default_threshold(Model m)
{
    return (m == Model::degree || m == Model::lexrank) ? 0.1 : 0.0;
}

vectorspace::WeightingScheme parse_weighting(std::string_view text)
{
    vectorspace::WeightingScheme scheme;
    auto base = text;
    constexpr std::string_view idf_suffix = "+idf";
    if (base.size() > idf_suffix.size() && base.ends_with(idf_suffix)) {
        scheme.idf = true;
        base.remove_suffix(idf_suffix.size());
    }
    if (base == "tf") {
        scheme.base = vectorspace::TermWeight::normalized_tf;
    } else if (base == "binary") {
        scheme.base = vectorspace::TermWeight::binary;
    } else {
        throw InvalidArgument("unknown weighting '" + std::string(text) + "' (expected tf, binary, tf+idf or binary+idf)");
    }
    return scheme;
}

corpus::Segmentation::Mode parse_segmentation(std::string_view text)
{
    if (text == "lines") {
        return corpus::Segmentation::Mode::lines;
    }
    if (text == "delimiters") {
        return corpus::Segmentation::Mode::delimiters;
    }
    throw InvalidArgument("unknown segmentation '" + std::string(text) + "' (expected lines or delimiters)");
}

} // namespace

std::string model_name(Model m)
{
    switch (m) {
    case Model::support_sets:
        return "support-sets";
    case Model::degree:
        return "degree";
    case Model::lexrank:
        return "lexrank";
    case Model::continuous_lexrank:
        return "continuous-lexrank";
    case Model::textrank:
        return "textrank";
    case Model::influx:
        return "influx";
    case Model::pairwise_avg:
        return "pairwise-avg";
    case Model::centroid:
        return "centroid";
    case Model::position:
        return "position";
    }
    return "?";
}

Model parse_model(std::string_view text)
{
    for (const auto m : {Model::support_sets, Model::degree, Model::lexrank, Model::continuous_lexrank,
                         Model::textrank, Model::influx, Model::pairwise_avg, Model::centroid,
                         Model::position}) {
        if (text == model_name(m)) {
            return m;
        }
    }
    throw InvalidArgument("unknown model '" + std::string(text) + "'");
}

const std::vector<std::string>& known_keys()
{
    static const std::vector<std::string> keys = [] {
        std::set<std::string> all(kCommonKeys.begin(), kCommonKeys.end());
        for (const auto m : {Model::support_sets, Model::degree, Model::lexrank, Model::continuous_lexrank,
                             Model::textrank, Model::influx, Model::pairwise_avg, Model::centroid,
                             Model::position}) {
            for (auto& k : model_keys(m)) {
                all.insert(std::move(k));
            }
        }
        return std::vector<std::string>(all.begin(), all.end());
    }();
    return keys;
}

KeyValues RunConfig::model_settings() const
{
    KeyValues out;
    out["budget"] = budget_from_reference ? "reference" : budget.name();
    for (const auto& key : model_keys(model)) {
        if (key == "metric") {
            out[key] = metric.name();
        } else if (key == "weighting") {
            out[key] = weighting.name();
        } else if (key == "strategy") {
            out[key] = strategy ? supportset::strategy_name(*strategy) : "";
        } else if (key == "mixed-source") {
            out[key] = mixed_source ? "true" : "false";
        } else if (key == "threshold") {
            out[key] = format_shortest(threshold);
        } else if (key == "damping") {
            out[key] = format_shortest(power.damping);
        } else if (key == "orientation") {
            out[key] = graphrank::orientation_name(orientation);
        } else if (key == "influx-k") {
            out[key] = influx_k ? std::to_string(*influx_k) : "auto";
        } else if (key == "mu") {
            out[key] = format_shortest(mu);
        } else if (key == "influx-weighted") {
            out[key] = influx_weighted ? "true" : "false";
        }
        // idf is folded into the weighting name; tolerance and iteration caps
        // do not change which model is run.
    }
    return out;
}

std::string RunConfig::system_name() const
{
    std::string name = model_name(model);
    for (const auto& [key, value] : model_settings()) {
        if (key == "mixed-source" && value == "false") {
            continue;
        }
        name += ' ' + key + '=' + value;
    }
    return name;
}

RunConfig parse_run_config(const KeyValues& settings, std::uint64_t default_seed)
{
    RunConfig config;
    config.seed = default_seed;

    const auto& known = known_keys();
    for (const auto& [key, value] : settings) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw InvalidArgument("unknown setting '" + key + "'");
        }
    }

    if (const auto it = settings.find("model"); it != settings.end()) {
        config.model = parse_model(it->second);
    }
    const auto applicable = model_keys(config.model);
    for (const auto& [key, value] : settings) {
        const bool common = std::find(kCommonKeys.begin(), kCommonKeys.end(), key) != kCommonKeys.end();
        if (!common && std::find(applicable.begin(), applicable.end(), key) == applicable.end()) {
            throw InvalidArgument("setting '" + key + "' does not apply to model " + model_name(config.model));
        }
    }

    auto get = [&](const std::string& key) -> const std::string* {
        const auto it = settings.find(key);
        return it == settings.end() ? nullptr : &it->second;
    };

    config.metric = default_metric(config.model);
    config.threshold = default_threshold(config.model);
    if (config.model == Model::support_sets) {
        config.strategy = supportset::strategy::FixedCardinality{2};
    }

    if (const auto* v = get("metric")) {
        config.metric = vectorspace::MetricSpec::parse(*v);
    }
    if (const auto* v = get("strategy")) {
        config.strategy = supportset::parse_strategy(*v);
    }
    if (config.strategy) {
        supportset::validate(*config.strategy);
    }
    if (const auto* v = get("weighting")) {
        config.weighting = parse_weighting(*v);
    }
    if (const auto* v = get("idf")) {
        config.weighting.idf = config.weighting.idf || parse_bool("idf", *v);
    }
    if (const auto* v = get("budget")) {
        if (*v == "reference") {
            config.budget_from_reference = true;
        } else {
            config.budget = summarizer::SizeBudget::parse(*v);
        }
    }
    if (const auto* v = get("damping")) {
        config.power.damping = parse_double(*v);
    }
    if (const auto* v = get("tolerance")) {
        config.power.tolerance = parse_double(*v);
    }
    if (const auto* v = get("max-iterations")) {
        config.power.max_iterations = parse_count(*v);
    }
    graphrank::validate(config.power);
    if (const auto* v = get("threshold")) {
        config.threshold = parse_double(*v);
        if (!(config.threshold >= 0.0)) {
            throw InvalidArgument("threshold must be >= 0");
        }
    }
    if (const auto* v = get("orientation")) {
        config.orientation = graphrank::parse_orientation(*v);
    }
    if (const auto* v = get("influx-k")) {
        if (*v != "auto") {
            config.influx_k = parse_count(*v);
            if (*config.influx_k == 0) {
                throw InvalidArgument("influx-k must be >= 1");
            }
        }
    }
    if (const auto* v = get("mu")) {
        config.mu = parse_double(*v);
        if (!(config.mu > 0.0)) {
            throw InvalidArgument("mu must be > 0");
        }
    }
    if (const auto* v = get("influx-weighted")) {
        config.influx_weighted = parse_bool("influx-weighted", *v);
    }
    if (const auto* v = get("mixed-source")) {
        config.mixed_source = parse_bool("mixed-source", *v);
    }
    if (const auto* v = get("seed")) {
        config.seed = parse_count(*v);
    }
    if (const auto* v = get("segmentation")) {
        config.segmentation.mode = parse_segmentation(*v);
    }
    if (const auto* v = get("delimiters")) {
        if (v->empty()) {
            throw InvalidArgument("delimiters must not be empty");
        }
        config.segmentation.delimiters = *v;
    }
    if (const auto* v = get("rouge-n")) {
        config.rouge_n = parse_count(*v);
        if (config.rouge_n == 0) {
            throw InvalidArgument("rouge-n must be >= 1");
        }
    }
    if (const auto* v = get("resamples")) {
        config.resamples = parse_count(*v);
        if (config.resamples == 0) {
            throw InvalidArgument("resamples must be >= 1");
        }
    }
    if (const auto* v = get("level")) {
        config.level = parse_double(*v);
        if (!(config.level > 0.0 && config.level < 1.0)) {
            throw InvalidArgument("level must be in (0, 1)");
        }
    }
    if (const auto* v = get("jobs")) {
        config.jobs = parse_count(*v);
        if (config.jobs == 0) {
            throw InvalidArgument("jobs must be >= 1");
        }
    }
    return config;
}

KeyValues parse_key_values(std::string_view text)
{
    KeyValues out;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto line = trim(strip_comment(lines[i]));
        if (line.empty() || is_section_header(line)) {
            continue;
        }
        auto [key, value] = split_assignment(line, i + 1);
        out[key] = unquote(value);
    }
    return out;
}

KeyValues read_key_values(const std::filesystem::path& path)
{
    return parse_key_values(corpus::read_text_file(path));
}

KeyValues parse_inline_key_values(std::string_view text)
{
    KeyValues out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(';', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const auto item = trim(text.substr(start, end - start));
        if (!item.empty()) {
            auto [key, value] = split_assignment(item, 1);
            out[key] = unquote(value);
        }
        start = end + 1;
    }
    return out;
}

std::vector<KeyValues> expand_grid(std::string_view text)
{
    using Axes = std::vector<std::pair<std::string, std::vector<std::string>>>;
    Axes shared;
    std::vector<Axes> sections;
    Axes* current = &shared;

    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto line = trim(strip_comment(lines[i]));
        if (line.empty()) {
            continue;
        }
        if (is_section_header(line)) {
            sections.emplace_back();
            current = &sections.back();
            continue;
        }
        auto [key, value] = split_assignment(line, i + 1);
        auto values = split_values(value);
        if (values.empty()) {
            throw InvalidArgument("line " + std::to_string(i + 1) + ": no values for '" + key + "'");
        }
        auto existing = std::find_if(current->begin(), current->end(),
                                     [&](const auto& axis) { return axis.first == key; });
        if (existing != current->end()) {
            existing->second = std::move(values);
        } else {
            current->emplace_back(std::move(key), std::move(values));
        }
    }
    if (sections.empty() && !shared.empty()) {
        sections.emplace_back();
    }

    std::vector<KeyValues> rows;
    for (const auto& section : sections) {
        Axes axes = shared;
        for (const auto& axis : section) {
            auto existing = std::find_if(axes.begin(), axes.end(),
                                         [&](const auto& a) { return a.first == axis.first; });
            if (existing != axes.end()) {
                existing->second = axis.second;
            } else {
                axes.push_back(axis);
            }
        }
        if (axes.empty()) {
            continue;
        }
        std::vector<std::size_t> odometer(axes.size(), 0);
        bool done = false;
        while (!done) {
            KeyValues row;
            for (std::size_t a = 0; a < axes.size(); ++a) {
                row[axes[a].first] = axes[a].second[odometer[a]];
            }
            rows.push_back(std::move(row));
            done = true;
            for (std::size_t a = axes.size(); a-- > 0;) {
                if (++odometer[a] < axes[a].second.size()) {
                    done = false;
                    break;
                }
                odometer[a] = 0;
            }
        }
    }
    return rows;
}

std::uint64_t default_seed_from_env()
{
    const char* value = std::getenv("SUPPORTSUM_SEED");
    if (value == nullptr || *value == '\0') {
        return 42;
    }
    try {
        return parse_count(value);
    } catch (const InvalidArgument&) {
        throw InvalidArgument("SUPPORTSUM_SEED must be a non-negative integer");
    }
}

} // namespace supportsum
