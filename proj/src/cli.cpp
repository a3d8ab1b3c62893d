#include "supportsum/cli.hpp"

#include "supportsum/config.hpp"
#include "supportsum/errors.hpp"
#include "supportsum/format.hpp"
#include "supportsum/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

namespace supportsum::cli {

namespace fs = std::filesystem;

namespace {

const char* const kSettingsHelp = R"(Settings (flags, or 'key = value' lines in a --config file; flags win):
  model            support-sets | degree | lexrank | continuous-lexrank | textrank
                   | influx | pairwise-avg | centroid | position   [support-sets]
  metric           minkowski:P | manhattan | euclidean | chebyshev | fractional:P
                   | raw-minkowski-fractional:P | dimension-minkowski | cosine
                   | manhattan-sim | content-overlap | jaccard
  strategy         knn:K | knn:P% | relative:F | radius:E | h0 | h1.1:A | h1.2 | h1.3
                   | h2.1 | h2.2 | h2.3 | h3.1:A,D | h3.2:A,D   (support-sets) [knn:2]
  weighting        tf | binary | tf+idf | binary+idf                    [tf]
  idf              true | false
  budget           words:N | sentences:N | compression:F | reference   [compression:0.25]
  mixed-source     true | false: add background passages (support-sets)
  threshold        edge similarity cut (degree, lexrank, textrank)
  damping          teleport/damping factor d in (0,1)                   [0.15]
  tolerance        power-iteration convergence tolerance                [1e-6]
  max-iterations   power-iteration cap                                  [200]
  orientation      undirected | backward (textrank)
  influx-k         generators per passage, or auto = ceil(0.1 N) (influx)
  mu               Dirichlet smoothing mass (influx)                    [500]
  influx-weighted  true | false (influx)
  segmentation     lines | delimiters                                   [lines]
  delimiters       passage-ending characters for delimiters mode        [.!?]
  rouge-n, resamples, level, seed, jobs   evaluation settings  [1, 1000, 0.95, $SUPPORTSUM_SEED or 42, 1]
Config files: one 'key = value' per line, '#' comments, values may be "quoted".
Exit codes: 0 ok, 1 other failure, 2 configuration error, 3 input/output error.)";

const char* const kGridHelp = R"(Grid file: 'key = v1 v2 ...' or 'key = ["v1", "v2"]' lines. Keys before the
first [section] header are shared; each section expands to the cartesian product
of its keys (merged over the shared ones) and the rows of all sections are
concatenated. A file without sections is a single grid; an empty file yields an
empty table.)";

const std::map<std::string, std::string>& key_descriptions()
{
    static const std::map<std::string, std::string> d = {
        {"model", "ranking model"},
        {"metric", "distance or similarity metric"},
        {"strategy", "support-set threshold strategy"},
        {"weighting", "term weighting scheme"},
        {"idf", "multiply weights by inverse document frequency"},
        {"budget", "summary size"},
        {"mixed-source", "add background passages to the candidate space"},
        {"threshold", "minimum similarity for a graph edge"},
        {"damping", "damping factor"},
        {"tolerance", "power-iteration tolerance"},
        {"max-iterations", "power-iteration cap"},
        {"orientation", "graph orientation"},
        {"influx-k", "generators per passage"},
        {"mu", "Dirichlet smoothing mass"},
        {"influx-weighted", "weight influx edges by generation probability"},
        {"seed", "bootstrap seed"},
        {"segmentation", "passage segmentation mode"},
        {"delimiters", "passage-ending characters"},
        {"rouge-n", "n-gram order for ROUGE"},
        {"resamples", "bootstrap resamples"},
        {"level", "confidence level"},
        {"jobs", "worker threads"},
    };
    return d;
}

bool is_flag_key(const std::string& key)
{
    return key == "idf" || key == "mixed-source" || key == "influx-weighted";
}

// Model settings collected from one subcommand's flags.
struct SettingFlags {
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
    std::map<std::string, CLI::Option*> options;
    std::string config_file;

    void attach(CLI::App* sub)
    {
        for (const auto& key : known_keys()) {
            const auto& desc = key_descriptions().at(key);
            if (is_flag_key(key)) {
                options[key] = sub->add_flag("--" + key, flags[key], desc);
            } else {
                options[key] = sub->add_option("--" + key, values[key], desc);
            }
        }
        sub->add_option("--config", config_file, "key = value settings file")->check(CLI::ExistingFile);
        sub->footer(kSettingsHelp);
    }

    KeyValues collect() const
    {
        KeyValues kv;
        if (!config_file.empty()) {
            kv = read_key_values(config_file);
        }
        for (const auto& [key, option] : options) {
            if (option->count() == 0) {
                continue;
            }
            kv[key] = is_flag_key(key) ? (flags.at(key) ? "true" : "false") : values.at(key);
        }
        return kv;
    }
};

KeyValues overlay(KeyValues base, const KeyValues& top)
{
    for (const auto& [k, v] : top) {
        base[k] = v;
    }
    return base;
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream file(path, std::ios::binary);
    file << content;
    file.close();
    if (!file) {
        throw IoError("cannot write " + path.string());
    }
}

void ensure_directory(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create directory " + dir.string());
    }
}

std::vector<corpus::InputSource> load_background_dir(const std::string& dir, const corpus::Segmentation& seg)
{
    if (!fs::is_directory(dir)) {
        throw IoError("background directory not found: " + dir);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<corpus::InputSource> out;
    for (const auto& f : files) {
        out.push_back(corpus::load_document(f, seg));
    }
    return out;
}

corpus::Corpus load_eval_corpus(const std::string& root, const RunConfig& config)
{
    corpus::CorpusLayout layout;
    layout.segmentation = config.segmentation;
    layout.require_references = true;
    return corpus::load_corpus(root, layout);
}

nlohmann::ordered_json system_summary(const eval::EvalReport& report)
{
    nlohmann::ordered_json j;
    j["system"] = report.system;
    j["mean"] = report.mean;
    j["ci_low"] = report.ci.low;
    j["ci_high"] = report.ci.high;
    return j;
}

struct Context {
    std::ostream& out;
    std::ostream& err;
    std::uint64_t seed = 42;
};

int cmd_summarize(const Context& ctx, const KeyValues& settings, const std::vector<std::string>& inputs,
                  const std::string& output_dir, const std::string& background_dir, bool dump_matrix,
                  bool dump_graph)
{
    const auto config = parse_run_config(settings, ctx.seed);
    if (config.mixed_source && background_dir.empty()) {
        throw InvalidArgument("mixed-source needs --background DIR");
    }
    if (!background_dir.empty() && !config.mixed_source) {
        throw InvalidArgument("--background is only used with mixed-source");
    }
    if (config.budget_from_reference) {
        throw InvalidArgument("budget=reference is only available when evaluating a corpus");
    }
    std::vector<corpus::InputSource> docs;
    for (const auto& path : inputs) {
        docs.push_back(corpus::load_document(path, config.segmentation));
    }
    const auto background = background_dir.empty() ? std::vector<corpus::InputSource>{}
                                                    : load_background_dir(background_dir, config.segmentation);
    ensure_directory(output_dir);

    std::vector<pipeline::RankOutput> ranked(docs.size());
    std::vector<summarizer::Summary> summaries(docs.size());
    pipeline::parallel_for(docs.size(), config.jobs, [&](std::size_t i) {
        ranked[i] = pipeline::rank_document(docs[i], background, config);
        summaries[i] = summarizer::compose(ranked[i].ranking, docs[i], config.budget);
    });

    const fs::path dir(output_dir);
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto& id = docs[i].doc_id;
        write_file(dir / (id + ".summary.txt"), summaries[i].text + "\n");
        write_file(dir / (id + ".summary.json"), summarizer::summary_to_json(summaries[i]) + "\n");
        if (dump_matrix) {
            write_file(dir / (id + ".matrix.json"), vectorspace::matrix_to_json(ranked[i].matrix) + "\n");
        }
        if (dump_graph) {
            if (ranked[i].graph) {
                write_file(dir / (id + ".graph.json"), graphrank::graph_to_json(*ranked[i].graph) + "\n");
            } else {
                ctx.err << "note: model " << model_name(config.model) << " builds no graph for " << id << "\n";
            }
        }
        ctx.out << (dir / (id + ".summary.txt")).string() << "\n";
    }
    return kOk;
}

int cmd_rank(const Context& ctx, const KeyValues& settings, const std::vector<std::string>& inputs,
             const std::string& background_dir)
{
    const auto config = parse_run_config(settings, ctx.seed);
    if (config.mixed_source && background_dir.empty()) {
        throw InvalidArgument("mixed-source needs --background DIR");
    }
    if (!background_dir.empty() && !config.mixed_source) {
        throw InvalidArgument("--background is only used with mixed-source");
    }
    std::vector<corpus::InputSource> docs;
    for (const auto& path : inputs) {
        docs.push_back(corpus::load_document(path, config.segmentation));
    }
    const auto background = background_dir.empty() ? std::vector<corpus::InputSource>{}
                                                    : load_background_dir(background_dir, config.segmentation);
    std::vector<std::string> json(docs.size());
    pipeline::parallel_for(docs.size(), config.jobs, [&](std::size_t i) {
        json[i] = pipeline::ranking_to_json(docs[i].doc_id, pipeline::rank_document(docs[i], background, config),
                                            config);
    });
    auto all = nlohmann::ordered_json::array();
    for (const auto& j : json) {
        all.push_back(nlohmann::ordered_json::parse(j));
    }
    ctx.out << all.dump(2) << "\n";
    return kOk;
}

int cmd_evaluate(const Context& ctx, const KeyValues& settings, const std::string& root,
                 const std::string& output_dir)
{
    const auto config = parse_run_config(settings, ctx.seed);
    const auto corpus = load_eval_corpus(root, config);
    const auto run = pipeline::evaluate_corpus(corpus, config);
    const auto json = eval::report_to_json(run.report) + "\n";
    if (!output_dir.empty()) {
        ensure_directory(output_dir);
        write_file(fs::path(output_dir) / "report.json", json);
        write_file(fs::path(output_dir) / "report.tsv",
                   eval::tsv_header() + "\n" + eval::tsv_row(run.report) + "\n");
    }
    ctx.out << json;
    return kOk;
}

KeyValues system_spec(const std::string& spec)
{
    if (fs::is_regular_file(spec)) {
        return read_key_values(spec);
    }
    if (spec.find('=') != std::string::npos) {
        return parse_inline_key_values(spec);
    }
    throw IoError("system spec is neither a file nor 'key=value;...': " + spec);
}

int cmd_compare(const Context& ctx, const KeyValues& settings, const std::string& root,
                const std::string& spec_a, const std::string& spec_b)
{
    const auto config_a = parse_run_config(overlay(settings, system_spec(spec_a)), ctx.seed);
    const auto config_b = parse_run_config(overlay(settings, system_spec(spec_b)), ctx.seed);
    if (config_a.rouge_n != config_b.rouge_n) {
        throw InvalidArgument("both systems must use the same rouge-n");
    }
    const auto corpus_a = load_eval_corpus(root, config_a);
    const bool same_segmentation = config_a.segmentation.mode == config_b.segmentation.mode &&
                                   config_a.segmentation.delimiters == config_b.segmentation.delimiters;
    const auto corpus_b = same_segmentation ? corpus_a : load_eval_corpus(root, config_b);
    const auto a = pipeline::evaluate_corpus(corpus_a, config_a).report;
    const auto b = pipeline::evaluate_corpus(corpus_b, config_b).report;

    nlohmann::ordered_json j;
    j["rouge_n"] = a.rouge_n;
    j["documents"] = a.per_doc.size();
    j["a"] = system_summary(a);
    j["b"] = system_summary(b);
    try {
        const auto ra = a.recalls();
        const auto rb = b.recalls();
        const auto w = eval::wilcoxon_signed_rank(ra, rb);
        nlohmann::ordered_json wj;
        wj["alternative"] = "a > b";
        wj["W"] = w.statistic;
        wj["informative_pairs"] = w.informative_pairs;
        wj["z"] = w.z;
        wj["p_value"] = w.p_value;
        j["wilcoxon"] = wj;
    } catch (const TooFewPairs& e) {
        j["wilcoxon"] = nullptr;
        ctx.err << "warning: " << e.what() << "\n";
    }
    ctx.out << j.dump(2) << "\n";
    return kOk;
}

int cmd_sweep(const Context& ctx, const KeyValues& settings, const std::string& grid_path,
              const std::string& root, const std::string& output)
{
    const auto rows = expand_grid(corpus::read_text_file(grid_path));
    std::vector<RunConfig> configs;
    configs.reserve(rows.size());
    for (const auto& row : rows) {
        configs.push_back(parse_run_config(overlay(settings, row), ctx.seed));
    }

    std::map<std::pair<int, std::string>, corpus::Corpus> corpora;
    std::vector<eval::EvalReport> reports;
    for (const auto& config : configs) {
        const auto key = std::make_pair(static_cast<int>(config.segmentation.mode), config.segmentation.delimiters);
        auto it = corpora.find(key);
        if (it == corpora.end()) {
            it = corpora.emplace(key, load_eval_corpus(root, config)).first;
        }
        reports.push_back(pipeline::evaluate_corpus(it->second, config).report);
    }
    std::stable_sort(reports.begin(), reports.end(),
                     [](const eval::EvalReport& x, const eval::EvalReport& y) { return x.mean > y.mean; });

    std::string table = eval::tsv_header() + "\n";
    for (const auto& r : reports) {
        table += eval::tsv_row(r) + "\n";
    }
    if (!output.empty()) {
        write_file(output, table);
    }
    ctx.out << table;
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Extractive summarization by support-set centrality and graph-based baselines", "supportsum"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all help");

    std::vector<std::string> inputs;
    std::string output_dir = ".";
    std::string background_dir;
    bool dump_matrix = false;
    bool dump_graph = false;
    std::string corpus_root;
    std::string eval_output;
    std::string spec_a;
    std::string spec_b;
    std::string grid_path;
    std::string sweep_output;

    auto* summarize = app.add_subcommand("summarize", "Write an extract for each input document");
    SettingFlags summarize_flags;
    summarize_flags.attach(summarize);
    summarize->add_option("inputs", inputs, "Documents, one passage per line by default")
        ->required()
        ->check(CLI::ExistingFile);
    summarize->add_option("-o,--output", output_dir, "Directory for <id>.summary.txt and <id>.summary.json");
    summarize->add_option("--background", background_dir, "Directory of .txt files used as background material");
    summarize->add_flag("--dump-matrix", dump_matrix, "Also write <id>.matrix.json");
    summarize->add_flag("--dump-graph", dump_graph, "Also write <id>.graph.json (graph models)");

    auto* rank = app.add_subcommand("rank", "Print the passage ranking of each input document as JSON");
    SettingFlags rank_flags;
    rank_flags.attach(rank);
    rank->add_option("inputs", inputs, "Documents")->required()->check(CLI::ExistingFile);
    rank->add_option("--background", background_dir, "Directory of .txt files used as background material");

    auto* evaluate = app.add_subcommand("evaluate", "ROUGE evaluation over a corpus (docs/, refs/, background/)");
    SettingFlags evaluate_flags;
    evaluate_flags.attach(evaluate);
    evaluate->add_option("corpus", corpus_root, "Corpus root")->required();
    evaluate->add_option("-o,--output", eval_output, "Directory for report.json and report.tsv");

    auto* compare = app.add_subcommand("compare", "Paired Wilcoxon signed-rank test of system A against B");
    SettingFlags compare_flags;
    compare_flags.attach(compare);
    compare->add_option("corpus", corpus_root, "Corpus root")->required();
    compare->add_option("--system-a", spec_a, "Settings file or 'key=value;...' for system A")->required();
    compare->add_option("--system-b", spec_b, "Settings file or 'key=value;...' for system B")->required();

    auto* sweep = app.add_subcommand("sweep", "Evaluate every combination of a parameter grid");
    SettingFlags sweep_flags;
    sweep_flags.attach(sweep);
    sweep->add_option("grid", grid_path, "Grid file")->required()->check(CLI::ExistingFile);
    sweep->add_option("corpus", corpus_root, "Corpus root")->required();
    sweep->add_option("-o,--output", sweep_output, "Also write the leaderboard to this file");
    sweep->footer(std::string(kSettingsHelp) + "\n" + kGridHelp);

    std::vector<const char*> argv;
    argv.push_back("supportsum");
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    CLI::App* active = nullptr;
    for (auto* sub : {summarize, rank, evaluate, compare, sweep}) {
        if (sub->parsed()) {
            active = sub;
        }
    }

    try {
        const Context ctx{out, err, default_seed_from_env()};
        if (active == summarize) {
            return cmd_summarize(ctx, summarize_flags.collect(), inputs, output_dir, background_dir, dump_matrix,
                                 dump_graph);
        }
        if (active == rank) {
            return cmd_rank(ctx, rank_flags.collect(), inputs, background_dir);
        }
        if (active == evaluate) {
            return cmd_evaluate(ctx, evaluate_flags.collect(), corpus_root, eval_output);
        }
        if (active == compare) {
            return cmd_compare(ctx, compare_flags.collect(), corpus_root, spec_a, spec_b);
        }
        if (active == sweep) {
            return cmd_sweep(ctx, sweep_flags.collect(), grid_path, corpus_root, sweep_output);
        }
        return kConfigError;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n\n";
        if (active != nullptr) {
            err << active->help();
        }
        return kConfigError;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const MissingReference& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const EmptySource& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const DegenerateReference& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
}

} // namespace supportsum::cli
