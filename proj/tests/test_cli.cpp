#include "supportsum/cli.hpp"
#include "supportsum/eval.hpp"

#include "support/temp_dir.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <sstream>

namespace fs = std::filesystem;
using supportsum::cli::run;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result invoke(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Eight documents whose opening line never appears in the reference, so a
// lead baseline and a centrality model disagree on most of them.
void write_corpus(const TempDir& dir)
{
    const std::vector<std::string> topics = {"river", "market", "engine", "forest",
                                             "harbor", "school", "garden", "bridge"};
    for (std::size_t i = 0; i < topics.size(); ++i) {
        const auto& t = topics[i];
        const auto id = "doc" + std::to_string(i);
        std::string doc = "unrelated opening words number " + std::to_string(i) + "\n";
        doc += "the " + t + " was busy today\n";
        doc += "people came to the " + t + " today\n";
        doc += "the busy " + t + " saw people\n";
        for (std::size_t extra = 0; extra < i % 3; ++extra) {
            doc += "a note on weather " + std::to_string(extra) + "\n";
        }
        dir.write("docs/" + id + ".txt", doc);
        dir.write("refs/" + id + ".a.txt", "people found the " + t + " busy today");
    }
}

} // namespace

TEST_CASE("summarize writes extracts")
{
    TempDir dir;
    const auto input = dir.write("in/story.txt", "cats chase mice\ndogs chase cats\nbirds sing\nmice fear cats\n");
    const auto outdir = dir.path() / "out";
    const auto r = invoke({"summarize", input.string(), "-o", outdir.string(), "--budget", "sentences:2",
                           "--dump-matrix"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("story.summary.txt") != std::string::npos);
    const auto text = slurp(outdir / "story.summary.txt");
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    const auto j = nlohmann::json::parse(slurp(outdir / "story.summary.json"));
    CHECK(j["indices"].size() == 2);
    CHECK(fs::exists(outdir / "story.matrix.json"));
    CHECK_FALSE(fs::exists(outdir / "story.graph.json"));

    const auto g = invoke({"summarize", input.string(), "-o", outdir.string(), "--model", "lexrank",
                           "--dump-graph"});
    REQUIRE(g.code == 0);
    CHECK(nlohmann::json::parse(slurp(outdir / "story.graph.json")).is_object());
}

TEST_CASE("configuration errors exit with 2")
{
    TempDir dir;
    const auto input = dir.write("a.txt", "one line\nanother line\n");
    const auto bad = invoke({"rank", input.string(), "--metric", "nosuch"});
    CHECK(bad.code == supportsum::cli::kConfigError);
    CHECK(bad.err.find("nosuch") != std::string::npos);
    CHECK(bad.err.find("Usage") != std::string::npos);

    CHECK(invoke({"summarize", input.string(), "-o", dir.path().string(), "--mixed-source"}).code == 2);
    CHECK(invoke({"rank", input.string(), "--model", "lexrank", "--strategy", "knn:1"}).code == 2);
    CHECK(invoke({"rank", input.string(), "--no-such-flag"}).code == 2);
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("missing inputs exit with 3")
{
    TempDir dir;
    dir.write("docs/x.txt", "a b\nc d\n");
    const auto r = invoke({"evaluate", dir.path().string()});
    CHECK(r.code == supportsum::cli::kIoError);
    CHECK(r.err.find("x") != std::string::npos);
    CHECK(invoke({"evaluate", (dir.path() / "nowhere").string()}).code == 3);
}

TEST_CASE("rank prints one JSON entry per document")
{
    TempDir dir;
    const auto a = dir.write("a.txt", "red green\ngreen blue\nblue red\n");
    const auto b = dir.write("b.txt", "x y\ny z\n");
    const auto r = invoke({"rank", a.string(), b.string(), "--model", "textrank"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.size() == 2);
    CHECK(j[0]["doc_id"] == "a");
    CHECK(j[0]["ranking"].size() == 3);
    CHECK(j[1]["ranking"].size() == 2);
}

TEST_CASE("mixed-source summaries read the background directory")
{
    TempDir dir;
    const auto input = dir.write("doc.txt", "alpha beta\ngamma delta\nalpha gamma\n");
    dir.write("bg/one.txt", "alpha beta gamma\n");
    const auto r = invoke({"rank", input.string(), "--mixed-source", "--background", (dir.path() / "bg").string(),
                           "--strategy", "knn:1"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)[0]["ranking"].size() == 3);
    CHECK(invoke({"rank", input.string(), "--background", (dir.path() / "bg").string()}).code == 2);
}

TEST_CASE("summaries equal to the references score 1")
{
    TempDir dir;
    for (int i = 0; i < 3; ++i) {
        const auto text = "line one of " + std::to_string(i) + "\nline two\n";
        dir.write("docs/d" + std::to_string(i) + ".txt", text);
        dir.write("refs/d" + std::to_string(i) + ".1.txt", text);
    }
    const auto r = invoke({"evaluate", dir.path().string(), "--budget", "sentences:5"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["mean"] == 1.0);
    CHECK(j["ci"]["low"] == 1.0);
    CHECK(j["ci"]["high"] == 1.0);
}

TEST_CASE("evaluation is reproducible")
{
    TempDir dir;
    write_corpus(dir);
    const std::vector<std::string> args = {"evaluate", dir.path().string(), "--budget", "sentences:1", "--seed", "5"};
    const auto first = invoke(args);
    REQUIRE(first.code == 0);
    CHECK(invoke(args).out == first.out);
    auto parallel = args;
    parallel.insert(parallel.end(), {"--jobs", "4"});
    CHECK(invoke(parallel).out == first.out);

    const auto outdir = dir.path() / "report";
    auto written = args;
    written.insert(written.end(), {"-o", outdir.string()});
    REQUIRE(invoke(written).code == 0);
    CHECK(slurp(outdir / "report.json") == first.out);
    CHECK(slurp(outdir / "report.tsv").rfind("system\tmean\tci_low\tci_high\n", 0) == 0);

    ::setenv("SUPPORTSUM_SEED", "5", 1);
    const auto from_env = invoke({"evaluate", dir.path().string(), "--budget", "sentences:1"});
    ::unsetenv("SUPPORTSUM_SEED");
    CHECK(from_env.out == first.out);
}

TEST_CASE("compare reports the paired test")
{
    TempDir dir;
    write_corpus(dir);
    const auto root = dir.path().string();
    const auto a_file = dir.write("a.conf", "model = support-sets\nstrategy = knn:1\n");
    const auto r = invoke({"compare", root, "--budget", "sentences:1", "--system-a", a_file.string(),
                           "--system-b", "model=position"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["documents"] == 8);
    REQUIRE(j["wilcoxon"].is_object());

    auto recalls = [&](const std::vector<std::string>& extra) {
        std::vector<std::string> args = {"evaluate", root, "--budget", "sentences:1"};
        args.insert(args.end(), extra.begin(), extra.end());
        const auto report = nlohmann::json::parse(invoke(args).out);
        std::vector<double> out;
        for (const auto& [id, score] : report["per_doc"].items()) {
            out.push_back(score["recall"].get<double>());
        }
        return out;
    };
    const auto a = recalls({"--strategy", "knn:1"});
    const auto b = recalls({"--model", "position"});
    const auto w = supportsum::eval::wilcoxon_signed_rank(a, b);
    CHECK(j["wilcoxon"]["W"] == w.statistic);
    CHECK(j["wilcoxon"]["p_value"] == w.p_value);
    CHECK(j["a"]["mean"] == supportsum::eval::mean(a));

    const auto same = invoke({"compare", root, "--system-a", "model=position", "--system-b", "model=position"});
    CHECK(same.code == 0);
    CHECK(nlohmann::json::parse(same.out)["wilcoxon"].is_null());
}

TEST_CASE("sweep ranks every grid row")
{
    TempDir dir;
    write_corpus(dir);
    const auto grid = dir.write("grid.txt", "budget = sentences:1\n[s]\nmetric = manhattan cosine\n"
                                            "strategy = knn:1 knn:2\n");
    const auto r = invoke({"sweep", grid.string(), dir.path().string()});
    REQUIRE(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);
    CHECK(r.out.rfind("system\tmean\tci_low\tci_high\n", 0) == 0);

    const auto empty = dir.write("empty.txt", "# nothing to run\n");
    const auto e = invoke({"sweep", empty.string(), dir.path().string()});
    CHECK(e.code == 0);
    CHECK(e.out == "system\tmean\tci_low\tci_high\n");

    // Thresholded degree and radius support sets count the same neighbours.
    const auto pair = dir.write("pair.txt", "budget = sentences:1\nmetric = cosine\n"
                                            "[a]\nmodel = degree\nthreshold = 0.5\n"
                                            "[b]\nmodel = support-sets\nstrategy = radius:0.5\n");
    const auto p = invoke({"sweep", pair.string(), dir.path().string(), "-o", (dir.path() / "board.tsv").string()});
    REQUIRE(p.code == 0);
    CHECK(slurp(dir.path() / "board.tsv") == p.out);
    std::istringstream lines(p.out);
    std::string header, first, second;
    std::getline(lines, header);
    std::getline(lines, first);
    std::getline(lines, second);
    auto stats = [](const std::string& row) { return row.substr(row.find('\t')); };
    CHECK(stats(first) == stats(second));
}
