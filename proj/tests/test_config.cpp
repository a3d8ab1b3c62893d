#include "supportsum/config.hpp"
#include "supportsum/errors.hpp"

#include <doctest.h>

#include <cstdlib>

using namespace supportsum;

TEST_CASE("defaults per model")
{
    const auto support = parse_run_config({});
    CHECK(support.model == Model::support_sets);
    CHECK(support.metric.name() == "manhattan");
    REQUIRE(support.strategy);
    CHECK(supportset::strategy_name(*support.strategy) == "knn:2");
    CHECK(support.budget.name() == "compression:0.25");
    CHECK(support.seed == 42);

    const auto lex = parse_run_config({{"model", "lexrank"}});
    CHECK(lex.metric.name() == "cosine");
    CHECK(lex.threshold == 0.1);
    CHECK_FALSE(lex.strategy);

    CHECK(parse_run_config({{"model", "textrank"}}).metric.name() == "content-overlap");
    CHECK(parse_run_config({{"model", "continuous-lexrank"}}).threshold == 0.0);
    CHECK(parse_run_config({}, 7).seed == 7);
    CHECK(parse_run_config({{"seed", "9"}}, 7).seed == 9);
}

TEST_CASE("settings are parsed and validated")
{
    const auto c = parse_run_config({{"model", "support-sets"},
                                     {"metric", "fractional:0.5"},
                                     {"strategy", "h1.1:0.5"},
                                     {"weighting", "binary"},
                                     {"idf", "yes"},
                                     {"budget", "words:50"},
                                     {"jobs", "4"}});
    CHECK(c.metric.name() == "fractional:0.5");
    CHECK(supportset::strategy_name(*c.strategy) == "h1.1:0.5");
    CHECK(c.weighting.name() == "binary+idf");
    CHECK(c.budget.name() == "words:50");
    CHECK(c.jobs == 4);

    CHECK(parse_run_config({{"budget", "reference"}}).budget_from_reference);
    CHECK(parse_run_config({{"model", "influx"}, {"influx-k", "3"}}).influx_k == 3u);
    CHECK_FALSE(parse_run_config({{"model", "influx"}, {"influx-k", "auto"}}).influx_k);

    CHECK_THROWS_AS(parse_run_config({{"nosuch", "1"}}), InvalidArgument);
    CHECK_THROWS_AS(parse_run_config({{"metric", "nosuch"}}), InvalidArgument);
    CHECK_THROWS_AS(parse_run_config({{"model", "nosuch"}}), InvalidArgument);
    CHECK_THROWS_AS(parse_run_config({{"strategy", "relative:0"}}), InvalidArgument);
    CHECK_THROWS_AS(parse_run_config({{"jobs", "0"}}), InvalidArgument);
    CHECK_THROWS_AS(parse_run_config({{"level", "1"}}), InvalidArgument);
    CHECK_THROWS_AS(parse_run_config({{"mixed-source", "maybe"}}), InvalidArgument);
    CHECK_THROWS_AS(parse_run_config({{"model", "lexrank"}, {"damping", "1.5"}}), InvalidArgument);
}

TEST_CASE("keys outside the chosen model are rejected")
{
    CHECK_THROWS_AS(parse_run_config({{"model", "lexrank"}, {"strategy", "knn:2"}}), InvalidArgument);
    CHECK_THROWS_AS(parse_run_config({{"damping", "0.2"}}), InvalidArgument);
    CHECK_THROWS_AS(parse_run_config({{"model", "position"}, {"metric", "cosine"}}), InvalidArgument);
    CHECK_THROWS_AS(parse_run_config({{"model", "lexrank"}, {"orientation", "backward"}}), InvalidArgument);
    CHECK_NOTHROW(parse_run_config({{"model", "textrank"}, {"orientation", "backward"}}));
    CHECK_NOTHROW(parse_run_config({{"model", "position"}, {"budget", "sentences:2"}}));
}

TEST_CASE("system names")
{
    CHECK(parse_run_config({}).system_name() ==
          "support-sets budget=compression:0.25 metric=manhattan strategy=knn:2 weighting=tf");
    CHECK(parse_run_config({{"mixed-source", "true"}}).system_name().find("mixed-source=true") !=
          std::string::npos);
    const auto a = parse_run_config({{"model", "lexrank"}, {"tolerance", "1e-9"}});
    const auto b = parse_run_config({{"model", "lexrank"}});
    CHECK(a.system_name() == b.system_name());
    CHECK(parse_run_config({{"model", "lexrank"}, {"threshold", "0.2"}}).system_name() != b.system_name());
}

TEST_CASE("key-value files")
{
    const auto kv = parse_key_values("# settings\n[run]\nmodel = lexrank\n"
                                     "metric=cosine   # trailing\n"
                                     "delimiters = \".#!\"\n\n");
    CHECK(kv.size() == 3);
    CHECK(kv.at("model") == "lexrank");
    CHECK(kv.at("metric") == "cosine");
    CHECK(kv.at("delimiters") == ".#!");
    CHECK_THROWS_AS(parse_key_values("no equals sign\n"), InvalidArgument);

    const auto inline_kv = parse_inline_key_values("model=degree; threshold = 0.3;");
    CHECK(inline_kv.size() == 2);
    CHECK(inline_kv.at("threshold") == "0.3");
    CHECK(parse_inline_key_values("").empty());
}

TEST_CASE("grid expansion")
{
    const auto grid = expand_grid("budget = sentences:2\n"
                                  "[support]\n"
                                  "metric = manhattan cosine\n"
                                  "strategy = [\"knn:1\", \"radius:0.5\"]\n");
    REQUIRE(grid.size() == 4);
    CHECK(grid[0].at("metric") == "manhattan");
    CHECK(grid[0].at("strategy") == "knn:1");
    CHECK(grid[1].at("metric") == "manhattan");
    CHECK(grid[1].at("strategy") == "radius:0.5");
    CHECK(grid[2].at("metric") == "cosine");
    for (const auto& row : grid) {
        CHECK(row.at("budget") == "sentences:2");
    }

    CHECK(expand_grid("").empty());
    CHECK(expand_grid("# nothing\n\n").empty());
    CHECK(expand_grid("model = degree lexrank\n").size() == 2);

    const auto two = expand_grid("budget = sentences:1 sentences:2\n"
                                 "[a]\nmodel = position\n"
                                 "[b]\nmodel = degree\nbudget = words:10\n");
    REQUIRE(two.size() == 3);
    CHECK(two[0].at("model") == "position");
    CHECK(two[1].at("budget") == "sentences:2");
    CHECK(two[2].at("budget") == "words:10");
    CHECK_THROWS_AS(expand_grid("metric =\n"), InvalidArgument);
    CHECK_THROWS_AS(expand_grid("metric = \"open\n"), InvalidArgument);
}

TEST_CASE("seed from the environment")
{
    ::unsetenv("SUPPORTSUM_SEED");
    CHECK(default_seed_from_env() == 42);
    ::setenv("SUPPORTSUM_SEED", "1234", 1);
    CHECK(default_seed_from_env() == 1234);
    ::setenv("SUPPORTSUM_SEED", "x", 1);
    CHECK_THROWS_AS(default_seed_from_env(), InvalidArgument);
    ::unsetenv("SUPPORTSUM_SEED");
}
