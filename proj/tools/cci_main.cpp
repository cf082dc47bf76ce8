#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "cci/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"CCI-TrustWalker: trust-based rating prediction"};
    app.require_subcommand(1);
    app.set_config("--config", "", "line-oriented `key = value` config file");

    cci::RunConfig config;
    cci::UserId user = 0;
    cci::ItemId item = 0;
    double fraction = 1.0;

    app.add_option("--ratings", config.ratings_path, "ratings file (user item rating)");
    app.add_option("--social", config.social_path, "social file (user user [0|1])");
    app.add_option("--out", config.out_dir, "output directory")->capture_default_str();
    app.add_option("--name", config.name, "dataset name for reports");
    app.add_option("--scale-min", config.scale.min, "rating scale minimum")
        ->capture_default_str();
    app.add_option("--scale-max", config.scale.max, "rating scale maximum")
        ->capture_default_str();
    app.add_option("--scale-step", config.scale.step, "rating scale step (0 = continuous)")
        ->capture_default_str();
    app.add_option("--rmse-max", config.scale.rmse_max,
                   "maximum possible error for precision")
        ->capture_default_str();
    app.add_flag("--directed", config.social_directed, "keep social edges directed");
    app.add_option("--seed", config.seed, "run seed (fixed default for reproducibility)")
        ->capture_default_str();
    app.add_option("--threads", config.threads, "worker threads (same output for any N)")
        ->capture_default_str();
    app.add_flag("--raw-weights", config.network.raw_weights,
                 "skip min-max component normalization");
    app.add_option("--depth", config.walk.max_depth, "maximum walk depth")
        ->capture_default_str();
    app.add_option("--walks", config.walk.num_walks, "walks per prediction")
        ->capture_default_str();
    app.add_option("--max-walks", config.walk.max_walks, "hard cap on walks per prediction")
        ->capture_default_str();
    app.add_option("--epsilon", config.walk.convergence_epsilon,
                   "early-stop threshold on the running mean (0 disables)")
        ->capture_default_str();
    std::map<std::string, cci::BiasMode> bias_modes{
        {"directional", cci::BiasMode::directional},
        {"symmetric-cci", cci::BiasMode::symmetric_cci}};
    app.add_option("--bias-mode", config.walk.bias_mode, "step bias mode")
        ->transform(CLI::CheckedTransformer(bias_modes, CLI::ignore_case))
        ->default_str("symmetric-cci");
    app.add_option("--min-support", config.rules.min_support, "rule mining support floor")
        ->capture_default_str();
    app.add_option("--min-confidence", config.rules.min_confidence,
                   "rule mining confidence floor")
        ->capture_default_str();
    app.add_option("--top-k", config.rules.top_k, "fallback recommendations to keep")
        ->capture_default_str();
    app.add_option("--fraction", fraction, "evaluate: user split fraction in (0,1]")
        ->capture_default_str();
    app.add_flag("--baseline", config.baseline, "evaluate: also run the Pearson-CF baseline");
    app.add_option("--cf-k", config.cf_neighbors, "baseline neighborhood size")
        ->capture_default_str();
    app.add_option("--engine", config.engine, "evaluate: walker | baseline | oracle (test hook)")
        ->capture_default_str();
    app.add_flag("--loo-rebuild", config.loo_rebuild,
                 "evaluate: rebuild the network per query (slow verification path)");
    app.add_flag("--fallback-covered", config.fallback_covered,
                 "evaluate: count fallback outcomes as covered");
    app.add_flag("--trace", config.trace, "predict: emit one line per walk");

    CLI::App* build = app.add_subcommand("build", "build the trust network and export it");
    build->fallthrough();
    CLI::App* predict = app.add_subcommand("predict", "predict one (user, item) rating");
    predict->fallthrough();
    predict->add_option("user", user, "source user id")->required();
    predict->add_option("item", item, "target item id")->required();
    CLI::App* evaluate = app.add_subcommand("evaluate", "leave-one-out evaluation");
    evaluate->fallthrough();
    CLI::App* centrality = app.add_subcommand("centrality", "per-user impact factors");
    centrality->fallthrough();
    CLI::App* stats = app.add_subcommand("stats", "dataset statistics");
    stats->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e); // prints help/message; 0 for --help
        return rc == 0 ? 0 : cci::kExitUsage;
    }

    return cci::run_guarded(
        [&]() -> int {
            config.scale.validate();
            config.walk.seed = config.seed;
            if (build->parsed())
                return cci::cmd_build(config, std::cout);
            if (predict->parsed())
                return cci::cmd_predict(config, user, item, std::cout);
            if (evaluate->parsed())
                return cci::cmd_evaluate(config, fraction, std::cout);
            if (centrality->parsed())
                return cci::cmd_centrality(config, std::cout);
            return cci::cmd_stats(config, std::cout);
        },
        std::cerr);
}
