#include "cci/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cci/centrality.hpp"
#include "cci/errors.hpp"

namespace cci {

namespace fs = std::filesystem;

namespace {

std::string fixed(double v, int digits) {
    if (std::isnan(v))
        return "nan";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

Dataset load_from(const RunConfig& config, LoadReport* report = nullptr) {
    return load_dataset(config.ratings_path, config.social_path, config.scale,
                        config.social_directed, config.dataset_name(), report);
}

void ensure_out_dir(const RunConfig& config) {
    if (!config.out_dir.empty())
        fs::create_directories(config.out_dir);
}

std::string out_path(const RunConfig& config, const std::string& file) {
    return (fs::path(config.out_dir) / file).string();
}

} // namespace

std::string RunConfig::dataset_name() const {
    if (!name.empty())
        return name;
    if (!ratings_path.empty())
        return fs::path(ratings_path).stem().string();
    return "dataset";
}

void RunConfig::require_ratings() const {
    if (ratings_path.empty() || !fs::exists(ratings_path))
        throw IoError("ratings file not found: " +
                      (ratings_path.empty() ? "<unset>" : ratings_path));
}

void RunConfig::require_social() const {
    if (social_path.empty() || !fs::exists(social_path))
        throw IoError("social file not found: " +
                      (social_path.empty() ? "<unset>" : social_path));
}

int cmd_build(const RunConfig& config, std::ostream& out) {
    config.require_ratings();
    config.require_social();
    Dataset dataset = load_from(config);
    NetworkConfig net_config = config.network;
    net_config.threads = config.threads;
    TrustNetwork net = TrustNetwork::build(dataset, net_config);

    ensure_out_dir(config);
    {
        std::ofstream file(out_path(config, "network.tsv"));
        if (!file)
            throw IoError("cannot write network export");
        net.export_edges(file);
    }

    std::size_t num_users = dataset.all_users().size();
    std::size_t num_items = dataset.ratings.items().size();
    std::ostringstream stats;
    stats << "dataset " << dataset.name << "\n";
    stats << "users " << num_users << "\n";
    stats << "items " << num_items << "\n";
    stats << "ratings " << dataset.ratings.size() << "\n";
    if (num_users > 0 && num_items > 0)
        stats << "sparsity " << fixed(sparsity(dataset.ratings, num_users, num_items), 4)
              << "\n";
    stats << "social_edges " << dataset.social.num_edges() << "\n";
    stats << "network_nodes " << net.nodes().size() << "\n";
    stats << "network_edges " << net.num_edges() << "\n";
    // 8-bin weight histogram over [0, 4]
    std::size_t bins[8] = {};
    for (UserId u : net.nodes())
        for (const TrustEdge& e : net.out_edges(u)) {
            int b = std::min(7, static_cast<int>(e.weight / 0.5));
            ++bins[std::max(0, b)];
        }
    stats << "weight_histogram";
    for (std::size_t b : bins)
        stats << ' ' << b;
    stats << "\n";

    std::ofstream stats_file(out_path(config, "network_stats.txt"));
    stats_file << stats.str();
    out << stats.str();
    return kExitOk;
}

int cmd_predict(const RunConfig& config, UserId user, ItemId item, std::ostream& out) {
    config.require_ratings();
    config.require_social();
    Dataset dataset = load_from(config);
    NetworkConfig net_config = config.network;
    net_config.threads = config.threads;
    TrustNetwork net = TrustNetwork::build(dataset, net_config);

    if (!net.has_node(user))
        throw UnknownEntityError("unknown user " + std::to_string(user));
    if (dataset.ratings.raters_of(item).empty() && !dataset.ratings.get(user, item))
        throw UnknownEntityError("unknown item " + std::to_string(item));

    WalkConfig walk_config = config.walk;
    walk_config.seed = config.seed;
    std::vector<WalkOutcome> trace;
    PredictionResult result =
        predict(user, item, net, dataset.ratings, walk_config, nullptr, config.threads,
                config.trace ? &trace : nullptr);

    if (config.trace) {
        for (std::size_t i = 0; i < trace.size(); ++i) {
            out << i << ' ';
            for (std::size_t k = 0; k < trace[i].visited.size(); ++k)
                out << (k ? "," : "") << trace[i].visited[k];
            switch (trace[i].kind) {
            case WalkKind::rated:
                out << " rated=" << fixed(trace[i].rating, 4);
                break;
            case WalkKind::stopped:
                out << " stopped";
                break;
            case WalkKind::depth_exhausted:
                out << " depth_exhausted";
                break;
            }
            out << '\n';
        }
    }

    switch (result.kind) {
    case PredictionKind::known:
        out << "known " << fixed(result.value, 4) << " 0 0\n";
        return kExitOk;
    case PredictionKind::predicted:
        out << "predicted " << fixed(result.value, 4) << ' ' << result.walks_run << ' '
            << result.walks_rated << "\n";
        return kExitOk;
    case PredictionKind::fallback: {
        result.fallback_candidates =
            recommend_fallback(user, result.visited_union, dataset.ratings, config.rules);
        out << "fallback - " << result.walks_run << ' ' << result.walks_rated << "\n";
        for (const auto& rec : result.fallback_candidates)
            out << rec.item << ' ' << fixed(rec.score_evidence, 4) << ' ' << rec.overlap
                << ' ' << fixed(rec.lift, 4) << "\n";
        return kExitOk;
    }
    case PredictionKind::cannot_cover:
        out << "cannot_cover - " << result.walks_run << ' ' << result.walks_rated << "\n";
        return kExitCannotCover;
    }
    return kExitOk;
}

int cmd_evaluate(const RunConfig& config, double fraction, std::ostream& out) {
    config.require_ratings();
    config.require_social();
    Dataset dataset = load_from(config);
    NetworkConfig net_config = config.network;
    net_config.threads = config.threads;

    EvalConfig eval_config;
    eval_config.fraction = fraction;
    eval_config.seed = config.seed;
    eval_config.walk = config.walk;
    eval_config.walk.seed = config.seed;
    eval_config.rmse_max = config.scale.rmse_max;
    eval_config.threads = config.threads;
    eval_config.count_fallback_covered = config.fallback_covered;

    TrustNetwork net = TrustNetwork::build(dataset, net_config);

    auto engine_for = [&](const std::string& kind) -> Predictor {
        if (kind == "walker") {
            if (config.loo_rebuild)
                return make_rebuild_walker_engine(dataset, net_config, eval_config.walk);
            return make_walker_engine(net, dataset.social, eval_config.walk);
        }
        if (kind == "baseline")
            return make_baseline_engine(config.cf_neighbors);
        if (kind == "oracle") { // test hook: always predicts the true rating
            return [](const LooQuery& q) {
                PredictionResult r;
                r.kind = PredictionKind::predicted;
                r.value = q.actual;
                return r;
            };
        }
        throw DomainError("unknown engine: " + kind);
    };

    ensure_out_dir(config);
    std::ofstream report_file(out_path(config, "report.txt"));

    EvalReport report = loo_evaluate(dataset, eval_config, engine_for(config.engine));
    out << report_table(dataset.name, fraction, report);
    report_file << report_line(dataset.name, fraction, report);

    if (config.baseline && config.engine != "baseline") {
        EvalReport base = loo_evaluate(dataset, eval_config,
                                       make_baseline_engine(config.cf_neighbors));
        out << report_table(dataset.name + "-baseline", fraction, base);
        report_file << report_line(dataset.name + "-baseline", fraction, base);
    }
    return kExitOk;
}

int cmd_centrality(const RunConfig& config, std::ostream& out) {
    config.require_social();
    SocialGraph social = load_social(config.social_path, config.social_directed);

    std::ostringstream lines;
    for (const CentralityScore& s : compute_centrality(social))
        lines << s.node << ' ' << fixed(s.impact, 4) << ' ' << s.classic_hindex << "\n";

    ensure_out_dir(config);
    std::ofstream file(out_path(config, "centrality.txt"));
    file << lines.str();
    out << lines.str();
    return kExitOk;
}

int cmd_stats(const RunConfig& config, std::ostream& out) {
    config.require_ratings();
    config.require_social();
    LoadReport report;
    Dataset dataset = load_from(config, &report);

    std::size_t num_users = dataset.all_users().size();
    std::size_t num_items = dataset.ratings.items().size();
    out << "dataset " << dataset.name << "\n";
    out << "users " << num_users << "\n";
    out << "items " << num_items << "\n";
    out << "ratings " << dataset.ratings.size() << "\n";
    out << "duplicate_ratings " << report.duplicates << "\n";
    out << "self_loops_dropped " << report.self_loops << "\n";
    if (num_users > 0 && num_items > 0)
        out << "sparsity " << fixed(sparsity(dataset.ratings, num_users, num_items), 4)
            << "\n";
    out << "social_edges " << dataset.social.num_edges() << "\n";
    std::size_t max_degree = 0;
    for (UserId u : dataset.social.users())
        max_degree = std::max(max_degree, dataset.social.degree(u));
    out << "max_degree " << max_degree << "\n";
    return kExitOk;
}

int run_guarded(const std::function<int()>& body, std::ostream& err) {
    try {
        return body();
    } catch (const UnknownEntityError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUnknownEntity;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace cci
