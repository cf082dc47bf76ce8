#pragma once

#include <iosfwd>
#include <string>

#include "cci/assoc_recommender.hpp"
#include "cci/evaluation.hpp"
#include "cci/trust_network.hpp"
#include "cci/walker.hpp"

namespace cci {

// process exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCannotCover = 2;
inline constexpr int kExitUnknownEntity = 3;
inline constexpr int kExitValidation = 4;

struct RunConfig {
    std::string ratings_path;
    std::string social_path;
    std::string out_dir = ".";
    std::string name; // defaults to the ratings file stem

    RatingScale scale;             // includes rmse_max
    bool social_directed = false;

    std::uint64_t seed = 42;
    int threads = 1;

    NetworkConfig network;
    WalkConfig walk;
    RuleConfig rules;

    double fraction = 1.0;
    bool baseline = false;           // evaluate: also run the CF baseline
    std::size_t cf_neighbors = 25;   // baseline neighborhood size
    std::string engine = "walker";   // walker | baseline | oracle (test hook)
    bool loo_rebuild = false;        // verification: rebuild network per query
    bool fallback_covered = false;
    bool trace = false;              // predict: emit per-walk lines

    std::string dataset_name() const;
    void require_ratings() const; // throws IoError when missing/unset
    void require_social() const;
};

/// Builds the trust network, writes `<out>/network.tsv` (sorted edge
/// export) and `<out>/network_stats.txt`, echoes the stats to `out`.
int cmd_build(const RunConfig& config, std::ostream& out);

/// Predicts one (user, item); on fallback appends the recommendation
/// lines. Exit 0 for predicted/fallback/known, 2 for cannot-cover.
int cmd_predict(const RunConfig& config, UserId user, ItemId item, std::ostream& out);

/// Leave-one-out evaluation at `fraction`; writes `<out>/report.txt`
/// (machine lines) and prints the aligned table.
int cmd_evaluate(const RunConfig& config, double fraction, std::ostream& out);

/// `<user> <impact> <classic_hindex>` per social-graph user, ascending;
/// also written to `<out>/centrality.txt`.
int cmd_centrality(const RunConfig& config, std::ostream& out);

/// Dataset-level statistics (counts, sparsity, degrees).
int cmd_stats(const RunConfig& config, std::ostream& out);

/// Maps thrown errors onto the exit-code contract, printing the message
/// to `err`.
int run_guarded(const std::function<int()>& body, std::ostream& err);

} // namespace cci
