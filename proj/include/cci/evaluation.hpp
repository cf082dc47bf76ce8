#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "cci/dataset.hpp"
#include "cci/walker.hpp"

namespace cci {

double mae(std::span<const double> actual, std::span<const double> predicted);
double rmse(std::span<const double> actual, std::span<const double> predicted);

/// 1 - rmse / rmse_max. Values above rmse_max yield negative precision,
/// reported as-is.
double precision_from_rmse(double rmse_value, double rmse_max);

/// Harmonic mean 2PC/(P+C) of precision and FRACTIONAL coverage.
/// Equal inputs short-circuit to the input itself, which keeps
/// f(P, P) == P exact in floating point and covers the both-zero case.
double f_measure(double precision, double coverage_fraction);

double coverage_pct(std::size_t n_covered, std::size_t n_tested);

struct EvalConfig {
    double fraction = 1.0; // user split; typically 0.25/0.5/0.75/1.0
    std::uint64_t seed = 42;
    WalkConfig walk;
    double rmse_max = 4.0;
    int threads = 1;
    bool count_fallback_covered = false; // Coverage counts scores only by default
};

struct EvalReport {
    std::size_t n_tested = 0;
    std::size_t n_predicted = 0;
    std::size_t n_fallback = 0;
    std::size_t n_cannot_cover = 0;
    double mae = 0;
    double rmse = 0;
    double coverage = 0;  // percent
    double precision = 0;
    double f_measure = 0;
    std::size_t hygiene_violations = 0; // masked-view leak count; must be 0
};

/// What an engine sees for one held-out query. `view` hides the held-out
/// rating; engines must read ratings exclusively through it. `actual` is
/// harness-side bookkeeping (used by the perfect-oracle test engine).
struct LooQuery {
    UserId user;
    ItemId item;
    double actual;
    const MaskedRatingView& view;
};

using Predictor = std::function<PredictionResult(const LooQuery&)>;

/// Leave-one-out: samples `fraction` of the rating users uniformly under
/// the seed, hides each of their ratings in turn, and asks the engine to
/// predict it. Predicted outcomes feed MAE/RMSE; fallback and
/// cannot-cover count as uncovered (fallback optionally covered via
/// config). Queries run in parallel; accumulation is in query order, so
/// reports are identical for any thread count. With no predictions MAE,
/// RMSE and precision are NaN and the f-measure is 0.
EvalReport loo_evaluate(const Dataset& dataset, const EvalConfig& config,
                        const Predictor& engine);

/// User-based CF baseline: mean-offset average over the top-k
/// positively-correlated raters of the item. nullopt when no rater
/// qualifies or the source has no visible ratings.
std::optional<double> baseline_cf_pearson(UserId source, ItemId item,
                                          const RatingView& ratings, std::size_t k);

/// Engine adapters for loo_evaluate.
Predictor make_walker_engine(const TrustNetwork& net, const SocialGraph& social,
                             const WalkConfig& walk_config);
/// Verification engine: rebuilds the trust network from a copy of the
/// dataset with the held-out rating physically removed. Slow; used to
/// validate the overlay patch.
Predictor make_rebuild_walker_engine(const Dataset& dataset, const NetworkConfig& net_config,
                                     const WalkConfig& walk_config);
Predictor make_baseline_engine(std::size_t k);

/// `<dataset> <fraction> <n_tested> <n_predicted> <mae> <rmse> <coverage>
/// <precision> <f_measure>`, 4-decimal floats, NaN rendered as "nan".
std::string report_line(const std::string& dataset, double fraction, const EvalReport& r);
/// Human-readable aligned block of the same numbers.
std::string report_table(const std::string& dataset, double fraction, const EvalReport& r);

} // namespace cci
