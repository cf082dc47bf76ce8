#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "cci/assoc_recommender.hpp"
#include "cci/rng.hpp"
#include "cci/trust_network.hpp"

namespace cci {

enum class BiasMode : std::uint8_t {
    directional,   // P(v) = W_uv / sum of u's out-weights
    symmetric_cci, // symmetrized forward+reverse normalized scores
};

struct WalkConfig {
    int max_depth = 6;
    int num_walks = 1000;
    double convergence_epsilon = 0.001; // 0 disables early stop
    int max_walks = 10000;
    std::uint64_t seed = 42;
    BiasMode bias_mode = BiasMode::symmetric_cci;
    double stop_scale = 1.0; // diagnostic multiplier on the stop probability

    void validate() const;
};

enum class WalkKind : std::uint8_t { rated, stopped, depth_exhausted };

struct WalkOutcome {
    WalkKind kind = WalkKind::depth_exhausted;
    double rating = 0;            // valid iff kind == rated
    std::vector<UserId> visited;  // in visit order, starts with the source
    bool positive_pearson_seen = false;
};

enum class PredictionKind : std::uint8_t { predicted, fallback, cannot_cover, known };

struct PredictionResult {
    PredictionKind kind = PredictionKind::cannot_cover;
    double value = 0; // valid iff predicted or known
    std::size_t walks_run = 0;
    std::size_t walks_rated = 0;
    std::vector<UserId> visited_union; // sorted, source excluded
    std::vector<FallbackRecommendation> fallback_candidates; // filled by the pipeline
};

/// Probability of stopping at the current node: the arriving edge weight
/// scaled to [0, 1] times the logistic curve of the step count, clamped.
double stop_probability(double edge_weight_scaled, int k);

/// Step distribution over u's neighbors (pairs sorted by neighbor id).
/// Empty result = sink: no out-edges or all scores zero.
std::vector<std::pair<UserId, double>> step_distribution(UserId u, const NetView& view,
                                                         BiasMode mode);
std::vector<std::pair<UserId, double>> step_distribution(UserId u, const TrustNetwork& net,
                                                         BiasMode mode);

/// Memoized pearson(source, v) > 0 checks for one prediction query.
/// Not thread safe; parallel walk batches use one per worker.
class PearsonSignCache {
public:
    PearsonSignCache(UserId source, const RatingView& ratings)
        : source_(source), ratings_(ratings) {}
    bool positive(UserId v);

private:
    UserId source_;
    const RatingView& ratings_;
    std::unordered_map<UserId, bool> memo_;
};

WalkOutcome single_walk(UserId source, ItemId item, const NetView& view,
                        const RatingView& ratings, const WalkConfig& config, Rng& rng,
                        PearsonSignCache& pearson_cache);
WalkOutcome single_walk(UserId source, ItemId item, const TrustNetwork& net,
                        const RatingView& ratings, const WalkConfig& config, Rng& rng);

/// Runs up to num_walks independent walks (per-walk rng streams derived
/// from the seed and walk index) and aggregates:
///   - any rated outcome  -> predicted, mean rating clamped to scale
///   - else positive pearson seen on some walk -> fallback (mode B)
///   - else -> cannot_cover (mode A)
/// If the source already rated the item the stored rating is returned as
/// `known` without walking. Early stop: at 100-walk boundaries, once at
/// least 200 rated outcomes exist, if the running mean moved less than
/// convergence_epsilon over the last 100 walks. The check runs at fixed
/// boundaries so the thread count cannot change the decision.
/// Throws UnknownEntityError when the source is not a network node.
PredictionResult predict(UserId source, ItemId item, const TrustNetwork& net,
                         const RatingView& ratings, const WalkConfig& config,
                         const EdgePatch* patch = nullptr, int threads = 1,
                         std::vector<WalkOutcome>* trace = nullptr);

} // namespace cci
