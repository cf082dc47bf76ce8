#include "cci/walker.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "cci/errors.hpp"
#include "cci/similarity.hpp"

namespace cci {

void WalkConfig::validate() const {
    if (max_depth < 1)
        throw DomainError("walk config: max_depth must be >= 1");
    if (num_walks < 1 || num_walks > max_walks)
        throw DomainError("walk config: need 1 <= num_walks <= max_walks");
    if (convergence_epsilon < 0)
        throw DomainError("walk config: convergence_epsilon must be >= 0");
    if (stop_scale < 0)
        throw DomainError("walk config: stop_scale must be >= 0");
}

double stop_probability(double edge_weight_scaled, int k) {
    double sigmoid = 1.0 / (1.0 + std::exp(-static_cast<double>(k)));
    double p = edge_weight_scaled * sigmoid;
    return p < 0 ? 0.0 : (p > 1 ? 1.0 : p);
}

namespace {

constexpr double kMaxWeight = 4.0; // 2*1 + 1 + 1 with normalized components

double weight_scaled(double w) {
    double s = w / kMaxWeight;
    return s < 0 ? 0.0 : (s > 1 ? 1.0 : s);
}

/// Unnormalized per-neighbor scores into `scores`; returns their total.
double neighbor_scores(UserId u, const NetView& view, BiasMode mode,
                       std::span<const TrustEdge> edges, std::vector<double>& scores) {
    scores.clear();
    scores.reserve(edges.size());
    double total = 0;
    if (mode == BiasMode::directional) {
        for (const TrustEdge& e : edges) {
            scores.push_back(e.weight);
            total += e.weight;
        }
    } else {
        double sum_u = view.out_weight_sum(u);
        for (const TrustEdge& e : edges) {
            double s = sum_u > 0 ? e.weight / sum_u : 0.0;
            double sum_v = view.out_weight_sum(e.to);
            if (sum_v > 0)
                s += view.weight(e.to, u) / sum_v;
            scores.push_back(s);
            total += s;
        }
    }
    return total;
}

} // namespace

std::vector<std::pair<UserId, double>> step_distribution(UserId u, const NetView& view,
                                                         BiasMode mode) {
    auto edges = view.out_edges(u);
    std::vector<std::pair<UserId, double>> dist;
    if (edges.empty())
        return dist;
    std::vector<double> scores;
    double total = neighbor_scores(u, view, mode, edges, scores);
    if (!(total > 0))
        return dist;
    dist.reserve(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i)
        dist.emplace_back(edges[i].to, scores[i] / total);
    return dist;
}

std::vector<std::pair<UserId, double>> step_distribution(UserId u, const TrustNetwork& net,
                                                         BiasMode mode) {
    return step_distribution(u, NetView{&net, nullptr}, mode);
}

bool PearsonSignCache::positive(UserId v) {
    auto it = memo_.find(v);
    if (it != memo_.end())
        return it->second;
    auto p = pearson(source_, v, ratings_);
    bool pos = p.has_value() && *p > 0;
    memo_.emplace(v, pos);
    return pos;
}

namespace {

WalkOutcome walk_impl(UserId source, ItemId item, const NetView& view,
                      const RatingView& ratings, const WalkConfig& config, Rng& rng,
                      PearsonSignCache& pearson_cache, std::vector<double>& scores) {
    WalkOutcome outcome;
    outcome.visited.push_back(source);

    UserId u = source;
    double arrived_scaled = 0; // no arriving edge at the source
    int k = 0;
    while (true) {
        if (u != source) {
            if (!outcome.positive_pearson_seen && pearson_cache.positive(u))
                outcome.positive_pearson_seen = true;
            if (auto r = ratings.get(u, item)) {
                outcome.kind = WalkKind::rated;
                outcome.rating = *r;
                return outcome;
            }
        }
        if (k == config.max_depth) {
            outcome.kind = WalkKind::depth_exhausted;
            return outcome;
        }
        double p_stop = stop_probability(arrived_scaled, k) * config.stop_scale;
        if (p_stop > 0 && rng.next_double() < p_stop) {
            outcome.kind = WalkKind::stopped;
            return outcome;
        }
        auto edges = view.out_edges(u);
        double total = edges.empty() ? 0.0
                                     : neighbor_scores(u, view, config.bias_mode, edges, scores);
        if (!(total > 0)) { // sink
            outcome.kind = WalkKind::depth_exhausted;
            return outcome;
        }
        double x = rng.next_double() * total;
        std::size_t pick = edges.size() - 1;
        double acc = 0;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            acc += scores[i];
            if (x < acc) {
                pick = i;
                break;
            }
        }
        arrived_scaled = weight_scaled(edges[pick].weight);
        u = edges[pick].to;
        ++k;
        outcome.visited.push_back(u);
    }
}

} // namespace

WalkOutcome single_walk(UserId source, ItemId item, const NetView& view,
                        const RatingView& ratings, const WalkConfig& config, Rng& rng,
                        PearsonSignCache& pearson_cache) {
    std::vector<double> scores;
    return walk_impl(source, item, view, ratings, config, rng, pearson_cache, scores);
}

WalkOutcome single_walk(UserId source, ItemId item, const TrustNetwork& net,
                        const RatingView& ratings, const WalkConfig& config, Rng& rng) {
    PearsonSignCache cache(source, ratings);
    return single_walk(source, item, NetView{&net, nullptr}, ratings, config, rng, cache);
}

PredictionResult predict(UserId source, ItemId item, const TrustNetwork& net,
                         const RatingView& ratings, const WalkConfig& config,
                         const EdgePatch* patch, int threads,
                         std::vector<WalkOutcome>* trace) {
    config.validate();
    if (!net.has_node(source))
        throw UnknownEntityError("predict: unknown user " + std::to_string(source));

    PredictionResult result;
    if (auto known = ratings.get(source, item)) {
        result.kind = PredictionKind::known;
        result.value = *known;
        return result;
    }

    NetView view{&net, patch};
    const int batch = 100;
    threads = std::max(1, threads);

    std::vector<WalkOutcome> outcomes(static_cast<std::size_t>(config.num_walks));
    std::size_t done = 0;
    std::size_t rated_count = 0;
    double rated_sum = 0;
    bool any_positive = false;
    double prev_mean = 0;
    bool prev_mean_valid = false;

    while (done < outcomes.size()) {
        std::size_t end = std::min(outcomes.size(), done + batch);
        auto run_range = [&](std::size_t b, std::size_t e) {
            PearsonSignCache cache(source, ratings);
            std::vector<double> scores;
            for (std::size_t i = b; i < e; ++i) {
                Rng rng = Rng::stream(config.seed, i);
                outcomes[i] =
                    walk_impl(source, item, view, ratings, config, rng, cache, scores);
            }
        };
        if (threads == 1 || end - done < 8) {
            run_range(done, end);
        } else {
            std::vector<std::thread> pool;
            std::size_t chunk = (end - done + threads - 1) / threads;
            for (int t = 0; t < threads; ++t) {
                std::size_t b = std::min(end, done + t * chunk);
                std::size_t e = std::min(end, b + chunk);
                if (b < e)
                    pool.emplace_back(run_range, b, e);
            }
            for (auto& th : pool)
                th.join();
        }
        // reduce in walk-index order
        for (std::size_t i = done; i < end; ++i) {
            const WalkOutcome& o = outcomes[i];
            if (o.kind == WalkKind::rated) {
                ++rated_count;
                rated_sum += o.rating;
            }
            if (o.positive_pearson_seen)
                any_positive = true;
        }
        done = end;

        if (config.convergence_epsilon > 0 && rated_count > 0) {
            double mean = rated_sum / static_cast<double>(rated_count);
            if (prev_mean_valid && rated_count >= 200 &&
                std::fabs(mean - prev_mean) < config.convergence_epsilon)
                break;
            prev_mean = mean;
            prev_mean_valid = true;
        }
    }

    result.walks_run = done;
    result.walks_rated = rated_count;
    {
        std::vector<UserId> uni;
        for (std::size_t i = 0; i < done; ++i)
            for (UserId v : outcomes[i].visited)
                if (v != source)
                    uni.push_back(v);
        std::sort(uni.begin(), uni.end());
        uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
        result.visited_union = std::move(uni);
    }
    if (trace) {
        outcomes.resize(done);
        *trace = std::move(outcomes);
    }

    if (rated_count > 0) {
        result.kind = PredictionKind::predicted;
        result.value = ratings.scale().clamp(rated_sum / static_cast<double>(rated_count));
    } else if (any_positive) {
        result.kind = PredictionKind::fallback;
    } else {
        result.kind = PredictionKind::cannot_cover;
    }
    return result;
}

} // namespace cci
