#pragma once

// Shared test machinery: independent oracles and data generators. The
// oracles deliberately reimplement the math from the definitions instead
// of calling the library paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unistd.h>
#include <vector>

#include "cci/dataset.hpp"
#include "cci/rng.hpp"
#include "cci/trust_network.hpp"
#include "cci/walker.hpp"

namespace testutil {

// ---------------------------------------------------------------------------
// files

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("cci_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }
    std::string dir() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

inline std::string write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
    return path;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

// ---------------------------------------------------------------------------
// independent pearson (naive two-pass, for cross-checking the library)

inline std::optional<double> brute_pearson(const std::vector<std::pair<double, double>>& xy) {
    if (xy.size() < 2)
        return std::nullopt;
    double ma = 0, mb = 0;
    for (auto& [a, b] : xy) {
        ma += a;
        mb += b;
    }
    ma /= xy.size();
    mb /= xy.size();
    double num = 0, na = 0, nb = 0;
    for (auto& [a, b] : xy) {
        num += (a - ma) * (b - mb);
        na += (a - ma) * (a - ma);
        nb += (b - mb) * (b - mb);
    }
    if (na == 0 || nb == 0)
        return std::nullopt;
    return num / (std::sqrt(na) * std::sqrt(nb));
}

// ---------------------------------------------------------------------------
// exhaustive association-rule oracle

struct BruteRule {
    std::vector<cci::ItemId> antecedent;
    std::vector<cci::ItemId> consequent;
    double support;
    double confidence;
    double lift;
};

/// Enumerates every (A, B) partition of every subset of the item
/// universe; keeps rules meeting the thresholds. Usable up to ~8 items.
inline std::vector<BruteRule> brute_mine(const std::vector<std::vector<cci::ItemId>>& raw,
                                         double min_support, double min_confidence) {
    std::vector<std::set<cci::ItemId>> transactions;
    std::set<cci::ItemId> universe;
    for (const auto& t : raw) {
        transactions.emplace_back(t.begin(), t.end());
        universe.insert(t.begin(), t.end());
    }
    std::vector<cci::ItemId> items(universe.begin(), universe.end());
    const double n = static_cast<double>(transactions.size());

    auto count = [&](const std::vector<cci::ItemId>& set) {
        std::size_t c = 0;
        for (const auto& t : transactions) {
            bool all = true;
            for (cci::ItemId i : set)
                if (!t.count(i)) {
                    all = false;
                    break;
                }
            if (all)
                ++c;
        }
        return c;
    };

    std::vector<BruteRule> rules;
    const std::uint32_t full = 1u << items.size();
    for (std::uint32_t set_mask = 1; set_mask < full; ++set_mask) {
        std::vector<cci::ItemId> set;
        for (std::size_t k = 0; k < items.size(); ++k)
            if (set_mask & (1u << k))
                set.push_back(items[k]);
        if (set.size() < 2)
            continue;
        std::size_t c_set = count(set);
        if (c_set == 0 || static_cast<double>(c_set) / n < min_support)
            continue;
        double supp = static_cast<double>(c_set) / n;
        const std::uint32_t m = static_cast<std::uint32_t>(set.size());
        for (std::uint32_t ante = 1; ante + 1 < (1u << m); ++ante) {
            BruteRule rule;
            for (std::uint32_t k = 0; k < m; ++k) {
                if (ante & (1u << k))
                    rule.antecedent.push_back(set[k]);
                else
                    rule.consequent.push_back(set[k]);
            }
            double supp_a = static_cast<double>(count(rule.antecedent)) / n;
            double conf = supp / supp_a;
            if (conf < min_confidence)
                continue;
            double supp_c = static_cast<double>(count(rule.consequent)) / n;
            rule.support = supp;
            rule.confidence = conf;
            rule.lift = conf / supp_c;
            rules.push_back(std::move(rule));
        }
    }
    std::sort(rules.begin(), rules.end(), [](const BruteRule& a, const BruteRule& b) {
        if (a.antecedent != b.antecedent)
            return a.antecedent < b.antecedent;
        return a.consequent < b.consequent;
    });
    return rules;
}

// ---------------------------------------------------------------------------
// absorbing-chain oracle for the walk process

struct WalkExpectation {
    double p_rated = 0;      // probability a walk returns a rating
    double expectation = 0;  // E[rating | rated]
    double p_stopped = 0;
    double p_exhausted = 0;
};

/// Exact forward propagation over states (node, step, arriving weight).
/// Transition scores and stop probabilities are recomputed here from the
/// raw edge weights; only the weights themselves come from the network.
inline WalkExpectation walk_expectation(const cci::TrustNetwork& net, cci::UserId source,
                                        const std::map<cci::UserId, double>& item_ratings,
                                        const cci::WalkConfig& config) {
    using State = std::pair<cci::UserId, double>; // node, arriving weight
    std::map<State, double> mass{{{source, 0.0}, 1.0}};

    auto out_sum = [&](cci::UserId u) {
        double s = 0;
        for (const auto& e : net.out_edges(u))
            s += e.weight;
        return s;
    };

    WalkExpectation result;
    double e_sum = 0;
    for (int k = 0; k <= config.max_depth && !mass.empty(); ++k) {
        std::map<State, double> next;
        for (const auto& [state, m] : mass) {
            auto [u, w_in] = state;
            if (u != source) {
                auto it = item_ratings.find(u);
                if (it != item_ratings.end()) {
                    result.p_rated += m;
                    e_sum += m * it->second;
                    continue;
                }
            }
            if (k == config.max_depth) {
                result.p_exhausted += m;
                continue;
            }
            double w_scaled = std::clamp(w_in / 4.0, 0.0, 1.0);
            double sigmoid = 1.0 / (1.0 + std::exp(-static_cast<double>(k)));
            double p_stop =
                std::min(1.0, std::clamp(w_scaled * sigmoid, 0.0, 1.0) * config.stop_scale);
            result.p_stopped += m * p_stop;
            double rest = m * (1.0 - p_stop);
            if (rest <= 0)
                continue;

            auto edges = net.out_edges(u);
            std::vector<double> scores;
            double total = 0;
            for (const auto& e : edges) {
                double s;
                if (config.bias_mode == cci::BiasMode::directional) {
                    s = e.weight;
                } else {
                    double su = out_sum(u);
                    double sv = out_sum(e.to);
                    s = (su > 0 ? e.weight / su : 0.0);
                    if (sv > 0) {
                        for (const auto& back : net.out_edges(e.to))
                            if (back.to == u)
                                s += back.weight / sv;
                    }
                }
                scores.push_back(s);
                total += s;
            }
            if (!(total > 0)) {
                result.p_exhausted += rest; // sink
                continue;
            }
            for (std::size_t i = 0; i < scores.size(); ++i)
                if (scores[i] > 0)
                    next[{edges[i].to, edges[i].weight}] += rest * scores[i] / total;
        }
        mass = std::move(next);
    }
    if (result.p_rated > 0)
        result.expectation = e_sum / result.p_rated;
    return result;
}

// ---------------------------------------------------------------------------
// random structures

/// Random directed weighted network. Roughly `density` of the possible
/// edges exist, weights uniform in (0, 4]; a slice of nodes is kept
/// without out-edges so walks hit sinks; cycles occur naturally.
inline cci::TrustNetwork random_network(cci::Rng& rng, std::size_t n_nodes, double density,
                                        bool with_sinks = true) {
    std::vector<std::tuple<cci::UserId, cci::UserId, double>> edges;
    std::size_t sink_cut = with_sinks ? n_nodes - std::max<std::size_t>(1, n_nodes / 10)
                                      : n_nodes;
    for (cci::UserId u = 0; u < n_nodes; ++u) {
        if (u >= sink_cut)
            continue; // sink: no out-edges
        for (cci::UserId v = 0; v < n_nodes; ++v) {
            if (u == v)
                continue;
            if (rng.next_double() < density) {
                double w = rng.next_double() * 4.0;
                if (w == 0)
                    w = 1.0;
                edges.emplace_back(u, v, w);
            }
        }
    }
    if (edges.empty())
        edges.emplace_back(0, 1 % std::max<std::size_t>(2, n_nodes), 2.0);
    return cci::TrustNetwork::from_raw_edges(edges);
}

/// Random rating table over `n_users` x `n_items`, about
/// `ratings_per_user` entries per user, values on the scale grid.
inline cci::RatingTable random_ratings(cci::Rng& rng, std::size_t n_users,
                                       std::size_t n_items, std::size_t ratings_per_user,
                                       const cci::RatingScale& scale) {
    cci::RatingTable table(scale);
    std::size_t levels =
        scale.step > 0 ? static_cast<std::size_t>((scale.max - scale.min) / scale.step) + 1
                       : 9;
    for (cci::UserId u = 0; u < n_users; ++u) {
        for (std::size_t k = 0; k < ratings_per_user; ++k) {
            cci::ItemId item = static_cast<cci::ItemId>(rng.next_index(n_items));
            double r = scale.step > 0
                           ? scale.min + scale.step * static_cast<double>(rng.next_index(levels))
                           : scale.min + rng.next_double() * (scale.max - scale.min);
            table.add(u, item, r);
        }
    }
    return table;
}

/// Synthetic dataset for throughput/determinism runs.
inline cci::Dataset synth_dataset(std::uint64_t seed, std::size_t n_users,
                                  std::size_t n_items, std::size_t ratings_per_user,
                                  std::size_t friend_attempts,
                                  const cci::RatingScale& scale) {
    cci::Rng rng(seed);
    cci::Dataset ds;
    ds.name = "synthetic";
    ds.ratings = random_ratings(rng, n_users, n_items, ratings_per_user, scale);
    cci::SocialGraph social(false);
    for (cci::UserId u = 0; u < n_users; ++u) {
        for (std::size_t k = 0; k < friend_attempts; ++k) {
            cci::UserId v = static_cast<cci::UserId>(rng.next_index(n_users));
            if (v != u)
                social.add_edge(u, v);
        }
    }
    ds.social = social;
    return ds;
}

inline void save_dataset_files(const cci::Dataset& ds, const std::string& ratings_path,
                               const std::string& social_path) {
    cci::save_ratings(ds.ratings, ratings_path);
    cci::save_social(ds.social, social_path);
}

} // namespace testutil
