#include "cci/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "cci/errors.hpp"
#include "cci/rng.hpp"
#include "cci/similarity.hpp"

namespace cci {

double mae(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.empty() || actual.size() != predicted.size())
        throw DomainError("mae: need equal nonempty vectors");
    double sum = 0;
    for (std::size_t i = 0; i < actual.size(); ++i)
        sum += std::fabs(actual[i] - predicted[i]);
    return sum / static_cast<double>(actual.size());
}

double rmse(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.empty() || actual.size() != predicted.size())
        throw DomainError("rmse: need equal nonempty vectors");
    double sum = 0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        double d = actual[i] - predicted[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(actual.size()));
}

double precision_from_rmse(double rmse_value, double rmse_max) {
    if (!(rmse_max > 0))
        throw DomainError("precision_from_rmse: rmse_max must be > 0");
    return 1.0 - rmse_value / rmse_max;
}

double f_measure(double precision, double coverage_fraction) {
    if (precision == coverage_fraction)
        return precision;
    return 2.0 * precision * coverage_fraction / (precision + coverage_fraction);
}

double coverage_pct(std::size_t n_covered, std::size_t n_tested) {
    if (n_tested == 0)
        throw DomainError("coverage: no tested scores");
    return 100.0 * static_cast<double>(n_covered) / static_cast<double>(n_tested);
}

EvalReport loo_evaluate(const Dataset& dataset, const EvalConfig& config,
                        const Predictor& engine) {
    if (!(config.fraction > 0) || config.fraction > 1)
        throw DomainError("loo_evaluate: fraction must be in (0,1]");

    std::vector<UserId> users = dataset.ratings.users();
    if (users.empty())
        throw DomainError("loo_evaluate: dataset has no ratings");

    // uniform user split under the run seed (Fisher-Yates, own rng so the
    // shuffle is identical on every platform)
    {
        Rng rng(config.seed);
        for (std::size_t i = users.size(); i > 1; --i)
            std::swap(users[i - 1], users[rng.next_index(i)]);
        std::size_t keep = static_cast<std::size_t>(
            std::llround(config.fraction * static_cast<double>(users.size())));
        keep = std::clamp<std::size_t>(keep, 1, users.size());
        users.resize(keep);
        std::sort(users.begin(), users.end());
    }

    struct Query {
        UserId user;
        ItemId item;
        double actual;
    };
    std::vector<Query> queries;
    for (UserId u : users)
        for (const auto& ri : dataset.ratings.items_of(u))
            queries.push_back({u, ri.item, ri.rating});
    if (queries.empty())
        throw DomainError("loo_evaluate: empty split");

    struct Cell {
        PredictionKind kind = PredictionKind::cannot_cover;
        double value = 0;
        std::size_t violations = 0;
    };
    std::vector<Cell> cells(queries.size());

    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t q = begin; q < end; ++q) {
            MaskedRatingView view(dataset.ratings, queries[q].user, queries[q].item);
            PredictionResult r =
                engine(LooQuery{queries[q].user, queries[q].item, queries[q].actual, view});
            cells[q] = {r.kind, r.value, view.violations()};
        }
    };
    int threads = std::max(1, config.threads);
    if (threads == 1) {
        run_range(0, queries.size());
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (queries.size() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            std::size_t b = std::min(queries.size(), t * chunk);
            std::size_t e = std::min(queries.size(), b + chunk);
            if (b < e)
                pool.emplace_back(run_range, b, e);
        }
        for (auto& th : pool)
            th.join();
    }

    // reduce in query order
    EvalReport report;
    report.n_tested = queries.size();
    std::vector<double> actual, predicted;
    for (std::size_t q = 0; q < queries.size(); ++q) {
        report.hygiene_violations += cells[q].violations;
        switch (cells[q].kind) {
        case PredictionKind::predicted:
            ++report.n_predicted;
            actual.push_back(queries[q].actual);
            predicted.push_back(cells[q].value);
            break;
        case PredictionKind::fallback:
            ++report.n_fallback;
            break;
        default:
            ++report.n_cannot_cover;
            break;
        }
    }

    std::size_t covered = report.n_predicted;
    if (config.count_fallback_covered)
        covered += report.n_fallback;
    report.coverage = coverage_pct(covered, report.n_tested);
    if (report.n_predicted > 0) {
        report.mae = mae(actual, predicted);
        report.rmse = rmse(actual, predicted);
        report.precision = precision_from_rmse(report.rmse, config.rmse_max);
        report.f_measure = f_measure(report.precision, report.coverage / 100.0);
    } else {
        report.mae = std::numeric_limits<double>::quiet_NaN();
        report.rmse = std::numeric_limits<double>::quiet_NaN();
        report.precision = std::numeric_limits<double>::quiet_NaN();
        report.f_measure = 0.0;
    }
    return report;
}

std::optional<double> baseline_cf_pearson(UserId source, ItemId item,
                                          const RatingView& ratings, std::size_t k) {
    auto source_mean = user_mean(ratings, source);
    if (!source_mean)
        return std::nullopt;

    struct Neighbor {
        UserId user;
        double weight;
        double offset; // r_v(item) - mean(v)
    };
    std::vector<Neighbor> neighbors;
    for (UserId v : ratings.raters_of(item)) {
        if (v == source)
            continue;
        auto w = pearson(source, v, ratings);
        if (!w || *w <= 0)
            continue;
        double rv = *ratings.get(v, item);
        double mv = *user_mean(ratings, v);
        neighbors.push_back({v, *w, rv - mv});
    }
    if (neighbors.empty())
        return std::nullopt;
    std::sort(neighbors.begin(), neighbors.end(), [](const Neighbor& a, const Neighbor& b) {
        if (a.weight != b.weight)
            return a.weight > b.weight;
        return a.user < b.user;
    });
    if (neighbors.size() > k)
        neighbors.resize(k);

    double num = 0, den = 0;
    for (const Neighbor& nb : neighbors) {
        num += nb.weight * nb.offset;
        den += std::fabs(nb.weight);
    }
    return ratings.scale().clamp(*source_mean + num / den);
}

Predictor make_walker_engine(const TrustNetwork& net, const SocialGraph& social,
                             const WalkConfig& walk_config) {
    return [&net, &social, walk_config](const LooQuery& q) {
        EdgePatch patch = net.loo_patch(q.view, social);
        return predict(q.user, q.item, net, q.view, walk_config,
                       patch.empty() ? nullptr : &patch);
    };
}

Predictor make_rebuild_walker_engine(const Dataset& dataset, const NetworkConfig& net_config,
                                     const WalkConfig& walk_config) {
    return [&dataset, net_config, walk_config](const LooQuery& q) {
        Dataset reduced = dataset;
        reduced.ratings.erase(q.user, q.item);
        TrustNetwork net = TrustNetwork::build(reduced, net_config);
        return predict(q.user, q.item, net, q.view, walk_config);
    };
}

Predictor make_baseline_engine(std::size_t k) {
    return [k](const LooQuery& q) {
        PredictionResult r;
        auto value = baseline_cf_pearson(q.user, q.item, q.view, k);
        if (value) {
            r.kind = PredictionKind::predicted;
            r.value = *value;
        } else {
            r.kind = PredictionKind::cannot_cover;
        }
        return r;
    };
}

namespace {

std::string fixed4(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

} // namespace

std::string report_line(const std::string& dataset, double fraction, const EvalReport& r) {
    std::string out = dataset;
    out += ' ' + fixed4(fraction);
    out += ' ' + std::to_string(r.n_tested);
    out += ' ' + std::to_string(r.n_predicted);
    out += ' ' + fixed4(r.mae);
    out += ' ' + fixed4(r.rmse);
    out += ' ' + fixed4(r.coverage);
    out += ' ' + fixed4(r.precision);
    out += ' ' + fixed4(r.f_measure);
    out += '\n';
    return out;
}

std::string report_table(const std::string& dataset, double fraction, const EvalReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "dataset      %s\n"
                  "fraction     %s\n"
                  "tested       %zu\n"
                  "predicted    %zu\n"
                  "fallback     %zu\n"
                  "cannot-cover %zu\n"
                  "mae          %s\n"
                  "rmse         %s\n"
                  "coverage     %s\n"
                  "precision    %s\n"
                  "f-measure    %s\n",
                  dataset.c_str(), fixed4(fraction).c_str(), r.n_tested, r.n_predicted,
                  r.n_fallback, r.n_cannot_cover, fixed4(r.mae).c_str(),
                  fixed4(r.rmse).c_str(), fixed4(r.coverage).c_str(),
                  fixed4(r.precision).c_str(), fixed4(r.f_measure).c_str());
    return buf;
}

} // namespace cci
