#include <doctest.h>

#include <cmath>
#include <cstring>

#include "cci/errors.hpp"
#include "cci/evaluation.hpp"
#include "helpers.hpp"

using namespace cci;

namespace {

const RatingScale kFiveStar{1, 5, 1, 4};

Dataset friendly_dataset() {
    // 1 and 2 agree on three items; 2 also rated items 1 lacks
    Dataset ds;
    ds.name = "tiny";
    ds.ratings.set_scale(kFiveStar);
    ds.ratings.add(1, 10, 4);
    ds.ratings.add(1, 20, 5);
    ds.ratings.add(1, 30, 3);
    ds.ratings.add(2, 10, 4);
    ds.ratings.add(2, 20, 5);
    ds.ratings.add(2, 30, 3);
    ds.ratings.add(2, 40, 2);
    ds.social.add_edge(1, 2);
    return ds;
}

} // namespace

TEST_CASE("mae and rmse on a small fixture") {
    std::vector<double> actual = {4, 3, 5};
    std::vector<double> predicted = {3.5, 3, 4};
    CHECK(mae(actual, predicted) == doctest::Approx(0.5));
    CHECK(rmse(actual, predicted) == doctest::Approx(std::sqrt(1.25 / 3.0)).epsilon(1e-9));
    CHECK(rmse(actual, predicted) == doctest::Approx(0.6455).epsilon(1e-4));

    CHECK(mae(actual, actual) == 0.0);
    CHECK(rmse(actual, actual) == 0.0);

    std::vector<double> one_a = {1}, one_p = {5};
    CHECK(mae(one_a, one_p) == 4.0);

    CHECK_THROWS_AS(mae({}, {}), DomainError);
    std::vector<double> two = {1, 2};
    CHECK_THROWS_AS(mae(actual, two), DomainError);
}

TEST_CASE("constant offsets give rmse equal to the offset") {
    for (double offset : {0.5, 0.25, 1.0, 1.25, -0.75}) {
        for (std::size_t n : {1u, 3u, 7u, 100u}) {
            std::vector<double> actual(n, 3.0);
            std::vector<double> predicted(n, 3.0 + offset);
            CHECK(rmse(actual, predicted) == std::fabs(offset));
            CHECK(mae(actual, predicted) == std::fabs(offset));
        }
    }
}

TEST_CASE("mae never exceeds rmse") {
    Rng rng(2718);
    for (int round = 0; round < 500; ++round) {
        std::size_t n = 1 + rng.next_index(40);
        std::vector<double> a(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.next_double() * 5;
            p[i] = rng.next_double() * 5;
        }
        CHECK(mae(a, p) <= rmse(a, p) + 1e-12);
    }
}

TEST_CASE("precision_from_rmse matches the frozen reference values") {
    CHECK(precision_from_rmse(0.5765, 4) == doctest::Approx(0.8559).epsilon(2e-4));
    CHECK(precision_from_rmse(0.5955, 3) == doctest::Approx(0.8015).epsilon(1e-9));
    CHECK(precision_from_rmse(0.5845, 9) == doctest::Approx(0.9350).epsilon(1e-4));
    CHECK_THROWS_AS(precision_from_rmse(1.0, 0), DomainError);
    CHECK(precision_from_rmse(5.0, 4) < 0); // reported as-is
}

TEST_CASE("f_measure identities") {
    CHECK(f_measure(0.7, 0.7) == 0.7); // exact for equal inputs
    CHECK(f_measure(0.1, 0.1) == 0.1);
    CHECK(f_measure(1.0, 0.0) == 0.0);
    CHECK(f_measure(0.0, 0.0) == 0.0);
    CHECK(f_measure(0.8, 0.9) == doctest::Approx(0.8471).epsilon(1e-4));
    CHECK(f_measure(0.8, 0.9) == f_measure(0.9, 0.8));
    // never above twice the smaller argument
    Rng rng(31);
    for (int i = 0; i < 200; ++i) {
        double p = rng.next_double(), c = rng.next_double();
        CHECK(f_measure(p, c) <= 2 * std::min(p, c) + 1e-12);
    }
}

TEST_CASE("a perfect oracle engine scores perfectly") {
    Dataset ds = friendly_dataset();
    EvalConfig config;
    config.rmse_max = 4;
    auto oracle = [](const LooQuery& q) {
        PredictionResult r;
        r.kind = PredictionKind::predicted;
        r.value = q.actual;
        return r;
    };
    EvalReport report = loo_evaluate(ds, config, oracle);
    CHECK(report.n_tested == 7);
    CHECK(report.n_predicted == 7);
    CHECK(report.mae == 0.0);
    CHECK(report.rmse == 0.0);
    CHECK(report.coverage == 100.0);
    CHECK(report.precision == 1.0);
    CHECK(report.f_measure == 1.0);
}

TEST_CASE("an engine that never predicts reports NaN errors and zero f-measure") {
    Dataset ds = friendly_dataset();
    EvalConfig config;
    auto never = [](const LooQuery&) {
        PredictionResult r;
        r.kind = PredictionKind::cannot_cover;
        return r;
    };
    EvalReport report = loo_evaluate(ds, config, never);
    CHECK(report.n_predicted == 0);
    CHECK(report.coverage == 0.0);
    CHECK(std::isnan(report.mae));
    CHECK(std::isnan(report.rmse));
    CHECK(report.f_measure == 0.0);
}

TEST_CASE("fallback counts as uncovered unless configured otherwise") {
    Dataset ds = friendly_dataset();
    auto fallback_engine = [](const LooQuery&) {
        PredictionResult r;
        r.kind = PredictionKind::fallback;
        return r;
    };
    EvalConfig config;
    EvalReport report = loo_evaluate(ds, config, fallback_engine);
    CHECK(report.coverage == 0.0);
    CHECK(report.n_fallback == report.n_tested);

    config.count_fallback_covered = true;
    EvalReport covered = loo_evaluate(ds, config, fallback_engine);
    CHECK(covered.coverage == 100.0);
}

TEST_CASE("loo hygiene: the walker engine never reads the held-out rating") {
    Dataset ds = friendly_dataset();
    TrustNetwork net = TrustNetwork::build(ds);
    WalkConfig walk;
    walk.num_walks = 200;
    EvalConfig config;
    config.walk = walk;
    EvalReport report = loo_evaluate(ds, config, make_walker_engine(net, ds.social, walk));
    CHECK(report.hygiene_violations == 0);
    CHECK(report.n_tested == 7);
}

TEST_CASE("masking equals physically removing the rating") {
    // Fixture where the component extremes are pinned by pairs the mask
    // cannot touch, so the overlay patch and a full rebuild produce the
    // same weights and, with equal seeds, bitwise-identical predictions.
    Dataset ds;
    ds.name = "patch";
    ds.ratings.set_scale(kFiveStar);
    ds.ratings.add(1, 10, 4); // the held-out cell
    ds.ratings.add(1, 20, 5);
    ds.ratings.add(1, 30, 3);
    ds.ratings.add(2, 20, 5);
    ds.ratings.add(2, 30, 3);
    ds.ratings.add(2, 80, 4);
    ds.ratings.add(2, 90, 5);
    ds.ratings.add(3, 10, 5);
    ds.ratings.add(6, 10, 2);
    ds.ratings.add(6, 80, 4);
    ds.ratings.add(6, 90, 5);
    // norm-pinning pair: sim_item 28/3 > every maskable value
    ds.ratings.add(4, 50, 5);
    ds.ratings.add(4, 60, 4);
    ds.ratings.add(4, 70, 5);
    ds.ratings.add(5, 50, 5);
    ds.ratings.add(5, 60, 4);
    ds.ratings.add(5, 70, 5);
    ds.social.add_edge(1, 2);
    ds.social.add_edge(2, 3); // (1,3) also holds via the mutual friend

    TrustNetwork net = TrustNetwork::build(ds);
    // (1,6) exists only through the co-rating of item 10 and must drop
    // under the mask; (1,3) survives via the mutual friend
    REQUIRE(net.find_edge(1, 3) != nullptr);
    REQUIRE(net.find_edge(1, 6) != nullptr);

    WalkConfig walk;
    walk.num_walks = 500;
    walk.convergence_epsilon = 0;
    walk.seed = 17;

    MaskedRatingView view(ds.ratings, 1, 10);
    LooQuery query{1, 10, 4.0, view};
    PredictionResult overlay = make_walker_engine(net, ds.social, walk)(query);
    PredictionResult rebuild =
        make_rebuild_walker_engine(ds, NetworkConfig{}, walk)(query);

    CHECK(overlay.kind == rebuild.kind);
    CHECK(overlay.walks_run == rebuild.walks_run);
    CHECK(overlay.walks_rated == rebuild.walks_rated);
    CHECK(std::memcmp(&overlay.value, &rebuild.value, sizeof(double)) == 0);
    CHECK(overlay.visited_union == rebuild.visited_union);
    // raters 3 (direct) and 6 (via 2) mix into a non-trivial mean
    REQUIRE(overlay.kind == PredictionKind::predicted);
    CHECK(overlay.value > 2.0);
    CHECK(overlay.value < 5.0);
}

TEST_CASE("loo mae agrees with the exact absorbing-chain mae on a ring fixture") {
    // Eight users on a social ring; item 100+j is rated by {j, j+1, j+2}.
    // Every user rates at a personal constant, so pearson is undefined on
    // every pair and no edge weight can depend on a masked rating: the
    // oracle can price each query on the built network directly.
    Dataset ds;
    ds.name = "ring";
    ds.ratings.set_scale(kFiveStar);
    const std::size_t n = 8;
    auto constant_of = [](UserId u) { return 1.0 + static_cast<double>(u % 5); };
    for (UserId u = 0; u < n; ++u)
        ds.social.add_edge(u, static_cast<UserId>((u + 1) % n));
    for (UserId j = 0; j < n; ++j)
        for (UserId d = 0; d < 3; ++d) {
            UserId u = static_cast<UserId>((j + d) % n);
            ds.ratings.add(u, 100 + j, constant_of(u));
        }

    TrustNetwork net = TrustNetwork::build(ds);
    WalkConfig walk;
    walk.num_walks = 10000;
    walk.max_walks = 10000;
    walk.convergence_epsilon = 0;
    walk.seed = 12345;

    double mae_mc_sum = 0, mae_exact_sum = 0, sigma_sq_sum = 0, sigma_sum = 0;
    std::size_t predicted = 0, queries = 0;
    for (UserId u = 0; u < n; ++u) {
        for (const auto& ri : std::vector<RatedItem>(ds.ratings.items_of(u).begin(),
                                                     ds.ratings.items_of(u).end())) {
            ++queries;
            MaskedRatingView view(ds.ratings, u, ri.item);
            EdgePatch patch = net.loo_patch(view, ds.social);
            std::vector<WalkOutcome> trace;
            WalkConfig q_walk = walk;
            PredictionResult result = predict(u, ri.item, net, view, q_walk,
                                              patch.empty() ? nullptr : &patch, 1, &trace);
            std::map<UserId, double> raters;
            for (UserId v : view.raters_of(ri.item))
                raters[v] = *view.get(v, ri.item);
            auto oracle = testutil::walk_expectation(net, u, raters, q_walk);
            if (result.kind != PredictionKind::predicted) {
                CHECK(oracle.p_rated < 0.01); // only unreachable raters go uncovered
                continue;
            }
            ++predicted;
            mae_mc_sum += std::fabs(ri.rating - result.value);
            mae_exact_sum += std::fabs(ri.rating - oracle.expectation);
            double var = 0;
            for (const auto& o : trace)
                if (o.kind == WalkKind::rated)
                    var += (o.rating - result.value) * (o.rating - result.value);
            var /= static_cast<double>(result.walks_rated);
            double sigma =
                std::sqrt(var / static_cast<double>(result.walks_rated));
            sigma_sq_sum += sigma * sigma;
            sigma_sum += sigma;
        }
    }
    REQUIRE(queries == 24);
    REQUIRE(predicted >= 20);
    double mae_mc = mae_mc_sum / static_cast<double>(predicted);
    double mae_exact = mae_exact_sum / static_cast<double>(predicted);
    // 3-sigma band for the mae estimate plus the worst-case absolute-value
    // bias (0.8 sigma per query when actual == expectation)
    double band = (3.0 * std::sqrt(sigma_sq_sum) + 0.8 * sigma_sum) /
                  static_cast<double>(predicted);
    CHECK(std::fabs(mae_mc - mae_exact) <= band + 1e-9);
}

TEST_CASE("seeded evaluation is reproducible and thread independent") {
    Rng rng(12);
    Dataset ds;
    ds.name = "mid";
    ds.ratings = testutil::random_ratings(rng, 40, 30, 5, kFiveStar);
    SocialGraph social(false);
    for (int e = 0; e < 60; ++e) {
        UserId a = static_cast<UserId>(rng.next_index(40));
        UserId b = static_cast<UserId>(rng.next_index(40));
        if (a != b)
            social.add_edge(a, b);
    }
    ds.social = social;
    TrustNetwork net = TrustNetwork::build(ds);
    WalkConfig walk;
    walk.num_walks = 100;
    EvalConfig config;
    config.walk = walk;
    config.seed = 42;
    config.fraction = 0.5;

    config.threads = 1;
    EvalReport a = loo_evaluate(ds, config, make_walker_engine(net, ds.social, walk));
    EvalReport b = loo_evaluate(ds, config, make_walker_engine(net, ds.social, walk));
    config.threads = 8;
    EvalReport c = loo_evaluate(ds, config, make_walker_engine(net, ds.social, walk));

    CHECK(report_line("mid", 0.5, a) == report_line("mid", 0.5, b));
    CHECK(report_line("mid", 0.5, a) == report_line("mid", 0.5, c));
    CHECK(a.hygiene_violations == 0);
}

TEST_CASE("fraction sampling bounds the tested users") {
    Dataset ds = friendly_dataset();
    EvalConfig config;
    config.fraction = 0.5; // one of the two rating users
    auto oracle = [](const LooQuery& q) {
        PredictionResult r;
        r.kind = PredictionKind::predicted;
        r.value = q.actual;
        return r;
    };
    EvalReport report = loo_evaluate(ds, config, oracle);
    CHECK((report.n_tested == 3 || report.n_tested == 4));
    CHECK_THROWS_AS(loo_evaluate(ds, EvalConfig{0.0, 1, {}, 4, 1, false}, oracle),
                    DomainError);
}

TEST_CASE("baseline follows the mean-offset formula") {
    // perfectly-correlated neighbor whose mean matches the source:
    // the prediction is exactly the neighbor's rating
    RatingTable same_mean(kFiveStar);
    same_mean.add(1, 10, 2);
    same_mean.add(1, 20, 3);
    same_mean.add(1, 30, 4);
    same_mean.add(2, 10, 2);
    same_mean.add(2, 20, 3);
    same_mean.add(2, 30, 4);
    same_mean.add(2, 99, 3); // keeps the neighbor mean at 3
    auto proxied = baseline_cf_pearson(1, 99, same_mean, 10);
    REQUIRE(proxied.has_value());
    CHECK(*proxied == doctest::Approx(3.0));

    // shifted neighbor mean: prediction adds the weighted offset
    RatingTable table(kFiveStar);
    table.add(1, 10, 2);
    table.add(1, 20, 3);
    table.add(1, 30, 4);
    table.add(2, 10, 2);
    table.add(2, 20, 3);
    table.add(2, 30, 4);
    table.add(2, 99, 4);
    auto got = baseline_cf_pearson(1, 99, table, 10);
    REQUIRE(got.has_value());
    CHECK(*got == doctest::Approx(3.0 + (4.0 - 13.0 / 4.0)));

    CHECK(!baseline_cf_pearson(1, 777, table, 10).has_value()); // no rater
}

TEST_CASE("baseline combines weighted offsets") {
    // neighbors with pearson weights 1.0 and 0.5 and offsets +1 / -1
    // constructed numerically: check the algebra on synthetic inputs
    std::vector<std::pair<double, double>> neighbors = {{1.0, +1.0}, {0.5, -1.0}};
    double num = 0, den = 0;
    for (auto& [w, off] : neighbors) {
        num += w * off;
        den += std::fabs(w);
    }
    CHECK(num / den == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("report lines render four decimals with nan placeholders") {
    EvalReport report;
    report.n_tested = 5;
    report.n_predicted = 0;
    report.mae = report.rmse = report.precision = std::nan("");
    report.coverage = 0;
    report.f_measure = 0;
    std::string line = report_line("demo", 0.25, report);
    CHECK(line == "demo 0.2500 5 0 nan nan 0.0000 nan 0.0000\n");
}
