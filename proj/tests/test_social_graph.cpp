#include <doctest.h>

#include "cci/errors.hpp"
#include "cci/social_graph.hpp"
#include "helpers.hpp"

using namespace cci;

TEST_CASE("directed load keeps only value-1 edges") {
    testutil::TempDir tmp("social");
    auto path = testutil::write_file(tmp.file("s.txt"), "1 2 1\n1 3 0\n");
    LoadReport report;
    SocialGraph g = load_social(path, true, &report);
    CHECK(g.num_edges() == 1);
    CHECK(g.has_edge(1, 2));
    CHECK(!g.has_edge(1, 3));
    CHECK(!g.has_edge(2, 1));
    CHECK(report.zero_edges == 1);
}

TEST_CASE("undirected load symmetrizes two-field lines") {
    testutil::TempDir tmp("social");
    auto path = testutil::write_file(tmp.file("s.txt"), "1 2\n");
    SocialGraph g = load_social(path, false);
    CHECK(g.has_edge(1, 2));
    CHECK(g.has_edge(2, 1));
    CHECK(g.num_edges() == 2);
}

TEST_CASE("self-loops are dropped with a warning count") {
    testutil::TempDir tmp("social");
    auto path = testutil::write_file(tmp.file("s.txt"), "1 1 1\n");
    LoadReport report;
    SocialGraph g = load_social(path, true, &report);
    CHECK(g.num_edges() == 0);
    CHECK(g.users().empty());
    CHECK(report.self_loops == 1);
}

TEST_CASE("malformed social lines raise parse errors") {
    testutil::TempDir tmp("social");
    CHECK_THROWS_AS(load_social(testutil::write_file(tmp.file("a.txt"), "1\n"), true),
                    ParseError);
    CHECK_THROWS_AS(load_social(testutil::write_file(tmp.file("b.txt"), "1 2 5\n"), true),
                    ParseError);
    CHECK_THROWS_AS(load_social(testutil::write_file(tmp.file("c.txt"), "1 2 1 9\n"), true),
                    ParseError);
}

TEST_CASE("symmetrization is idempotent") {
    SocialGraph g(true);
    g.add_edge(1, 2);
    g.add_edge(3, 1);
    g.symmetrize();
    std::size_t edges = g.num_edges();
    CHECK(edges == 4);
    g.symmetrize();
    CHECK(g.num_edges() == edges);
    CHECK(g.has_edge(2, 1));
    CHECK(g.has_edge(1, 3));
}

TEST_CASE("degrees and mutual friends") {
    SocialGraph g(false);
    g.add_edge(1, 2);
    g.add_edge(1, 3);
    g.add_edge(1, 4);
    g.add_edge(2, 3);
    CHECK(g.degree(1) == 3);
    CHECK(g.degree(4) == 1);
    CHECK(g.mutual_friend_count(2, 3) == 1); // both befriend 1
    CHECK(g.mutual_friend_count(1, 4) == 0);
}

TEST_CASE("save/load round-trips the graph") {
    testutil::TempDir tmp("social");
    SocialGraph g(false);
    g.add_edge(1, 2);
    g.add_edge(2, 5);
    g.add_edge(4, 5);
    save_social(g, tmp.file("s.txt"));
    SocialGraph back = load_social(tmp.file("s.txt"), false);
    CHECK(back.num_edges() == g.num_edges());
    for (UserId u : g.users()) {
        auto a = g.neighbors(u);
        auto b = back.neighbors(u);
        CHECK(std::vector<UserId>(a.begin(), a.end()) ==
              std::vector<UserId>(b.begin(), b.end()));
    }
}
