#include <doctest.h>

#include <map>
#include <set>

#include "wilt/error.hpp"
#include "wilt/wl.hpp"

#include "support.hpp"

using namespace wilt;

namespace {
const std::filesystem::path kFixtureDir = WILTKIT_TEST_DATA_DIR;
}

TEST_CASE("refine: figure1 colors") {
    const Dataset ds = load_tudataset(kFixtureDir / "figure1", "figure1");
    auto [assignment, table] = refine(ds, 2);

    CHECK(table.num_colors() == 13);
    CHECK(table.level_begin == std::vector<ColorId>{0, 2, 7, 13});

    // both degree-2 nodes labeled 0 with two solid edges to label-1 nodes
    // share one level-1 color in G and H
    CHECK(assignment.at(0, 0, 1) == assignment.at(0, 1, 1)); // b, c in G
    CHECK(assignment.at(0, 0, 1) == assignment.at(1, 0, 1)); // b in H
    CHECK(assignment.at(0, 0, 1) == assignment.at(1, 1, 1)); // c in H

    // final multisets are disjoint after two iterations
    const auto mg = final_color_multiset(assignment, 0);
    const auto mh = final_color_multiset(assignment, 1);
    CHECK(mg.size() == 5);
    CHECK(mh.size() == 4);
    std::set<ColorId> sg(mg.begin(), mg.end()), sh(mh.begin(), mh.end());
    for (ColorId c : sg) CHECK(sh.count(c) == 0);
}

TEST_CASE("refine: single isolated node yields a stable chain") {
    Dataset ds;
    ds.name = "one";
    Graph g;
    g.num_nodes = 1;
    g.node_labels = {5};
    ds.graphs = {g};
    auto [assignment, table] = refine(ds, 4);
    CHECK(table.num_colors() == 5); // one color per level
    for (int l = 0; l <= 4; ++l) CHECK(assignment.at(0, 0, l) == static_cast<ColorId>(l));
}

TEST_CASE("refine: L = 0 rejected") {
    Dataset ds;
    ds.name = "one";
    Graph g;
    g.num_nodes = 1;
    g.node_labels = {0};
    ds.graphs = {g};
    CHECK_THROWS_AS(refine(ds, 0), Error);
}

TEST_CASE("refine: level partition and monotonicity on random datasets") {
    wilt::detail::Rng rng(11);
    for (int round = 0; round < 20; ++round) {
        const Dataset ds = testsupport::random_dataset(rng, 5, 1, 7);
        const int L = 1 + static_cast<int>(rng.below(3));
        auto [assignment, table] = refine(ds, L);

        for (int gi = 0; gi < assignment.num_graphs(); ++gi) {
            const int n = assignment.num_nodes(gi);
            for (int l = 0; l <= L; ++l) {
                int incidences = 0;
                for (int v = 0; v < n; ++v) {
                    const ColorId c = assignment.at(gi, v, l);
                    CHECK(table.level_of(c) == l);
                    ++incidences;
                }
                CHECK(incidences == n);
            }
        }

        // same color at level l implies same color at level l-1
        for (int l = 1; l <= L; ++l) {
            std::map<ColorId, ColorId> to_prev;
            for (int gi = 0; gi < assignment.num_graphs(); ++gi)
                for (int v = 0; v < assignment.num_nodes(gi); ++v) {
                    const ColorId c = assignment.at(gi, v, l);
                    const ColorId prev = assignment.at(gi, v, l - 1);
                    auto [it, inserted] = to_prev.emplace(c, prev);
                    if (!inserted) CHECK(it->second == prev);
                }
        }
    }
}

TEST_CASE("refine: deterministic across runs") {
    wilt::detail::Rng rng(23);
    const Dataset ds = testsupport::random_dataset(rng, 6, 1, 8);
    auto [a1, t1] = refine(ds, 3);
    auto [a2, t2] = refine(ds, 3);
    CHECK(a1.colors == a2.colors);
    CHECK(t1.level_begin == t2.level_begin);
    CHECK(t1.previous == t2.previous);
}

TEST_CASE("refine: isomorphism invariance") {
    wilt::detail::Rng rng(31);
    for (int round = 0; round < 30; ++round) {
        const Graph g = testsupport::random_graph(rng, 2, 6, 2, 2, 0.5);
        const auto perm = testsupport::random_permutation(rng, g.num_nodes);
        Dataset ds;
        ds.name = "iso";
        ds.graphs = {g, testsupport::permuted_graph(g, perm)};
        REQUIRE(testsupport::exhaustively_isomorphic(ds.graphs[0], ds.graphs[1]));
        auto [assignment, table] = refine(ds, 2);
        CHECK(final_color_multiset(assignment, 0) == final_color_multiset(assignment, 1));
    }
}

TEST_CASE("refine: exhaustively isomorphic small pairs share final multisets") {
    wilt::detail::Rng rng(37);
    int isomorphic_seen = 0;
    for (int round = 0; round < 200; ++round) {
        Dataset ds;
        ds.name = "pair";
        ds.graphs = {testsupport::random_graph(rng, 2, 4, 1, 1, 0.5),
                     testsupport::random_graph(rng, 2, 4, 1, 1, 0.5)};
        auto [assignment, table] = refine(ds, 2);
        if (testsupport::exhaustively_isomorphic(ds.graphs[0], ds.graphs[1])) {
            ++isomorphic_seen;
            CHECK(final_color_multiset(assignment, 0) == final_color_multiset(assignment, 1));
        }
    }
    CHECK(isomorphic_seen > 0); // the generator must actually produce matches
}

TEST_CASE("refine: json debug dumps") {
    const Dataset ds = load_tudataset(kFixtureDir / "figure1", "figure1");
    auto [assignment, table] = refine(ds, 2);
    const std::string tj = table_to_json(table);
    CHECK(tj.find("\"levels\"") != std::string::npos);
    const std::string aj = assignment_to_json(assignment);
    CHECK(aj.find("\"graphs\"") != std::string::npos);
}

TEST_CASE("final_color_multiset: index checked") {
    const Dataset ds = load_tudataset(kFixtureDir / "figure1", "figure1");
    auto [assignment, table] = refine(ds, 1);
    CHECK_THROWS_AS(final_color_multiset(assignment, 2), Error);
}
