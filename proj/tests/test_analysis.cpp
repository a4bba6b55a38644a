#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>

#include "wilt/analysis.hpp"
#include "wilt/error.hpp"

#include "support.hpp"

using namespace wilt;

namespace {

Dataset labeled_dataset(const std::vector<double>& targets, Task task = Task::classification) {
    Dataset ds;
    ds.name = "labels";
    ds.task = task;
    ds.has_targets = true;
    for (double t : targets) {
        Graph g;
        g.num_nodes = 1;
        g.node_labels = {0};
        g.target = t;
        ds.graphs.push_back(g);
    }
    return ds;
}

// targets (0,0,1,1) with each graph's same-class partner nearest
TargetDistance partner_matrix() {
    std::vector<double> m(16, 1.0);
    for (int i = 0; i < 4; ++i) m[i * 4 + i] = 0.0;
    m[0 * 4 + 1] = m[1 * 4 + 0] = 0.1;
    m[2 * 4 + 3] = m[3 * 4 + 2] = 0.1;
    return TargetDistance::from_matrix(4, m);
}

} // namespace

TEST_CASE("ali_k: exact constructions") {
    SUBCASE("uniform labels give zero") {
        const auto ds = labeled_dataset({7, 7, 7, 7, 7});
        std::vector<double> m(25, 1.0);
        for (int i = 0; i < 5; ++i) m[i * 5 + i] = 0.0;
        CHECK(ali_k(TargetDistance::from_matrix(5, m), ds, 2) == 0.0);
    }
    SUBCASE("four graphs, partner construction gives exactly one") {
        const auto ds = labeled_dataset({0, 0, 1, 1});
        CHECK(ali_k(partner_matrix(), ds, 1) == 1.0);
        // swapping the class labels changes nothing
        const auto swapped = labeled_dataset({1, 1, 0, 0});
        CHECK(ali_k(partner_matrix(), swapped, 1) == 1.0);
    }
    SUBCASE("k range is checked") {
        const auto ds = labeled_dataset({0, 0, 1, 1});
        CHECK_THROWS_AS(ali_k(partner_matrix(), ds, 0), Error);
        CHECK_THROWS_AS(ali_k(partner_matrix(), ds, 3), Error);
    }
}

TEST_CASE("ali_k: bounded and invariant under monotone transforms") {
    wilt::detail::Rng rng(107);
    for (int round = 0; round < 10; ++round) {
        const int n = 5 + static_cast<int>(rng.below(6));
        std::vector<double> targets(n);
        for (auto& t : targets) t = static_cast<double>(rng.below(3));
        const auto ds = labeled_dataset(targets);

        std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                m[i * n + j] = m[j * n + i] = 0.1 + rng.real();
        const auto target = TargetDistance::from_matrix(n, m);

        // distances squared preserve every neighborhood
        std::vector<double> squared(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) squared[i] = m[i] * m[i];
        const auto target_sq = TargetDistance::from_matrix(n, squared);

        const int k = 1 + static_cast<int>(rng.below(n - 2));
        const double value = ali_k(target, ds, k);
        CHECK(value >= -1.0);
        CHECK(value <= 1.0);
        CHECK(ali_k(target_sq, ds, k) == value);
    }
}

TEST_CASE("ali_k: subset cap restricts the computation") {
    const auto ds = labeled_dataset({0, 0, 1, 1, 0, 1});
    std::vector<double> m(36, 1.0);
    for (int i = 0; i < 6; ++i) m[i * 6 + i] = 0.0;
    m[0 * 6 + 1] = m[1 * 6 + 0] = 0.1;
    m[2 * 6 + 3] = m[3 * 6 + 2] = 0.1;
    const auto target = TargetDistance::from_matrix(6, m);
    // capped at the first four graphs this is the exact partner construction
    CHECK(ali_k(target, ds, 1, 4) == 1.0);
}

TEST_CASE("rmse_align") {
    SUBCASE("proportional inputs align perfectly") {
        const std::vector<double> d{0.2, 1.0, 0.4, 0.7};
        for (double c : {0.5, 1.0, 3.0}) {
            std::vector<double> scaled(d.size());
            for (std::size_t i = 0; i < d.size(); ++i) scaled[i] = c * d[i];
            const auto r = rmse_align(d, scaled);
            CHECK(std::abs(r.rmse) <= 1e-12);
            CHECK(std::abs(r.alpha - 1.0) <= 1e-12);
        }
    }
    SUBCASE("orthogonal normalized samples") {
        const auto r = rmse_align({1.0, 0.0}, {0.0, 1.0});
        CHECK(r.alpha == 0.0);
        CHECK(r.rmse == doctest::Approx(std::sqrt(0.5)));
    }
    SUBCASE("invariant under rescaling either input") {
        wilt::detail::Rng rng(109);
        std::vector<double> a(40), b(40);
        for (auto& v : a) v = rng.real() + 0.01;
        for (auto& v : b) v = rng.real() + 0.01;
        const auto base = rmse_align(a, b);
        for (double c : {0.25, 4.0}) {
            std::vector<double> ca(a.size()), cb(b.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                ca[i] = c * a[i];
                cb[i] = c * b[i];
            }
            const auto ra = rmse_align(ca, b);
            const auto rb = rmse_align(a, cb);
            CHECK(std::abs(ra.rmse - base.rmse) <= 1e-12);
            CHECK(std::abs(rb.rmse - base.rmse) <= 1e-12);
        }
    }
    SUBCASE("degenerate samples are rejected") {
        CHECK_THROWS_WITH_AS(rmse_align({1.0, 2.0}, {0.0, 0.0}), doctest::Contains("second"),
                             Error);
        CHECK_THROWS_AS(rmse_align({0.0}, {1.0}), Error);
        CHECK_THROWS_AS(rmse_align({1.0}, {1.0, 2.0}), Error);
        CHECK_THROWS_AS(rmse_align({}, {}), Error);
    }
    SUBCASE("self alignment is zero") {
        const std::vector<double> d{0.5, 0.25, 2.0};
        const auto r = rmse_align(d, d);
        CHECK(r.rmse == 0.0);
        CHECK(r.alpha == 1.0);
    }
}

TEST_CASE("sample_pairs") {
    SUBCASE("two graphs yield the single pair") {
        const auto pairs = sample_pairs(2, 1000, 0);
        REQUIRE(pairs.size() == 1);
        CHECK(pairs[0] == std::pair<int, int>{0, 1});
    }
    SUBCASE("deterministic under the seed, distinct, no self pairs") {
        const auto a = sample_pairs(50, 200, 42);
        const auto b = sample_pairs(50, 200, 42);
        CHECK(a == b);
        CHECK(a.size() == 200);
        std::set<std::pair<int, int>> seen;
        for (auto [i, j] : a) {
            CHECK(i != j);
            CHECK(seen.insert(std::minmax(i, j)).second);
        }
        const auto c = sample_pairs(50, 200, 43);
        CHECK(a != c);
    }
    SUBCASE("count above the total returns every pair") {
        const auto pairs = sample_pairs(6, 100, 7);
        CHECK(pairs.size() == 15);
    }
    SUBCASE("bad arguments") {
        CHECK_THROWS_AS(sample_pairs(1, 10, 0), Error);
        CHECK_THROWS_AS(sample_pairs(5, 0, 0), Error);
    }
}

TEST_CASE("weight_histogram") {
    const std::filesystem::path fixtures = WILTKIT_TEST_DATA_DIR;
    const Dataset ds = load_tudataset(fixtures / "figure1", "figure1");
    auto [tree, assignment] = build_wilt(ds, 2);

    SUBCASE("uniform weights occupy one bin") {
        const auto rows = weight_histogram(tree, 10);
        REQUIRE(rows.size() == 10);
        long long total = 0;
        int occupied = 0;
        for (const auto& row : rows) {
            total += row.count;
            occupied += row.count > 0;
        }
        CHECK(total == tree.num_edges());
        CHECK(occupied == 1);
        CHECK(rows.back().count == tree.num_edges());
    }
    SUBCASE("zero-heavy weights put the mode in the first bin") {
        Wilt sparse = tree;
        for (ColorId c = 0; c < sparse.num_colors(); ++c)
            sparse.weight[c] = c < 10 ? 0.0 : 2.0;
        const auto rows = weight_histogram(sparse, 5);
        CHECK(rows.front().count == 10);
        long long total = 0;
        for (const auto& row : rows) total += row.count;
        CHECK(total == sparse.num_edges());
    }
    SUBCASE("bin count validated") { CHECK_THROWS_AS(weight_histogram(tree, 0), Error); }
    SUBCASE("csv export") {
        testsupport::TempDir tmp("hist");
        const auto path = tmp.path() / "h.csv";
        save_histogram_csv(weight_histogram(tree, 4), path);
        std::ifstream in(path);
        std::string header;
        std::getline(in, header);
        CHECK(header == "bin_lo,bin_hi,count");
    }
}

TEST_CASE("top_colors") {
    const std::filesystem::path fixtures = WILTKIT_TEST_DATA_DIR;
    const Dataset ds = load_tudataset(fixtures / "figure1", "figure1");
    auto [tree, assignment] = build_wilt(ds, 2);
    wilt::detail::Rng rng(113);
    for (auto& w : tree.weight) w = rng.real();

    SUBCASE("sorted by weight, frequencies honored") {
        const auto entries = top_colors(tree, ds, assignment, 5, 0.01);
        REQUIRE(!entries.empty());
        CHECK(entries.size() <= 5);
        for (std::size_t i = 1; i < entries.size(); ++i) {
            CHECK(entries[i - 1].weight >= entries[i].weight);
            if (entries[i - 1].weight == entries[i].weight)
                CHECK(entries[i - 1].color < entries[i].color);
        }
        for (const auto& e : entries) {
            CHECK(e.frequency >= 0.01);
            CHECK(e.frequency <= 1.0);
            CHECK(e.level == tree.level[e.color]);
            // the recorded occurrence actually carries the color
            CHECK(assignment.at(e.graph_index, e.root_node, e.level) == e.color);
        }
    }
    SUBCASE("min frequency one keeps only universal colors") {
        const auto entries = top_colors(tree, ds, assignment, 20, 1.0);
        for (const auto& e : entries) CHECK(e.frequency == 1.0);
        // figure1: exactly the two level-0 labels and the shared level-1
        // color appear in both graphs
        CHECK(entries.size() == 3);
    }
    SUBCASE("ties broken by color id") {
        Wilt flat = tree;
        std::fill(flat.weight.begin(), flat.weight.end(), 1.0);
        const auto entries = top_colors(flat, ds, assignment, 4, 0.01);
        REQUIRE(entries.size() == 4);
        for (std::size_t i = 1; i < entries.size(); ++i)
            CHECK(entries[i - 1].color < entries[i].color);
    }
    SUBCASE("m validated") { CHECK_THROWS_AS(top_colors(tree, ds, assignment, 0), Error); }
}

TEST_CASE("export_occurrence") {
    const std::filesystem::path fixtures = WILTKIT_TEST_DATA_DIR;
    const Dataset ds = load_tudataset(fixtures / "figure1", "figure1");
    auto [tree, assignment] = build_wilt(ds, 2);

    auto dot_is_well_formed = [](const std::string& dot) {
        if (dot.rfind("graph ", 0) != 0) return false;
        long depth = 0;
        for (char ch : dot) {
            if (ch == '{') ++depth;
            if (ch == '}') --depth;
            if (depth < 0) return false;
        }
        return depth == 0;
    };

    SUBCASE("level-0 color highlights only the root") {
        ColorReportEntry entry{assignment.at(0, 0, 0), 1.0, 0, 1.0, 0, 0};
        const std::string dot = export_occurrence(entry, ds);
        CHECK(dot_is_well_formed(dot));
        CHECK(dot.find("peripheries=2") != std::string::npos);
        // exactly one red node and no red edges at radius zero
        std::size_t red_nodes = 0, red_edges = 0, pos = 0;
        while ((pos = dot.find("color=red", pos)) != std::string::npos) {
            const auto line_start = dot.rfind('\n', pos);
            const std::string line = dot.substr(line_start + 1, pos - line_start);
            (line.find("--") != std::string::npos ? red_edges : red_nodes) += 1;
            ++pos;
        }
        CHECK(red_nodes == 1);
        CHECK(red_edges == 0);
    }
    SUBCASE("level-2 color highlights the two-hop ball") {
        // node 0 of G reaches every node within two hops except none: check
        // against a direct BFS
        ColorReportEntry entry{assignment.at(0, 0, 2), 1.0, 2, 0.5, 0, 0};
        const std::string dot = export_occurrence(entry, ds);
        CHECK(dot_is_well_formed(dot));
        // G from node b: b(0) -> a,d (1 hop) -> c,e (2 hops): all five red
        for (int v = 0; v < 5; ++v) {
            const std::string needle = "n" + std::to_string(v) + " [label=";
            const auto pos = dot.find(needle);
            REQUIRE(pos != std::string::npos);
            const auto line_end = dot.find('\n', pos);
            CHECK(dot.substr(pos, line_end - pos).find("color=red") != std::string::npos);
        }
    }
    SUBCASE("node labels come from the alphabet") {
        ColorReportEntry entry{assignment.at(0, 3, 0), 1.0, 0, 1.0, 0, 3};
        const std::string dot = export_occurrence(entry, ds);
        CHECK(dot.find("[label=\"1\"") != std::string::npos); // node a carries label 1
    }
}
