#pragma once

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "wilt/analysis.hpp"
#include "wilt/distill.hpp"
#include "wilt/metrics.hpp"

#include "../src/rng.hpp"

namespace testsupport {

using wilt::ColorId;

inline wilt::Graph random_graph(wilt::detail::Rng& rng, int min_nodes, int max_nodes,
                                int node_alphabet, int edge_alphabet, double edge_prob) {
    wilt::Graph g;
    g.num_nodes = min_nodes + static_cast<int>(rng.below(max_nodes - min_nodes + 1));
    for (int v = 0; v < g.num_nodes; ++v)
        g.node_labels.push_back(static_cast<int>(rng.below(node_alphabet)));
    for (int u = 0; u < g.num_nodes; ++u)
        for (int v = u + 1; v < g.num_nodes; ++v)
            if (rng.real() < edge_prob) {
                g.edges.emplace_back(u, v);
                g.edge_labels.push_back(static_cast<int>(rng.below(edge_alphabet)));
            }
    return g;
}

inline wilt::Dataset random_dataset(wilt::detail::Rng& rng, int num_graphs, int min_nodes,
                                    int max_nodes, int node_alphabet = 2, int edge_alphabet = 2,
                                    double edge_prob = 0.4) {
    wilt::Dataset ds;
    ds.name = "random";
    for (int i = 0; i < num_graphs; ++i)
        ds.graphs.push_back(random_graph(rng, min_nodes, max_nodes, node_alphabet, edge_alphabet,
                                         edge_prob));
    return ds;
}

inline wilt::Graph permuted_graph(const wilt::Graph& g, const std::vector<int>& perm) {
    wilt::Graph out;
    out.num_nodes = g.num_nodes;
    out.node_labels.resize(g.num_nodes);
    for (int v = 0; v < g.num_nodes; ++v) out.node_labels[perm[v]] = g.node_labels[v];
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        auto [u, v] = g.edges[e];
        int pu = perm[u], pv = perm[v];
        out.edges.emplace_back(std::min(pu, pv), std::max(pu, pv));
        out.edge_labels.push_back(g.edge_labels[e]);
    }
    out.target = g.target;
    return out;
}

inline std::vector<int> random_permutation(wilt::detail::Rng& rng, int n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    return perm;
}

// Brute-force isomorphism over all node permutations; only for tiny graphs.
inline bool exhaustively_isomorphic(const wilt::Graph& a, const wilt::Graph& b) {
    if (a.num_nodes != b.num_nodes || a.edges.size() != b.edges.size()) return false;
    auto edge_set = [](const wilt::Graph& g) {
        std::vector<std::tuple<int, int, int>> edges;
        for (std::size_t e = 0; e < g.edges.size(); ++e)
            edges.emplace_back(g.edges[e].first, g.edges[e].second, g.edge_labels[e]);
        std::sort(edges.begin(), edges.end());
        return edges;
    };
    const auto target_edges = edge_set(b);
    std::vector<int> perm(a.num_nodes);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool labels_match = true;
        for (int v = 0; v < a.num_nodes && labels_match; ++v)
            labels_match = a.node_labels[v] == b.node_labels[perm[v]];
        if (!labels_match) continue;
        if (edge_set(permuted_graph(a, perm)) == target_edges) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

// Colors ordered level by level, within a level by (parent position, id).
// Reproduces the left-to-right numbering used by the tree figures.
inline std::vector<ColorId> canonical_order(const wilt::Wilt& tree) {
    const ColorId n = tree.num_colors();
    std::vector<int> position(n, -1);
    std::vector<ColorId> order;
    order.reserve(n);
    for (int l = 0; l <= tree.iterations; ++l) {
        std::vector<ColorId> ids;
        for (ColorId c = 0; c < n; ++c)
            if (tree.level[c] == l) ids.push_back(c);
        std::sort(ids.begin(), ids.end(), [&](ColorId a, ColorId b) {
            const int pa = a < n && tree.parent[a] != wilt::kRootParent ? position[tree.parent[a]] : -1;
            const int pb = b < n && tree.parent[b] != wilt::kRootParent ? position[tree.parent[b]] : -1;
            return pa != pb ? pa < pb : a < b;
        });
        for (ColorId c : ids) {
            position[c] = static_cast<int>(order.size());
            order.push_back(c);
        }
    }
    return order;
}

inline std::vector<double> dense_in_canonical_order(const wilt::WiltEmbedding& embedding,
                                                    const wilt::Wilt& tree) {
    const auto order = canonical_order(tree);
    std::vector<double> dense(tree.num_colors(), 0.0);
    std::vector<double> by_color(tree.num_colors(), 0.0);
    for (const auto& [c, value] : embedding.entries) by_color[c] = value;
    for (std::size_t p = 0; p < order.size(); ++p) dense[p] = by_color[order[p]];
    return dense;
}

// Independent WWL route: optimal transport with the Hamming ground distance
// over the node color sequences, masses 1/|V| integerized by |V_G| |V_H|.
inline double hamming_ot(const wilt::ColorAssignment& assignment, int graph_a, int graph_b) {
    const int na = assignment.num_nodes(graph_a);
    const int nb = assignment.num_nodes(graph_b);
    const int levels = assignment.iterations + 1;
    std::vector<double> cost(static_cast<std::size_t>(na) * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            int differing = 0;
            for (int l = 0; l < levels; ++l)
                differing += assignment.at(graph_a, i, l) != assignment.at(graph_b, j, l);
            cost[static_cast<std::size_t>(i) * nb + j] = static_cast<double>(differing) / levels;
        }
    std::vector<long long> supply(na, nb), demand(nb, na);
    return wilt::min_cost_transport(supply, demand, cost) / (static_cast<double>(na) * nb);
}

// Independent WLOA route: (L+1) max(|V_G|, |V_H|) minus the best assignment
// kernel value over all bijections of the dummy-extended node sets.
inline double wloa_exhaustive(const wilt::ColorAssignment& assignment, int graph_a, int graph_b) {
    const int na = assignment.num_nodes(graph_a);
    const int nb = assignment.num_nodes(graph_b);
    const int levels = assignment.iterations + 1;
    const int m = std::max(na, nb);
    // node -> color sequence; dummy extensions get no sequence
    auto sequences = [&](int graph, int count) {
        std::vector<std::optional<std::vector<ColorId>>> seqs(m);
        for (int v = 0; v < count; ++v) {
            std::vector<ColorId> seq(levels);
            for (int l = 0; l < levels; ++l) seq[l] = assignment.at(graph, v, l);
            seqs[v] = std::move(seq);
        }
        return seqs;
    };
    const auto seq_a = sequences(graph_a, na);
    const auto seq_b = sequences(graph_b, nb);
    auto base_kernel = [&](int i, int j) {
        if (!seq_a[i] || !seq_b[j]) return 0;
        int matches = 0;
        for (int l = 0; l < levels; ++l) matches += (*seq_a[i])[l] == (*seq_b[j])[l];
        return matches;
    };
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    long long best = -1;
    do {
        long long value = 0;
        for (int i = 0; i < m; ++i) value += base_kernel(i, perm[i]);
        best = std::max(best, value);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(levels) * m - static_cast<double>(best);
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        base_ = std::filesystem::temp_directory_path() /
                ("wiltkit_" + tag + "_" + std::to_string(counter_++));
        std::filesystem::remove_all(base_);
        std::filesystem::create_directories(base_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(base_, ec);
    }
    const std::filesystem::path& path() const { return base_; }

private:
    static inline int counter_ = 0;
    std::filesystem::path base_;
};

} // namespace testsupport
