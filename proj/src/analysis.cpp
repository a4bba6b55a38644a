#include "wilt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "wilt/error.hpp"
#include "rng.hpp"

namespace wilt {

double ali_k(const TargetDistance& target, const Dataset& dataset, int k, int subset_cap) {
    if (!dataset.has_targets) throw Error("alignment needs dataset targets");
    if (target.size() != static_cast<int>(dataset.graphs.size()))
        throw Error("target distance size does not match the dataset");
    const int n = subset_cap > 0 ? std::min<int>(subset_cap, target.size()) : target.size();
    if (k < 1 || k > n - 2) throw Error("k must satisfy 1 <= k <= |D| - 2");

    double lo = 0.0, hi = 0.0;
    if (dataset.task == Task::regression) std::tie(lo, hi) = target_range(dataset);

    auto func = [&](int i, int j) {
        return d_func(dataset.graphs[i].target, dataset.graphs[j].target, dataset.task, lo, hi);
    };

    double total = 0.0;
    std::vector<int> order(n - 1);
    for (int g = 0; g < n; ++g) {
        int out = 0;
        for (int h = 0; h < n; ++h)
            if (h != g) order[out++] = h;
        // nearest first; ties at equal distance resolved by smaller index
        std::sort(order.begin(), order.end(), [&](int x, int y) {
            const double dx = target.at(g, x);
            const double dy = target.at(g, y);
            return dx != dy ? dx < dy : x < y;
        });
        double near_sum = 0.0, far_sum = 0.0;
        for (int r = 0; r < n - 1; ++r)
            (r < k ? near_sum : far_sum) += func(g, order[r]);
        total += far_sum / (n - k - 1) - near_sum / k;
    }
    return total / n;
}

RmseAlignment rmse_align(const std::vector<double>& d1, const std::vector<double>& d2) {
    if (d1.size() != d2.size()) throw Error("alignment samples must pair the same pairs");
    if (d1.empty()) throw Error("empty alignment sample");
    double max1 = 0.0, max2 = 0.0;
    for (double v : d1) {
        if (!std::isfinite(v)) throw Error("alignment values must be finite");
        max1 = std::max(max1, v);
    }
    for (double v : d2) {
        if (!std::isfinite(v)) throw Error("alignment values must be finite");
        max2 = std::max(max2, v);
    }
    if (max1 <= 0.0) throw Error("all-zero sample for the first metric");
    if (max2 <= 0.0) throw Error("all-zero sample for the second metric");

    double cross = 0.0, square = 0.0;
    for (std::size_t i = 0; i < d1.size(); ++i) {
        const double a = d1[i] / max1;
        const double b = d2[i] / max2;
        cross += a * b;
        square += b * b;
    }
    const double alpha = cross / square;
    double residual = 0.0;
    for (std::size_t i = 0; i < d1.size(); ++i) {
        const double r = d1[i] / max1 - alpha * (d2[i] / max2);
        residual += r * r;
    }
    return {std::sqrt(residual / static_cast<double>(d1.size())), alpha};
}

PairList sample_pairs(int n_graphs, long long count, std::uint64_t seed) {
    if (n_graphs < 2) throw Error("pair sampling needs at least two graphs");
    if (count < 1) throw Error("pair count must be positive");
    const long long total = static_cast<long long>(n_graphs) * (n_graphs - 1) / 2;
    PairList pairs;
    if (count >= total) {
        pairs.reserve(static_cast<std::size_t>(total));
        for (int i = 0; i < n_graphs; ++i)
            for (int j = i + 1; j < n_graphs; ++j) pairs.emplace_back(i, j);
        return pairs;
    }
    detail::Rng rng(seed);
    std::set<std::pair<int, int>> seen;
    pairs.reserve(static_cast<std::size_t>(count));
    while (static_cast<long long>(pairs.size()) < count) {
        const int i = static_cast<int>(rng.below(n_graphs));
        int j = static_cast<int>(rng.below(n_graphs - 1));
        if (j >= i) ++j;
        const auto key = std::minmax(i, j);
        if (seen.insert(key).second) pairs.emplace_back(key.first, key.second);
    }
    return pairs;
}

std::vector<HistogramRow> weight_histogram(const Wilt& tree, int bins) {
    if (bins < 1) throw Error("histogram needs at least one bin");
    double max_weight = 0.0;
    for (double w : tree.weight) max_weight = std::max(max_weight, w);
    const double hi = max_weight > 0.0 ? max_weight : 1.0;
    const double width = hi / bins;
    std::vector<HistogramRow> rows(bins);
    for (int b = 0; b < bins; ++b) rows[b] = {b * width, (b + 1) * width, 0};
    for (double w : tree.weight) {
        int b = static_cast<int>(w / width);
        b = std::clamp(b, 0, bins - 1);
        ++rows[b].count;
    }
    return rows;
}

void save_histogram_csv(const std::vector<HistogramRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out.precision(17);
    out << "bin_lo,bin_hi,count\n";
    for (const auto& row : rows) out << row.lo << ',' << row.hi << ',' << row.count << '\n';
    if (!out) throw Error("write failed for " + path.string());
}

std::vector<ColorReportEntry> top_colors(const Wilt& tree, const Dataset& dataset,
                                         const ColorAssignment& assignment, int m,
                                         double min_frequency) {
    if (m < 1) throw Error("top color count must be >= 1");
    if (assignment.num_graphs() != static_cast<int>(dataset.graphs.size()))
        throw Error("assignment does not cover the dataset");
    const ColorId num_colors = tree.num_colors();
    const int num_graphs = assignment.num_graphs();
    const int levels = assignment.iterations + 1;

    std::vector<int> graphs_containing(num_colors, 0);
    std::vector<int> occurrence_graph(num_colors, -1);
    std::vector<int> occurrence_node(num_colors, -1);
    std::vector<char> in_current(num_colors, 0);
    std::vector<ColorId> current;
    for (int gi = 0; gi < num_graphs; ++gi) {
        current.clear();
        for (int v = 0; v < assignment.num_nodes(gi); ++v) {
            for (int l = 0; l < levels; ++l) {
                const ColorId c = assignment.at(gi, v, l);
                if (!in_current[c]) {
                    in_current[c] = 1;
                    current.push_back(c);
                }
                if (occurrence_graph[c] < 0) {
                    occurrence_graph[c] = gi;
                    occurrence_node[c] = v;
                }
            }
        }
        for (ColorId c : current) {
            ++graphs_containing[c];
            in_current[c] = 0;
        }
    }

    std::vector<ColorReportEntry> entries;
    for (ColorId c = 0; c < num_colors; ++c) {
        const double frequency = static_cast<double>(graphs_containing[c]) / num_graphs;
        if (graphs_containing[c] == 0 || frequency < min_frequency) continue;
        entries.push_back({c, tree.weight[c], tree.level[c], frequency, occurrence_graph[c],
                           occurrence_node[c]});
    }
    std::sort(entries.begin(), entries.end(), [](const ColorReportEntry& a, const ColorReportEntry& b) {
        return a.weight != b.weight ? a.weight > b.weight : a.color < b.color;
    });
    if (static_cast<int>(entries.size()) > m) entries.resize(m);
    return entries;
}

std::string export_occurrence(const ColorReportEntry& entry, const Dataset& dataset) {
    if (entry.graph_index < 0 || entry.graph_index >= static_cast<int>(dataset.graphs.size()))
        throw Error("occurrence graph index out of range");
    const Graph& g = dataset.graphs[entry.graph_index];
    if (entry.root_node < 0 || entry.root_node >= g.num_nodes)
        throw Error("occurrence root node out of range");

    // ball of radius `level` around the root
    std::vector<int> dist(g.num_nodes, -1);
    std::vector<std::vector<int>> adjacency(g.num_nodes);
    for (auto [u, v] : g.edges) {
        adjacency[u].push_back(v);
        adjacency[v].push_back(u);
    }
    std::queue<int> frontier;
    dist[entry.root_node] = 0;
    frontier.push(entry.root_node);
    while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop();
        if (dist[v] >= entry.level) continue;
        for (int u : adjacency[v])
            if (dist[u] < 0) {
                dist[u] = dist[v] + 1;
                frontier.push(u);
            }
    }
    auto highlighted = [&](int v) { return dist[v] >= 0 && dist[v] <= entry.level; };

    std::ostringstream out;
    out << "graph color_" << entry.color << " {\n";
    out << "  // color " << entry.color << " level " << entry.level << " weight " << entry.weight
        << " graph " << entry.graph_index << " root " << entry.root_node << "\n";
    out << "  node [shape=circle];\n";
    for (int v = 0; v < g.num_nodes; ++v) {
        out << "  n" << v << " [label=\"" << g.node_labels[v] << "\"";
        if (highlighted(v)) out << ", color=red";
        if (v == entry.root_node) out << ", peripheries=2";
        out << "];\n";
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto [u, v] = g.edges[e];
        out << "  n" << u << " -- n" << v << " [label=\"" << g.edge_labels[e] << "\"";
        if (highlighted(u) && highlighted(v)) out << ", color=red";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace wilt
