#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wilt/distill.hpp"

namespace wilt {

// Mean functional-distance contrast between each graph's k nearest neighbors
// under `target` and all remaining graphs: mean over G of B_k(G) - A_k(G).
// Requires dataset targets; k must satisfy 1 <= k <= |D| - 2. A positive
// subset_cap restricts the computation to the first subset_cap graphs.
double ali_k(const TargetDistance& target, const Dataset& dataset, int k, int subset_cap = 0);

struct RmseAlignment {
    double rmse = 0.0;
    double alpha = 0.0;
};

// Max-normalizes both samples, fits d1 ~ alpha * d2 with zero intercept
// (alpha solved analytically) and returns the root mean squared residual.
RmseAlignment rmse_align(const std::vector<double>& d1, const std::vector<double>& d2);

// Uniform sample of distinct-index pairs without replacement; returns all
// pairs when count is not smaller than the number available.
PairList sample_pairs(int n_graphs, long long count, std::uint64_t seed);

struct HistogramRow {
    double lo = 0.0;
    double hi = 0.0;
    long long count = 0;
};

// Histogram of all edge weights over [0, max weight]; counts sum to the edge
// count.
std::vector<HistogramRow> weight_histogram(const Wilt& tree, int bins);
void save_histogram_csv(const std::vector<HistogramRow>& rows, const std::filesystem::path& path);

struct ColorReportEntry {
    ColorId color = 0;
    double weight = 0.0;
    int level = 0;
    double frequency = 0.0; // fraction of graphs containing the color
    int graph_index = 0;    // one occurrence: host graph
    int root_node = 0;      // and the node carrying the color there
};

// Colors present in at least min_frequency of all graphs, sorted by weight
// descending (ties by color id ascending), truncated to the top m. Each entry
// carries the first occurrence in dataset order.
std::vector<ColorReportEntry> top_colors(const Wilt& tree, const Dataset& dataset,
                                         const ColorAssignment& assignment, int m,
                                         double min_frequency = 0.01);

// DOT rendering of the occurrence's host graph with the radius-`level` ball
// around the root node highlighted in red; the root is double-circled.
std::string export_occurrence(const ColorReportEntry& entry, const Dataset& dataset);

} // namespace wilt
