#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wilt {

enum class Task { classification, regression };

// Finite node/edge-labeled undirected graph. Node ids are 0-based and
// contiguous; labels are integers from a finite alphabet. `target` is a class
// id (integral value) or a regression value and is only meaningful when the
// owning dataset has targets.
struct Graph {
    int num_nodes = 0;
    std::vector<std::pair<int, int>> edges; // normalized u < v
    std::vector<int> node_labels;           // one per node
    std::vector<int> edge_labels;           // one per edge; all zero if the source had none
    double target = 0.0;

    bool operator==(const Graph&) const = default;
};

struct Dataset {
    std::string name;
    Task task = Task::classification;
    bool has_targets = false;
    std::vector<Graph> graphs;

    // Set by add_dummy_nodes: the reserved padding label and the pre-padding
    // graph sizes (parallel to `graphs`).
    std::optional<int> dummy_label;
    std::vector<int> original_sizes;

    int max_node_label() const;
    int max_graph_size() const;
    int original_size(int graph_index) const;

    // Content equality ignoring the provenance name.
    bool same_content(const Dataset& other) const;
};

// Throws wilt::Error on any structural violation (self-loops, duplicate or
// out-of-range edges, label/target shape mismatches).
void validate_dataset(const Dataset& dataset);

// TUDataset text format: <name>_A.txt (1-indexed edge list with both
// directions present), <name>_graph_indicator.txt, optional node/edge label
// and graph label/attribute files.
Dataset load_tudataset(const std::filesystem::path& directory, const std::string& name);

// Newline-delimited JSON records {num_nodes, edges, node_labels,
// [edge_labels], [target]}. Graph order equals file order.
Dataset load_json_graphs(const std::filesystem::path& path);
void save_json_graphs(const Dataset& dataset, const std::filesystem::path& path);

// Pads every graph with isolated nodes carrying a fresh reserved label until
// all graphs have N = max |V| nodes. Idempotent once applied.
Dataset add_dummy_nodes(const Dataset& dataset);

} // namespace wilt
