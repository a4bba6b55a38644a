#include "wilt/wl.hpp"

#include <algorithm>

#include "wilt/error.hpp"

#include <json.hpp>

namespace wilt {

int ColorTable::level_of(ColorId color) const {
    if (color >= num_colors()) throw Error("unknown color id " + std::to_string(color));
    // level_begin is sorted; find the level whose range contains the id
    auto it = std::upper_bound(level_begin.begin(), level_begin.end(), color);
    return static_cast<int>(it - level_begin.begin()) - 1;
}

std::pair<ColorAssignment, ColorTable> refine(const Dataset& dataset, int iterations) {
    if (iterations < 1) throw Error("refinement needs at least one iteration");
    validate_dataset(dataset);

    const int levels = iterations + 1;
    const int num_graphs = static_cast<int>(dataset.graphs.size());

    ColorTable table;
    table.iterations = iterations;
    table.refined.resize(iterations);
    ColorAssignment assignment;
    assignment.iterations = iterations;
    assignment.colors.resize(num_graphs);

    // adjacency with edge labels
    std::vector<std::vector<std::vector<std::pair<int, int>>>> adjacency(num_graphs);
    for (int gi = 0; gi < num_graphs; ++gi) {
        const Graph& g = dataset.graphs[gi];
        adjacency[gi].resize(g.num_nodes);
        for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
            auto [u, v] = g.edges[ei];
            adjacency[gi][u].emplace_back(v, g.edge_labels[ei]);
            adjacency[gi][v].emplace_back(u, g.edge_labels[ei]);
        }
        assignment.colors[gi].assign(static_cast<std::size_t>(g.num_nodes) * levels, kNoColor);
    }

    ColorId next_id = 0;
    table.level_begin.push_back(0);

    // level 0: node labels
    for (int gi = 0; gi < num_graphs; ++gi) {
        const Graph& g = dataset.graphs[gi];
        for (int v = 0; v < g.num_nodes; ++v) {
            auto [it, inserted] = table.level0.emplace(g.node_labels[v], next_id);
            if (inserted) {
                ++next_id;
                table.previous.push_back(kNoColor);
            }
            assignment.colors[gi][static_cast<std::size_t>(v) * levels] = it->second;
        }
    }
    // a padded dataset owns its dummy chain even when no graph needed padding
    if (dataset.dummy_label) {
        auto [it, inserted] = table.level0.emplace(*dataset.dummy_label, next_id);
        (void)it;
        if (inserted) {
            ++next_id;
            table.previous.push_back(kNoColor);
        }
    }
    table.level_begin.push_back(next_id);

    for (int l = 1; l <= iterations; ++l) {
        auto& interned = table.refined[l - 1];
        for (int gi = 0; gi < num_graphs; ++gi) {
            const Graph& g = dataset.graphs[gi];
            for (int v = 0; v < g.num_nodes; ++v) {
                ColorKey key;
                key.prev = assignment.colors[gi][static_cast<std::size_t>(v) * levels + (l - 1)];
                key.neighbors.reserve(adjacency[gi][v].size());
                for (auto [u, elabel] : adjacency[gi][v])
                    key.neighbors.emplace_back(
                        assignment.colors[gi][static_cast<std::size_t>(u) * levels + (l - 1)], elabel);
                std::sort(key.neighbors.begin(), key.neighbors.end());
                auto [it, inserted] = interned.emplace(std::move(key), next_id);
                if (inserted) {
                    ++next_id;
                    table.previous.push_back(it->first.prev);
                }
                assignment.colors[gi][static_cast<std::size_t>(v) * levels + l] = it->second;
            }
        }
        if (dataset.dummy_label) {
            // The chain key at level l is (chain color at level l-1, empty
            // neighborhood).
            ColorId prev_chain = table.level0.at(*dataset.dummy_label);
            for (int ll = 1; ll < l; ++ll)
                prev_chain = table.refined[ll - 1].at(ColorKey{prev_chain, {}});
            auto [it, inserted] = interned.emplace(ColorKey{prev_chain, {}}, next_id);
            (void)it;
            if (inserted) {
                ++next_id;
                table.previous.push_back(prev_chain);
            }
        }
        table.level_begin.push_back(next_id);
    }

    return {std::move(assignment), std::move(table)};
}

std::vector<ColorId> final_color_multiset(const ColorAssignment& assignment, int graph_index) {
    if (graph_index < 0 || graph_index >= assignment.num_graphs())
        throw Error("graph index out of range");
    const int levels = assignment.iterations + 1;
    std::vector<ColorId> multiset;
    const int n = assignment.num_nodes(graph_index);
    multiset.reserve(n);
    for (int v = 0; v < n; ++v)
        multiset.push_back(assignment.colors[graph_index][static_cast<std::size_t>(v) * levels +
                                                          assignment.iterations]);
    std::sort(multiset.begin(), multiset.end());
    return multiset;
}

std::string table_to_json(const ColorTable& table) {
    nlohmann::ordered_json root;
    root["iterations"] = table.iterations;
    nlohmann::ordered_json level0;
    for (const auto& [label, id] : table.level0) level0[std::to_string(label)] = id;
    root["levels"]["0"] = std::move(level0);
    for (int l = 1; l <= table.iterations; ++l) {
        nlohmann::ordered_json level;
        for (const auto& [key, id] : table.refined[l - 1]) {
            std::string repr = std::to_string(key.prev) + "|";
            for (auto [c, e] : key.neighbors)
                repr += "(" + std::to_string(c) + "," + std::to_string(e) + ")";
            level[repr] = id;
        }
        root["levels"][std::to_string(l)] = std::move(level);
    }
    return root.dump(2);
}

std::string assignment_to_json(const ColorAssignment& assignment) {
    nlohmann::ordered_json root;
    root["iterations"] = assignment.iterations;
    auto graphs = nlohmann::ordered_json::array();
    const int levels = assignment.iterations + 1;
    for (int gi = 0; gi < assignment.num_graphs(); ++gi) {
        auto nodes = nlohmann::ordered_json::array();
        for (int v = 0; v < assignment.num_nodes(gi); ++v) {
            auto seq = nlohmann::ordered_json::array();
            for (int l = 0; l < levels; ++l)
                seq.push_back(assignment.colors[gi][static_cast<std::size_t>(v) * levels + l]);
            nodes.push_back(std::move(seq));
        }
        graphs.push_back(std::move(nodes));
    }
    root["graphs"] = std::move(graphs);
    return root.dump(2);
}

} // namespace wilt
