#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wilt/graph.hpp"

namespace wilt {

// Dense color identifier. Colors are numbered in first-seen order, level by
// level, so every refinement level owns one contiguous id range.
using ColorId = std::uint32_t;
inline constexpr ColorId kNoColor = static_cast<ColorId>(-1);

// Intern key of a refined color: the node's previous color plus the sorted
// multiset of (neighbor color, edge label) pairs.
struct ColorKey {
    ColorId prev = 0;
    std::vector<std::pair<ColorId, int>> neighbors;

    auto operator<=>(const ColorKey&) const = default;
};

// Injective color intern table. Level-0 keys are node labels; level l >= 1
// keys are ColorKeys over level l-1 colors. Frozen after refinement.
struct ColorTable {
    int iterations = 0;                            // L
    std::map<int, ColorId> level0;                 // node label -> color
    std::vector<std::map<ColorKey, ColorId>> refined; // index l-1 holds level-l keys
    std::vector<ColorId> level_begin;              // size L+2; level l ids live in [begin[l], begin[l+1])
    std::vector<ColorId> previous;                 // per color: its key's previous color (kNoColor at level 0)

    ColorId num_colors() const { return static_cast<ColorId>(previous.size()); }
    int level_of(ColorId color) const;
};

// Per-graph, per-node color sequences c_v^(0..L).
struct ColorAssignment {
    int iterations = 0; // L
    std::vector<std::vector<ColorId>> colors; // colors[g][v * (L+1) + l]

    int num_graphs() const { return static_cast<int>(colors.size()); }
    int num_nodes(int graph_index) const {
        return static_cast<int>(colors[graph_index].size()) / (iterations + 1);
    }
    ColorId at(int graph_index, int node, int level) const {
        return colors[graph_index][static_cast<std::size_t>(node) * (iterations + 1) + level];
    }
};

// L iterations of Weisfeiler Leman color refinement with interned (perfect)
// hashing. If the dataset carries a dummy label, the dummy color chain is
// interned at every level even when no graph needed padding.
std::pair<ColorAssignment, ColorTable> refine(const Dataset& dataset, int iterations);

// Sorted multiset of level-L colors of one graph.
std::vector<ColorId> final_color_multiset(const ColorAssignment& assignment, int graph_index);

// Debug serialization (level -> key -> id); not a stability-guaranteed format.
std::string table_to_json(const ColorTable& table);
std::string assignment_to_json(const ColorAssignment& assignment);

} // namespace wilt
