#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "wilt/wl.hpp"

namespace wilt {

// Parent sentinel of level-0 colors: their parent is the virtual root.
inline constexpr ColorId kRootParent = kNoColor;

// Weisfeiler Leman Labeling Tree: one node per refinement color plus a
// virtual root above the level-0 colors. Each color owns the edge to its
// parent, so `weight[c]` is the weight of that edge.
struct Wilt {
    int iterations = 0;               // L
    std::vector<ColorId> parent;      // kRootParent for level-0 colors
    std::vector<int> level;           // refinement level per color
    std::vector<double> weight;       // nonnegative edge weights
    std::vector<ColorId> dummy_chain; // c_dummy^0..L when built with padding, else empty
    std::string provenance;

    ColorId num_colors() const { return static_cast<ColorId>(parent.size()); }
    ColorId num_edges() const { return num_colors(); }
    bool has_dummy_chain() const { return !dummy_chain.empty(); }
    void check_color(ColorId color) const;
};

// Builds the tree from an L-iteration refinement; weights start at 1.
std::pair<Wilt, ColorAssignment> build_wilt(const Dataset& dataset, int iterations);

// Equivalent to build_wilt(add_dummy_nodes(dataset), iterations); the dummy
// color chain is recorded on the tree.
std::pair<Wilt, ColorAssignment> build_wilt_dummy(const Dataset& dataset, int iterations);

// Sum of edge weights along the unique a-b path (ascent to the lowest common
// ancestor).
double path_distance(const Wilt& tree, ColorId a, ColorId b);

// Copy of the tree with every edge weight set to `value`.
Wilt set_uniform_weights(Wilt tree, double value);

// Preset weights reproducing the WWL and WLOA pseudometrics.
double wwl_preset_weight(int iterations); // 1 / (2 (L + 1))
inline constexpr double kWloaPresetWeight = 0.5;

// Versioned JSON serialization (.wilt.json); lossless round trip.
void save_wilt(const Wilt& tree, const std::filesystem::path& path);
Wilt load_wilt(const std::filesystem::path& path);

} // namespace wilt
