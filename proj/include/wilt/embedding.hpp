#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "wilt/tree.hpp"

namespace wilt {

enum class Flavor { raw, size, dummy };

const char* flavor_name(Flavor flavor);
Flavor flavor_from_name(const std::string& name);

// Sparse count vector over WILT colors. raw: integer counts, per-level sums
// equal |V_G|. size: counts / |V_G|, per-level sums equal 1. dummy: counts on
// the padded graph, per-level sums equal N with N - |V_G| sitting on the
// dummy chain.
struct WiltEmbedding {
    Flavor flavor = Flavor::raw;
    int graph_size = 0; // |V_G| before any padding
    std::vector<std::pair<ColorId, double>> entries; // sorted by color, nonzero
};

WiltEmbedding embed(const Dataset& dataset, int graph_index, const ColorAssignment& assignment,
                    const Wilt& tree, Flavor flavor);

std::vector<WiltEmbedding> embed_dataset(const Dataset& dataset, const ColorAssignment& assignment,
                                         const Wilt& tree, Flavor flavor);

// CSV rows: graph_index,color_id,value
void export_embeddings_csv(const std::vector<WiltEmbedding>& embeddings,
                           const std::filesystem::path& path);

} // namespace wilt
