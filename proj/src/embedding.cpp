#include "wilt/embedding.hpp"

#include <algorithm>
#include <fstream>

#include "wilt/error.hpp"

namespace wilt {

const char* flavor_name(Flavor flavor) {
    switch (flavor) {
    case Flavor::raw: return "raw";
    case Flavor::size: return "size";
    case Flavor::dummy: return "dummy";
    }
    return "?";
}

Flavor flavor_from_name(const std::string& name) {
    if (name == "raw") return Flavor::raw;
    if (name == "size") return Flavor::size;
    if (name == "dummy") return Flavor::dummy;
    throw Error("unknown flavor '" + name + "' (expected raw, size, or dummy)");
}

WiltEmbedding embed(const Dataset& dataset, int graph_index, const ColorAssignment& assignment,
                    const Wilt& tree, Flavor flavor) {
    if (graph_index < 0 || graph_index >= static_cast<int>(dataset.graphs.size()))
        throw Error("graph index out of range");
    if (assignment.num_graphs() != static_cast<int>(dataset.graphs.size()))
        throw Error("assignment does not cover the dataset");
    if (flavor == Flavor::dummy && !tree.has_dummy_chain())
        throw Error("dummy flavor requested on a WILT without a dummy chain");
    if (flavor != Flavor::dummy && dataset.dummy_label)
        throw Error("raw and size flavors operate on the unpadded dataset");

    const int levels = assignment.iterations + 1;
    const int n = assignment.num_nodes(graph_index);
    if (n != dataset.graphs[graph_index].num_nodes)
        throw Error("assignment does not match the graph (was it refined on this dataset?)");

    // one count per (node, level) incidence
    std::vector<std::pair<ColorId, double>> entries;
    entries.reserve(static_cast<std::size_t>(n) * levels);
    for (int v = 0; v < n; ++v)
        for (int l = 0; l < levels; ++l)
            entries.emplace_back(assignment.at(graph_index, v, l), 1.0);
    std::sort(entries.begin(), entries.end());
    std::size_t out = 0;
    for (std::size_t i = 0; i < entries.size();) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < entries.size() && entries[j].first == entries[i].first) sum += entries[j++].second;
        entries[out++] = {entries[i].first, sum};
        i = j;
    }
    entries.resize(out);

    WiltEmbedding result;
    result.flavor = flavor;
    result.graph_size = dataset.original_size(graph_index);
    if (flavor == Flavor::size) {
        for (auto& [c, value] : entries) value /= result.graph_size;
    }
    result.entries = std::move(entries);
    for (const auto& [c, value] : result.entries) tree.check_color(c);
    return result;
}

std::vector<WiltEmbedding> embed_dataset(const Dataset& dataset, const ColorAssignment& assignment,
                                         const Wilt& tree, Flavor flavor) {
    std::vector<WiltEmbedding> result;
    result.reserve(dataset.graphs.size());
    for (int gi = 0; gi < static_cast<int>(dataset.graphs.size()); ++gi)
        result.push_back(embed(dataset, gi, assignment, tree, flavor));
    return result;
}

void export_embeddings_csv(const std::vector<WiltEmbedding>& embeddings,
                           const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "graph_index,color_id,value\n";
    out.precision(17);
    for (std::size_t gi = 0; gi < embeddings.size(); ++gi)
        for (const auto& [c, value] : embeddings[gi].entries)
            out << gi << ',' << c << ',' << value << '\n';
    if (!out) throw Error("write failed for " + path.string());
}

} // namespace wilt
