#include "wilt/tree.hpp"

#include <fstream>

#include "wilt/error.hpp"

#include <json.hpp>

namespace wilt {

namespace {
constexpr int kWiltFormatVersion = 1;
}

void Wilt::check_color(ColorId color) const {
    if (color >= num_colors()) throw Error("unknown color id " + std::to_string(color));
}

std::pair<Wilt, ColorAssignment> build_wilt(const Dataset& dataset, int iterations) {
    auto [assignment, table] = refine(dataset, iterations);

    Wilt tree;
    tree.iterations = iterations;
    tree.parent = table.previous; // a color's parent is its key's previous color
    tree.level.resize(table.num_colors());
    for (int l = 0; l <= iterations; ++l)
        for (ColorId c = table.level_begin[l]; c < table.level_begin[l + 1]; ++c)
            tree.level[c] = l;
    tree.weight.assign(table.num_colors(), 1.0);
    tree.provenance = dataset.name;
    if (dataset.dummy_label) {
        ColorId chain = table.level0.at(*dataset.dummy_label);
        tree.dummy_chain.push_back(chain);
        for (int l = 1; l <= iterations; ++l) {
            chain = table.refined[l - 1].at(ColorKey{chain, {}});
            tree.dummy_chain.push_back(chain);
        }
        tree.provenance += " (dummy padded)";
    }
    return {std::move(tree), std::move(assignment)};
}

std::pair<Wilt, ColorAssignment> build_wilt_dummy(const Dataset& dataset, int iterations) {
    return build_wilt(add_dummy_nodes(dataset), iterations);
}

double path_distance(const Wilt& tree, ColorId a, ColorId b) {
    tree.check_color(a);
    tree.check_color(b);
    double total = 0.0;
    // equalize depths, then ascend jointly to the lowest common ancestor
    while (tree.level[a] > tree.level[b]) {
        total += tree.weight[a];
        a = tree.parent[a];
    }
    while (tree.level[b] > tree.level[a]) {
        total += tree.weight[b];
        b = tree.parent[b];
    }
    while (a != b) {
        total += tree.weight[a] + tree.weight[b];
        if (tree.parent[a] == kRootParent) return total; // met only at the root
        a = tree.parent[a];
        b = tree.parent[b];
    }
    return total;
}

Wilt set_uniform_weights(Wilt tree, double value) {
    if (value < 0.0) throw Error("edge weights must be nonnegative");
    std::fill(tree.weight.begin(), tree.weight.end(), value);
    return tree;
}

double wwl_preset_weight(int iterations) { return 1.0 / (2.0 * (iterations + 1)); }

void save_wilt(const Wilt& tree, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["version"] = kWiltFormatVersion;
    j["L"] = tree.iterations;
    j["num_colors"] = tree.num_colors();
    auto parents = nlohmann::ordered_json::array();
    for (ColorId p : tree.parent)
        parents.push_back(p == kRootParent ? -1 : static_cast<long long>(p));
    j["parent"] = std::move(parents);
    j["level"] = tree.level;
    j["weight"] = tree.weight;
    j["dummy_chain"] = tree.dummy_chain;
    j["provenance"] = tree.provenance;
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw Error("write failed for " + path.string());
}

Wilt load_wilt(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(path.string() + ": corrupt wilt file: " + e.what());
    }
    if (!j.contains("version") || !j["version"].is_number_integer())
        throw Error(path.string() + ": corrupt wilt file: missing version");
    if (j["version"].get<int>() != kWiltFormatVersion)
        throw Error(path.string() + ": unsupported wilt file version " +
                    std::to_string(j["version"].get<int>()));
    Wilt tree;
    try {
        tree.iterations = j.at("L").get<int>();
        const auto n = j.at("num_colors").get<std::size_t>();
        for (const auto& p : j.at("parent")) {
            long long value = p.get<long long>();
            tree.parent.push_back(value < 0 ? kRootParent : static_cast<ColorId>(value));
        }
        tree.level = j.at("level").get<std::vector<int>>();
        tree.weight = j.at("weight").get<std::vector<double>>();
        tree.dummy_chain = j.at("dummy_chain").get<std::vector<ColorId>>();
        tree.provenance = j.at("provenance").get<std::string>();
        if (tree.parent.size() != n || tree.level.size() != n || tree.weight.size() != n)
            throw Error(path.string() + ": corrupt wilt file: inconsistent array lengths");
    } catch (const nlohmann::json::exception& e) {
        throw Error(path.string() + ": corrupt wilt file: " + e.what());
    }
    for (ColorId c = 0; c < tree.num_colors(); ++c) {
        if (tree.weight[c] < 0.0) throw Error(path.string() + ": negative edge weight");
        if (tree.parent[c] == kRootParent) {
            if (tree.level[c] != 0) throw Error(path.string() + ": root child above level 0");
        } else {
            if (tree.parent[c] >= tree.num_colors())
                throw Error(path.string() + ": parent id out of range");
            if (tree.level[c] != tree.level[tree.parent[c]] + 1)
                throw Error(path.string() + ": parent level mismatch");
        }
    }
    return tree;
}

} // namespace wilt
