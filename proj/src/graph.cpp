#include "wilt/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "wilt/error.hpp"

#include <json.hpp>

namespace wilt {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    // ignore trailing blank lines
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    return lines;
}

long long parse_int(const std::string& token, const std::filesystem::path& file, std::size_t line_no) {
    const std::string t = trim(token);
    std::size_t pos = 0;
    long long value = 0;
    try {
        value = std::stoll(t, &pos);
    } catch (const std::exception&) {
        throw Error(file.string() + ":" + std::to_string(line_no) + ": expected integer, got '" + t + "'");
    }
    if (pos != t.size())
        throw Error(file.string() + ":" + std::to_string(line_no) + ": expected integer, got '" + t + "'");
    return value;
}

double parse_real(const std::string& token, const std::filesystem::path& file, std::size_t line_no) {
    const std::string t = trim(token);
    std::size_t pos = 0;
    double value = 0;
    try {
        value = std::stod(t, &pos);
    } catch (const std::exception&) {
        throw Error(file.string() + ":" + std::to_string(line_no) + ": expected real, got '" + t + "'");
    }
    if (pos != t.size() || !std::isfinite(value))
        throw Error(file.string() + ":" + std::to_string(line_no) + ": expected real, got '" + t + "'");
    return value;
}

// "u, v" with comma or comma+space separators; whitespace tolerated.
std::pair<long long, long long> parse_edge_line(const std::string& line, const std::filesystem::path& file,
                                                std::size_t line_no) {
    auto comma = line.find(',');
    if (comma == std::string::npos)
        throw Error(file.string() + ":" + std::to_string(line_no) + ": malformed edge line '" + trim(line) + "'");
    long long u = parse_int(line.substr(0, comma), file, line_no);
    long long v = parse_int(line.substr(comma + 1), file, line_no);
    return {u, v};
}

} // namespace

int Dataset::max_node_label() const {
    int max_label = 0;
    for (const Graph& g : graphs)
        for (int label : g.node_labels) max_label = std::max(max_label, label);
    return max_label;
}

int Dataset::max_graph_size() const {
    int n = 0;
    for (const Graph& g : graphs) n = std::max(n, g.num_nodes);
    return n;
}

int Dataset::original_size(int graph_index) const {
    if (!original_sizes.empty()) return original_sizes[graph_index];
    return graphs[graph_index].num_nodes;
}

bool Dataset::same_content(const Dataset& other) const {
    return task == other.task && has_targets == other.has_targets && graphs == other.graphs &&
           dummy_label == other.dummy_label && original_sizes == other.original_sizes;
}

void validate_dataset(const Dataset& dataset) {
    if (dataset.graphs.empty()) throw Error("empty dataset");
    for (std::size_t gi = 0; gi < dataset.graphs.size(); ++gi) {
        const Graph& g = dataset.graphs[gi];
        const std::string where = "graph " + std::to_string(gi) + ": ";
        if (g.num_nodes <= 0) throw Error(where + "graphs must have at least one node");
        if (static_cast<int>(g.node_labels.size()) != g.num_nodes)
            throw Error(where + "node label count does not match node count");
        if (g.edge_labels.size() != g.edges.size())
            throw Error(where + "edge label count does not match edge count");
        std::set<std::pair<int, int>> seen;
        for (auto [u, v] : g.edges) {
            if (u < 0 || v < 0 || u >= g.num_nodes || v >= g.num_nodes)
                throw Error(where + "edge endpoint out of range");
            if (u == v) throw Error(where + "self-loops are not allowed");
            auto key = std::minmax(u, v);
            if (!seen.insert(key).second) throw Error(where + "duplicate edge");
        }
        if (dataset.has_targets && dataset.task == Task::classification &&
            g.target != std::floor(g.target))
            throw Error(where + "classification target is not an integer class id");
    }
    if (!dataset.original_sizes.empty() &&
        dataset.original_sizes.size() != dataset.graphs.size())
        throw Error("original size record does not match graph count");
}

Dataset load_tudataset(const std::filesystem::path& directory, const std::string& name) {
    namespace fs = std::filesystem;
    const fs::path a_path = directory / (name + "_A.txt");
    const fs::path indicator_path = directory / (name + "_graph_indicator.txt");
    const fs::path node_label_path = directory / (name + "_node_labels.txt");
    const fs::path node_attr_path = directory / (name + "_node_attributes.txt");
    const fs::path edge_label_path = directory / (name + "_edge_labels.txt");
    const fs::path graph_label_path = directory / (name + "_graph_labels.txt");
    const fs::path graph_attr_path = directory / (name + "_graph_attributes.txt");

    if (!fs::exists(a_path)) throw Error("missing file " + a_path.string());
    if (!fs::exists(indicator_path)) throw Error("missing file " + indicator_path.string());
    if (!fs::exists(node_label_path) && fs::exists(node_attr_path))
        throw Error(name + " has continuous node attributes only; finite label alphabets are required");

    // Node -> graph map (both 1-indexed in the files); local ids are assigned
    // per graph in file order.
    const auto indicator_lines = read_lines(indicator_path);
    const std::size_t num_nodes_total = indicator_lines.size();
    if (num_nodes_total == 0) throw Error(indicator_path.string() + ": empty dataset");
    std::vector<int> node_graph(num_nodes_total);
    std::vector<int> node_local(num_nodes_total);
    int num_graphs = 0;
    for (std::size_t i = 0; i < num_nodes_total; ++i) {
        long long g = parse_int(indicator_lines[i], indicator_path, i + 1);
        if (g < 1) throw Error(indicator_path.string() + ":" + std::to_string(i + 1) + ": graph id must be >= 1");
        node_graph[i] = static_cast<int>(g - 1);
        num_graphs = std::max(num_graphs, static_cast<int>(g));
    }
    std::vector<int> graph_sizes(num_graphs, 0);
    for (std::size_t i = 0; i < num_nodes_total; ++i) node_local[i] = graph_sizes[node_graph[i]]++;

    Dataset dataset;
    dataset.name = name;
    dataset.graphs.resize(num_graphs);
    for (int gi = 0; gi < num_graphs; ++gi) {
        if (graph_sizes[gi] == 0)
            throw Error(indicator_path.string() + ": graph " + std::to_string(gi + 1) + " has no nodes");
        dataset.graphs[gi].num_nodes = graph_sizes[gi];
        dataset.graphs[gi].node_labels.assign(graph_sizes[gi], 0);
    }

    if (fs::exists(node_label_path)) {
        const auto label_lines = read_lines(node_label_path);
        if (label_lines.size() != num_nodes_total)
            throw Error(node_label_path.string() + ": has " + std::to_string(label_lines.size()) +
                        " lines but the indicator lists " + std::to_string(num_nodes_total) + " nodes");
        for (std::size_t i = 0; i < num_nodes_total; ++i)
            dataset.graphs[node_graph[i]].node_labels[node_local[i]] =
                static_cast<int>(parse_int(label_lines[i], node_label_path, i + 1));
    }

    const auto edge_lines = read_lines(a_path);
    const bool have_edge_labels = fs::exists(edge_label_path);
    std::vector<std::string> edge_label_lines;
    if (have_edge_labels) {
        edge_label_lines = read_lines(edge_label_path);
        if (edge_label_lines.size() != edge_lines.size())
            throw Error(edge_label_path.string() + ": has " + std::to_string(edge_label_lines.size()) +
                        " lines but " + a_path.string() + " lists " + std::to_string(edge_lines.size()) + " edges");
    }

    // Directed rows keyed per graph; both directions must be present exactly
    // once and agree on the label.
    struct DirectedEdge {
        int label;
        std::size_t line_no;
    };
    std::vector<std::map<std::pair<int, int>, DirectedEdge>> directed(num_graphs);
    for (std::size_t i = 0; i < edge_lines.size(); ++i) {
        if (trim(edge_lines[i]).empty())
            throw Error(a_path.string() + ":" + std::to_string(i + 1) + ": malformed edge line ''");
        auto [gu, gv] = parse_edge_line(edge_lines[i], a_path, i + 1);
        if (gu < 1 || gv < 1 || gu > static_cast<long long>(num_nodes_total) ||
            gv > static_cast<long long>(num_nodes_total))
            throw Error(a_path.string() + ":" + std::to_string(i + 1) + ": node id out of range");
        int u = static_cast<int>(gu - 1);
        int v = static_cast<int>(gv - 1);
        if (node_graph[u] != node_graph[v])
            throw Error(a_path.string() + ":" + std::to_string(i + 1) + ": edge connects different graphs");
        if (u == v) throw Error(a_path.string() + ":" + std::to_string(i + 1) + ": self-loop");
        int label = 0;
        if (have_edge_labels)
            label = static_cast<int>(parse_int(edge_label_lines[i], edge_label_path, i + 1));
        auto key = std::make_pair(node_local[u], node_local[v]);
        auto [it, inserted] = directed[node_graph[u]].emplace(key, DirectedEdge{label, i + 1});
        if (!inserted)
            throw Error(a_path.string() + ":" + std::to_string(i + 1) + ": duplicate directed edge");
        (void)it;
    }
    for (int gi = 0; gi < num_graphs; ++gi) {
        for (const auto& [key, edge] : directed[gi]) {
            auto [u, v] = key;
            if (u > v) continue; // handled from the (min, max) direction
            auto rev = directed[gi].find({v, u});
            if (rev == directed[gi].end())
                throw Error(a_path.string() + ":" + std::to_string(edge.line_no) +
                            ": edge listed in only one direction");
            if (rev->second.label != edge.label)
                throw Error(a_path.string() + ":" + std::to_string(edge.line_no) +
                            ": edge labels disagree between the two directions");
            dataset.graphs[gi].edges.emplace_back(u, v);
            dataset.graphs[gi].edge_labels.push_back(edge.label);
        }
        // a reverse row whose forward row is missing
        for (const auto& [key, edge] : directed[gi]) {
            if (key.first < key.second) continue;
            if (!directed[gi].count({key.second, key.first}))
                throw Error(a_path.string() + ":" + std::to_string(edge.line_no) +
                            ": edge listed in only one direction");
        }
    }

    // graph_labels wins over graph_attributes when both are present
    if (fs::exists(graph_label_path)) {
        const auto lines = read_lines(graph_label_path);
        if (lines.size() != static_cast<std::size_t>(num_graphs))
            throw Error(graph_label_path.string() + ": has " + std::to_string(lines.size()) +
                        " lines for " + std::to_string(num_graphs) + " graphs");
        dataset.task = Task::classification;
        dataset.has_targets = true;
        for (int gi = 0; gi < num_graphs; ++gi)
            dataset.graphs[gi].target =
                static_cast<double>(parse_int(lines[gi], graph_label_path, gi + 1));
    } else if (fs::exists(graph_attr_path)) {
        const auto lines = read_lines(graph_attr_path);
        if (lines.size() != static_cast<std::size_t>(num_graphs))
            throw Error(graph_attr_path.string() + ": has " + std::to_string(lines.size()) +
                        " lines for " + std::to_string(num_graphs) + " graphs");
        dataset.task = Task::regression;
        dataset.has_targets = true;
        for (int gi = 0; gi < num_graphs; ++gi)
            dataset.graphs[gi].target = parse_real(lines[gi], graph_attr_path, gi + 1);
    }

    validate_dataset(dataset);
    return dataset;
}

Dataset load_json_graphs(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());

    Dataset dataset;
    dataset.name = path.stem().string();
    bool any_target = false;
    bool all_integral = true;

    std::string line;
    std::size_t record = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const std::string where = path.string() + ": record " + std::to_string(record) + ": ";
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(where + e.what());
        }
        if (!j.is_object()) throw Error(where + "expected a JSON object");
        if (!j.contains("num_nodes") || !j["num_nodes"].is_number_integer())
            throw Error(where + "missing integer field 'num_nodes'");
        Graph g;
        g.num_nodes = j["num_nodes"].get<int>();
        if (g.num_nodes < 1) throw Error(where + "num_nodes must be >= 1");
        if (!j.contains("edges") || !j["edges"].is_array())
            throw Error(where + "missing array field 'edges'");
        for (const auto& e : j["edges"]) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
                throw Error(where + "edges must be [u, v] integer pairs");
            int u = e[0].get<int>();
            int v = e[1].get<int>();
            if (u < 0 || v < 0 || u >= g.num_nodes || v >= g.num_nodes)
                throw Error(where + "edge endpoint out of range");
            g.edges.emplace_back(std::min(u, v), std::max(u, v));
        }
        if (!j.contains("node_labels") || !j["node_labels"].is_array() ||
            j["node_labels"].size() != static_cast<std::size_t>(g.num_nodes))
            throw Error(where + "'node_labels' must list one label per node");
        for (const auto& l : j["node_labels"]) {
            if (!l.is_number_integer()) throw Error(where + "node labels must be integers");
            g.node_labels.push_back(l.get<int>());
        }
        if (j.contains("edge_labels")) {
            if (!j["edge_labels"].is_array() || j["edge_labels"].size() != g.edges.size())
                throw Error(where + "'edge_labels' must list one label per edge");
            for (const auto& l : j["edge_labels"]) {
                if (!l.is_number_integer()) throw Error(where + "edge labels must be integers");
                g.edge_labels.push_back(l.get<int>());
            }
        } else {
            g.edge_labels.assign(g.edges.size(), 0);
        }
        if (j.contains("target")) {
            if (!j["target"].is_number()) throw Error(where + "'target' must be a number");
            if (!dataset.graphs.empty() && !any_target)
                throw Error(where + "targets must be present on all records or none");
            any_target = true;
            all_integral = all_integral && j["target"].is_number_integer();
            g.target = j["target"].get<double>();
        } else if (any_target) {
            throw Error(where + "targets must be present on all records or none");
        }
        dataset.graphs.push_back(std::move(g));
        ++record;
    }
    if (dataset.graphs.empty()) throw Error(path.string() + ": empty dataset");
    dataset.has_targets = any_target;
    dataset.task = (any_target && !all_integral) ? Task::regression : Task::classification;
    validate_dataset(dataset);
    return dataset;
}

void save_json_graphs(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    for (const Graph& g : dataset.graphs) {
        nlohmann::ordered_json j;
        j["num_nodes"] = g.num_nodes;
        auto edges = nlohmann::ordered_json::array();
        for (auto [u, v] : g.edges) edges.push_back({u, v});
        j["edges"] = std::move(edges);
        j["node_labels"] = g.node_labels;
        j["edge_labels"] = g.edge_labels;
        if (dataset.has_targets) {
            if (dataset.task == Task::classification)
                j["target"] = static_cast<long long>(g.target);
            else
                j["target"] = g.target;
        }
        out << j.dump() << '\n';
    }
    if (!out) throw Error("write failed for " + path.string());
}

Dataset add_dummy_nodes(const Dataset& dataset) {
    validate_dataset(dataset);
    if (dataset.dummy_label) return dataset; // already padded
    Dataset padded = dataset;
    const int n = dataset.max_graph_size();
    const int dummy = dataset.max_node_label() + 1;
    padded.dummy_label = dummy;
    padded.original_sizes.clear();
    for (Graph& g : padded.graphs) {
        padded.original_sizes.push_back(g.num_nodes);
        g.node_labels.resize(n, dummy);
        g.num_nodes = n;
    }
    return padded;
}

} // namespace wilt
