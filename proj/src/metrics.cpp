#include "wilt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "wilt/error.hpp"

namespace wilt {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current += ch;
        }
    }
    fields.push_back(current);
    return fields;
}

double parse_csv_real(const std::string& token, const std::filesystem::path& path, std::size_t line_no) {
    std::size_t pos = 0;
    double value = 0;
    try {
        value = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw Error(path.string() + ":" + std::to_string(line_no) + ": expected real, got '" + token + "'");
    }
    while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) ++pos;
    if (pos != token.size() || !std::isfinite(value))
        throw Error(path.string() + ":" + std::to_string(line_no) + ": expected real, got '" + token + "'");
    return value;
}

} // namespace

TargetDistance TargetDistance::from_matrix(int n, std::vector<double> values) {
    if (n <= 0 || values.size() != static_cast<std::size_t>(n) * n)
        throw Error("distance matrix shape mismatch");
    for (int i = 0; i < n; ++i) {
        if (values[static_cast<std::size_t>(i) * n + i] != 0.0)
            throw Error("distance matrix diagonal must be zero");
        for (int j = 0; j < n; ++j) {
            const double v = values[static_cast<std::size_t>(i) * n + j];
            if (!std::isfinite(v) || v < 0.0) throw Error("distances must be finite and nonnegative");
            if (v != values[static_cast<std::size_t>(j) * n + i])
                throw Error("distance matrix must be symmetric");
        }
    }
    TargetDistance d;
    d.n_ = n;
    d.dense_ = true;
    d.matrix_ = std::move(values);
    return d;
}

TargetDistance TargetDistance::from_vectors(std::vector<std::vector<double>> rows) {
    if (rows.empty()) throw Error("empty embedding table");
    const std::size_t dim = rows.front().size();
    if (dim == 0) throw Error("embedding rows must be nonempty");
    for (const auto& row : rows) {
        if (row.size() != dim) throw Error("embedding rows must have equal length");
        for (double v : row)
            if (!std::isfinite(v)) throw Error("embedding values must be finite");
    }
    TargetDistance d;
    d.n_ = static_cast<int>(rows.size());
    d.dense_ = false;
    d.rows_ = std::move(rows);
    return d;
}

double TargetDistance::at(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw Error("pair index out of range");
    if (dense_) return matrix_[static_cast<std::size_t>(i) * n_ + j];
    double sum = 0.0;
    const auto& a = rows_[i];
    const auto& b = rows_[j];
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

TargetDistance TargetDistance::load_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw Error(path.string() + ": empty file");
    int n = 0;
    try {
        n = std::stoi(line);
    } catch (const std::exception&) {
        throw Error(path.string() + ":1: expected the matrix size");
    }
    if (n <= 0) throw Error(path.string() + ":1: matrix size must be positive");
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        if (!std::getline(in, line))
            throw Error(path.string() + ": expected " + std::to_string(n) + " matrix rows");
        auto fields = split_csv(line);
        if (fields.size() != static_cast<std::size_t>(n))
            throw Error(path.string() + ":" + std::to_string(i + 2) + ": expected " + std::to_string(n) +
                        " values");
        for (const auto& f : fields) values.push_back(parse_csv_real(f, path, i + 2));
    }
    return from_matrix(n, std::move(values));
}

TargetDistance TargetDistance::load_vectors_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        auto fields = split_csv(line);
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_csv_real(f, path, line_no));
        rows.push_back(std::move(row));
    }
    return from_vectors(std::move(rows));
}

void TargetDistance::save_matrix_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out.precision(17);
    out << n_ << '\n';
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            if (j) out << ',';
            out << at(i, j);
        }
        out << '\n';
    }
    if (!out) throw Error("write failed for " + path.string());
}

namespace detail {

double weighted_l1(const WiltEmbedding& a, const WiltEmbedding& b, const double* weight,
                   double uniform, std::size_t* ops) {
    double total = 0.0;
    std::size_t steps = 0;
    std::size_t i = 0, j = 0;
    const auto& ea = a.entries;
    const auto& eb = b.entries;
    while (i < ea.size() && j < eb.size()) {
        ++steps;
        if (ea[i].first == eb[j].first) {
            const double w = weight ? weight[ea[i].first] : uniform;
            total += w * std::abs(ea[i].second - eb[j].second);
            ++i;
            ++j;
        } else if (ea[i].first < eb[j].first) {
            const double w = weight ? weight[ea[i].first] : uniform;
            total += w * ea[i].second;
            ++i;
        } else {
            const double w = weight ? weight[eb[j].first] : uniform;
            total += w * eb[j].second;
            ++j;
        }
    }
    for (; i < ea.size(); ++i, ++steps)
        total += (weight ? weight[ea[i].first] : uniform) * ea[i].second;
    for (; j < eb.size(); ++j, ++steps)
        total += (weight ? weight[eb[j].first] : uniform) * eb[j].second;
    if (ops) *ops += steps;
    return total;
}

} // namespace detail

namespace {

void check_pair(const WiltEmbedding& a, const WiltEmbedding& b, Flavor expected,
                bool expected_known = false) {
    if (a.flavor != b.flavor) throw Error("embedding flavors do not match");
    if (expected_known && a.flavor != expected)
        throw Error(std::string("expected ") + flavor_name(expected) + " flavor embeddings");
    if (a.flavor == Flavor::raw && a.graph_size != b.graph_size)
        throw Error("raw flavor requires equal graph sizes");
}

} // namespace

double d_wilt(const WiltEmbedding& a, const WiltEmbedding& b, const Wilt& tree, std::size_t* ops) {
    check_pair(a, b, Flavor::raw);
    return detail::weighted_l1(a, b, tree.weight.data(), 0.0, ops);
}

double d_wwl(const WiltEmbedding& a, const WiltEmbedding& b, const Wilt& tree) {
    check_pair(a, b, Flavor::size, true);
    return detail::weighted_l1(a, b, nullptr, wwl_preset_weight(tree.iterations), nullptr);
}

double d_wloa(const WiltEmbedding& a, const WiltEmbedding& b, const Wilt& tree) {
    check_pair(a, b, Flavor::dummy, true);
    return detail::weighted_l1(a, b, nullptr, kWloaPresetWeight, nullptr);
}

int d_wl(const std::vector<ColorId>& multiset_a, const std::vector<ColorId>& multiset_b) {
    return multiset_a == multiset_b ? 0 : 1;
}

double d_func(double target_a, double target_b, Task task, double lo, double hi) {
    if (task == Task::classification) return target_a != target_b ? 1.0 : 0.0;
    if (!(hi > lo)) throw Error("regression range requires hi > lo");
    const double value = std::abs(target_a - target_b) / (hi - lo);
    return std::clamp(value, 0.0, 1.0);
}

std::pair<double, double> target_range(const Dataset& dataset) {
    if (!dataset.has_targets) throw Error("dataset has no targets");
    double lo = dataset.graphs.front().target;
    double hi = lo;
    for (const Graph& g : dataset.graphs) {
        lo = std::min(lo, g.target);
        hi = std::max(hi, g.target);
    }
    return {lo, hi};
}

// Successive shortest paths over the bipartite transport network. Supplies
// and demands are integral; costs may be arbitrary nonnegative reals.
double min_cost_transport(const std::vector<long long>& supply, const std::vector<long long>& demand,
                          const std::vector<double>& cost) {
    const int ns = static_cast<int>(supply.size());
    const int nt = static_cast<int>(demand.size());
    if (cost.size() != static_cast<std::size_t>(ns) * nt) throw Error("cost matrix shape mismatch");
    const long long total_supply = std::accumulate(supply.begin(), supply.end(), 0LL);
    const long long total_demand = std::accumulate(demand.begin(), demand.end(), 0LL);
    if (total_supply != total_demand) throw Error("transport masses are unbalanced");

    // nodes: 0 = source, 1..ns supplies, ns+1..ns+nt demands, ns+nt+1 = sink
    const int num_nodes = ns + nt + 2;
    const int source = 0;
    const int sink = ns + nt + 1;

    struct Arc {
        int from, to;
        long long capacity;
        double cost;
        int reverse; // index of the reverse arc
    };
    std::vector<Arc> arcs;
    std::vector<std::vector<int>> outgoing(num_nodes);
    auto add_arc = [&](int from, int to, long long capacity, double arc_cost) {
        outgoing[from].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({from, to, capacity, arc_cost, static_cast<int>(arcs.size()) + 1});
        outgoing[to].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({to, from, 0, -arc_cost, static_cast<int>(arcs.size()) - 1});
    };
    for (int i = 0; i < ns; ++i)
        if (supply[i] > 0) add_arc(source, 1 + i, supply[i], 0.0);
    for (int j = 0; j < nt; ++j)
        if (demand[j] > 0) add_arc(1 + ns + j, sink, demand[j], 0.0);
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < nt; ++j)
            if (supply[i] > 0 && demand[j] > 0)
                add_arc(1 + i, 1 + ns + j, std::numeric_limits<long long>::max(),
                        cost[static_cast<std::size_t>(i) * nt + j]);

    double total_cost = 0.0;
    long long shipped = 0;
    const double inf = std::numeric_limits<double>::infinity();
    while (shipped < total_supply) {
        // Bellman-Ford on the residual network (reverse arcs carry negative
        // costs)
        std::vector<double> dist(num_nodes, inf);
        std::vector<int> via(num_nodes, -1);
        dist[source] = 0.0;
        for (int round = 0; round < num_nodes - 1; ++round) {
            bool changed = false;
            for (std::size_t ai = 0; ai < arcs.size(); ++ai) {
                const Arc& arc = arcs[ai];
                if (arc.capacity <= 0 || dist[arc.from] == inf) continue;
                const double candidate = dist[arc.from] + arc.cost;
                if (candidate < dist[arc.to]) {
                    dist[arc.to] = candidate;
                    via[arc.to] = static_cast<int>(ai);
                    changed = true;
                }
            }
            if (!changed) break;
        }
        if (dist[sink] == inf) throw NumericError("transport network admits no augmenting path");
        long long push = total_supply - shipped;
        std::vector<int> path;
        for (int node = sink; node != source;) {
            const int ai = via[node];
            if (ai < 0 || static_cast<int>(path.size()) > static_cast<int>(arcs.size()))
                throw NumericError("transport path reconstruction failed");
            path.push_back(ai);
            push = std::min(push, arcs[ai].capacity);
            node = arcs[ai].from;
        }
        for (int ai : path) {
            arcs[ai].capacity -= push;
            arcs[arcs[ai].reverse].capacity += push;
            total_cost += arcs[ai].cost * push;
        }
        shipped += push;
    }
    return total_cost;
}

double ot_oracle(const Dataset& dataset, int graph_a, int graph_b,
                 const ColorAssignment& assignment, const Wilt& tree, Flavor flavor) {
    const int n = static_cast<int>(dataset.graphs.size());
    if (graph_a < 0 || graph_b < 0 || graph_a >= n || graph_b >= n)
        throw Error("graph index out of range");
    if (flavor == Flavor::dummy && !tree.has_dummy_chain())
        throw Error("dummy flavor requested on a WILT without a dummy chain");
    if (flavor == Flavor::dummy && !dataset.dummy_label)
        throw Error("dummy flavor oracle needs the padded dataset");
    if (flavor != Flavor::dummy && dataset.dummy_label)
        throw Error("raw and size flavor oracles operate on the unpadded dataset");

    const int na = assignment.num_nodes(graph_a);
    const int nb = assignment.num_nodes(graph_b);
    if (na + nb > 64) throw Error("oracle instance too large (validation use only)");
    if (flavor == Flavor::raw && na != nb) throw Error("raw flavor requires equal graph sizes");

    std::vector<ColorId> colors_a(na), colors_b(nb);
    for (int v = 0; v < na; ++v) colors_a[v] = assignment.at(graph_a, v, assignment.iterations);
    for (int v = 0; v < nb; ++v) colors_b[v] = assignment.at(graph_b, v, assignment.iterations);

    std::vector<double> cost(static_cast<std::size_t>(na) * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            cost[static_cast<std::size_t>(i) * nb + j] = path_distance(tree, colors_a[i], colors_b[j]);

    if (flavor == Flavor::size) {
        // integerized masses: every node of G carries |V_H| units and vice
        // versa, so the unit value is 1 / (|V_G| |V_H|)
        std::vector<long long> supply(na, nb), demand(nb, na);
        return min_cost_transport(supply, demand, cost) / (static_cast<double>(na) * nb);
    }
    std::vector<long long> supply(na, 1), demand(nb, 1);
    return min_cost_transport(supply, demand, cost);
}

TargetDistance pairwise_matrix(const std::vector<WiltEmbedding>& embeddings, const Wilt& tree) {
    const int n = static_cast<int>(embeddings.size());
    if (n == 0) throw Error("no embeddings given");
    std::vector<double> values(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = d_wilt(embeddings[i], embeddings[j], tree);
            values[static_cast<std::size_t>(i) * n + j] = d;
            values[static_cast<std::size_t>(j) * n + i] = d;
        }
    return TargetDistance::from_matrix(n, std::move(values));
}

} // namespace wilt
