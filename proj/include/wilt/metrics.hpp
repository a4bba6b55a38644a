#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "wilt/embedding.hpp"

namespace wilt {

struct PairDistance {
    int a = 0;
    int b = 0;
    double value = 0.0;
    std::string metric;
};

// Externally supplied pairwise distance: either a dense symmetric matrix or
// per-graph real vectors compared with the Euclidean distance on demand.
class TargetDistance {
public:
    static TargetDistance from_matrix(int n, std::vector<double> values);
    static TargetDistance from_vectors(std::vector<std::vector<double>> rows);
    static TargetDistance load_matrix_csv(const std::filesystem::path& path);
    static TargetDistance load_vectors_csv(const std::filesystem::path& path);

    int size() const { return n_; }
    double at(int i, int j) const;
    void save_matrix_csv(const std::filesystem::path& path) const;

private:
    TargetDistance() = default;
    int n_ = 0;
    bool dense_ = true;
    std::vector<double> matrix_;            // row-major when dense_
    std::vector<std::vector<double>> rows_; // embedding rows otherwise
};

// Closed-form WILTing distance: weighted Manhattan sum over the union of the
// two sparse supports. Raw flavor requires equal graph sizes. When `ops` is
// non-null it receives the number of merge steps taken.
double d_wilt(const WiltEmbedding& a, const WiltEmbedding& b, const Wilt& tree,
              std::size_t* ops = nullptr);

// Fixed-weight special cases: WWL (size flavor, w = 1/(2(L+1))) and WLOA
// (dummy flavor, w = 1/2).
double d_wwl(const WiltEmbedding& a, const WiltEmbedding& b, const Wilt& tree);
double d_wloa(const WiltEmbedding& a, const WiltEmbedding& b, const Wilt& tree);

// 0 iff the two final color multisets are equal.
int d_wl(const std::vector<ColorId>& multiset_a, const std::vector<ColorId>& multiset_b);

// Functional pseudometric over graph targets. Classification ignores the
// range; regression divides by hi - lo and clamps to [0, 1].
double d_func(double target_a, double target_b, Task task, double lo = 0.0, double hi = 0.0);

// Dataset min/max targets, the default regression range.
std::pair<double, double> target_range(const Dataset& dataset);

// Exact optimal transport between the node color distributions of two graphs
// with the tree path ground metric, solved by min-cost flow. Validation use
// only; instances above 64 nodes total are rejected.
double ot_oracle(const Dataset& dataset, int graph_a, int graph_b,
                 const ColorAssignment& assignment, const Wilt& tree, Flavor flavor);

// Exact balanced transport with integer masses and arbitrary costs
// (successive shortest paths). cost is row-major |supply| x |demand|.
double min_cost_transport(const std::vector<long long>& supply,
                          const std::vector<long long>& demand,
                          const std::vector<double>& cost);

// Full symmetric d_wilt matrix over a dataset's embeddings.
TargetDistance pairwise_matrix(const std::vector<WiltEmbedding>& embeddings, const Wilt& tree);

namespace detail {

// Weighted Manhattan merge over two sparse supports. `weight` indexes per
// color; a null `weight` uses the `uniform` value everywhere. `ops` (when non
// null) accumulates the number of merge steps.
double weighted_l1(const WiltEmbedding& a, const WiltEmbedding& b, const double* weight,
                   double uniform, std::size_t* ops);

} // namespace detail

} // namespace wilt
