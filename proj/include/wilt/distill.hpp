#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "wilt/metrics.hpp"

namespace wilt {

using PairList = std::vector<std::pair<int, int>>;

enum class PairSampling { all_pairs, random };

struct FitConfig {
    int epochs = 10;
    double learning_rate = 1e-2;
    int batch_size = 256;
    double l1_lambda = 0.0;
    PairSampling sampling = PairSampling::all_pairs;
    long long sample_count = 0; // random sampling; 0 picks |D| * ceil(|D| / batch_size)
    Flavor flavor = Flavor::size;
    std::uint64_t seed = 0;

    void validate() const;
};

struct FitReport {
    std::vector<double> weights;
    std::vector<double> epoch_loss;    // mean squared residual seen during each epoch
    std::vector<int> epoch_nonzero;    // nonzero weights after each epoch
    std::vector<double> epoch_seconds; // wall clock per epoch
    double initial_loss = 0.0;         // loss at w = 1 over the evaluation pairs
    double final_loss = 0.0;           // loss of the returned weights over the same pairs
};

// Mean squared residual between d_wilt under `weights` and the target over
// the given pairs.
double loss(const std::vector<double>& weights, const std::vector<WiltEmbedding>& embeddings,
            const TargetDistance& target, const PairList& pairs);

// Exact analytic gradient of `loss`. d_wilt is linear in the weights, so the
// entry for color c is (2/|B|) sum of residual * |nu_c^G - nu_c^H|.
std::vector<double> gradient(const std::vector<double>& weights,
                             const std::vector<WiltEmbedding>& embeddings,
                             const TargetDistance& target, const PairList& pairs);

using FitProgress = std::function<void(int epoch, double loss, int nonzero)>;

// Projected mini-batch gradient descent with adaptive moments: w starts at 1;
// every batch takes an Adam step, applies the L1 soft-threshold by lr*lambda
// when lambda > 0 and clamps the weights to be nonnegative. Throws
// NumericError when the loss stops being finite.
std::pair<Wilt, FitReport> fit(const Wilt& tree, const std::vector<WiltEmbedding>& embeddings,
                               const TargetDistance& target, const FitConfig& config,
                               const FitProgress& progress = nullptr);

} // namespace wilt
