#include "wilt/distill.hpp"

#include <chrono>
#include <cmath>
#include <vector>

#include "wilt/error.hpp"
#include "rng.hpp"

namespace wilt {

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEpsilon = 1e-8;

void check_inputs(const std::vector<double>& weights, const std::vector<WiltEmbedding>& embeddings,
                  const TargetDistance& target, const PairList& pairs) {
    if (embeddings.empty()) throw Error("no embeddings given");
    if (target.size() != static_cast<int>(embeddings.size()))
        throw Error("target distance size does not match the embeddings");
    const Flavor flavor = embeddings.front().flavor;
    for (const auto& e : embeddings)
        if (e.flavor != flavor) throw Error("embedding flavors do not match");
    for (auto [i, j] : pairs)
        if (i < 0 || j < 0 || i >= static_cast<int>(embeddings.size()) ||
            j >= static_cast<int>(embeddings.size()))
            throw Error("pair index out of range");
    (void)weights;
}

double squared_residual_sum(const std::vector<double>& weights,
                            const std::vector<WiltEmbedding>& embeddings,
                            const TargetDistance& target, const PairList& pairs) {
    double sum = 0.0;
    for (auto [i, j] : pairs) {
        const double d =
            detail::weighted_l1(embeddings[i], embeddings[j], weights.data(), 0.0, nullptr);
        const double r = d - target.at(i, j);
        sum += r * r;
    }
    return sum;
}

// Adds factor * |nu_c^G - nu_c^H| to grad[c] over the union support of one
// pair, tracking which colors were touched.
void accumulate_pair(const WiltEmbedding& a, const WiltEmbedding& b, double factor,
                     std::vector<double>& grad, std::vector<ColorId>& touched,
                     std::vector<char>& is_touched) {
    auto bump = [&](ColorId c, double diff) {
        if (!is_touched[c]) {
            is_touched[c] = 1;
            touched.push_back(c);
        }
        grad[c] += factor * std::abs(diff);
    };
    std::size_t i = 0, j = 0;
    while (i < a.entries.size() && j < b.entries.size()) {
        if (a.entries[i].first == b.entries[j].first) {
            bump(a.entries[i].first, a.entries[i].second - b.entries[j].second);
            ++i;
            ++j;
        } else if (a.entries[i].first < b.entries[j].first) {
            bump(a.entries[i].first, a.entries[i].second);
            ++i;
        } else {
            bump(b.entries[j].first, b.entries[j].second);
            ++j;
        }
    }
    for (; i < a.entries.size(); ++i) bump(a.entries[i].first, a.entries[i].second);
    for (; j < b.entries.size(); ++j) bump(b.entries[j].first, b.entries[j].second);
}

PairList all_unordered_pairs(int n) {
    PairList pairs;
    pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    return pairs;
}

PairList sample_with_replacement(int n, long long count, detail::Rng& rng) {
    PairList pairs;
    pairs.reserve(static_cast<std::size_t>(count));
    for (long long k = 0; k < count; ++k) {
        const int i = static_cast<int>(rng.below(n));
        int j = static_cast<int>(rng.below(n - 1));
        if (j >= i) ++j;
        pairs.emplace_back(i, j);
    }
    return pairs;
}

} // namespace

void FitConfig::validate() const {
    if (epochs < 1) throw Error("epochs must be >= 1");
    if (!(learning_rate > 0.0)) throw Error("learning rate must be positive");
    if (batch_size < 1) throw Error("batch size must be >= 1");
    if (l1_lambda < 0.0) throw Error("l1 strength must be nonnegative");
    if (flavor == Flavor::raw) throw Error("fitting uses the size or dummy flavor");
    if (sampling == PairSampling::random && sample_count < 0)
        throw Error("sample count must be nonnegative");
}

double loss(const std::vector<double>& weights, const std::vector<WiltEmbedding>& embeddings,
            const TargetDistance& target, const PairList& pairs) {
    check_inputs(weights, embeddings, target, pairs);
    if (pairs.empty()) return 0.0;
    return squared_residual_sum(weights, embeddings, target, pairs) /
           static_cast<double>(pairs.size());
}

std::vector<double> gradient(const std::vector<double>& weights,
                             const std::vector<WiltEmbedding>& embeddings,
                             const TargetDistance& target, const PairList& pairs) {
    check_inputs(weights, embeddings, target, pairs);
    std::vector<double> grad(weights.size(), 0.0);
    if (pairs.empty()) return grad;
    std::vector<ColorId> touched;
    std::vector<char> is_touched(weights.size(), 0);
    const double scale = 2.0 / static_cast<double>(pairs.size());
    for (auto [i, j] : pairs) {
        const double d =
            detail::weighted_l1(embeddings[i], embeddings[j], weights.data(), 0.0, nullptr);
        const double residual = d - target.at(i, j);
        accumulate_pair(embeddings[i], embeddings[j], scale * residual, grad, touched, is_touched);
    }
    return grad;
}

std::pair<Wilt, FitReport> fit(const Wilt& tree, const std::vector<WiltEmbedding>& embeddings,
                               const TargetDistance& target, const FitConfig& config,
                               const FitProgress& progress) {
    config.validate();
    check_inputs({}, embeddings, target, {});
    const int n = static_cast<int>(embeddings.size());
    if (n < 2) throw Error("fitting needs at least two graphs");
    if (embeddings.front().flavor != config.flavor)
        throw Error("embedding flavor does not match the fit configuration");

    const ColorId num_colors = tree.num_colors();
    std::vector<double> w(num_colors, 1.0);
    std::vector<double> mom(num_colors, 0.0);
    std::vector<double> vel(num_colors, 0.0);
    std::vector<double> grad(num_colors, 0.0);
    std::vector<ColorId> touched;
    std::vector<char> is_touched(num_colors, 0);

    detail::Rng rng(config.seed);
    const long long auto_count =
        static_cast<long long>(n) * ((n + config.batch_size - 1) / config.batch_size);
    const long long sample_count =
        config.sample_count > 0 ? config.sample_count : std::max<long long>(1, auto_count);

    // fixed evaluation pair set for the initial/final loss record
    PairList eval_pairs = config.sampling == PairSampling::all_pairs
                              ? all_unordered_pairs(n)
                              : sample_with_replacement(n, sample_count, rng);

    FitReport report;
    report.initial_loss = loss(w, embeddings, target, eval_pairs);

    long long step = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const auto epoch_start = std::chrono::steady_clock::now();
        PairList pairs;
        if (config.sampling == PairSampling::all_pairs) {
            pairs = all_unordered_pairs(n);
            rng.shuffle(pairs);
        } else {
            pairs = sample_with_replacement(n, sample_count, rng);
        }

        double epoch_sq_sum = 0.0;
        for (std::size_t begin = 0; begin < pairs.size(); begin += config.batch_size) {
            const std::size_t end = std::min(pairs.size(), begin + config.batch_size);
            const double batch_scale = 2.0 / static_cast<double>(end - begin);
            touched.clear();
            for (std::size_t p = begin; p < end; ++p) {
                const auto [i, j] = pairs[p];
                const double d =
                    detail::weighted_l1(embeddings[i], embeddings[j], w.data(), 0.0, nullptr);
                const double residual = d - target.at(i, j);
                epoch_sq_sum += residual * residual;
                accumulate_pair(embeddings[i], embeddings[j], batch_scale * residual, grad,
                                touched, is_touched);
            }

            // dense adaptive-moment step with bias correction
            ++step;
            const double corr1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
            const double corr2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
            const double shrink = config.learning_rate * config.l1_lambda;
            for (ColorId c = 0; c < num_colors; ++c) {
                const double g = grad[c];
                mom[c] = kBeta1 * mom[c] + (1.0 - kBeta1) * g;
                vel[c] = kBeta2 * vel[c] + (1.0 - kBeta2) * g * g;
                const double step_size =
                    config.learning_rate * (mom[c] / corr1) / (std::sqrt(vel[c] / corr2) + kEpsilon);
                double next = w[c] - step_size;
                if (config.l1_lambda > 0.0) {
                    const double magnitude = std::abs(next) - shrink;
                    next = magnitude > 0.0 ? std::copysign(magnitude, next) : 0.0;
                }
                w[c] = std::max(next, 0.0);
            }
            for (ColorId c : touched) {
                grad[c] = 0.0;
                is_touched[c] = 0;
            }
        }

        const double epoch_loss =
            pairs.empty() ? 0.0 : epoch_sq_sum / static_cast<double>(pairs.size());
        if (!std::isfinite(epoch_loss))
            throw NumericError("fit diverged: non-finite training loss in epoch " +
                               std::to_string(epoch + 1));
        int nonzero = 0;
        for (double value : w) nonzero += value != 0.0;
        const auto epoch_end = std::chrono::steady_clock::now();
        report.epoch_loss.push_back(epoch_loss);
        report.epoch_nonzero.push_back(nonzero);
        report.epoch_seconds.push_back(std::chrono::duration<double>(epoch_end - epoch_start).count());
        if (progress) progress(epoch + 1, epoch_loss, nonzero);
    }

    report.final_loss = loss(w, embeddings, target, eval_pairs);
    report.weights = w;
    Wilt fitted = tree;
    fitted.weight = std::move(w);
    return {std::move(fitted), std::move(report)};
}

} // namespace wilt
