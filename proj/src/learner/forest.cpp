#include "adscreen/common/rng.hpp"
#include "adscreen/learner/forest.hpp"

#include <fmt/format.h>

#include <atomic>
#include <cmath>
#include <thread>

namespace adscreen::learner {
namespace {

constexpr std::uint64_t bootstrap_salt = 0xB007;
constexpr std::uint64_t split_salt = 0x5917;

// Runs job(0..count-1) on up to `threads` workers. Each index is handled by
// exactly one worker and writes only its own slot.
template <typename Job>
void parallel_for(std::size_t count, unsigned threads, Job&& job) {
    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) job(i);
        });
}

} // namespace

Forest::Forest(std::vector<DecisionTree> trees, std::vector<std::string> feature_names, ForestConfig config,
               std::vector<std::vector<bool>> oob)
    : trees_(std::move(trees)), names_(std::move(feature_names)), config_(config), oob_(std::move(oob)) {
    for (const auto& tree : trees_) {
        if (tree.nodes().empty()) throw LearnerError("invalid_model", "tree without nodes");
        for (const auto& node : tree.nodes()) {
            if (node.feature >= static_cast<int>(names_.size()))
                throw LearnerError("invalid_model", "split feature index out of range");
            if (node.feature >= 0) {
                const auto n = static_cast<int>(tree.nodes().size());
                if (node.left <= 0 || node.left >= n || node.right <= 0 || node.right >= n)
                    throw LearnerError("invalid_model", "child index out of range");
            } else if (!(node.p_high >= 0.0 && node.p_high <= 1.0)) {
                throw LearnerError("invalid_model", "leaf probability outside [0, 1]");
            }
        }
    }
}

ForestConfig resolve(const ForestConfig& cfg, std::size_t n, std::size_t d) {
    ForestConfig out = cfg;
    if (out.n_trees < 1) throw LearnerError("invalid_config", "n_trees must be at least 1");
    if (d == 0) throw LearnerError("invalid_config", "dataset has no features");
    if (!out.max_features)
        out.max_features = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
    if (*out.max_features < 1 || *out.max_features > d)
        throw LearnerError("invalid_config", fmt::format("max_features must be in [1, {}]", d));
    if (out.min_leaf < 1) throw LearnerError("invalid_config", "min_leaf must be at least 1");
    if (!out.bootstrap_size) out.bootstrap_size = n;
    if (*out.bootstrap_size < 1) throw LearnerError("invalid_config", "bootstrap_size must be at least 1");
    return out;
}

Forest train(const Dataset& data, const ForestConfig& cfg) {
    if (data.size() == 0) throw LearnerError("empty_input", "no training samples");
    if (data.positives() == 0 || data.negatives() == 0)
        throw LearnerError("single_class", "training data must contain both HIGH and LOW samples");
    const ForestConfig resolved = resolve(cfg, data.size(), data.n_features());
    const TreeParams params{*resolved.max_features, resolved.min_leaf, resolved.max_depth};

    const std::size_t n = data.size();
    std::vector<DecisionTree> trees(resolved.n_trees);
    std::vector<std::vector<bool>> oob(resolved.n_trees);
    parallel_for(resolved.n_trees, resolved.threads, [&](std::size_t t) {
        Rng rng = make_rng(resolved.seed, t, bootstrap_salt);
        std::uniform_int_distribution<std::size_t> draw(0, n - 1);
        std::vector<int> weights(n, 0);
        for (std::size_t k = 0; k < *resolved.bootstrap_size; ++k) ++weights[draw(rng)];
        trees[t] = grow_tree(data, weights, params, derive_seed(resolved.seed, t, split_salt));
        oob[t].resize(n);
        for (std::size_t i = 0; i < n; ++i) oob[t][i] = weights[i] == 0;
    });
    return Forest(std::move(trees), data.feature_names(), resolved, std::move(oob));
}

double predict_proba(const Forest& forest, std::span<const double> x) {
    if (x.size() != forest.n_features())
        throw LearnerError("dimension_mismatch",
                           fmt::format("sample has {} features, forest expects {}", x.size(), forest.n_features()));
    if (forest.trees().empty()) throw LearnerError("invalid_model", "forest has no trees");
    double sum = 0.0;
    for (const auto& tree : forest.trees()) sum += tree.predict_proba(x);
    return sum / static_cast<double>(forest.trees().size());
}

} // namespace adscreen::learner
