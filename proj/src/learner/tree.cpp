#include "adscreen/common/rng.hpp"
#include "adscreen/learner/forest.hpp"

#include <algorithm>
#include <numeric>

namespace adscreen::learner {

double DecisionTree::predict_proba(std::span<const double> x) const {
    int at = 0;
    while (nodes_[static_cast<std::size_t>(at)].feature >= 0) {
        const auto& n = nodes_[static_cast<std::size_t>(at)];
        at = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes_[static_cast<std::size_t>(at)].p_high;
}

std::size_t DecisionTree::depth() const {
    if (nodes_.empty()) return 0;
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    std::size_t deepest = 0;
    while (!stack.empty()) {
        auto [at, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        const auto& n = nodes_[static_cast<std::size_t>(at)];
        if (n.feature >= 0) {
            stack.push_back({n.left, d + 1});
            stack.push_back({n.right, d + 1});
        }
    }
    return deepest;
}

namespace {

struct Entry {
    double value;
    int weight;
    int label;
};

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double score = -1.0; // sum over children of (n0^2 + n1^2) / n; larger is purer
};

class TreeBuilder {
public:
    TreeBuilder(const Dataset& data, std::span<const int> weights, const TreeParams& params, std::uint64_t seed)
        : data_(data), weights_(weights), params_(params), rng_(seed), order_(data.n_features()) {
        std::iota(order_.begin(), order_.end(), 0);
        for (std::size_t i = 0; i < data.size(); ++i)
            if (weights_[i] > 0) samples_.push_back(static_cast<int>(i));
        entries_.reserve(samples_.size());
    }

    std::vector<TreeNode> build() {
        grow(0, samples_.size(), 0);
        return std::move(nodes_);
    }

private:
    int grow(std::size_t begin, std::size_t end, std::size_t depth) {
        long total = 0;
        long high = 0;
        for (std::size_t k = begin; k < end; ++k) {
            const auto i = static_cast<std::size_t>(samples_[k]);
            total += weights_[i];
            high += weights_[i] * data_.label(i);
        }
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back(TreeNode{-1, 0.0, -1, -1, static_cast<double>(high) / static_cast<double>(total)});

        const bool pure = high == 0 || high == total;
        const bool too_small = total < 2 * static_cast<long>(params_.min_leaf);
        const bool too_deep = params_.max_depth && depth >= *params_.max_depth;
        if (pure || too_small || too_deep) return id;

        const Split best = find_split(begin, end, total, high);
        if (best.feature < 0) return id;

        const auto f = static_cast<std::size_t>(best.feature);
        const auto mid = std::partition(samples_.begin() + static_cast<long>(begin),
                                        samples_.begin() + static_cast<long>(end), [&](int i) {
                                            return data_.value(static_cast<std::size_t>(i), f) <= best.threshold;
                                        });
        const auto split_at = static_cast<std::size_t>(mid - samples_.begin());

        const int left = grow(begin, split_at, depth + 1);
        const int right = grow(split_at, end, depth + 1);
        auto& node = nodes_[static_cast<std::size_t>(id)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = left;
        node.right = right;
        return id;
    }

    // Draws features without replacement until max_features of them are
    // non-constant in this node (or all are drawn), then scans the drawn ones
    // in ascending index order so exact ties go to the lowest feature and the
    // lowest threshold.
    Split find_split(std::size_t begin, std::size_t end, long total, long high) {
        const std::size_t d = order_.size();
        candidates_.clear();
        for (std::size_t k = 0; k < d && candidates_.size() < params_.max_features; ++k) {
            std::uniform_int_distribution<std::size_t> pick(k, d - 1);
            std::swap(order_[k], order_[pick(rng_)]);
            const auto f = order_[k];
            const double first = data_.value(static_cast<std::size_t>(samples_[begin]), f);
            bool constant = true;
            for (std::size_t s = begin + 1; s < end && constant; ++s)
                constant = data_.value(static_cast<std::size_t>(samples_[s]), f) == first;
            if (!constant) candidates_.push_back(f);
        }
        std::sort(candidates_.begin(), candidates_.end());

        Split best;
        const long min_leaf = static_cast<long>(params_.min_leaf);
        for (const auto f : candidates_) {
            entries_.clear();
            for (std::size_t s = begin; s < end; ++s) {
                const auto i = static_cast<std::size_t>(samples_[s]);
                entries_.push_back({data_.value(i, f), weights_[i], data_.label(i)});
            }
            std::sort(entries_.begin(), entries_.end(),
                      [](const Entry& a, const Entry& b) { return a.value < b.value; });

            long left = 0;
            long left_high = 0;
            for (std::size_t k = 0; k + 1 < entries_.size(); ++k) {
                left += entries_[k].weight;
                left_high += entries_[k].weight * entries_[k].label;
                if (entries_[k].value == entries_[k + 1].value) continue;
                const long right = total - left;
                if (left < min_leaf || right < min_leaf) continue;
                const long right_high = high - left_high;
                const double l1 = static_cast<double>(left_high), l0 = static_cast<double>(left - left_high);
                const double r1 = static_cast<double>(right_high), r0 = static_cast<double>(right - right_high);
                const double score = (l1 * l1 + l0 * l0) / static_cast<double>(left) +
                                     (r1 * r1 + r0 * r0) / static_cast<double>(right);
                if (score > best.score) {
                    const double a = entries_[k].value;
                    const double b = entries_[k + 1].value;
                    double threshold = a + (b - a) / 2.0;
                    if (!(threshold < b)) threshold = a;
                    best = {static_cast<int>(f), threshold, score};
                }
            }
        }
        return best;
    }

    const Dataset& data_;
    std::span<const int> weights_;
    TreeParams params_;
    Rng rng_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> candidates_;
    std::vector<int> samples_;
    std::vector<Entry> entries_;
    std::vector<TreeNode> nodes_;
};

} // namespace

DecisionTree grow_tree(const Dataset& data, std::span<const int> weights, const TreeParams& params,
                       std::uint64_t seed) {
    return DecisionTree(TreeBuilder(data, weights, params, seed).build());
}

} // namespace adscreen::learner
