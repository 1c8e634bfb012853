#pragma once

#include "adscreen/common/error.hpp"
#include "adscreen/learner/dataset.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace adscreen::learner {

class LearnerError : public Error {
public:
    LearnerError(std::string code, const std::string& message) : Error(std::move(code), message) {}
};

struct ForestConfig {
    std::size_t n_trees = 100;
    std::optional<std::size_t> max_features; // default ceil(sqrt(d))
    std::size_t min_leaf = 1;
    std::optional<std::size_t> max_depth;      // unlimited when absent
    std::optional<std::size_t> bootstrap_size; // default n
    std::uint64_t seed = 0;
    unsigned threads = 0; // 0: hardware concurrency; never affects results
};

struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;  // taken when x[feature] <= threshold
    int right = -1;
    double p_high = 0.0; // leaf class probability of HIGH; LOW is 1 - p_high
};

class DecisionTree {
public:
    DecisionTree() = default;
    explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

    double predict_proba(std::span<const double> x) const;
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    std::size_t depth() const;

private:
    std::vector<TreeNode> nodes_;
};

struct TreeParams {
    std::size_t max_features = 1;
    std::size_t min_leaf = 1;
    std::optional<std::size_t> max_depth;
};

// Grows one CART tree by Gini impurity on the samples with positive weight
// (weights are bootstrap multiplicities).
DecisionTree grow_tree(const Dataset& data, std::span<const int> weights, const TreeParams& params,
                       std::uint64_t seed);

class Forest {
public:
    Forest() = default;
    Forest(std::vector<DecisionTree> trees, std::vector<std::string> feature_names,
           ForestConfig config = {}, std::vector<std::vector<bool>> oob = {});

    const std::vector<DecisionTree>& trees() const { return trees_; }
    const std::vector<std::string>& feature_names() const { return names_; }
    const ForestConfig& config() const { return config_; }
    // oob_masks()[t][i]: sample i was not drawn for tree t. Empty for forests
    // not produced by train().
    const std::vector<std::vector<bool>>& oob_masks() const { return oob_; }
    std::size_t n_features() const { return names_.size(); }

private:
    std::vector<DecisionTree> trees_;
    std::vector<std::string> names_;
    ForestConfig config_;
    std::vector<std::vector<bool>> oob_;
};

// Fills in defaults for `d` features and `n` samples and checks invariants.
ForestConfig resolve(const ForestConfig& cfg, std::size_t n, std::size_t d);

// Throws LearnerError "empty_input" / "single_class" / "invalid_config".
Forest train(const Dataset& data, const ForestConfig& cfg);

// Mean of per-tree leaf probabilities. Throws LearnerError
// "dimension_mismatch".
double predict_proba(const Forest& forest, std::span<const double> x);

} // namespace adscreen::learner
