#pragma once

#include "adscreen/learner/forest.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace adscreen::learner {

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocCurve {
    double auc = 0.0;
    std::vector<RocPoint> points; // (0,0) ... (1,1), tied scores grouped
};

// AUC = P(s+ > s-) + 0.5 P(s+ = s-). labels: 1 positive, 0 negative.
// Throws LearnerError "single_class" / "size_mismatch" / "non_finite_score".
RocCurve roc_auc(std::span<const double> scores, std::span<const int> labels);

struct EvalReport {
    std::vector<std::size_t> sample_index; // held-out sample of each score
    std::vector<double> scores;            // P(HIGH) for that sample
    std::vector<int> labels;
    double auc = 0.0;
    std::vector<RocPoint> roc_points;
    std::size_t positives = 0;
    std::size_t negatives = 0;
    std::vector<std::size_t> skipped_folds; // folds whose training set was single-class
    std::size_t forests_trained = 0;
};

// Leave-one-out: one forest per held-out sample, each from its own seed
// substream; pooled scores give one ROC. Folds whose training part is
// single-class are skipped and listed. Throws LearnerError
// "insufficient_samples" (n < 3) or "single_class".
EvalReport loo_evaluate(const Dataset& data, const ForestConfig& cfg);

struct FeatureImportance {
    std::string feature;
    double mean_error_increase = 0.0;
    double sd_over_trees = 0.0;
    double score = 0.0; // mean / sd; 0 when sd == 0
    bool degenerate = false;
};

struct ImportanceReport {
    std::vector<FeatureImportance> features; // dataset column order
    std::size_t trees_used = 0;

    // Feature indices by descending score, ties by index.
    std::vector<std::size_t> ranking() const;
};

// Out-of-bag permutation importance: per tree and feature, OOB
// misclassification with that feature's OOB values shuffled minus the
// baseline OOB misclassification. `data` must be the training set of
// `forest`. Throws LearnerError "no_oob".
ImportanceReport importance(const Forest& forest, const Dataset& data);

} // namespace adscreen::learner
