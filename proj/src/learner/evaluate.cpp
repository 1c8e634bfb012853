#include "adscreen/common/rng.hpp"
#include "adscreen/learner/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace adscreen::learner {
namespace {

constexpr std::uint64_t fold_salt = 0x1005;
constexpr std::uint64_t permutation_salt = 0x9E4A;

} // namespace

EvalReport loo_evaluate(const Dataset& data, const ForestConfig& cfg) {
    if (data.size() < 3) throw LearnerError("insufficient_samples", "leave-one-out needs at least 3 samples");
    if (data.positives() == 0 || data.negatives() == 0)
        throw LearnerError("single_class", "evaluation data must contain both HIGH and LOW samples");

    EvalReport report;
    const std::size_t pos = data.positives();
    const std::size_t neg = data.negatives();
    for (std::size_t i = 0; i < data.size(); ++i) {
        const bool held_positive = data.label(i) == 1;
        const std::size_t train_pos = pos - (held_positive ? 1 : 0);
        const std::size_t train_neg = neg - (held_positive ? 0 : 1);
        if (train_pos == 0 || train_neg == 0) {
            report.skipped_folds.push_back(i);
            continue;
        }
        ForestConfig fold_cfg = cfg;
        fold_cfg.seed = derive_seed(cfg.seed, i, fold_salt);
        const Forest forest = train(data.without(i), fold_cfg);
        ++report.forests_trained;
        report.sample_index.push_back(i);
        report.scores.push_back(predict_proba(forest, data.row(i)));
        report.labels.push_back(data.label(i));
    }

    report.positives = static_cast<std::size_t>(std::count(report.labels.begin(), report.labels.end(), 1));
    report.negatives = report.labels.size() - report.positives;
    if (report.positives > 0 && report.negatives > 0) {
        auto curve = roc_auc(report.scores, report.labels);
        report.auc = curve.auc;
        report.roc_points = std::move(curve.points);
    } else {
        report.auc = std::nan("");
    }
    return report;
}

std::vector<std::size_t> ImportanceReport::ranking() const {
    std::vector<std::size_t> order(features.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return features[a].score > features[b].score; });
    return order;
}

ImportanceReport importance(const Forest& forest, const Dataset& data) {
    const auto& oob = forest.oob_masks();
    if (oob.size() != forest.trees().size())
        throw LearnerError("no_oob", "forest carries no out-of-bag masks");
    if (data.n_features() != forest.n_features())
        throw LearnerError("dimension_mismatch", "dataset does not match the forest's features");
    for (const auto& mask : oob)
        if (mask.size() != data.size())
            throw LearnerError("dimension_mismatch", "dataset is not the forest's training set");

    const std::size_t d = data.n_features();
    std::vector<std::vector<double>> increases(d); // per feature, one entry per usable tree
    std::vector<double> row(d);
    std::size_t trees_used = 0;

    for (std::size_t t = 0; t < forest.trees().size(); ++t) {
        const auto& tree = forest.trees()[t];
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < data.size(); ++i)
            if (oob[t][i]) members.push_back(i);
        if (members.empty()) continue;
        ++trees_used;

        auto misclassified = [&](std::size_t i, std::span<const double> x) {
            const int predicted = tree.predict_proba(x) > 0.5 ? 1 : 0;
            return predicted != data.label(i) ? 1 : 0;
        };
        int baseline = 0;
        for (auto i : members) baseline += misclassified(i, data.row(i));

        Rng rng = make_rng(forest.config().seed, t, permutation_salt);
        std::vector<std::size_t> shuffled(members);
        for (std::size_t f = 0; f < d; ++f) {
            std::copy(members.begin(), members.end(), shuffled.begin());
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            int permuted = 0;
            for (std::size_t k = 0; k < members.size(); ++k) {
                const auto i = members[k];
                const auto src = data.row(i);
                std::copy(src.begin(), src.end(), row.begin());
                row[f] = data.value(shuffled[k], f);
                permuted += misclassified(i, row);
            }
            increases[f].push_back(static_cast<double>(permuted - baseline) /
                                   static_cast<double>(members.size()));
        }
    }
    if (trees_used == 0) throw LearnerError("no_oob", "no tree has out-of-bag samples");

    ImportanceReport report;
    report.trees_used = trees_used;
    for (std::size_t f = 0; f < d; ++f) {
        const auto& v = increases[f];
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
        FeatureImportance fi;
        fi.feature = data.feature_names()[f];
        fi.mean_error_increase = mean;
        fi.sd_over_trees = sd;
        fi.degenerate = !(sd > 0.0);
        fi.score = fi.degenerate ? 0.0 : mean / sd;
        report.features.push_back(std::move(fi));
    }
    return report;
}

} // namespace adscreen::learner
