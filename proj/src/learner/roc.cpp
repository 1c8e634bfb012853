#include "adscreen/learner/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace adscreen::learner {

RocCurve roc_auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size())
        throw LearnerError("size_mismatch", "scores and labels differ in length");
    std::size_t pos = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) throw LearnerError("non_finite_score", "scores must be finite");
        if (labels[i] != 0 && labels[i] != 1) throw LearnerError("invalid_label", "labels must be 0 or 1");
        pos += static_cast<std::size_t>(labels[i]);
    }
    const std::size_t neg = scores.size() - pos;
    if (pos == 0 || neg == 0) throw LearnerError("single_class", "ROC needs at least one positive and one negative");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    // Sweep thresholds from high to low. A tied group contributes its
    // positives times the negatives strictly below it, plus half of the
    // within-group pairs. Counted in half-units to stay in integers.
    RocCurve curve;
    curve.points.push_back({0.0, 0.0});
    std::uint64_t tp = 0, fp = 0, doubled_wins = 0;
    for (std::size_t k = 0; k < order.size();) {
        std::uint64_t group_pos = 0, group_neg = 0;
        const double s = scores[order[k]];
        for (; k < order.size() && scores[order[k]] == s; ++k)
            (labels[order[k]] ? group_pos : group_neg) += 1;
        const std::uint64_t neg_below = neg - fp - group_neg;
        doubled_wins += 2 * group_pos * neg_below + group_pos * group_neg;
        tp += group_pos;
        fp += group_neg;
        curve.points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                                static_cast<double>(tp) / static_cast<double>(pos)});
    }
    curve.auc = static_cast<double>(doubled_wins) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
    return curve;
}

} // namespace adscreen::learner
