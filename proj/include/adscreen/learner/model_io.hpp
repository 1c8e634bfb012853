#pragma once

#include "adscreen/learner/evaluation.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace adscreen::learner {

inline constexpr int model_format_version = 1;

// {"format": "adscreen-forest", "version": 1, "feature_names": [...],
//  "config": {...}, "trees": [{"feature": [...], "threshold": [...],
//  "left": [...], "right": [...], "p_high": [...]}]}
// Out-of-bag masks are not persisted.
std::string forest_to_json(const Forest& forest);
Forest forest_from_json(std::string_view document);

// sample,label,score
void write_eval_csv(std::ostream& out, const EvalReport& report);
// fpr,tpr
void write_roc_csv(std::ostream& out, const std::vector<RocPoint>& points);
// feature,mean_error_increase,sd_over_trees,score,degenerate
void write_importance_csv(std::ostream& out, const ImportanceReport& report);

} // namespace adscreen::learner
