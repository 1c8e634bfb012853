#include "adscreen/learner/model_io.hpp"

#include "adscreen/common/io.hpp"

#include <json.hpp>

#include <ostream>

namespace adscreen::learner {

using nlohmann::json;

std::string forest_to_json(const Forest& forest) {
    const auto& cfg = forest.config();
    json config{{"n_trees", cfg.n_trees}, {"min_leaf", cfg.min_leaf}, {"seed", cfg.seed}};
    config["max_features"] = cfg.max_features ? json(*cfg.max_features) : json(nullptr);
    config["max_depth"] = cfg.max_depth ? json(*cfg.max_depth) : json(nullptr);
    config["bootstrap_size"] = cfg.bootstrap_size ? json(*cfg.bootstrap_size) : json(nullptr);

    json trees = json::array();
    for (const auto& tree : forest.trees()) {
        json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
             p_high = json::array();
        for (const auto& n : tree.nodes()) {
            feature.push_back(n.feature);
            threshold.push_back(n.threshold);
            left.push_back(n.left);
            right.push_back(n.right);
            p_high.push_back(n.p_high);
        }
        trees.push_back({{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right},
                         {"p_high", p_high}});
    }
    json root{{"format", "adscreen-forest"},
              {"version", model_format_version},
              {"feature_names", forest.feature_names()},
              {"config", config},
              {"trees", trees}};
    return root.dump() + "\n";
}

Forest forest_from_json(std::string_view document) {
    try {
        const json root = json::parse(document);
        if (root.value("format", "") != "adscreen-forest")
            throw LearnerError("invalid_model", "not a forest document");
        if (root.at("version").get<int>() != model_format_version)
            throw LearnerError("invalid_model", "unsupported forest format version");

        const json& c = root.at("config");
        ForestConfig cfg;
        cfg.n_trees = c.at("n_trees").get<std::size_t>();
        cfg.min_leaf = c.at("min_leaf").get<std::size_t>();
        cfg.seed = c.at("seed").get<std::uint64_t>();
        if (!c.at("max_features").is_null()) cfg.max_features = c["max_features"].get<std::size_t>();
        if (!c.at("max_depth").is_null()) cfg.max_depth = c["max_depth"].get<std::size_t>();
        if (!c.at("bootstrap_size").is_null()) cfg.bootstrap_size = c["bootstrap_size"].get<std::size_t>();

        std::vector<DecisionTree> trees;
        for (const auto& t : root.at("trees")) {
            const auto feature = t.at("feature").get<std::vector<int>>();
            const auto threshold = t.at("threshold").get<std::vector<double>>();
            const auto left = t.at("left").get<std::vector<int>>();
            const auto right = t.at("right").get<std::vector<int>>();
            const auto p_high = t.at("p_high").get<std::vector<double>>();
            const auto n = feature.size();
            if (threshold.size() != n || left.size() != n || right.size() != n || p_high.size() != n)
                throw LearnerError("invalid_model", "tree arrays differ in length");
            std::vector<TreeNode> nodes(n);
            for (std::size_t i = 0; i < n; ++i) nodes[i] = {feature[i], threshold[i], left[i], right[i], p_high[i]};
            trees.emplace_back(std::move(nodes));
        }
        return Forest(std::move(trees), root.at("feature_names").get<std::vector<std::string>>(), cfg);
    } catch (const json::exception& e) {
        throw LearnerError("invalid_model", std::string("malformed forest document: ") + e.what());
    }
}

void write_eval_csv(std::ostream& out, const EvalReport& report) {
    out << "sample,label,score\n";
    for (std::size_t k = 0; k < report.scores.size(); ++k)
        out << report.sample_index[k] << ',' << report.labels[k] << ',' << format_double(report.scores[k]) << '\n';
}

void write_roc_csv(std::ostream& out, const std::vector<RocPoint>& points) {
    out << "fpr,tpr\n";
    for (const auto& p : points) out << format_double(p.fpr) << ',' << format_double(p.tpr) << '\n';
}

void write_importance_csv(std::ostream& out, const ImportanceReport& report) {
    out << "feature,mean_error_increase,sd_over_trees,score,degenerate\n";
    for (const auto& f : report.features)
        out << f.feature << ',' << format_double(f.mean_error_increase) << ',' << format_double(f.sd_over_trees)
            << ',' << format_double(f.score) << ',' << (f.degenerate ? 1 : 0) << '\n';
}

} // namespace adscreen::learner
