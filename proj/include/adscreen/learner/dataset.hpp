#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace adscreen::learner {

// Dense row-major feature matrix with binary labels (1 = HIGH, 0 = LOW).
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::vector<std::string> feature_names);

    void add(std::span<const double> x, int label);

    std::size_t size() const { return labels_.size(); }
    std::size_t n_features() const { return names_.size(); }
    const std::vector<std::string>& feature_names() const { return names_; }

    std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * names_.size(), names_.size()};
    }
    double value(std::size_t i, std::size_t j) const { return values_[i * names_.size() + j]; }
    int label(std::size_t i) const { return labels_[i]; }
    const std::vector<int>& labels() const { return labels_; }

    std::size_t positives() const;
    std::size_t negatives() const { return size() - positives(); }

    Dataset without(std::size_t i) const;
    Dataset with_labels(std::vector<int> labels) const;
    // Applies `f` to every value; labels and names unchanged.
    template <typename F>
    Dataset transformed(F&& f) const {
        Dataset out = *this;
        for (auto& v : out.values_) v = f(v);
        return out;
    }

private:
    std::vector<std::string> names_;
    std::vector<double> values_;
    std::vector<int> labels_;
};

// CSV with a header row; the last column must be "label" holding 0 or 1.
Dataset read_dataset_csv(std::istream& in, const std::string& source = "<stream>");
Dataset load_dataset_csv(const std::filesystem::path& path);
void write_dataset_csv(std::ostream& out, const Dataset& data);

} // namespace adscreen::learner
