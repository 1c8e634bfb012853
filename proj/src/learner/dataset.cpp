#include "adscreen/learner/dataset.hpp"

#include "adscreen/common/error.hpp"
#include "adscreen/common/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace adscreen::learner {

Dataset::Dataset(std::vector<std::string> feature_names) : names_(std::move(feature_names)) {}

void Dataset::add(std::span<const double> x, int label) {
    if (x.size() != names_.size())
        throw ValidationError(fmt::format("row has {} values, dataset has {} features", x.size(), names_.size()));
    if (label != 0 && label != 1) throw ValidationError("label must be 0 or 1");
    values_.insert(values_.end(), x.begin(), x.end());
    labels_.push_back(label);
}

std::size_t Dataset::positives() const {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), 1));
}

Dataset Dataset::without(std::size_t i) const {
    Dataset out(names_);
    const std::size_t d = names_.size();
    out.values_.reserve(values_.size() - d);
    out.labels_.reserve(labels_.size() - 1);
    for (std::size_t r = 0; r < size(); ++r) {
        if (r == i) continue;
        out.values_.insert(out.values_.end(), values_.begin() + r * d, values_.begin() + (r + 1) * d);
        out.labels_.push_back(labels_[r]);
    }
    return out;
}

Dataset Dataset::with_labels(std::vector<int> labels) const {
    if (labels.size() != labels_.size()) throw ValidationError("label count mismatch");
    Dataset out = *this;
    out.labels_ = std::move(labels);
    return out;
}

Dataset read_dataset_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(source + ": empty file", source);
    auto header = split_csv_line(line);
    if (header.empty() || trim(header.back()) != "label")
        throw ParseError(source + ":1: last column must be 'label'", source + ":1");
    header.pop_back();
    Dataset data(header);

    std::vector<double> row(header.size());
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::string where = fmt::format("{}:{}", source, line_no);
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size() + 1)
            throw ParseError(fmt::format("{}: expected {} fields, found {}", where, header.size() + 1, fields.size()),
                             where);
        for (std::size_t j = 0; j < header.size(); ++j) {
            const auto f = trim(fields[j]);
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), row[j]);
            if (ec != std::errc{} || ptr != f.data() + f.size())
                throw ParseError(fmt::format("{}: column '{}' is not a number", where, header[j]), where);
        }
        const auto label = trim(fields.back());
        if (label != "0" && label != "1") throw ParseError(where + ": label must be 0 or 1", where);
        data.add(row, label == "1" ? 1 : 0);
    }
    return data;
}

Dataset load_dataset_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path.string(), path.string());
    return read_dataset_csv(in, path.string());
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
    for (const auto& n : data.feature_names()) out << n << ',';
    out << "label\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (double v : data.row(i)) out << format_double(v) << ',';
        out << data.label(i) << '\n';
    }
}

} // namespace adscreen::learner
