#include "adscreen/learner/synthetic.hpp"

#include "adscreen/common/error.hpp"
#include "adscreen/common/rng.hpp"

#include <string>
#include <vector>

namespace adscreen::learner {
namespace {

std::vector<std::string> names(std::size_t d) {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < d; ++j) out.push_back("f" + std::to_string(j));
    return out;
}

} // namespace

Dataset make_majority_corpus(std::size_t n, std::size_t d, std::size_t informative, std::uint64_t seed) {
    if (informative == 0 || informative % 2 == 0 || informative > d)
        throw ValidationError("informative feature count must be odd and at most d");
    Dataset data(names(d));
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> x(d);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t votes = 0;
        for (std::size_t j = 0; j < d; ++j) {
            x[j] = normal(rng);
            if (j < informative && x[j] > 0.0) ++votes;
        }
        data.add(x, 2 * votes > informative ? 1 : 0);
    }
    return data;
}

Dataset make_threshold_corpus(std::size_t n, std::size_t d, std::uint64_t seed) {
    Dataset data(names(d));
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> x(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& v : x) v = normal(rng);
        data.add(x, x[0] > 0.0 ? 1 : 0);
    }
    return data;
}

} // namespace adscreen::learner
