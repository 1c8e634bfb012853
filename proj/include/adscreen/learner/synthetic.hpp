#pragma once

#include "adscreen/learner/dataset.hpp"

#include <cstdint>

namespace adscreen::learner {

// n samples, d standard-normal features f0..f{d-1}. The label is the
// majority vote of (f_j > 0) over the first `informative` features (odd),
// so the classes are exactly separable by axis-aligned splits.
Dataset make_majority_corpus(std::size_t n, std::size_t d, std::size_t informative, std::uint64_t seed);

// label = (f0 > 0).
Dataset make_threshold_corpus(std::size_t n, std::size_t d, std::uint64_t seed);

} // namespace adscreen::learner
