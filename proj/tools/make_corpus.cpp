// Writes the synthetic majority-vote corpus used by the bundled examples.
//   adscreen-make-corpus OUT.csv [n d informative seed]

#include "adscreen/common/error.hpp"
#include "adscreen/common/io.hpp"
#include "adscreen/learner/dataset.hpp"
#include "adscreen/learner/synthetic.hpp"

#include <iostream>
#include <sstream>
#include <string>

int main(int argc, char** argv) {
    if (argc != 2 && argc != 6) {
        std::cerr << "usage: adscreen-make-corpus OUT.csv [n d informative seed]\n";
        return 2;
    }
    try {
        std::size_t n = 200, d = 30, informative = 3;
        std::uint64_t seed = 2018;
        if (argc == 6) {
            n = std::stoul(argv[2]);
            d = std::stoul(argv[3]);
            informative = std::stoul(argv[4]);
            seed = std::stoull(argv[5]);
        }
        std::ostringstream out;
        adscreen::learner::write_dataset_csv(out, adscreen::learner::make_majority_corpus(n, d, informative, seed));
        adscreen::write_file_atomic(argv[1], out.str());
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
    return 0;
}
