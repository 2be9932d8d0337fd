#include "mvt/split.hpp"

#include <algorithm>
#include <cmath>

#include "mvt/error.hpp"
#include "mvt/rng.hpp"

namespace mvt {

std::vector<std::size_t> SplitAssignment::indices(Split which) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] == which) out.push_back(i);
    }
    return out;
}

std::size_t SplitAssignment::count(Split which) const {
    return static_cast<std::size_t>(std::count(assignment.begin(), assignment.end(), which));
}

SplitAssignment stratified_split(const LabelMap& labels, const SplitFractions& fractions,
                                 std::uint64_t seed) {
    require(fractions.train >= 0 && fractions.val >= 0 && fractions.test >= 0, ErrorKind::config,
            "split fractions must be non-negative");
    require(std::abs(fractions.train + fractions.val + fractions.test - 1.0) < 1e-9,
            ErrorKind::config, "split fractions must sum to 1");

    SplitAssignment out;
    out.seed = seed;
    out.assignment.assign(labels.ids.size(), Split::none);

    std::vector<std::vector<std::size_t>> members(labels.classes + 1);
    for (std::size_t i = 0; i < labels.ids.size(); ++i) {
        if (labels.ids[i] != 0) members[labels.ids[i]].push_back(i);
    }

    auto rng = make_rng(seed, RngStream::split);
    for (std::size_t c = 1; c <= labels.classes; ++c) {
        auto& pix = members[c];
        const std::size_t n = pix.size();
        if (n == 0) continue;
        std::shuffle(pix.begin(), pix.end(), rng);

        std::size_t n_train = 0;
        std::size_t n_val = 0;
        if (n < 3) {
            out.warnings.push_back("class " + std::to_string(c) + " has only " + std::to_string(n) +
                                   " labeled pixel(s); assigning train > val > test");
            n_train = 1;
            n_val = n - 1;
        } else {
            n_train = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(fractions.train * n)));
            n_val = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(fractions.val * n)));
            n_train = std::min(n_train, n - 1);
            n_val = std::min(n_val, n - n_train);
        }
        for (std::size_t k = 0; k < n; ++k) {
            out.assignment[pix[k]] = k < n_train ? Split::train
                                     : k < n_train + n_val ? Split::val
                                                           : Split::test;
        }
    }
    return out;
}

}  // namespace mvt
