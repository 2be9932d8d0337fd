#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mvt/cube.hpp"

namespace mvt {

enum class Split : std::uint8_t { none = 0, train, val, test };

struct SplitFractions {
    double train = 0.05;
    double val = 0.05;
    double test = 0.90;
};

// One entry per pixel of the label raster (row-major); unlabeled pixels are
// Split::none.
struct SplitAssignment {
    std::vector<Split> assignment;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;

    // Row-major pixel indices assigned to `which`, ascending.
    std::vector<std::size_t> indices(Split which) const;
    std::size_t count(Split which) const;
};

// Per class with n labeled pixels: train = max(1, round(f_train n)),
// val = max(1, round(f_val n)), remainder test, chosen by a seeded shuffle.
// Classes with fewer than 3 pixels are filled train > val > test and
// reported in `warnings`.
SplitAssignment stratified_split(const LabelMap& labels, const SplitFractions& fractions,
                                 std::uint64_t seed);

}  // namespace mvt
