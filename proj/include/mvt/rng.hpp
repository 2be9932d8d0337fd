#pragma once

#include <cstdint>
#include <random>

namespace mvt {

// Independent RNG streams derived from one master seed.
enum class RngStream : std::uint32_t {
    split = 1,
    shuffle = 2,
    init = 3,
    synth_sites = 4,
    synth_noise = 5,
};

inline std::uint64_t derive_seed(std::uint64_t master, RngStream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(stream)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

inline std::mt19937_64 make_rng(std::uint64_t master, RngStream stream) {
    return std::mt19937_64(derive_seed(master, stream));
}

}  // namespace mvt
