#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pcmrbm/rng.hpp"

namespace pcmrbm {

// Binary image, row-major, 1 = white/ON, 0 = black/OFF.
struct Pattern {
    std::vector<std::uint8_t> pixels;

    int size() const { return static_cast<int>(pixels.size()); }

    // state index with pixel 0 in the least significant bit
    std::uint32_t index() const;

    std::string to_string() const; // e.g. "111000111"
    static Pattern from_string(std::string_view s);
    static Pattern from_index(std::uint32_t idx, int n_pixels);

    bool operator==(const Pattern&) const = default;
};

// Training subset plus its empirical distribution over all 2^Nv visible
// configurations (uniform over the subset, with multiplicity).
struct DataSet {
    int n_visible = 0;
    std::vector<Pattern> patterns;
    std::vector<double> empirical;

    static DataSet from_patterns(std::vector<Pattern> patterns);
};

// Draws one bars-and-stripes image: orientation is a fair coin, then each
// row (or column) is independently ON with probability 1/2.
Pattern sample_bars_stripes(Rng& rng, int side = 3);

// All distinct bars-and-stripes patterns for the given side; 14 for 3x3
// (the all-ON and all-OFF images are reachable from both orientations).
std::vector<Pattern> enumerate_distinct(int side = 3);

// Uniform random subset of the distinct patterns, without replacement
// (throws OutOfRange if n_patterns is outside [1, distinct count]).
// In multiset mode the set is built from raw sampler draws instead and
// duplicates are kept.
DataSet make_training_set(int n_patterns, Rng& rng, int side = 3, bool multiset = false);

} // namespace pcmrbm
