#include "pcmrbm/dataset.hpp"

#include <algorithm>

#include "pcmrbm/errors.hpp"

namespace pcmrbm {

std::uint32_t Pattern::index() const {
    std::uint32_t idx = 0;
    for (int i = 0; i < size(); ++i)
        if (pixels[i]) idx |= 1u << i;
    return idx;
}

std::string Pattern::to_string() const {
    std::string s(pixels.size(), '0');
    for (int i = 0; i < size(); ++i)
        if (pixels[i]) s[i] = '1';
    return s;
}

Pattern Pattern::from_string(std::string_view s) {
    Pattern p;
    p.pixels.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1')
            throw ConfigError("pattern: expected a string of 0s and 1s, got '" +
                              std::string(s) + "'");
        p.pixels.push_back(c == '1' ? 1 : 0);
    }
    return p;
}

Pattern Pattern::from_index(std::uint32_t idx, int n_pixels) {
    Pattern p;
    p.pixels.resize(n_pixels);
    for (int i = 0; i < n_pixels; ++i) p.pixels[i] = (idx >> i) & 1u;
    return p;
}

DataSet DataSet::from_patterns(std::vector<Pattern> patterns) {
    if (patterns.empty()) throw ConfigError("dataset: needs at least one pattern");
    DataSet d;
    d.n_visible = patterns.front().size();
    for (const auto& p : patterns)
        if (p.size() != d.n_visible)
            throw ConfigError("dataset: inconsistent pattern sizes");
    if (d.n_visible > 20) throw ConfigError("dataset: visible space too large to enumerate");
    d.empirical.assign(1ull << d.n_visible, 0.0);
    const double w = 1.0 / static_cast<double>(patterns.size());
    for (const auto& p : patterns) d.empirical[p.index()] += w;
    d.patterns = std::move(patterns);
    return d;
}

Pattern sample_bars_stripes(Rng& rng, int side) {
    const bool horizontal = rng.bernoulli(0.5);
    std::vector<std::uint8_t> lines(side);
    for (int l = 0; l < side; ++l) lines[l] = rng.bernoulli(0.5) ? 1 : 0;

    Pattern p;
    p.pixels.resize(static_cast<std::size_t>(side) * side);
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c)
            p.pixels[static_cast<std::size_t>(r) * side + c] = horizontal ? lines[r] : lines[c];
    return p;
}

std::vector<Pattern> enumerate_distinct(int side) {
    std::vector<Pattern> out;
    const std::uint32_t n_codes = 1u << side;
    for (int orientation = 0; orientation < 2; ++orientation) {
        for (std::uint32_t code = 0; code < n_codes; ++code) {
            Pattern p;
            p.pixels.resize(static_cast<std::size_t>(side) * side);
            for (int r = 0; r < side; ++r)
                for (int c = 0; c < side; ++c) {
                    const int line = orientation == 0 ? r : c;
                    p.pixels[static_cast<std::size_t>(r) * side + c] = (code >> line) & 1u;
                }
            if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
        }
    }
    return out;
}

DataSet make_training_set(int n_patterns, Rng& rng, int side, bool multiset) {
    if (multiset) {
        if (n_patterns < 1) throw OutOfRange("dataset: n_patterns must be >= 1");
        std::vector<Pattern> picks;
        picks.reserve(n_patterns);
        for (int i = 0; i < n_patterns; ++i) picks.push_back(sample_bars_stripes(rng, side));
        return DataSet::from_patterns(std::move(picks));
    }

    std::vector<Pattern> all = enumerate_distinct(side);
    if (n_patterns < 1 || n_patterns > static_cast<int>(all.size()))
        throw OutOfRange("dataset: n_patterns must be in [1, " +
                         std::to_string(all.size()) + "]");
    // partial Fisher-Yates; the first n_patterns slots are the subset
    for (int i = 0; i < n_patterns; ++i) {
        const std::size_t j = i + rng.below(all.size() - i);
        std::swap(all[i], all[j]);
    }
    all.resize(n_patterns);
    return DataSet::from_patterns(std::move(all));
}

} // namespace pcmrbm
