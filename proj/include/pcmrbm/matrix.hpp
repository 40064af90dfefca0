#pragma once

#include <algorithm>
#include <cassert>
#include <vector>

namespace pcmrbm {

// Dense row-major matrix of doubles. The networks here are tiny (9x5 by
// default) so this deliberately stays a flat struct with no expression
// machinery.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

    double& operator()(int i, int j) {
        assert(i >= 0 && i < rows && j >= 0 && j < cols);
        return data[static_cast<std::size_t>(i) * cols + j];
    }
    double operator()(int i, int j) const {
        assert(i >= 0 && i < rows && j >= 0 && j < cols);
        return data[static_cast<std::size_t>(i) * cols + j];
    }

    bool operator==(const Matrix&) const = default;

    double min() const { return *std::min_element(data.begin(), data.end()); }
    double max() const { return *std::max_element(data.begin(), data.end()); }
    double mean() const {
        double s = 0.0;
        for (double x : data) s += x;
        return data.empty() ? 0.0 : s / static_cast<double>(data.size());
    }
};

} // namespace pcmrbm
