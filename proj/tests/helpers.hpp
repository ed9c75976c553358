#pragma once

#include <random>
#include <string>
#include <vector>

#include "ucn/matrix.hpp"
#include "ucn/panel.hpp"

namespace ucn::test {

inline Matrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed, double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, sd);
    Matrix m(rows, cols);
    for (auto& v : m.flat()) v = N(rng);
    return m;
}

inline std::vector<std::string> names(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back("X" + std::to_string(i + 1));
    return out;
}

inline TimeSeriesPanel noise_panel(std::size_t steps, std::size_t n, std::uint64_t seed) {
    return TimeSeriesPanel(gaussian(steps, n, seed), names(n));
}

}  // namespace ucn::test
