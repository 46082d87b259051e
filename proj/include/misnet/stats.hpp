#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace misnet {

struct MeanError {
    double mean = 0.0;
    double stderr_ = 0.0;  // sample stdev / sqrt(n); 0 when n == 1
    std::size_t n = 0;
};

/// Throws std::invalid_argument on an empty sample.
inline MeanError mean_and_stderr(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean of an empty sample");
    double sum = 0.0;
    for (double v : values) sum += v;
    const double n = static_cast<double>(values.size());
    const double mean = sum / n;
    if (values.size() == 1) return {mean, 0.0, 1};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n), values.size()};
}

}  // namespace misnet
