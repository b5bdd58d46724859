#pragma once

// Synthetic benchmarks with a known label geometry: classes on a circle and
// classes on a grid.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "strent/gbm.hpp"
#include "strent/rng.hpp"

namespace strent::testing {

struct CircleBenchmark {
    std::size_t num_classes = 12;
    double angle_noise = 0.35;    // sd of the wrapped-normal jitter of the class angle, radians
    double feature_noise = 0.15;  // sd of the isotropic noise added to (cos, sin)
};

// Label uniform over the classes; features are the point at the jittered class
// angle on the unit circle plus isotropic noise. `position[c]` places class c on
// the circle (identity when empty).
inline Dataset sample_circle(const CircleBenchmark& b, std::size_t n, Rng& rng,
                             const std::vector<std::size_t>& position = {}) {
    Dataset data;
    data.num_classes = b.num_classes;
    data.features = Matrix(n, 2);
    data.labels.resize(n);
    data.feature_names = {"x", "y"};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = rng.uniform_index(b.num_classes);
        const std::size_t slot = position.empty() ? c : position[c];
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(slot) / static_cast<double>(b.num_classes) +
                             b.angle_noise * rng.normal();
        data.labels[i] = c;
        data.features(i, 0) = std::cos(angle) + b.feature_noise * rng.normal();
        data.features(i, 1) = std::sin(angle) + b.feature_noise * rng.normal();
    }
    return data;
}

struct GridBenchmark {
    std::size_t rows = 6;
    std::size_t cols = 8;
    double noise = 0.6;  // sd of the coordinate noise, in cell units
};

// Class r * cols + c sits at coordinates (r, c); features are those
// coordinates plus isotropic noise.
inline Dataset sample_grid(const GridBenchmark& b, std::size_t n, Rng& rng) {
    Dataset data;
    data.num_classes = b.rows * b.cols;
    data.features = Matrix(n, 2);
    data.labels.resize(n);
    data.feature_names = {"row", "col"};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = rng.uniform_index(data.num_classes);
        data.labels[i] = c;
        data.features(i, 0) = static_cast<double>(c / b.cols) + b.noise * rng.normal();
        data.features(i, 1) = static_cast<double>(c % b.cols) + b.noise * rng.normal();
    }
    return data;
}

}  // namespace strent::testing
