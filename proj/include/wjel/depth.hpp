#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "wjel/errors.hpp"
#include "wjel/estimating.hpp"
#include "wjel/numeric.hpp"

namespace wjel {

// Observation weights for the weighted likelihood. c_hat = n * sum w_i^2 is the
// scaling constant of the limiting chi-square (1 for uniform weights).
struct WeightVector {
    std::vector<double> weights;
    double c_hat = 1.0;
    bool degenerate = false;  // all depths at or below the floor; uniform fallback used

    int n() const { return static_cast<int>(weights.size()); }
};

namespace detail {

inline double depth_c_hat(std::span<const double> w) {
    double s = 0.0;
    for (double v : w) s += v * v;
    return static_cast<double>(w.size()) * s;
}

}  // namespace detail

// Spatial depth of x with respect to the sample: 1 - || mean of unit vectors
// from each data point towards x ||, with the zero vector mapped to zero.
// Bounded in [0, 1]; 1 at the spatial median, small far from the data.
inline double spatial_depth(const Observation& x, const Sample& data) {
    const std::size_t n = data.size();
    if (n == 0) throw InsufficientData("spatial_depth: empty sample");
    const std::size_t d = x.size();
    std::vector<double> sum(d, 0.0), diff(d);
    for (const auto& y : data) {
        if (y.size() != d) throw DimensionMismatch("spatial_depth: mixed observation dimensions");
        double norm_sq = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            diff[c] = x[c] - y[c];
            norm_sq += diff[c] * diff[c];
        }
        if (norm_sq == 0.0) continue;
        double inv = 1.0 / std::sqrt(norm_sq);
        for (std::size_t c = 0; c < d; ++c) sum[c] += diff[c] * inv;
    }
    double norm_sq = 0.0;
    for (std::size_t c = 0; c < d; ++c) norm_sq += sum[c] * sum[c];
    return 1.0 - std::sqrt(norm_sq) / static_cast<double>(n);
}

// Depths of every sample point with respect to the whole sample. Each pair is
// visited once; the unit vector enters antisymmetrically on both sides.
inline std::vector<double> spatial_depths(const Sample& data) {
    const std::size_t n = data.size();
    if (n == 0) throw InsufficientData("spatial_depths: empty sample");
    const std::size_t d = data[0].size();
    for (const auto& y : data)
        if (y.size() != d) throw DimensionMismatch("spatial_depths: mixed observation dimensions");

    std::vector<double> sums(n * d, 0.0);
    std::vector<double> diff(d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double norm_sq = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                diff[c] = data[i][c] - data[j][c];
                norm_sq += diff[c] * diff[c];
            }
            if (norm_sq == 0.0) continue;
            double inv = 1.0 / std::sqrt(norm_sq);
            for (std::size_t c = 0; c < d; ++c) {
                sums[i * d + c] += diff[c] * inv;
                sums[j * d + c] -= diff[c] * inv;
            }
        }
    std::vector<double> depths(n);
    for (std::size_t i = 0; i < n; ++i) {
        double norm_sq = 0.0;
        for (std::size_t c = 0; c < d; ++c) norm_sq += sums[i * d + c] * sums[i * d + c];
        depths[i] = 1.0 - std::sqrt(norm_sq) / static_cast<double>(n);
    }
    return depths;
}

// Weights proportional to max(depth, floor). In the all-degenerate case the
// weights fall back to uniform with the flag set instead of raising.
inline WeightVector depth_weights(const Sample& data, double floor = 1e-12) {
    if (floor <= 0.0) throw DomainError("depth_weights: floor must be positive");
    std::vector<double> depths = spatial_depths(data);
    const std::size_t n = depths.size();
    WeightVector w;
    w.weights.resize(n);
    bool any_above = false;
    for (double dv : depths)
        if (dv > floor) any_above = true;
    if (!any_above) {
        for (auto& v : w.weights) v = 1.0 / static_cast<double>(n);
        w.degenerate = true;
        w.c_hat = 1.0;
        return w;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w.weights[i] = std::max(depths[i], floor);
        total += w.weights[i];
    }
    for (auto& v : w.weights) v /= total;
    w.c_hat = detail::depth_c_hat(w.weights);
    return w;
}

inline WeightVector uniform_weights(int n) {
    if (n < 1) throw InsufficientData("uniform_weights: need at least one observation");
    WeightVector w;
    w.weights.assign(static_cast<std::size_t>(n), 1.0 / n);
    w.c_hat = 1.0;
    return w;
}

// Sample version of the limiting chi-square scale: mean(D^2) / (mean D)^2.
inline double limit_constant_oracle(std::span<const double> depth_values) {
    if (depth_values.empty()) throw InsufficientData("limit_constant_oracle: empty input");
    double m1 = 0.0, m2 = 0.0;
    for (double v : depth_values) {
        m1 += v;
        m2 += v * v;
    }
    m1 /= static_cast<double>(depth_values.size());
    m2 /= static_cast<double>(depth_values.size());
    if (m1 <= 0.0) throw ZeroMeanDepth("limit_constant_oracle: mean depth is not positive");
    return m2 / (m1 * m1);
}

}  // namespace wjel
