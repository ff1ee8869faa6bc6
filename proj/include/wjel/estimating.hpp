#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wjel/errors.hpp"
#include "wjel/rng.hpp"

namespace wjel {

using Observation = std::vector<double>;
using Sample = std::vector<Observation>;

// Multivariate estimating equation theta solves E H(X_1..X_k; theta) = 0.
// When the kernel is affine in theta, H(x; theta) = slope(x) * theta + offset(x),
// eval_affine exposes the decomposition so downstream code can cache the
// theta-independent parts across repeated evaluations on fixed data.
struct EstimatingEquation {
    int degree = 2;     // k, sample arguments per kernel evaluation
    int param_dim = 1;  // r, components of theta and of H
    int data_dim = 1;   // d, coordinates per observation

    // Declared interest/nuisance split for profiling: theta = (alpha, beta)
    // with dim(alpha) = interest_dim, dim(beta) = nuisance_dim. Zero means no split.
    int interest_dim = 0;
    int nuisance_dim = 0;

    std::function<void(std::span<const Observation>, std::span<const double>, std::span<double>)>
        eval;

    bool affine = false;
    // slope is row-major param_dim x param_dim, offset has param_dim entries.
    std::function<void(std::span<const Observation>, std::span<double>, std::span<double>)>
        eval_affine;

    // Natural parameter bounds per component; +-infinity when unbounded.
    std::vector<double> lower_bound, upper_bound;

    std::string name;
};

inline void validate_equation(const EstimatingEquation& eq) {
    if (eq.degree < 1) throw DomainError("estimating equation: degree must be >= 1");
    if (eq.param_dim < 1) throw DomainError("estimating equation: param_dim must be >= 1");
    if (eq.data_dim < 1) throw DomainError("estimating equation: data_dim must be >= 1");
    if (!eq.eval) throw DomainError("estimating equation: eval is unset");
    if (eq.interest_dim < 0 || eq.nuisance_dim < 0 ||
        (eq.interest_dim + eq.nuisance_dim != 0 &&
         eq.interest_dim + eq.nuisance_dim != eq.param_dim))
        throw DimensionMismatch("estimating equation: interest/nuisance split must sum to param_dim");
    if (eq.lower_bound.size() != static_cast<std::size_t>(eq.param_dim) ||
        eq.upper_bound.size() != static_cast<std::size_t>(eq.param_dim))
        throw DimensionMismatch("estimating equation: bound vectors must have param_dim entries");
}

inline void check_observation_dims(const Sample& data, int data_dim, const char* where) {
    for (const auto& obs : data) {
        if (obs.size() != static_cast<std::size_t>(data_dim))
            throw DimensionMismatch(std::string(where) + ": observation has wrong dimension");
        for (double v : obs)
            if (!std::isfinite(v))
                throw DomainError(std::string(where) + ": observation has non-finite coordinate");
    }
}

// h1 component of the Gini covariance kernel: quarter of the first-coordinate
// gap signed by the second-coordinate order (zero on ties).
inline double gini_h1(double x1, double y1, double x2, double y2) {
    if (y1 > y2) return 0.25 * (x1 - x2);
    if (y2 > y1) return 0.25 * (x2 - x1);
    return 0.0;
}

// h2 component: quarter of the absolute first-coordinate gap.
inline double gini_h2(double x1, double x2) { return 0.25 * std::abs(x1 - x2); }

// Pairwise kernel of the joint Gini correlation equations:
//   H1 = h2(x gap) * gamma1 - h1(x signed by y),
//   H2 = h2(y gap) * gamma2 - h1(y signed by x).
// E H1 = E H2 = 0 at the true (gamma1, gamma2).
inline std::array<double, 2> gini_corr_kernel(const Observation& z1, const Observation& z2,
                                              std::span<const double> gamma) {
    if (z1.size() != 2 || z2.size() != 2)
        throw DimensionMismatch("gini_corr_kernel: observations must be bivariate");
    if (gamma.size() != 2)
        throw DimensionMismatch("gini_corr_kernel: gamma must have two components");
    double h2x = gini_h2(z1[0], z2[0]);
    double h1x = gini_h1(z1[0], z1[1], z2[0], z2[1]);
    double h2y = gini_h2(z1[1], z2[1]);
    double h1y = gini_h1(z1[1], z1[0], z2[1], z2[0]);
    return {h2x * gamma[0] - h1x, h2y * gamma[1] - h1y};
}

// Pairwise kernel of the Gini index equation: (x1 + x2) * g - |x1 - x2|,
// mean zero when g is the population Gini index.
inline double gini_index_kernel(double x1, double x2, double g) {
    return (x1 + x2) * g - std::abs(x1 - x2);
}

// Scalar equation for one Gini correlation component (1: gamma(x|y), 2: gamma(y|x)).
inline EstimatingEquation gini_correlation_equation(int component) {
    if (component != 1 && component != 2)
        throw DomainError("gini_correlation_equation: component must be 1 or 2");
    EstimatingEquation eq;
    eq.degree = 2;
    eq.param_dim = 1;
    eq.data_dim = 2;
    eq.lower_bound = {-1.0};
    eq.upper_bound = {1.0};
    eq.name = component == 1 ? "gini-corr-1" : "gini-corr-2";
    const int xi = component == 1 ? 0 : 1;
    const int yi = component == 1 ? 1 : 0;
    eq.affine = true;
    eq.eval_affine = [xi, yi](std::span<const Observation> pts, std::span<double> slope,
                              std::span<double> offset) {
        const Observation& a = pts[0];
        const Observation& b = pts[1];
        slope[0] = gini_h2(a[xi], b[xi]);
        offset[0] = -gini_h1(a[xi], a[yi], b[xi], b[yi]);
    };
    eq.eval = [xi, yi](std::span<const Observation> pts, std::span<const double> theta,
                       std::span<double> out) {
        const Observation& a = pts[0];
        const Observation& b = pts[1];
        out[0] = gini_h2(a[xi], b[xi]) * theta[0] - gini_h1(a[xi], a[yi], b[xi], b[yi]);
    };
    return eq;
}

// Joint two-component Gini correlation equation with theta = (alpha, beta):
// alpha is the interest component (1 or 2), beta the other one.
inline EstimatingEquation gini_correlation_joint_equation(int interest_component = 1) {
    if (interest_component != 1 && interest_component != 2)
        throw DomainError("gini_correlation_joint_equation: interest component must be 1 or 2");
    EstimatingEquation eq;
    eq.degree = 2;
    eq.param_dim = 2;
    eq.data_dim = 2;
    eq.interest_dim = 1;
    eq.nuisance_dim = 1;
    eq.lower_bound = {-1.0, -1.0};
    eq.upper_bound = {1.0, 1.0};
    eq.name = "gini-corr-joint";
    const bool swap = interest_component == 2;
    eq.affine = true;
    eq.eval_affine = [swap](std::span<const Observation> pts, std::span<double> slope,
                            std::span<double> offset) {
        const Observation& a = pts[0];
        const Observation& b = pts[1];
        double s1 = gini_h2(a[0], b[0]);
        double o1 = -gini_h1(a[0], a[1], b[0], b[1]);
        double s2 = gini_h2(a[1], b[1]);
        double o2 = -gini_h1(a[1], a[0], b[1], b[0]);
        if (swap) {
            std::swap(s1, s2);
            std::swap(o1, o2);
        }
        slope[0] = s1;
        slope[1] = 0.0;
        slope[2] = 0.0;
        slope[3] = s2;
        offset[0] = o1;
        offset[1] = o2;
    };
    eq.eval = [swap](std::span<const Observation> pts, std::span<const double> theta,
                     std::span<double> out) {
        std::array<double, 2> gamma{theta[0], theta[1]};
        if (swap) std::swap(gamma[0], gamma[1]);
        auto h = gini_corr_kernel(pts[0], pts[1], gamma);
        out[0] = swap ? h[1] : h[0];
        out[1] = swap ? h[0] : h[1];
    };
    return eq;
}

// Scalar equation for the Gini index of nonnegative univariate data.
inline EstimatingEquation gini_index_equation() {
    EstimatingEquation eq;
    eq.degree = 2;
    eq.param_dim = 1;
    eq.data_dim = 1;
    eq.lower_bound = {0.0};
    eq.upper_bound = {1.0};
    eq.name = "gini-index";
    eq.affine = true;
    eq.eval_affine = [](std::span<const Observation> pts, std::span<double> slope,
                        std::span<double> offset) {
        double x1 = pts[0][0], x2 = pts[1][0];
        slope[0] = x1 + x2;
        offset[0] = -std::abs(x1 - x2);
    };
    eq.eval = [](std::span<const Observation> pts, std::span<const double> theta,
                 std::span<double> out) {
        out[0] = gini_index_kernel(pts[0][0], pts[1][0], theta[0]);
    };
    return eq;
}

// Built-in estimand selector shared by the CLI and the experiment engine.
enum class Target { GiniCorr1, GiniCorr2, GiniIndex };

inline const char* target_name(Target t) {
    switch (t) {
        case Target::GiniCorr1: return "gini-corr-1";
        case Target::GiniCorr2: return "gini-corr-2";
        default: return "gini-index";
    }
}

inline EstimatingEquation target_equation(Target t) {
    switch (t) {
        case Target::GiniCorr1: return gini_correlation_equation(1);
        case Target::GiniCorr2: return gini_correlation_equation(2);
        default: return gini_index_equation();
    }
}

inline Target parse_target(std::string_view name) {
    if (name == "gini-corr-1") return Target::GiniCorr1;
    if (name == "gini-corr-2") return Target::GiniCorr2;
    if (name == "gini-index") return Target::GiniIndex;
    throw DomainError("unknown estimand: " + std::string(name));
}

// Empirical symmetry check: evaluates the kernel on `trials` random
// permutations of the given k points and reports whether every component
// agrees with the identity ordering.
inline bool check_symmetry(const EstimatingEquation& eq, const Sample& points,
                           std::span<const double> theta, int trials = 32,
                           std::uint64_t seed = 0x5ca1ab1e) {
    validate_equation(eq);
    if (points.size() != static_cast<std::size_t>(eq.degree))
        throw DimensionMismatch("check_symmetry: need exactly degree points");
    if (theta.size() != static_cast<std::size_t>(eq.param_dim))
        throw DimensionMismatch("check_symmetry: theta has wrong dimension");
    check_observation_dims(points, eq.data_dim, "check_symmetry");

    std::vector<double> base(eq.param_dim), permuted(eq.param_dim);
    eq.eval(points, theta, base);
    double scale = 1.0;
    for (double v : base) scale += std::abs(v);

    Rng rng(seed);
    std::vector<std::size_t> idx(points.size());
    Sample reordered(points.size());
    for (int t = 0; t < trials; ++t) {
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[rng.below(i)]);
        for (std::size_t i = 0; i < idx.size(); ++i) reordered[i] = points[idx[i]];
        eq.eval(reordered, theta, permuted);
        for (int c = 0; c < eq.param_dim; ++c)
            if (std::abs(permuted[c] - base[c]) > 1e-12 * scale) return false;
    }
    return true;
}

}  // namespace wjel
