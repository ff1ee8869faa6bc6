#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "wjel/distributions.hpp"
#include "wjel/errors.hpp"
#include "wjel/estimating.hpp"
#include "wjel/numeric.hpp"
#include "wjel/optim.hpp"
#include "wjel/ustat.hpp"
#include "wjel/wjel.hpp"

namespace wjel {

enum class Method { JEL, WJEL, VJ };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::JEL: return "jel";
        case Method::WJEL: return "wjel";
        default: return "vj";
    }
}

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.95;
    Method method = Method::WJEL;
    double point_estimate = 0.0;
    // An endpoint is truncated when it comes from the support boundary or a
    // natural parameter bound instead of a smooth crossing of the cutoff.
    bool lower_truncated = false;
    bool upper_truncated = false;
};

namespace detail {

inline void gauss_solve(std::vector<double> a, int m, std::vector<double>& b) {
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int i = col + 1; i < m; ++i)
            if (std::abs(a[static_cast<std::size_t>(i) * m + col]) >
                std::abs(a[static_cast<std::size_t>(piv) * m + col]))
                piv = i;
        if (a[static_cast<std::size_t>(piv) * m + col] == 0.0)
            throw ZeroDenominator("plug-in estimate: singular mean slope");
        if (piv != col) {
            for (int j = 0; j < m; ++j)
                std::swap(a[static_cast<std::size_t>(piv) * m + j],
                          a[static_cast<std::size_t>(col) * m + j]);
            std::swap(b[piv], b[col]);
        }
        for (int i = col + 1; i < m; ++i) {
            double f = a[static_cast<std::size_t>(i) * m + col] /
                       a[static_cast<std::size_t>(col) * m + col];
            for (int j = col; j < m; ++j)
                a[static_cast<std::size_t>(i) * m + j] -= f * a[static_cast<std::size_t>(col) * m + j];
            b[i] -= f * b[col];
        }
    }
    for (int i = m - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < m; ++j) s -= a[static_cast<std::size_t>(i) * m + j] * b[j];
        b[i] = s / a[static_cast<std::size_t>(i) * m + i];
    }
}

}  // namespace detail

// Root of the mean equation W_n(theta) = 0 for an affine kernel. For the
// built-in ratio equations this reproduces the plug-in ratio of U-statistics.
inline std::vector<double> affine_equation_root(const EstimatingEquation& eq, const Sample& data) {
    validate_equation(eq);
    if (!eq.affine) throw DomainError("affine_equation_root: equation is not affine");
    const int r = eq.param_dim;
    std::vector<double> zero(r, 0.0);
    std::vector<double> w0 = u_statistic(eq, data, zero);
    std::vector<double> slope(static_cast<std::size_t>(r) * r);
    std::vector<double> probe(r);
    for (int c = 0; c < r; ++c) {
        std::fill(probe.begin(), probe.end(), 0.0);
        probe[c] = 1.0;
        std::vector<double> wc = u_statistic(eq, data, probe);
        for (int s = 0; s < r; ++s) slope[static_cast<std::size_t>(s) * r + c] = wc[s] - w0[s];
    }
    std::vector<double> rhs(r);
    for (int s = 0; s < r; ++s) rhs[s] = -w0[s];
    detail::gauss_solve(slope, r, rhs);
    return rhs;
}

// Plug-in Gini correlations (gamma(x|y), gamma(y|x)) of a bivariate sample.
inline std::pair<double, double> gini_correlation_estimates(const Sample& data) {
    if (data.size() < 2) throw InsufficientData("gini_correlation_estimates: need n >= 2");
    double g1 = affine_equation_root(gini_correlation_equation(1), data)[0];
    double g2 = affine_equation_root(gini_correlation_equation(2), data)[0];
    return {g1, g2};
}

// Plug-in Gini index of nonnegative univariate data.
inline double gini_index_estimate(const Sample& data) {
    if (data.size() < 2) throw InsufficientData("gini_index_estimate: need n >= 2");
    for (const auto& obs : data) {
        if (obs.size() != 1)
            throw DimensionMismatch("gini_index_estimate: data must be univariate");
        if (!(obs[0] >= 0.0))
            throw DomainError("gini_index_estimate: data must be nonnegative");
    }
    return affine_equation_root(gini_index_equation(), data)[0];
}

// Minimizer of the self-normalized curve for a scalar parameter, started at
// `start` (normally the plug-in root, which is already exact under uniform
// weights and merely nudged by depth weights).
inline double scalar_point_estimate(const ScalarStatistic& stat, double start) {
    double f0 = stat(start);
    if (f0 <= 1e-10) return start;  // already the exact minimum (uniform weights)
    double step = 0.02 * (1.0 + std::abs(start));
    auto [a, b] = bracket_minimum(stat, start, f0, step, stat.lower_bound(), stat.upper_bound());
    double tol = 1e-7 * (1.0 + std::abs(start));
    return golden_section_minimize(stat, a, b, tol);
}

// Minimizer of the ratio curve: golden section for a scalar parameter,
// Nelder-Mead otherwise, started at the plug-in root.
inline std::vector<double> wjel_point_estimate(const EstimatingEquation& eq, const Sample& data,
                                               const WeightVector& w, const SolverConfig& cfg = {},
                                               std::vector<double> start = {}) {
    validate_equation(eq);
    if (start.empty()) start = affine_equation_root(eq, data);
    if (start.size() != static_cast<std::size_t>(eq.param_dim))
        throw DimensionMismatch("wjel_point_estimate: start has wrong dimension");

    if (eq.param_dim == 1) {
        ScalarStatistic stat(eq, data, w, cfg);
        return {scalar_point_estimate(stat, start[0])};
    }

    std::optional<AffineJackknife> cache;
    if (eq.affine) cache.emplace(eq, data);
    PseudoValueSet pv;
    auto objective = [&](const std::vector<double>& theta) {
        try {
            if (cache)
                cache->pseudo_values(theta, pv);
            else
                pv = jackknife_pseudo_values(eq, data, theta);
            return wjel_ratio(pv, w, cfg).ratio;
        } catch (const HullViolation&) {
            return std::numeric_limits<double>::infinity();
        } catch (const NoConvergence&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    NelderMeadResult nm = nelder_mead(objective, start, 0.05, 400, 1e-12);
    if (!std::isfinite(nm.fmin))
        throw NoConvergence("wjel_point_estimate: no feasible parameter found", 0.0);
    return nm.x;
}

namespace detail {

struct Endpoint {
    double value;
    bool truncated;
};

// Walks outward from theta_tilde until the curve exceeds the cutoff (or a
// bound/support edge), then bisects the crossing to 1e-6 in theta. A 5-point
// scan guards the monotone-in-bracket assumption by keeping the outermost
// sub-cutoff point as the inner bracket edge.
template <typename Curve>
Endpoint invert_one_side(Curve&& s, double theta_tilde, double cutoff, double dir, double bound) {
    const double theta_tol = 1e-6;
    double inside = theta_tilde;
    double h = 1e-3 * (1.0 + std::abs(theta_tilde));
    double outside = std::numeric_limits<double>::quiet_NaN();
    bool outside_infinite = false;
    for (int it = 0; it < 200; ++it) {
        double x = theta_tilde + dir * h;
        bool clipped = false;
        if (dir > 0 ? x >= bound : x <= bound) {
            x = bound;
            clipped = true;
        }
        double sx = s(x);
        if (sx > cutoff) {
            outside = x;
            outside_infinite = !std::isfinite(sx);
            break;
        }
        inside = x;
        if (clipped) {
            if (!std::isfinite(bound))
                throw UnboundedInterval("invert_ci: cutoff never crossed within bounds");
            return {bound, true};  // region reaches the natural parameter bound
        }
        h *= 2.0;
    }
    if (std::isnan(outside)) {
        if (!std::isfinite(bound))
            throw UnboundedInterval("invert_ci: bracket expansion exhausted");
        return {bound, true};
    }

    for (int k = 1; k <= 5; ++k) {
        double x = theta_tilde + (outside - theta_tilde) * k / 6.0;
        if ((dir > 0 && x <= inside) || (dir < 0 && x >= inside)) continue;
        if (s(x) <= cutoff) inside = x;
    }

    while (std::abs(outside - inside) > theta_tol) {
        double mid = 0.5 * (inside + outside);
        double sm = s(mid);
        if (sm > cutoff) {
            outside = mid;
            outside_infinite = !std::isfinite(sm);
        } else {
            inside = mid;
        }
    }
    return {0.5 * (inside + outside), outside_infinite};
}

}  // namespace detail

// Chi-square calibrated confidence interval for a scalar-parameter equation:
// { theta : l(theta) / c_hat <= chi2_1(level) }. `start` seeds the point
// estimate search and `cutoff` is chi2_1(level), passed in so repeated calls
// on fresh data can reuse both the quantile and a shared jackknife cache.
inline ConfidenceInterval invert_ci(const ScalarStatistic& stat, double start, double level,
                                    double cutoff, Method method) {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("invert_ci: level must be in (0, 1)");
    double theta_tilde = scalar_point_estimate(stat, start);
    if (!(stat(theta_tilde) <= cutoff))
        throw NoConvergence("invert_ci: statistic exceeds the cutoff at its minimizer",
                            stat(theta_tilde));

    auto lower = detail::invert_one_side(stat, theta_tilde, cutoff, -1.0, stat.lower_bound());
    auto upper = detail::invert_one_side(stat, theta_tilde, cutoff, +1.0, stat.upper_bound());

    ConfidenceInterval ci;
    ci.lower = lower.value;
    ci.upper = upper.value;
    ci.level = level;
    ci.method = method;
    ci.point_estimate = theta_tilde;
    ci.lower_truncated = lower.truncated;
    ci.upper_truncated = upper.truncated;
    return ci;
}

// Convenience overload for affine equations (the built-ins); the plug-in
// root seeds the search.
inline ConfidenceInterval invert_ci(const EstimatingEquation& eq, const Sample& data,
                                    const WeightVector& w, double level, Method method,
                                    const SolverConfig& cfg = {}) {
    ScalarStatistic stat(eq, data, w, cfg);
    return invert_ci(stat, stat.equation_root(), level, chi_square_quantile(1, level), method);
}

// Normal-approximation comparator: plug-in estimate +- z * SE, with SE from
// the delete-one jackknife of the plug-in ratio itself.
inline ConfidenceInterval vj_interval(const EstimatingEquation& eq, const Sample& data,
                                      double level) {
    validate_equation(eq);
    if (!(level > 0.0 && level < 1.0)) throw DomainError("vj_interval: level must be in (0, 1)");
    if (!eq.affine || eq.param_dim != 1)
        throw DomainError("vj_interval: needs an affine scalar-parameter equation");
    const int n = static_cast<int>(data.size());
    if (n < eq.degree + 1) throw InsufficientData("vj_interval: need at least degree + 1 observations");
    check_observation_dims(data, eq.data_dim, "vj_interval");

    // Subset totals of (slope, offset) make every leave-one-out ratio O(1).
    std::vector<double> grand, per_row;
    detail::subset_totals(
        data, eq.degree, 2,
        [&](const Sample& pts, std::span<double> h) {
            eq.eval_affine(pts, h.subspan(0, 1), h.subspan(1, 1));
        },
        grand, per_row);
    double slope_total = grand[0], offset_total = grand[1];
    if (slope_total == 0.0) throw ZeroDenominator("vj_interval: zero slope denominator");
    double estimate = -offset_total / slope_total;

    std::vector<double> loo(n);
    for (int i = 0; i < n; ++i) {
        double s = slope_total - per_row[static_cast<std::size_t>(i) * 2];
        double o = offset_total - per_row[static_cast<std::size_t>(i) * 2 + 1];
        if (s == 0.0) throw ZeroDenominator("vj_interval: zero leave-one-out denominator");
        loo[i] = -o / s;
    }
    double mean = pairwise_sum(loo) / n;
    double ss = 0.0;
    for (double v : loo) ss += (v - mean) * (v - mean);
    double se = std::sqrt(ss * (n - 1) / n);

    double z = normal_quantile(0.5 * (1.0 + level));
    ConfidenceInterval ci;
    ci.lower = estimate - z * se;
    ci.upper = estimate + z * se;
    ci.level = level;
    ci.method = Method::VJ;
    ci.point_estimate = estimate;
    return ci;
}

}  // namespace wjel
