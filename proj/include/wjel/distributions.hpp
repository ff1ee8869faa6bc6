#pragma once

#include <cmath>
#include <limits>

#include "wjel/errors.hpp"

namespace wjel {

// Regularized lower incomplete gamma P(a, x), series for x < a + 1 and
// Lentz continued fraction otherwise. Absolute accuracy near machine epsilon
// over the ranges used here (a = df/2 with small df).
inline double gamma_p(double a, double x) {
    if (a <= 0.0) throw DomainError("gamma_p: shape must be positive");
    if (x < 0.0) throw DomainError("gamma_p: x must be nonnegative");
    if (x == 0.0) return 0.0;
    const double eps = 1e-16;
    const int itmax = 500;
    if (x < a + 1.0) {
        double ap = a;
        double del = 1.0 / a;
        double sum = del;
        for (int i = 0; i < itmax; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * eps) break;
        }
        return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    // Continued fraction for Q(a, x)
    const double fpmin = std::numeric_limits<double>::min() / eps;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= itmax; ++i) {
        double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    double q = std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    return 1.0 - q;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

// Inverse standard normal CDF: rational approximation polished by one Halley
// step against erfc, absolute error well below 1e-9.
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must be in (0, 1)");
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double t = q * q;
        x = (((((a[0] * t + a[1]) * t + a[2]) * t + a[3]) * t + a[4]) * t + a[5]) * q /
            (((((b[0] * t + b[1]) * t + b[2]) * t + b[3]) * t + b[4]) * t + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2.0 * 3.141592653589793238462643) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

inline double chi_square_cdf(int df, double x) {
    if (df < 1) throw DomainError("chi_square_cdf: df must be >= 1");
    if (x <= 0.0) return 0.0;
    return gamma_p(0.5 * df, 0.5 * x);
}

inline double chi_square_pdf(int df, double x) {
    if (x <= 0.0) return 0.0;
    double half = 0.5 * df;
    return std::exp((half - 1.0) * std::log(x) - 0.5 * x - half * std::log(2.0) -
                    std::lgamma(half));
}

// Quantile via a Wilson-Hilferty start and bracketed Newton; absolute error
// at most 1e-9 over the usual (df, p) ranges.
inline double chi_square_quantile(int df, double p) {
    if (df < 1) throw DomainError("chi_square_quantile: df must be >= 1");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("chi_square_quantile: p must be in (0, 1)");
    double z = normal_quantile(p);
    double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
    double x = df * t * t * t;
    if (!(x > 0.0)) x = 0.5;

    double lo = 0.0;
    double hi = std::max(x, 1.0);
    while (chi_square_cdf(df, hi) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw NoConvergence("chi_square_quantile: bracket expansion failed", 0.0);
    }
    x = std::min(std::max(x, lo + 1e-300), hi);
    for (int it = 0; it < 200; ++it) {
        double f = chi_square_cdf(df, x) - p;
        if (f > 0.0)
            hi = x;
        else
            lo = x;
        double pdf = chi_square_pdf(df, x);
        double step = pdf > 0.0 ? f / pdf : 0.0;
        double next = x - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-12 * (1.0 + std::abs(x)) && std::abs(f) < 1e-12) {
            x = next;
            break;
        }
        x = next;
        if (hi - lo <= 1e-13 * (1.0 + hi)) break;
    }
    return x;
}

// Chi-square distribution with df degrees of freedom.
struct ChiSquare {
    int df = 1;

    double cdf(double x) const { return chi_square_cdf(df, x); }
    double quantile(double p) const { return chi_square_quantile(df, p); }
    double pdf(double x) const { return chi_square_pdf(df, x); }
};

}  // namespace wjel
