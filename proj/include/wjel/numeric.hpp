#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace wjel {

// Cascade (pairwise) summation with a binary-counter stack of partial sums.
// Rounding error grows like O(log n) instead of O(n), which keeps the O(n^2)
// kernel sums well-conditioned even for large inputs.
class PairwiseAccumulator {
  public:
    void add(double x) {
        int level = 0;
        while (count_ & (std::uint64_t{1} << level)) {
            x += partial_[level];
            ++level;
        }
        partial_[level] = x;
        ++count_;
    }

    double total() const {
        double s = 0.0;
        for (int level = 0; level < 64; ++level)
            if (count_ & (std::uint64_t{1} << level)) s += partial_[level];
        return s;
    }

    std::uint64_t count() const { return count_; }

    void reset() {
        count_ = 0;
        partial_.fill(0.0);
    }

  private:
    std::array<double, 64> partial_{};
    std::uint64_t count_ = 0;
};

inline double pairwise_sum(std::span<const double> xs) {
    PairwiseAccumulator acc;
    for (double x : xs) acc.add(x);
    return acc.total();
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline bool all_finite(std::span<const double> a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

// Solves the symmetric positive definite system A x = b in place, A given
// row-major. Falls back to a diagonally bumped factorization when A is
// numerically singular. Intended for the tiny systems (r <= 2) of the dual
// Newton step; not a general-purpose solver.
inline bool cholesky_solve(std::vector<double> a, int m, std::span<const double> b,
                           std::span<double> x) {
    auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * m + j]; };
    double trace = 0.0;
    for (int i = 0; i < m; ++i) trace += at(i, i);
    double bump = 0.0;
    for (int attempt = 0; attempt < 3; ++attempt) {
        std::vector<double> l(a);
        auto lt = [&](int i, int j) -> double& { return l[static_cast<std::size_t>(i) * m + j]; };
        if (bump > 0.0)
            for (int i = 0; i < m; ++i) lt(i, i) += bump;
        bool ok = true;
        for (int i = 0; i < m && ok; ++i) {
            for (int j = 0; j <= i; ++j) {
                double s = lt(i, j);
                for (int k = 0; k < j; ++k) s -= lt(i, k) * lt(j, k);
                if (i == j) {
                    if (s <= 0.0) {
                        ok = false;
                        break;
                    }
                    lt(i, i) = std::sqrt(s);
                } else {
                    lt(i, j) = s / lt(j, j);
                }
            }
        }
        if (!ok) {
            bump = (bump == 0.0) ? 1e-12 * (trace > 0 ? trace : 1.0) : bump * 1e3;
            continue;
        }
        for (int i = 0; i < m; ++i) {
            double s = b[i];
            for (int k = 0; k < i; ++k) s -= lt(i, k) * x[k];
            x[i] = s / lt(i, i);
        }
        for (int i = m - 1; i >= 0; --i) {
            double s = x[i];
            for (int k = i + 1; k < m; ++k) s -= lt(k, i) * x[k];
            x[i] = s / lt(i, i);
        }
        return true;
    }
    return false;
}

namespace detail {

// Strict numeric parsing: the whole token must be consumed, no leading or
// trailing junk, no empty input.
inline bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

inline bool parse_long(std::string_view s, long& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace detail

}  // namespace wjel
