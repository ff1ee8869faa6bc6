#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wjel/errors.hpp"
#include "wjel/estimating.hpp"
#include "wjel/numeric.hpp"

namespace wjel {

// Jackknife pseudo-values V_i = n*W_n - (n-1)*W_{n-1}^{(-i)} of the U-statistic
// W_n(theta), one row per deleted observation. Their column mean reproduces
// W_n exactly, so `wn` is redundant but kept for downstream convenience.
struct PseudoValueSet {
    int n = 0;
    int r = 0;
    std::vector<double> values;  // n x r, row-major
    std::vector<double> wn;      // r
    std::vector<double> theta;

    double at(int i, int c) const { return values[static_cast<std::size_t>(i) * r + c]; }
};

namespace detail {

inline double binomial(int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v *= static_cast<double>(n - k + i) / i;
    return v;
}

// Visits all k-subsets of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_combination(int n, int k, Fn&& fn) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        fn(std::span<const int>(idx));
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace detail

// Mean of the kernel over all k-subsets.
inline std::vector<double> u_statistic(const EstimatingEquation& eq, const Sample& data,
                                       std::span<const double> theta) {
    validate_equation(eq);
    const int n = static_cast<int>(data.size());
    const int k = eq.degree;
    const int r = eq.param_dim;
    if (n < k) throw InsufficientData("u_statistic: need at least degree observations");
    if (theta.size() != static_cast<std::size_t>(r))
        throw DimensionMismatch("u_statistic: theta has wrong dimension");
    check_observation_dims(data, eq.data_dim, "u_statistic");

    std::vector<PairwiseAccumulator> acc(r);
    std::vector<double> h(r);
    Sample pts(k);
    detail::for_each_combination(n, k, [&](std::span<const int> idx) {
        for (int j = 0; j < k; ++j) pts[j] = data[idx[j]];
        eq.eval(pts, theta, h);
        for (int c = 0; c < r; ++c) acc[c].add(h[c]);
    });
    const double combos = detail::binomial(n, k);
    std::vector<double> out(r);
    for (int c = 0; c < r; ++c) out[c] = acc[c].total() / combos;
    return out;
}

namespace detail {

// Shared jackknife transform: given the grand total T and, per observation,
// the total S_i over subsets containing i (both per component), produce the
// pseudo-values and W_n. Exactly linear in the kernel totals, so it serves
// both the fixed-theta path and the cached affine decomposition.
inline void jackknife_from_totals(int n, int k, int comps, std::span<const double> grand,
                                  std::span<const double> per_row, std::span<double> pv_out,
                                  std::span<double> wn_out) {
    const double c_n = binomial(n, k);
    const double c_m = binomial(n - 1, k);
    for (int c = 0; c < comps; ++c) wn_out[c] = grand[c] / c_n;
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < comps; ++c) {
            double leave_out = (grand[c] - per_row[static_cast<std::size_t>(i) * comps + c]) / c_m;
            pv_out[static_cast<std::size_t>(i) * comps + c] = n * wn_out[c] - (n - 1) * leave_out;
        }
}

// Accumulates, per component, the grand total and the per-observation totals
// over all k-subsets. `emit(pts, out)` evaluates `comps` kernel components.
template <typename Emit>
void subset_totals(const Sample& data, int k, int comps, Emit&& emit,
                   std::vector<double>& grand, std::vector<double>& per_row) {
    const int n = static_cast<int>(data.size());
    std::vector<PairwiseAccumulator> total(comps);
    std::vector<PairwiseAccumulator> rows(static_cast<std::size_t>(n) * comps);
    std::vector<double> h(comps);
    Sample pts(k);
    for_each_combination(n, k, [&](std::span<const int> idx) {
        for (int j = 0; j < k; ++j) pts[j] = data[idx[j]];
        emit(pts, std::span<double>(h));
        for (int c = 0; c < comps; ++c) {
            total[c].add(h[c]);
            for (int j = 0; j < k; ++j) rows[static_cast<std::size_t>(idx[j]) * comps + c].add(h[c]);
        }
    });
    grand.resize(comps);
    per_row.resize(static_cast<std::size_t>(n) * comps);
    for (int c = 0; c < comps; ++c) grand[c] = total[c].total();
    for (std::size_t i = 0; i < rows.size(); ++i) per_row[i] = rows[i].total();
}

}  // namespace detail

// Delete-one jackknife of the U-statistic at a fixed theta. The grand and
// per-observation subset totals make every leave-one-out value an O(1)
// difference, so the whole set costs one pass over the C(n, k) subsets.
inline PseudoValueSet jackknife_pseudo_values(const EstimatingEquation& eq, const Sample& data,
                                              std::span<const double> theta) {
    validate_equation(eq);
    const int n = static_cast<int>(data.size());
    const int k = eq.degree;
    const int r = eq.param_dim;
    if (n < k + 1)
        throw InsufficientData("jackknife_pseudo_values: need at least degree + 1 observations");
    if (theta.size() != static_cast<std::size_t>(r))
        throw DimensionMismatch("jackknife_pseudo_values: theta has wrong dimension");
    check_observation_dims(data, eq.data_dim, "jackknife_pseudo_values");

    std::vector<double> grand, per_row;
    detail::subset_totals(
        data, k, r,
        [&](const Sample& pts, std::span<double> h) { eq.eval(pts, theta, h); }, grand, per_row);

    PseudoValueSet pv;
    pv.n = n;
    pv.r = r;
    pv.theta.assign(theta.begin(), theta.end());
    pv.values.resize(static_cast<std::size_t>(n) * r);
    pv.wn.resize(r);
    detail::jackknife_from_totals(n, k, r, grand, per_row, pv.values, pv.wn);
    return pv;
}

// Jackknife estimate of cov(W_n): 1/(n(n-1)) * sum_i (V_i - W_n)(V_i - W_n)^T,
// returned row-major r x r.
inline std::vector<double> jackknife_variance(const PseudoValueSet& pv) {
    if (pv.n < 2) throw InsufficientData("jackknife_variance: need at least two pseudo-values");
    const int n = pv.n;
    const int r = pv.r;
    std::vector<double> m(static_cast<std::size_t>(r) * r, 0.0);
    std::vector<PairwiseAccumulator> acc(static_cast<std::size_t>(r) * r);
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < r; ++s)
            for (int t = 0; t < r; ++t)
                acc[static_cast<std::size_t>(s) * r + t].add((pv.at(i, s) - pv.wn[s]) *
                                                             (pv.at(i, t) - pv.wn[t]));
    const double scale = 1.0 / (static_cast<double>(n) * (n - 1));
    for (std::size_t c = 0; c < m.size(); ++c) m[c] = acc[c].total() * scale;
    return m;
}

// Precomputed jackknife decomposition for an affine equation on fixed data:
// V_i(theta) = A_i * theta + b_i and W_n(theta) = A_bar * theta + b_bar, where
// A_i, b_i are the pseudo-values of the slope and offset kernels. Building the
// cache costs one pass over the subsets; each theta afterwards costs O(n r^2).
class AffineJackknife {
  public:
    AffineJackknife(const EstimatingEquation& eq, const Sample& data) {
        validate_equation(eq);
        if (!eq.affine || !eq.eval_affine)
            throw DomainError("AffineJackknife: equation does not declare an affine decomposition");
        n_ = static_cast<int>(data.size());
        r_ = eq.param_dim;
        k_ = eq.degree;
        if (n_ < k_ + 1)
            throw InsufficientData("AffineJackknife: need at least degree + 1 observations");
        check_observation_dims(data, eq.data_dim, "AffineJackknife");

        const int rr = r_ * r_;
        const int comps = rr + r_;
        std::vector<double> grand, per_row;
        detail::subset_totals(
            data, k_, comps,
            [&](const Sample& pts, std::span<double> h) {
                eq.eval_affine(pts, h.subspan(0, rr), h.subspan(rr, r_));
            },
            grand, per_row);

        pv_.resize(static_cast<std::size_t>(n_) * comps);
        wn_.resize(comps);
        detail::jackknife_from_totals(n_, k_, comps, grand, per_row, pv_, wn_);
    }

    int n() const { return n_; }
    int r() const { return r_; }

    // W_n(theta)
    void wn(std::span<const double> theta, std::span<double> out) const {
        affine_apply(wn_, 0, theta, out);
    }

    void pseudo_values(std::span<const double> theta, PseudoValueSet& out) const {
        if (theta.size() != static_cast<std::size_t>(r_))
            throw DimensionMismatch("AffineJackknife: theta has wrong dimension");
        out.n = n_;
        out.r = r_;
        out.theta.assign(theta.begin(), theta.end());
        out.values.resize(static_cast<std::size_t>(n_) * r_);
        out.wn.resize(r_);
        affine_apply(wn_, 0, theta, out.wn);
        for (int i = 0; i < n_; ++i)
            affine_apply(pv_, static_cast<std::size_t>(i) * (r_ * r_ + r_), theta,
                         std::span<double>(out.values).subspan(static_cast<std::size_t>(i) * r_, r_));
    }

    PseudoValueSet pseudo_values(std::span<const double> theta) const {
        PseudoValueSet pv;
        pseudo_values(theta, pv);
        return pv;
    }

  private:
    void affine_apply(const std::vector<double>& block, std::size_t base,
                      std::span<const double> theta, std::span<double> out) const {
        const int rr = r_ * r_;
        for (int s = 0; s < r_; ++s) {
            double v = block[base + rr + s];
            for (int t = 0; t < r_; ++t) v += block[base + static_cast<std::size_t>(s) * r_ + t] * theta[t];
            out[s] = v;
        }
    }

    int n_ = 0, r_ = 0, k_ = 0;
    std::vector<double> pv_;  // n x (r*r + r): slope matrix then offset, per observation
    std::vector<double> wn_;  // r*r + r
};

}  // namespace wjel
