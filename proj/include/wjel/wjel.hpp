#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "wjel/depth.hpp"
#include "wjel/errors.hpp"
#include "wjel/estimating.hpp"
#include "wjel/numeric.hpp"
#include "wjel/optim.hpp"
#include "wjel/ustat.hpp"

namespace wjel {

struct SolverConfig {
    int max_iter = 100;
    // Relative: the stopping gradient norm is grad_tol * (1 + ||sum_i w_i V_i||).
    double grad_tol = 1e-10;
    // Lower bound kept on every 1 + lambda' V_i during the line search.
    // 0 means "choose 1 / (10 n)" at solve time.
    double barrier_eps = 0.0;
};

struct WjelEvaluation {
    std::vector<double> lambda;
    double ratio = 0.0;            // -2 log of the weighted likelihood ratio
    double self_normalized = 0.0;  // ratio / c_hat
    std::vector<double> probs;
    bool converged = false;
    int iterations = 0;
};

namespace detail {

inline void validate_weights(const WeightVector& w, int n, const char* where) {
    if (w.n() != n) throw DimensionMismatch(std::string(where) + ": weights/pseudo-value size mismatch");
    double sum = 0.0;
    for (double v : w.weights) {
        if (!(v > 0.0)) throw DomainError(std::string(where) + ": weights must be strictly positive");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-8)
        throw DomainError(std::string(where) + ": weights must sum to one");
}

// Dense simplex with Bland's rule on aug = [A | I | b], basis initially the
// artificial block. `entering_limit` excludes the artificial columns in
// phase 2. Small problems only (rows = r + 1).
inline bool simplex_pivot_loop(std::vector<std::vector<double>>& aug, std::vector<int>& basis,
                               std::span<const double> cost, int entering_limit) {
    const int m = static_cast<int>(aug.size());
    const int cols = static_cast<int>(aug[0].size()) - 1;
    const double eps = 1e-11;
    for (int guard = 0; guard < 10000; ++guard) {
        int enter = -1;
        for (int j = 0; j < entering_limit; ++j) {
            double reduced = cost[j];
            for (int i = 0; i < m; ++i) reduced -= cost[basis[i]] * aug[i][j];
            if (reduced < -eps) {
                enter = j;
                break;  // Bland: smallest index
            }
        }
        if (enter < 0) return true;
        int leave = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < m; ++i) {
            if (aug[i][enter] > eps) {
                double ratio = aug[i][cols] / aug[i][enter];
                if (leave < 0 || ratio < best_ratio - eps ||
                    (ratio < best_ratio + eps && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
        }
        if (leave < 0) return false;  // unbounded
        double piv = aug[leave][enter];
        for (double& v : aug[leave]) v /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == leave) continue;
            double f = aug[i][enter];
            if (f == 0.0) continue;
            for (int j = 0; j <= cols; ++j) aug[i][j] -= f * aug[leave][j];
        }
        basis[leave] = enter;
    }
    return false;
}

// Maximal delta with x_i >= delta >= 0, sum x_i = 1, sum x_i V_i = 0
// (substituting x_i = y_i + delta). Positive optimum certifies that zero is a
// strict convex combination of the pseudo-value rows.
inline double strict_combination_margin(const PseudoValueSet& pv) {
    const int n = pv.n;
    const int r = pv.r;
    const int m = r + 1;
    const int nvars = n + 1;  // y_1..y_n, delta

    std::vector<double> col_scale(r, 1.0);
    for (int c = 0; c < r; ++c) {
        double mx = 0.0;
        for (int i = 0; i < n; ++i) mx = std::max(mx, std::abs(pv.at(i, c)));
        if (mx > 0.0) col_scale[c] = 1.0 / mx;
    }

    std::vector<std::vector<double>> aug(m, std::vector<double>(nvars + m + 1, 0.0));
    for (int i = 0; i < n; ++i) aug[0][i] = 1.0;
    aug[0][n] = static_cast<double>(n);
    aug[0][nvars + m] = 1.0;
    for (int c = 0; c < r; ++c) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            double v = pv.at(i, c) * col_scale[c];
            aug[c + 1][i] = v;
            s += v;
        }
        aug[c + 1][n] = s;
    }
    // One artificial variable per row seeds the phase-1 basis.
    for (int i = 0; i < m; ++i) aug[i][nvars + i] = 1.0;

    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = nvars + i;

    std::vector<double> cost1(nvars + m, 0.0);
    for (int i = 0; i < m; ++i) cost1[nvars + i] = 1.0;
    if (!simplex_pivot_loop(aug, basis, cost1, nvars + m)) return -1.0;
    double infeas = 0.0;
    for (int i = 0; i < m; ++i)
        if (basis[i] >= nvars) infeas += aug[i][nvars + m];
    if (infeas > 1e-9) return -1.0;

    std::vector<double> cost2(nvars + m, 0.0);
    cost2[n] = -1.0;  // maximize delta
    if (!simplex_pivot_loop(aug, basis, cost2, nvars)) return -1.0;
    for (int i = 0; i < m; ++i)
        if (basis[i] == n) return aug[i][nvars + m];
    return 0.0;  // delta nonbasic at zero
}

}  // namespace detail

// True when zero lies strictly inside the support of the constrained
// likelihood: a strict sign change for scalar pseudo-values, a strict convex
// combination (phase-1 linear program) in higher dimension.
inline bool convex_hull_check(const PseudoValueSet& pv) {
    if (pv.n < 1) throw InsufficientData("convex_hull_check: empty pseudo-value set");
    if (pv.r == 1) {
        double lo = pv.values[0], hi = pv.values[0];
        for (int i = 1; i < pv.n; ++i) {
            lo = std::min(lo, pv.values[i]);
            hi = std::max(hi, pv.values[i]);
        }
        return lo < 0.0 && hi > 0.0;
    }
    return detail::strict_combination_margin(pv) > 1e-9 / pv.n;
}

namespace detail {

struct LambdaSolution {
    std::vector<double> lambda;
    int iterations = 0;
};

// Damped Newton ascent of G(lambda) = sum_i w_i log(1 + lambda' V_i), the
// concave dual of the inner maximization; its stationary point is the unique
// root of sum_i w_i V_i / (1 + lambda' V_i) = 0.
inline LambdaSolution solve_lambda_impl(const PseudoValueSet& pv, const WeightVector& w,
                                        const SolverConfig& cfg) {
    const int n = pv.n;
    const int r = pv.r;
    validate_weights(w, n, "solve_lambda");
    if (cfg.max_iter < 1 || !(cfg.grad_tol > 0.0) || cfg.barrier_eps < 0.0 ||
        cfg.barrier_eps >= 1.0)
        throw DomainError("solve_lambda: invalid solver configuration");

    auto vrow = [&](int i) { return std::span<const double>(pv.values).subspan(
                                 static_cast<std::size_t>(i) * r, r); };

    std::vector<double> g0(r, 0.0);
    for (int i = 0; i < n; ++i) {
        auto v = vrow(i);
        for (int c = 0; c < r; ++c) g0[c] += w.weights[i] * v[c];
    }
    const double tol = cfg.grad_tol * (1.0 + norm2(g0));
    // Fallback test for the flat region where the objective cannot improve
    // by even one ulp; the primary test alone can stall just above tol.
    const double loose_tol = std::sqrt(cfg.grad_tol) * (1.0 + norm2(g0));
    if (norm2(g0) <= tol) return {std::vector<double>(r, 0.0), 0};

    if (!convex_hull_check(pv))
        throw HullViolation("solve_lambda: zero is outside the pseudo-value hull");

    const double barrier = cfg.barrier_eps > 0.0 ? cfg.barrier_eps : 1.0 / (10.0 * n);

    std::vector<double> lambda(r, 0.0), s(n, 1.0), grad(r), hess(static_cast<std::size_t>(r) * r),
        dir(r), trial(r), s_trial(n);
    double obj = 0.0;  // G(lambda); G(0) = 0

    auto eval_s = [&](std::span<const double> lam, std::vector<double>& out) {
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            out[i] = 1.0 + dot(lam, vrow(i));
            worst = std::min(worst, out[i]);
        }
        return worst;
    };
    auto objective = [&](const std::vector<double>& si) {
        double g = 0.0;
        for (int i = 0; i < n; ++i) g += w.weights[i] * std::log(si[i]);
        return g;
    };
    auto fill_grad_hess = [&](const std::vector<double>& si, std::vector<double>& g,
                              std::vector<double>& h) {
        std::fill(g.begin(), g.end(), 0.0);
        std::fill(h.begin(), h.end(), 0.0);
        for (int i = 0; i < n; ++i) {
            auto v = vrow(i);
            double wi_si = w.weights[i] / si[i];
            double wi_si2 = wi_si / si[i];
            for (int a = 0; a < r; ++a) {
                g[a] += wi_si * v[a];
                for (int b = a; b < r; ++b)
                    h[static_cast<std::size_t>(a) * r + b] += wi_si2 * v[a] * v[b];
            }
        }
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < a; ++b)
                h[static_cast<std::size_t>(a) * r + b] = h[static_cast<std::size_t>(b) * r + a];
    };

    // The Armijo test cannot resolve objective gains below the rounding floor,
    // which strands lambda about sqrt(eps) away from the stationary point.
    // Newton steps on the gradient itself have no such floor; moves are kept
    // only while the gradient norm strictly decreases, so the stopping
    // guarantee of the caller is never weakened.
    auto polish = [&](std::vector<double> lam) {
        std::vector<double> si(n), g(r), h(static_cast<std::size_t>(r) * r), d(r), cand(r),
            s_cand(n), g_cand(r);
        for (int step = 0; step < 3; ++step) {
            eval_s(lam, si);
            fill_grad_hess(si, g, h);
            double gn = norm2(g);
            if (gn == 0.0) break;
            if (!cholesky_solve(h, r, g, d)) break;
            double t = 1.0;
            bool moved = false;
            for (int halving = 0; halving <= 8; ++halving) {
                for (int c = 0; c < r; ++c) cand[c] = lam[c] + t * d[c];
                if (eval_s(cand, s_cand) >= barrier) {
                    fill_grad_hess(s_cand, g_cand, h);
                    if (norm2(g_cand) < gn) {
                        lam = cand;
                        moved = true;
                    }
                    break;
                }
                t *= 0.5;
            }
            if (!moved) break;
        }
        return lam;
    };

    double grad_norm = 0.0;
    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        fill_grad_hess(s, grad, hess);
        grad_norm = norm2(grad);
        if (grad_norm <= tol) return {polish(lambda), iter - 1};

        if (!cholesky_solve(hess, r, grad, dir))
            throw NoConvergence("solve_lambda: Newton system is singular", grad_norm);

        // Expected objective gain of the Newton step; once it falls below the
        // rounding floor of the objective there is nothing left to gain.
        double slope = dot(grad, dir);  // directional derivative, positive for ascent
        bool at_noise_floor = slope <= 1e-15 * (1.0 + std::abs(obj));
        if (grad_norm <= loose_tol && at_noise_floor) return {polish(lambda), iter - 1};

        // Largest step keeping every 1 + lambda' V_i at or above the barrier.
        double t_max = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            double dv = dot(dir, vrow(i));
            if (dv < 0.0) t_max = std::min(t_max, (s[i] - barrier) / (-dv));
        }
        double t = std::min(1.0, 0.99 * t_max);
        if (!(t > 0.0)) {
            if (grad_norm <= loose_tol) return {polish(lambda), iter - 1};
            throw NoConvergence("solve_lambda: barrier leaves no feasible step", grad_norm);
        }

        bool accepted = false;
        for (int halving = 0; halving <= 40; ++halving) {
            for (int c = 0; c < r; ++c) trial[c] = lambda[c] + t * dir[c];
            double worst = eval_s(trial, s_trial);
            if (worst >= barrier) {
                double obj_trial = objective(s_trial);
                if (obj_trial >= obj + 1e-4 * t * slope) {
                    lambda = trial;
                    s = s_trial;
                    obj = obj_trial;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!accepted) {
            if (grad_norm <= loose_tol) return {polish(lambda), iter - 1};
            throw NoConvergence("solve_lambda: line search failed", grad_norm);
        }
    }
    throw NoConvergence("solve_lambda: iteration limit reached", grad_norm);
}

}  // namespace detail

// Multiplier of the weighted likelihood constraint at these pseudo-values.
inline std::vector<double> solve_lambda(const PseudoValueSet& pv, const WeightVector& w,
                                        const SolverConfig& cfg = {}) {
    return detail::solve_lambda_impl(pv, w, cfg).lambda;
}

// Full evaluation of the -2 log weighted likelihood ratio at the pseudo-values:
// ratio = 2 sum_i n w_i log(1 + lambda' V_i), probs p_i = w_i / (1 + lambda' V_i).
inline WjelEvaluation wjel_ratio(const PseudoValueSet& pv, const WeightVector& w,
                                 const SolverConfig& cfg = {}) {
    auto sol = detail::solve_lambda_impl(pv, w, cfg);
    const int n = pv.n;
    const int r = pv.r;
    WjelEvaluation ev;
    ev.lambda = std::move(sol.lambda);
    ev.iterations = sol.iterations;
    ev.converged = true;
    ev.probs.resize(n);
    double log_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double si = 1.0;
        for (int c = 0; c < r; ++c) si += ev.lambda[c] * pv.at(i, c);
        ev.probs[i] = w.weights[i] / si;
        log_sum += w.weights[i] * std::log(si);
    }
    ev.ratio = 2.0 * n * log_sum;
    if (ev.ratio < 0.0 && ev.ratio > -1e-10) ev.ratio = 0.0;
    ev.self_normalized = ev.ratio / w.c_hat;
    return ev;
}

// Statistic curve for a scalar-parameter equation on fixed data and weights.
// Affine equations get the cached jackknife decomposition; anything else is
// recomputed per evaluation. Values outside the support are +infinity.
class ScalarStatistic {
  public:
    // A prebuilt cache may be shared across several weight choices on the
    // same data; it must have been built from the same equation and sample.
    ScalarStatistic(const EstimatingEquation& eq, const Sample& data, const WeightVector& w,
                    const SolverConfig& cfg = {},
                    std::shared_ptr<const AffineJackknife> shared_cache = nullptr)
        : eq_(eq), data_(data), w_(w), cfg_(cfg) {
        validate_equation(eq_);
        if (eq_.param_dim != 1)
            throw DimensionMismatch("ScalarStatistic: equation must have a scalar parameter");
        detail::validate_weights(w_, static_cast<int>(data.size()), "ScalarStatistic");
        if (shared_cache) {
            if (shared_cache->n() != static_cast<int>(data.size()) || shared_cache->r() != 1)
                throw DimensionMismatch("ScalarStatistic: shared cache does not match the data");
            cache_ = std::move(shared_cache);
        } else if (eq_.affine) {
            cache_ = std::make_shared<const AffineJackknife>(eq_, data_);
        }
    }

    int n() const { return static_cast<int>(data_.size()); }
    double c_hat() const { return w_.c_hat; }
    double lower_bound() const { return eq_.lower_bound[0]; }
    double upper_bound() const { return eq_.upper_bound[0]; }

    void pseudo_values(double theta, PseudoValueSet& out) const {
        const double th[1] = {theta};
        if (cache_)
            cache_->pseudo_values(std::span<const double>(th, 1), out);
        else
            out = jackknife_pseudo_values(eq_, data_, std::span<const double>(th, 1));
    }

    // Throws HullViolation / NoConvergence like the underlying solver.
    WjelEvaluation evaluate(double theta) const {
        pseudo_values(theta, scratch_);
        return wjel_ratio(scratch_, w_, cfg_);
    }

    // Self-normalized statistic with the +infinity convention outside support.
    double operator()(double theta) const {
        try {
            return evaluate(theta).self_normalized;
        } catch (const HullViolation&) {
            return std::numeric_limits<double>::infinity();
        } catch (const NoConvergence&) {
            return std::numeric_limits<double>::infinity();
        }
    }

    // Root of W_n(theta) = 0 for an affine equation: the plug-in estimate.
    double equation_root() const {
        if (!cache_) throw DomainError("ScalarStatistic: equation root needs an affine equation");
        double th0 = 0.0, th1 = 1.0, w0[1], w1[1];
        cache_->wn(std::span<const double>(&th0, 1), std::span<double>(w0, 1));
        cache_->wn(std::span<const double>(&th1, 1), std::span<double>(w1, 1));
        double slope = w1[0] - w0[0];
        if (slope == 0.0) throw ZeroDenominator("ScalarStatistic: equation slope is zero");
        return -w0[0] / slope;
    }

  private:
    EstimatingEquation eq_;
    Sample data_;
    WeightVector w_;
    SolverConfig cfg_;
    std::shared_ptr<const AffineJackknife> cache_;
    mutable PseudoValueSet scratch_;
};

struct ProfileConfig {
    std::vector<double> beta_init;  // starting nuisance value, usually the plug-in
    int max_evals = 500;
    double simplex_scale = 0.1;  // initial simplex edge: scale * (1 + |beta_c|)
    double ftol = 1e-10;
};

struct ProfileResult {
    WjelEvaluation eval;
    std::vector<double> beta;
};

// Profile ratio l(alpha) = min over beta of l(alpha, beta) for an equation with
// a declared interest/nuisance split, minimized by Nelder-Mead from beta_init
// with one restart from a perturbed start before giving up.
inline ProfileResult profile_ratio(const EstimatingEquation& eq, const Sample& data,
                                   std::span<const double> alpha, const WeightVector& w,
                                   const SolverConfig& cfg = {}, const ProfileConfig& opt = {}) {
    validate_equation(eq);
    const int p = eq.interest_dim;
    const int q = eq.nuisance_dim;
    if (p < 1) throw DimensionMismatch("profile_ratio: equation declares no interest block");
    if (alpha.size() != static_cast<std::size_t>(p))
        throw DimensionMismatch("profile_ratio: alpha has wrong dimension");
    detail::validate_weights(w, static_cast<int>(data.size()), "profile_ratio");

    std::optional<AffineJackknife> cache;
    if (eq.affine) cache.emplace(eq, data);
    PseudoValueSet pv;
    auto eval_at = [&](std::span<const double> theta) {
        if (cache)
            cache->pseudo_values(theta, pv);
        else
            pv = jackknife_pseudo_values(eq, data, theta);
        return wjel_ratio(pv, w, cfg);
    };

    if (q == 0) return {eval_at(alpha), {}};

    if (opt.beta_init.size() != static_cast<std::size_t>(q))
        throw DimensionMismatch("profile_ratio: beta_init has wrong dimension");

    std::vector<double> theta(p + q);
    for (int c = 0; c < p; ++c) theta[c] = alpha[c];
    auto objective = [&](const std::vector<double>& beta) {
        for (int c = 0; c < q; ++c) theta[p + c] = beta[c];
        try {
            return eval_at(theta).ratio;
        } catch (const HullViolation&) {
            return std::numeric_limits<double>::infinity();
        } catch (const NoConvergence&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    NelderMeadResult nm = nelder_mead(objective, opt.beta_init, opt.simplex_scale, opt.max_evals,
                                      opt.ftol);
    if (!std::isfinite(nm.fmin)) {
        std::vector<double> restart(opt.beta_init);
        for (double& b : restart) b += 0.25 * (1.0 + std::abs(b));
        nm = nelder_mead(objective, restart, opt.simplex_scale, opt.max_evals, opt.ftol);
    }
    if (!std::isfinite(nm.fmin))
        throw ProfileFailure("profile_ratio: no feasible nuisance value found");

    for (int c = 0; c < q; ++c) theta[p + c] = nm.x[c];
    return {eval_at(theta), nm.x};
}

}  // namespace wjel
