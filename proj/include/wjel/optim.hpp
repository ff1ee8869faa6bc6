#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace wjel {

// Golden-section search on [a, b]; assumes f is unimodal there (infinite
// values are tolerated and simply compare as worst).
template <typename Fn>
double golden_section_minimize(Fn&& f, double a, double b, double tol = 1e-8,
                               int max_iter = 200) {
    const double inv_phi = 0.6180339887498948482;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

// Expands doubling steps from x0 until f stops decreasing or the domain edge
// is reached, in each direction; returns a bracket around a local minimum.
template <typename Fn>
std::pair<double, double> bracket_minimum(Fn&& f, double x0, double f0, double step, double lo,
                                          double hi) {
    auto expand = [&](double dir) {
        double h = step;
        double best_x = x0, best_f = f0;
        for (int it = 0; it < 200; ++it) {
            double x = x0 + dir * h;
            if (x <= lo) x = lo;
            if (x >= hi) x = hi;
            double fx = f(x);
            if (!(fx < best_f)) return x;  // rose (or inf): bracket edge
            best_x = x;
            best_f = fx;
            if (x == lo || x == hi) return x;
            h *= 2.0;
        }
        return best_x;
    };
    double left = expand(-1.0);
    double right = expand(+1.0);
    return {left, right};
}

struct NelderMeadResult {
    std::vector<double> x;
    double fmin = std::numeric_limits<double>::infinity();
    int evals = 0;
    bool converged = false;
};

// Standard Nelder-Mead simplex minimization. Infinite objective values mark
// infeasible points and are ordered worst, so the simplex walks back into the
// feasible region on its own.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    const std::vector<double>& x0, double scale,
                                    int max_evals = 500, double ftol = 1e-10) {
    const int dim = static_cast<int>(x0.size());
    const double alpha = 1.0, gamma = 2.0, beta = 0.5, sigma = 0.5;

    NelderMeadResult res;
    std::vector<std::vector<double>> simplex(dim + 1, x0);
    std::vector<double> fv(dim + 1);
    for (int i = 0; i < dim; ++i) simplex[i + 1][i] += scale * (1.0 + std::abs(x0[i]));
    for (int i = 0; i <= dim; ++i) {
        fv[i] = f(simplex[i]);
        ++res.evals;
    }

    std::vector<int> order(dim + 1);
    std::vector<double> centroid(dim), trial(dim), trial2(dim);
    while (res.evals < max_evals) {
        for (int i = 0; i <= dim; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        int best = order[0], worst = order[dim], second = order[dim - 1];

        if (std::isfinite(fv[best]) && std::isfinite(fv[worst]) &&
            fv[worst] - fv[best] <= ftol * (1.0 + std::abs(fv[best]))) {
            res.converged = true;
            break;
        }

        for (int c = 0; c < dim; ++c) {
            double s = 0.0;
            for (int i = 0; i <= dim; ++i)
                if (i != worst) s += simplex[i][c];
            centroid[c] = s / dim;
        }

        // Reflection
        for (int c = 0; c < dim; ++c) trial[c] = centroid[c] + alpha * (centroid[c] - simplex[worst][c]);
        double f_trial = f(trial);
        ++res.evals;
        if (f_trial < fv[order[0]]) {
            // Expansion
            for (int c = 0; c < dim; ++c)
                trial2[c] = centroid[c] + gamma * (trial[c] - centroid[c]);
            double f_trial2 = f(trial2);
            ++res.evals;
            if (f_trial2 < f_trial) {
                simplex[worst] = trial2;
                fv[worst] = f_trial2;
            } else {
                simplex[worst] = trial;
                fv[worst] = f_trial;
            }
            continue;
        }
        if (f_trial < fv[second]) {
            simplex[worst] = trial;
            fv[worst] = f_trial;
            continue;
        }
        // Contraction (outside towards the better of worst/reflected)
        const std::vector<double>& toward = f_trial < fv[worst] ? trial : simplex[worst];
        for (int c = 0; c < dim; ++c) trial2[c] = centroid[c] + beta * (toward[c] - centroid[c]);
        double f_contr = f(trial2);
        ++res.evals;
        if (f_contr < std::min(f_trial, fv[worst])) {
            simplex[worst] = trial2;
            fv[worst] = f_contr;
            continue;
        }
        // Shrink towards the best vertex
        for (int i = 0; i <= dim; ++i) {
            if (i == best) continue;
            for (int c = 0; c < dim; ++c)
                simplex[i][c] = simplex[best][c] + sigma * (simplex[i][c] - simplex[best][c]);
            fv[i] = f(simplex[i]);
            ++res.evals;
        }
    }

    int best = 0;
    for (int i = 1; i <= dim; ++i)
        if (fv[i] < fv[best]) best = i;
    res.x = simplex[best];
    res.fmin = fv[best];
    return res;
}

}  // namespace wjel
