#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "wjel/depth.hpp"
#include "wjel/distributions.hpp"
#include "wjel/errors.hpp"
#include "wjel/estimating.hpp"
#include "wjel/inference.hpp"
#include "wjel/rng.hpp"
#include "wjel/ustat.hpp"
#include "wjel/wjel.hpp"

namespace wjel {

// Sampling families for the coverage experiments. The first two are bivariate
// (correlation targets), the third univariate (concentration target).
enum class Family { ContaminatedNormal, Kotz, Pareto };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::ContaminatedNormal: return "contaminated-normal";
        case Family::Kotz: return "kotz";
        default: return "pareto";
    }
}

inline Family parse_family(std::string_view name) {
    if (name == "contaminated-normal") return Family::ContaminatedNormal;
    if (name == "kotz") return Family::Kotz;
    if (name == "pareto") return Family::Pareto;
    throw ConfigError("unknown family: " + std::string(name));
}

// One experiment cell: a sampling design plus replication counts. rho and
// contamination apply to the bivariate families, theta_scale and beta_shape
// to the Pareto family; the unused fields are ignored.
struct SimDesign {
    Family family = Family::ContaminatedNormal;
    double rho = 0.0;            // correlation parameter of the elliptical base
    double contamination = 0.0;  // mixing probability of the inflated component
    double theta_scale = 1.0;    // Pareto scale (left endpoint of the support)
    double beta_shape = 2.0;     // Pareto shape, must exceed 1 for a finite mean
    int n = 0;                   // observations per replication
    int reps = 1000;             // replications per run
    int runs = 1;                // independent runs (for across-run dispersion)
    double level = 0.95;         // nominal confidence level
    std::uint64_t seed = 1;      // root seed of the substream tree
};

inline void validate_design(const SimDesign& d) {
    if (d.n < 3) throw ConfigError("design: n must be at least 3");
    if (d.reps < 1) throw ConfigError("design: reps must be positive");
    if (d.runs < 1) throw ConfigError("design: runs must be positive");
    if (!(d.level > 0.0 && d.level < 1.0)) throw ConfigError("design: level must be in (0,1)");
    if (d.family == Family::Pareto) {
        if (!(d.theta_scale > 0.0)) throw ConfigError("design: theta_scale must be positive");
        if (!(d.beta_shape > 1.0)) throw ConfigError("design: beta_shape must exceed 1");
    } else {
        if (!(d.rho > -1.0 && d.rho < 1.0)) throw ConfigError("design: rho must be in (-1,1)");
        if (!(d.contamination >= 0.0 && d.contamination < 1.0))
            throw ConfigError("design: contamination must be in [0,1)");
        if (d.family == Family::Kotz && d.contamination != 0.0)
            throw ConfigError("design: kotz family takes no contamination");
    }
}

inline Target default_target(Family f) {
    return f == Family::Pareto ? Target::GiniIndex : Target::GiniCorr1;
}

// Population value of the estimand under the design. Both Gini correlations
// of an elliptical pair equal the ordinary correlation of its base, and
// contamination by an inflated copy of the same shape preserves it.
inline double true_value(const SimDesign& d, Target target) {
    if (d.family == Family::Pareto) {
        if (target != Target::GiniIndex)
            throw ConfigError("pareto designs only support the gini-index estimand");
        return 1.0 / (2.0 * d.beta_shape - 1.0);
    }
    if (target == Target::GiniIndex)
        throw ConfigError("bivariate designs do not support the gini-index estimand");
    return d.rho;
}

// Bivariate normal mixture: with probability `contamination` the point is
// drawn from the same shape scaled by 2 (covariance inflated fourfold).
// Draw order per point: one uniform, then two normals.
inline void sample_contaminated_normal(const SimDesign& d, Rng& rng, Sample& out) {
    const double load = std::sqrt(1.0 - d.rho * d.rho);
    out.assign(static_cast<std::size_t>(d.n), Observation(2));
    for (auto& obs : out) {
        double scale = rng.uniform() < d.contamination ? 2.0 : 1.0;
        double z1 = rng.normal();
        double z2 = rng.normal();
        obs[0] = scale * z1;
        obs[1] = scale * (d.rho * z1 + load * z2);
    }
}

// Bivariate Kotz type: density proportional to exp(-||Sigma^{-1/2} x||), so
// the standardized radius is Gamma(2,1) = sum of two unit exponentials and
// the direction is uniform on the circle. Draw order per point: two
// exponentials, then one uniform.
inline void sample_kotz(const SimDesign& d, Rng& rng, Sample& out) {
    const double load = std::sqrt(1.0 - d.rho * d.rho);
    out.assign(static_cast<std::size_t>(d.n), Observation(2));
    for (auto& obs : out) {
        double radius = rng.exponential() + rng.exponential();
        double angle = 2.0 * std::numbers::pi * rng.uniform();
        double y1 = radius * std::cos(angle);
        double y2 = radius * std::sin(angle);
        obs[0] = y1;
        obs[1] = d.rho * y1 + load * y2;
    }
}

// Pareto(theta, beta) by inversion: X = theta * U^{-1/beta} with U in (0,1].
inline void sample_pareto(const SimDesign& d, Rng& rng, Sample& out) {
    out.assign(static_cast<std::size_t>(d.n), Observation(1));
    for (auto& obs : out)
        obs[0] = d.theta_scale * std::pow(rng.uniform_pos(), -1.0 / d.beta_shape);
}

inline void sample_design(const SimDesign& d, Rng& rng, Sample& out) {
    switch (d.family) {
        case Family::ContaminatedNormal: sample_contaminated_normal(d, rng, out); break;
        case Family::Kotz: sample_kotz(d, rng, out); break;
        default: sample_pareto(d, rng, out); break;
    }
}

// Per-method summary over the whole experiment. Coverage and length are
// averaged within each run, then summarized across runs; the sd columns are
// the across-run sample standard deviations (zero when runs == 1).
struct MethodStats {
    Method method = Method::JEL;
    double coverage = 0.0;
    double coverage_sd = 0.0;
    double mean_length = 0.0;
    double length_sd = 0.0;
    long failures = 0;  // replications where the interval could not be formed
};

struct ExperimentReport {
    SimDesign design;
    Target target = Target::GiniCorr1;
    double true_value = 0.0;
    std::vector<MethodStats> stats;  // ordered as the requested methods
};

namespace detail {

inline void mean_sd(std::span<const double> xs, double& mean, double& sd) {
    mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    sd = 0.0;
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
}

struct RepOutcome {
    bool failed = true;
    bool hit = false;
    double length = 0.0;
};

}  // namespace detail

// Monte Carlo coverage experiment. Replication (run, rep) uses the dedicated
// substream(seed, run, rep), so any cell can be reproduced in isolation and
// results do not depend on the set of methods requested. Replications are
// independent work items; outcomes land in a grid keyed by replication index
// and are reduced in index order, so aggregates are byte-identical for every
// thread count. threads = 0 picks the hardware concurrency.
inline ExperimentReport run_coverage_experiment(const SimDesign& design, Target target,
                                                std::span<const Method> methods,
                                                const SolverConfig& cfg = {}, int threads = 0) {
    validate_design(design);
    if (methods.empty()) throw ConfigError("experiment: no methods requested");

    ExperimentReport report;
    report.design = design;
    report.target = target;
    report.true_value = true_value(design, target);

    const EstimatingEquation eq = target_equation(target);
    const double cutoff = chi_square_quantile(1, design.level);
    const double truth = report.true_value;
    const std::size_t m = methods.size();
    const WeightVector uniform = uniform_weights(design.n);

    // One replication: draw the sample, form one interval per method.
    // The theta-independent jackknife tables depend only on the data, so one
    // cache serves every equation-based method on this sample.
    auto run_rep = [&](int run, int rep, std::span<detail::RepOutcome> out) {
        Rng rng =
            substream(design.seed, static_cast<std::uint64_t>(run), static_cast<std::uint64_t>(rep));
        Sample data;
        sample_design(design, rng, data);
        std::shared_ptr<const AffineJackknife> cache;
        for (std::size_t j = 0; j < m; ++j) {
            ConfidenceInterval ci;
            try {
                if (methods[j] == Method::VJ) {
                    ci = vj_interval(eq, data, design.level);
                } else {
                    if (!cache) cache = std::make_shared<const AffineJackknife>(eq, data);
                    const WeightVector& w =
                        methods[j] == Method::WJEL ? depth_weights(data) : uniform;
                    ScalarStatistic stat(eq, data, w, cfg, cache);
                    ci = invert_ci(stat, stat.equation_root(), design.level, cutoff, methods[j]);
                }
            } catch (const std::runtime_error&) {
                continue;
            }
            if (!std::isfinite(ci.lower) || !std::isfinite(ci.upper)) continue;
            out[j].failed = false;
            out[j].hit = ci.lower <= truth && truth <= ci.upper;
            out[j].length = ci.upper - ci.lower;
        }
    };

    int pool = threads > 0 ? threads
                           : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
    pool = std::min<int>(pool, design.reps);

    std::vector<std::vector<double>> run_cov(m), run_len(m);
    std::vector<long> failures(m, 0);
    std::vector<detail::RepOutcome> grid;
    for (int run = 0; run < design.runs; ++run) {
        grid.assign(static_cast<std::size_t>(design.reps) * m, detail::RepOutcome{});
        if (pool == 1) {
            for (int rep = 0; rep < design.reps; ++rep)
                run_rep(run, rep, std::span(grid).subspan(static_cast<std::size_t>(rep) * m, m));
        } else {
            std::atomic<int> next{0};
            std::exception_ptr first_error;
            std::mutex error_mutex;
            auto worker = [&] {
                try {
                    for (int rep = next.fetch_add(1); rep < design.reps;
                         rep = next.fetch_add(1)) {
                        run_rep(run, rep,
                                std::span(grid).subspan(static_cast<std::size_t>(rep) * m, m));
                    }
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            };
            std::vector<std::thread> team;
            for (int t = 0; t < pool; ++t) team.emplace_back(worker);
            for (std::thread& t : team) t.join();
            if (first_error) std::rethrow_exception(first_error);
        }

        for (std::size_t j = 0; j < m; ++j) {
            long hits = 0, valid = 0;
            double len_sum = 0.0;
            for (int rep = 0; rep < design.reps; ++rep) {
                const detail::RepOutcome& o = grid[static_cast<std::size_t>(rep) * m + j];
                if (o.failed) {
                    ++failures[j];
                    continue;
                }
                ++valid;
                if (o.hit) ++hits;
                len_sum += o.length;
            }
            double denom = valid > 0 ? static_cast<double>(valid) : 1.0;
            run_cov[j].push_back(static_cast<double>(hits) / denom);
            run_len[j].push_back(len_sum / denom);
        }
    }

    for (std::size_t j = 0; j < m; ++j) {
        MethodStats s;
        s.method = methods[j];
        detail::mean_sd(run_cov[j], s.coverage, s.coverage_sd);
        detail::mean_sd(run_len[j], s.mean_length, s.length_sd);
        s.failures = failures[j];
        report.stats.push_back(s);
    }
    return report;
}

// Parsed experiment description: design cell, estimand, and method list.
struct ExperimentConfig {
    SimDesign design;
    Target target = Target::GiniCorr1;
    std::vector<Method> methods{Method::JEL, Method::WJEL};
};

inline std::vector<Method> parse_methods(std::string_view list) {
    std::vector<Method> out;
    std::string item;
    std::stringstream ss{std::string(list)};
    while (std::getline(ss, item, ',')) {
        std::string_view name = detail::trim(item);
        Method parsed;
        if (name == "jel")
            parsed = Method::JEL;
        else if (name == "wjel")
            parsed = Method::WJEL;
        else if (name == "vj")
            parsed = Method::VJ;
        else
            throw ConfigError("unknown method: " + std::string(name));
        for (Method seen : out)
            if (seen == parsed) throw ConfigError("duplicate method: " + std::string(name));
        out.push_back(parsed);
    }
    if (out.empty()) throw ConfigError("methods list is empty");
    return out;
}

// Parses `key = value` lines. Blank lines and # comments are ignored,
// unknown keys are rejected, family and n are required. The equation
// defaults to the family's natural estimand.
inline ExperimentConfig parse_experiment_config(std::string_view text) {
    std::map<std::string, std::string, std::less<>> kv;
    std::size_t pos = 0;
    long line_no = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        std::size_t eq_pos = line.find('=');
        if (eq_pos == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        std::string_view key = detail::trim(line.substr(0, eq_pos));
        std::string_view value = detail::trim(line.substr(eq_pos + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");
        kv[std::string(key)] = std::string(value);
    }

    static const char* known[] = {"family", "rho",   "contamination", "theta_scale",
                                  "beta_shape", "n", "reps",          "runs",
                                  "level",      "seed", "methods",    "equation"};
    for (const auto& [key, value] : kv) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError("unknown config key: " + key);
    }
    if (!kv.count("family")) throw ConfigError("config: family is required");
    if (!kv.count("n")) throw ConfigError("config: n is required");

    auto want_double = [&](const char* key, double& slot) {
        auto it = kv.find(key);
        if (it == kv.end()) return;
        if (!detail::parse_double(it->second, slot))
            throw ConfigError(std::string("config: bad number for ") + key + ": " + it->second);
    };
    auto want_long = [&](const char* key, long& slot) {
        auto it = kv.find(key);
        if (it == kv.end()) return;
        if (!detail::parse_long(it->second, slot))
            throw ConfigError(std::string("config: bad integer for ") + key + ": " + it->second);
    };

    ExperimentConfig config;
    config.design.family = parse_family(kv.find("family")->second);
    want_double("rho", config.design.rho);
    want_double("contamination", config.design.contamination);
    want_double("theta_scale", config.design.theta_scale);
    want_double("beta_shape", config.design.beta_shape);
    want_double("level", config.design.level);
    long n = 0, reps = config.design.reps, runs = config.design.runs, seed = 1;
    want_long("n", n);
    want_long("reps", reps);
    want_long("runs", runs);
    want_long("seed", seed);
    if (n <= 0 || n > 1000000) throw ConfigError("config: n out of range");
    if (seed < 0) throw ConfigError("config: seed must be nonnegative");
    config.design.n = static_cast<int>(n);
    config.design.reps = static_cast<int>(reps);
    config.design.runs = static_cast<int>(runs);
    config.design.seed = static_cast<std::uint64_t>(seed);

    config.target = default_target(config.design.family);
    if (auto it = kv.find("equation"); it != kv.end()) {
        try {
            config.target = parse_target(it->second);
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
    }
    if (auto it = kv.find("methods"); it != kv.end()) config.methods = parse_methods(it->second);

    validate_design(config.design);
    true_value(config.design, config.target);  // rejects family/estimand mismatches
    return config;
}

}  // namespace wjel
