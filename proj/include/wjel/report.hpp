#pragma once

#include <cstdio>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "wjel/inference.hpp"
#include "wjel/reference_values.hpp"
#include "wjel/simlab.hpp"

namespace wjel {

// Shortest-round-trip formatting for machine consumption.
inline std::string format_machine(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Seven significant digits for human-facing columns.
inline std::string format_pretty(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.7g", x);
    return buf;
}

inline std::string format_design(const SimDesign& d) {
    char buf[128];
    switch (d.family) {
        case Family::ContaminatedNormal:
            std::snprintf(buf, sizeof buf, "contaminated-normal(rho=%g,contamination=%g)", d.rho,
                          d.contamination);
            break;
        case Family::Kotz: std::snprintf(buf, sizeof buf, "kotz(rho=%g)", d.rho); break;
        default:
            std::snprintf(buf, sizeof buf, "pareto(theta=%g,beta=%g)", d.theta_scale,
                          d.beta_shape);
            break;
    }
    return buf;
}

// CSV rendering of an experiment report: a `# key = value` echo of the cell,
// then one row per method. Reference columns are left empty for cells
// without benchmark figures. Output is deterministic byte for byte.
inline std::string experiment_report_csv(const ExperimentReport& r) {
    std::ostringstream out;
    const SimDesign& d = r.design;
    out << "# family = " << family_name(d.family) << "\n";
    if (d.family == Family::Pareto) {
        out << "# theta_scale = " << format_pretty(d.theta_scale) << "\n";
        out << "# beta_shape = " << format_pretty(d.beta_shape) << "\n";
    } else {
        out << "# rho = " << format_pretty(d.rho) << "\n";
        if (d.family == Family::ContaminatedNormal)
            out << "# contamination = " << format_pretty(d.contamination) << "\n";
    }
    out << "# n = " << d.n << "\n";
    out << "# reps = " << d.reps << "\n";
    out << "# runs = " << d.runs << "\n";
    out << "# level = " << format_pretty(d.level) << "\n";
    out << "# seed = " << d.seed << "\n";
    out << "# equation = " << target_name(r.target) << "\n";
    out << "# methods = ";
    for (std::size_t j = 0; j < r.stats.size(); ++j)
        out << (j ? "," : "") << method_name(r.stats[j].method);
    out << "\n";
    out << "# true_value = " << format_pretty(r.true_value) << "\n";
    out << "design,method,target,n,coverage,coverage_sd,mean_length,length_sd,failures,"
           "ref_coverage,ref_length\n";
    const std::string design = format_design(d);
    for (const MethodStats& s : r.stats) {
        out << design << ',' << method_name(s.method) << ',' << target_name(r.target) << ','
            << d.n << ',' << format_pretty(s.coverage) << ',' << format_pretty(s.coverage_sd)
            << ',' << format_pretty(s.mean_length) << ',' << format_pretty(s.length_sd) << ','
            << s.failures << ',';
        if (const ReferenceValue* rv = find_reference(d, r.target, s.method)) {
            out << format_pretty(rv->coverage) << ',' << format_pretty(rv->length);
        } else {
            out << ',';
        }
        out << "\n";
    }
    return out.str();
}

// One confidence interval computed on a concrete data set.
struct CiRecord {
    std::string equation;
    int n = 0;
    ConfidenceInterval ci;
};

// CSV rendering of interval records: readable columns at seven significant
// digits plus full-precision duplicates, truncation flags as 0/1.
inline std::string ci_records_csv(std::span<const CiRecord> records) {
    std::ostringstream out;
    out << "method,equation,n,level,point,lower,upper,length,lower_truncated,upper_truncated,"
           "point_machine,lower_machine,upper_machine,length_machine\n";
    for (const CiRecord& rec : records) {
        const ConfidenceInterval& ci = rec.ci;
        const double length = ci.upper - ci.lower;
        out << method_name(ci.method) << ',' << rec.equation << ',' << rec.n << ','
            << format_pretty(ci.level) << ',' << format_pretty(ci.point_estimate) << ','
            << format_pretty(ci.lower) << ',' << format_pretty(ci.upper) << ','
            << format_pretty(length) << ',' << (ci.lower_truncated ? 1 : 0) << ','
            << (ci.upper_truncated ? 1 : 0) << ',' << format_machine(ci.point_estimate) << ','
            << format_machine(ci.lower) << ',' << format_machine(ci.upper) << ','
            << format_machine(length) << "\n";
    }
    return out.str();
}

// Fixed-width table of the same records for terminal display.
inline std::string ci_records_table(std::span<const CiRecord> records) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-6s %-12s %14s %14s %14s %10s %s\n", "method", "equation",
                  "point", "lower", "upper", "length", "flags");
    out << buf;
    for (const CiRecord& rec : records) {
        const ConfidenceInterval& ci = rec.ci;
        std::string flags;
        if (ci.lower_truncated) flags += "lower-truncated ";
        if (ci.upper_truncated) flags += "upper-truncated";
        std::snprintf(buf, sizeof buf, "%-6s %-12s %14.7g %14.7g %14.7g %10.4g %s\n",
                      method_name(ci.method), rec.equation.c_str(), ci.point_estimate, ci.lower,
                      ci.upper, ci.upper - ci.lower, flags.c_str());
        out << buf;
    }
    return out.str();
}

}  // namespace wjel
