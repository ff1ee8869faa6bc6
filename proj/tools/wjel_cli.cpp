#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wjel/csv.hpp"
#include "wjel/depth.hpp"
#include "wjel/errors.hpp"
#include "wjel/estimating.hpp"
#include "wjel/inference.hpp"
#include "wjel/report.hpp"
#include "wjel/simlab.hpp"
#include "wjel/wjel.hpp"

namespace {

std::vector<std::string> split_columns(const std::string& spec) {
    std::vector<std::string> out;
    for (std::string_view field : wjel::detail::split_fields(spec)) {
        if (field.empty()) throw wjel::ConfigError("--columns: empty column name in: " + spec);
        out.emplace_back(field);
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw wjel::FileNotFound("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw wjel::FileNotFound("cannot write: " + out_path);
    out << content;
}

void check_columns_for(wjel::Target target, const std::vector<std::string>& cols) {
    std::size_t need = target == wjel::Target::GiniIndex ? 1 : 2;
    if (cols.size() != need)
        throw wjel::ConfigError("--columns: " + std::string(wjel::target_name(target)) +
                                " needs exactly " + std::to_string(need) + " column" +
                                (need == 1 ? "" : "s"));
}

void check_level(double level) {
    if (!(level > 0.0 && level < 1.0))
        throw wjel::ConfigError("--level must be strictly between 0 and 1");
}

int run_estimate(const std::string& input, const std::string& columns,
                 const std::string& equation, const std::string& weights,
                 const std::string& out) {
    wjel::Target target = wjel::parse_target(equation);
    std::vector<std::string> cols = split_columns(columns);
    check_columns_for(target, cols);
    wjel::Sample data = wjel::read_csv_columns(input, cols);
    if (target == wjel::Target::GiniIndex) wjel::gini_index_estimate(data);
    wjel::EstimatingEquation eq = wjel::target_equation(target);
    wjel::WeightVector w = weights == "uniform" ? wjel::uniform_weights(static_cast<int>(data.size()))
                                                : wjel::depth_weights(data);
    wjel::ScalarStatistic stat(eq, data, w);
    double est = wjel::scalar_point_estimate(stat, stat.equation_root());
    std::ostringstream csv;
    csv << "equation,weights,n,estimate,estimate_machine\n"
        << equation << ',' << weights << ',' << data.size() << ',' << wjel::format_pretty(est)
        << ',' << wjel::format_machine(est) << "\n";
    emit(out, csv.str());
    return 0;
}

int run_ci(const std::string& input, const std::string& columns, const std::string& equation,
           const std::string& methods_spec, double level, const std::string& out) {
    check_level(level);
    wjel::Target target = wjel::parse_target(equation);
    std::vector<std::string> cols = split_columns(columns);
    check_columns_for(target, cols);
    std::vector<wjel::Method> methods = wjel::parse_methods(methods_spec);
    wjel::Sample data = wjel::read_csv_columns(input, cols);
    if (target == wjel::Target::GiniIndex) wjel::gini_index_estimate(data);
    wjel::EstimatingEquation eq = wjel::target_equation(target);
    const int n = static_cast<int>(data.size());
    const double cutoff = wjel::chi_square_quantile(1, level);

    std::shared_ptr<const wjel::AffineJackknife> cache;
    std::vector<wjel::CiRecord> records;
    for (wjel::Method m : methods) {
        wjel::ConfidenceInterval ci;
        if (m == wjel::Method::VJ) {
            ci = wjel::vj_interval(eq, data, level);
        } else {
            if (!cache) cache = std::make_shared<const wjel::AffineJackknife>(eq, data);
            wjel::WeightVector w = m == wjel::Method::WJEL ? wjel::depth_weights(data)
                                                           : wjel::uniform_weights(n);
            wjel::ScalarStatistic stat(eq, data, w, {}, cache);
            ci = wjel::invert_ci(stat, stat.equation_root(), level, cutoff, m);
        }
        records.push_back({equation, n, ci});
    }
    if (out.empty()) {
        std::cout << wjel::ci_records_table(records);
    } else {
        emit(out, wjel::ci_records_csv(records));
        std::cout << wjel::ci_records_table(records);
    }
    return 0;
}

int run_experiment(const std::string& config_path, bool seed_given, long seed,
                   const std::string& out) {
    wjel::ExperimentConfig config = wjel::parse_experiment_config(read_text_file(config_path));
    if (seed_given) {
        if (seed < 0) throw wjel::ConfigError("--seed must be nonnegative");
        config.design.seed = static_cast<std::uint64_t>(seed);
    }
    wjel::ExperimentReport report =
        wjel::run_coverage_experiment(config.design, config.target, config.methods);
    emit(out, wjel::experiment_report_csv(report));
    long total_failures = 0;
    for (const wjel::MethodStats& s : report.stats) total_failures += s.failures;
    if (total_failures > 0) {
        std::cerr << "warning: " << total_failures << " replication(s) produced no interval\n";
        return 4;
    }
    return 0;
}

int run_depth_weights(const std::string& input, const std::string& columns,
                      const std::string& out) {
    std::vector<std::string> cols = split_columns(columns);
    wjel::Sample data = wjel::read_csv_columns(input, cols);
    std::vector<double> depths = wjel::spatial_depths(data);
    wjel::WeightVector w = wjel::depth_weights(data);
    std::ostringstream csv;
    csv << "# c_hat = " << wjel::format_machine(w.c_hat) << "\n";
    csv << "# degenerate = " << (w.degenerate ? 1 : 0) << "\n";
    csv << "row,depth,weight\n";
    for (std::size_t i = 0; i < depths.size(); ++i)
        csv << (i + 1) << ',' << wjel::format_machine(depths[i]) << ','
            << wjel::format_machine(w.weights[i]) << "\n";
    emit(out, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jackknife empirical likelihood inference with depth-based weighting"};
    app.require_subcommand(1);

    std::string input, columns, out;
    std::string equation = "gini-corr-1";
    std::string weights = "spatial-depth";
    std::string methods = "jel,wjel,vj";
    std::string config_path;
    double level = 0.95;
    long seed = 0;

    const std::vector<std::string> equations{"gini-corr-1", "gini-corr-2", "gini-index"};

    CLI::App* est = app.add_subcommand("estimate", "Point estimate on a CSV data set");
    est->add_option("--input", input, "CSV file")->required();
    est->add_option("--columns", columns, "comma-separated column names")->required();
    est->add_option("--equation", equation, "estimand")->check(CLI::IsMember(equations));
    est->add_option("--weights", weights, "weighting of the likelihood")
        ->check(CLI::IsMember({"uniform", "spatial-depth"}));
    est->add_option("--out", out, "output file (default stdout)");

    CLI::App* ci = app.add_subcommand("ci", "Confidence intervals on a CSV data set");
    ci->add_option("--input", input, "CSV file")->required();
    ci->add_option("--columns", columns, "comma-separated column names")->required();
    ci->add_option("--equation", equation, "estimand")->check(CLI::IsMember(equations));
    ci->add_option("--methods", methods, "comma-separated subset of jel,wjel,vj");
    ci->add_option("--level", level, "confidence level");
    ci->add_option("--out", out, "CSV output file; a table is always printed");

    CLI::App* exp = app.add_subcommand("experiment", "Monte Carlo coverage experiment");
    exp->add_option("--config", config_path, "experiment config file")->required();
    CLI::Option* seed_opt = exp->add_option("--seed", seed, "override the config seed");
    exp->add_option("--out", out, "output file (default stdout)");

    CLI::App* dw = app.add_subcommand("depth-weights", "Spatial depth weights of a CSV data set");
    dw->add_option("--input", input, "CSV file")->required();
    dw->add_option("--columns", columns, "comma-separated column names")->required();
    dw->add_option("--out", out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (est->parsed()) return run_estimate(input, columns, equation, weights, out);
        if (ci->parsed()) return run_ci(input, columns, equation, methods, level, out);
        if (exp->parsed()) return run_experiment(config_path, seed_opt->count() > 0, seed, out);
        return run_depth_weights(input, columns, out);
    } catch (const wjel::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const wjel::FileNotFound& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const wjel::MissingColumn& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const wjel::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
