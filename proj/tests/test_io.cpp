#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "wjel/csv.hpp"
#include "wjel/errors.hpp"
#include "wjel/report.hpp"
#include "wjel/rng.hpp"

using namespace wjel;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = "/tmp/wjel_test_io_" + name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("csv reader picks columns in the requested order") {
    std::string path = write_temp("basic.csv", "a,b,c\n1,2,3\n4,5,6\n");
    std::vector<std::string> cols{"c", "a"};
    Sample data = read_csv_columns(path, cols);
    REQUIRE(data.size() == 2);
    REQUIRE(data[0].size() == 2);
    CHECK(data[0][0] == 3.0);
    CHECK(data[0][1] == 1.0);
    CHECK(data[1][0] == 6.0);
    CHECK(data[1][1] == 4.0);
}

TEST_CASE("csv reader accepts CRLF, padding, and blank lines") {
    std::string path =
        write_temp("crlf.csv", " x , y \r\n 1.5 , -2 \r\n\r\n\n 2.5 , 4e-1 \r\n");
    std::vector<std::string> cols{"x", "y"};
    Sample data = read_csv_columns(path, cols);
    REQUIRE(data.size() == 2);
    CHECK(data[0][0] == 1.5);
    CHECK(data[0][1] == -2.0);
    CHECK(data[1][0] == 2.5);
    CHECK(data[1][1] == 0.4);
}

TEST_CASE("csv reader reports the failing row") {
    std::string ragged = write_temp("ragged.csv", "a,b\n1,2\n3\n");
    std::vector<std::string> cols{"a"};
    CHECK_THROWS_MATCHES(read_csv_columns(ragged, cols), ParseError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("row 2")));

    std::string bad = write_temp("badnum.csv", "a,b\n1,2\nx,4\n");
    CHECK_THROWS_MATCHES(read_csv_columns(bad, cols), ParseError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("row 2")));

    std::string empty = write_temp("empty.csv", "");
    CHECK_THROWS_AS(read_csv_columns(empty, cols), ParseError);
}

TEST_CASE("csv reader distinguishes missing files and missing columns") {
    std::vector<std::string> cols{"a"};
    CHECK_THROWS_AS(read_csv_columns("/tmp/wjel_no_such_file_9321.csv", cols), FileNotFound);

    std::string path = write_temp("columns.csv", "a,b\n1,2\n");
    std::vector<std::string> wrong{"z"};
    CHECK_THROWS_AS(read_csv_columns(path, wrong), MissingColumn);
    std::vector<std::string> none;
    CHECK_THROWS_AS(read_csv_columns(path, none), DomainError);
}

TEST_CASE("experiment report renders byte-stable csv with reference columns") {
    SimDesign d;
    d.family = Family::ContaminatedNormal;
    d.rho = 0.5;
    d.contamination = 0.0;
    d.n = 20;
    d.reps = 1000;
    d.runs = 10;
    d.level = 0.95;
    d.seed = 1;

    ExperimentReport r;
    r.design = d;
    r.target = Target::GiniCorr1;
    r.true_value = 0.5;
    r.stats.push_back({Method::JEL, 0.927, 0.004, 0.689, 0.01, 2});
    r.stats.push_back({Method::VJ, 0.9, 0.004, 0.65, 0.01, 0});

    std::string expected =
        "# family = contaminated-normal\n"
        "# rho = 0.5\n"
        "# contamination = 0\n"
        "# n = 20\n"
        "# reps = 1000\n"
        "# runs = 10\n"
        "# level = 0.95\n"
        "# seed = 1\n"
        "# equation = gini-corr-1\n"
        "# methods = jel,vj\n"
        "# true_value = 0.5\n"
        "design,method,target,n,coverage,coverage_sd,mean_length,length_sd,failures,"
        "ref_coverage,ref_length\n"
        "contaminated-normal(rho=0.5,contamination=0),jel,gini-corr-1,20,"
        "0.927,0.004,0.689,0.01,2,0.927,0.689\n"
        "contaminated-normal(rho=0.5,contamination=0),vj,gini-corr-1,20,"
        "0.9,0.004,0.65,0.01,0,,\n";
    CHECK(experiment_report_csv(r) == expected);
}

TEST_CASE("design labels cover every family") {
    SimDesign d;
    d.family = Family::Pareto;
    d.theta_scale = 1.0;
    d.beta_shape = 2.0;
    CHECK(format_design(d) == "pareto(theta=1,beta=2)");
    d.family = Family::Kotz;
    d.rho = 0.1;
    CHECK(format_design(d) == "kotz(rho=0.1)");
}

TEST_CASE("interval records render with flags and full-precision duplicates") {
    CiRecord rec;
    rec.equation = "gini-corr-1";
    rec.n = 44;
    rec.ci.lower = 0.25;
    rec.ci.upper = 0.75;
    rec.ci.level = 0.95;
    rec.ci.method = Method::WJEL;
    rec.ci.point_estimate = 0.5;
    rec.ci.lower_truncated = false;
    rec.ci.upper_truncated = true;

    std::vector<CiRecord> recs{rec};
    std::string expected =
        "method,equation,n,level,point,lower,upper,length,lower_truncated,upper_truncated,"
        "point_machine,lower_machine,upper_machine,length_machine\n"
        "wjel,gini-corr-1,44,0.95,0.5,0.25,0.75,0.5,0,1,0.5,0.25,0.75,0.5\n";
    CHECK(ci_records_csv(recs) == expected);

    std::string table = ci_records_table(recs);
    CHECK(table.find("method") != std::string::npos);
    CHECK(table.find("upper-truncated") != std::string::npos);
    CHECK(table.find("wjel") != std::string::npos);
}

TEST_CASE("machine formatting round-trips doubles exactly") {
    Rng rng(311);
    std::vector<double> cases{1.0 / 3.0, 0.1, 1e-300, 1e300, -0.0, 123456789.123456789};
    for (int i = 0; i < 200; ++i)
        cases.push_back(std::ldexp(2.0 * rng.uniform() - 1.0,
                                   static_cast<int>(rng.below(80)) - 40));
    for (double x : cases) {
        std::string s = format_machine(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
}
