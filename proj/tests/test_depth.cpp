#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wjel/depth.hpp"
#include "wjel/errors.hpp"
#include "wjel/rng.hpp"

using namespace wjel;

namespace {

Sample random_cloud(Rng& rng, int n, int d) {
    Sample data(static_cast<std::size_t>(n));
    for (auto& p : data) {
        p.resize(static_cast<std::size_t>(d));
        for (auto& v : p) v = rng.normal();
    }
    return data;
}

}  // namespace

TEST_CASE("univariate spatial depth has the closed form 1 - |2 F - 1|") {
    Sample data{{1.0}, {2.0}, {3.0}};
    CHECK(spatial_depth({1.0}, data) == Catch::Approx(1.0 / 3.0).margin(1e-15));
    CHECK(spatial_depth({2.0}, data) == Catch::Approx(1.0).margin(1e-15));
    CHECK(spatial_depth({3.0}, data) == Catch::Approx(1.0 / 3.0).margin(1e-15));
    // Off-sample point between the second and third order statistics.
    CHECK(spatial_depth({2.5}, data) == Catch::Approx(2.0 / 3.0).margin(1e-15));

    auto all = spatial_depths(data);
    REQUIRE(all.size() == 3);
    CHECK(all[0] == Catch::Approx(1.0 / 3.0).margin(1e-15));
    CHECK(all[1] == Catch::Approx(1.0).margin(1e-15));
    CHECK(all[2] == Catch::Approx(1.0 / 3.0).margin(1e-15));
}

TEST_CASE("depth weights normalize depths by their total") {
    WeightVector w = depth_weights({{1.0}, {2.0}, {3.0}});
    REQUIRE(w.n() == 3);
    CHECK_FALSE(w.degenerate);
    CHECK(w.weights[0] == Catch::Approx(0.2).margin(1e-15));
    CHECK(w.weights[1] == Catch::Approx(0.6).margin(1e-15));
    CHECK(w.weights[2] == Catch::Approx(0.2).margin(1e-15));
    CHECK(w.c_hat == Catch::Approx(3.0 * (0.04 + 0.36 + 0.04)).margin(1e-12));

    double total = 0.0;
    for (double x : w.weights) total += x;
    CHECK(total == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("depth is invariant under rotation and translation") {
    Rng rng(29);
    for (int trial = 0; trial < 25; ++trial) {
        Sample data = random_cloud(rng, 15, 2);
        double angle = 6.2831853 * rng.uniform();
        double c = std::cos(angle), s = std::sin(angle);
        double tx = 3.0 * rng.normal(), ty = 3.0 * rng.normal();

        Sample moved(data.size());
        for (std::size_t i = 0; i < data.size(); ++i)
            moved[i] = {c * data[i][0] - s * data[i][1] + tx,
                        s * data[i][0] + c * data[i][1] + ty};

        auto d0 = spatial_depths(data);
        auto d1 = spatial_depths(moved);
        for (std::size_t i = 0; i < d0.size(); ++i)
            CHECK(std::abs(d0[i] - d1[i]) <= 1e-10);
    }
}

TEST_CASE("depth is invariant under common positive scaling") {
    Rng rng(31);
    Sample data = random_cloud(rng, 20, 2);
    Sample scaled(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        scaled[i] = {7.5 * data[i][0], 7.5 * data[i][1]};
    auto d0 = spatial_depths(data);
    auto d1 = spatial_depths(scaled);
    for (std::size_t i = 0; i < d0.size(); ++i) CHECK(std::abs(d0[i] - d1[i]) <= 1e-12);
}

TEST_CASE("weights do not depend on observation order") {
    Rng rng(37);
    Sample data = random_cloud(rng, 12, 2);
    WeightVector w = depth_weights(data);

    Sample reversed(data.rbegin(), data.rend());
    WeightVector wr = depth_weights(reversed);
    for (std::size_t i = 0; i < data.size(); ++i)
        CHECK(std::abs(w.weights[i] - wr.weights[data.size() - 1 - i]) <= 1e-14);
    CHECK(std::abs(w.c_hat - wr.c_hat) <= 1e-13);
}

TEST_CASE("coincident points all get full depth and uniform weights") {
    WeightVector w = depth_weights({{2.0, 2.0}, {2.0, 2.0}, {2.0, 2.0}, {2.0, 2.0}});
    CHECK_FALSE(w.degenerate);
    for (double x : w.weights) CHECK(x == Catch::Approx(0.25).margin(1e-15));
    CHECK(w.c_hat == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("a floor above every depth triggers the uniform fallback flag") {
    WeightVector w = depth_weights({{1.0}, {2.0}, {3.0}}, 1.5);
    CHECK(w.degenerate);
    for (double x : w.weights) CHECK(x == Catch::Approx(1.0 / 3.0).margin(1e-15));
    CHECK(w.c_hat == Catch::Approx(1.0).margin(1e-15));
    CHECK_THROWS_AS(depth_weights({{1.0}, {2.0}}, 0.0), DomainError);
}

TEST_CASE("uniform weights have unit dispersion constant") {
    WeightVector w = uniform_weights(8);
    REQUIRE(w.n() == 8);
    for (double x : w.weights) CHECK(x == Catch::Approx(0.125).margin(1e-16));
    CHECK(w.c_hat == Catch::Approx(1.0).margin(1e-15));
    CHECK_THROWS_AS(uniform_weights(0), InsufficientData);
}

TEST_CASE("dispersion constant is at least one and equals n times the weight norm") {
    Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 5 + static_cast<int>(rng.below(40));
        Sample data = random_cloud(rng, n, 2);
        WeightVector w = depth_weights(data);
        double sumsq = 0.0;
        for (double x : w.weights) sumsq += x * x;
        CHECK(w.c_hat == Catch::Approx(n * sumsq).margin(1e-12));
        CHECK(w.c_hat >= 1.0 - 1e-12);
        CHECK(detail::depth_c_hat(w.weights) == Catch::Approx(w.c_hat).margin(1e-12));
    }
}

TEST_CASE("limit constant oracle evaluates moments of raw depths") {
    std::vector<double> constant(100, 0.5);
    CHECK(limit_constant_oracle(constant) == Catch::Approx(1.0).margin(1e-12));

    std::vector<double> onehot(10, 0.0);
    onehot[3] = 1.0;
    CHECK(limit_constant_oracle(onehot) == Catch::Approx(10.0).margin(1e-12));

    std::vector<double> zeros(5, 0.0);
    CHECK_THROWS_AS(limit_constant_oracle(zeros), ZeroMeanDepth);
}
