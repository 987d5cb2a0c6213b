#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "vecgp/norms.hpp"
#include "vecgp/rng.hpp"

using namespace vecgp;

namespace {
const double inf = std::numeric_limits<double>::infinity();
}

TEST_CASE("discrete site norm closed cases") {
    Matd single(2, 1);
    single << 3.0, 4.0;
    CHECK(discrete_site_norm(single, 2.0) == doctest::Approx(5.0));

    Matd two(2, 2);
    two << 1.0, 0.0, 0.0, 1.0;
    CHECK(discrete_site_norm(two, inf) == doctest::Approx(1.0));
    CHECK(discrete_site_norm(two, 1.0) == doctest::Approx(2.0));

    Matd empty(2, 0);
    CHECK_THROWS_AS(discrete_site_norm(empty, 2.0), std::invalid_argument);
}

TEST_CASE("discrete site norm matches a naive double loop") {
    Rng rng(3);
    Matd values(3, 17);
    for (Index j = 0; j < values.cols(); ++j)
        for (Index a = 0; a < values.rows(); ++a) values(a, j) = rng.normal();
    for (double p : {1.0, 2.0}) {
        double acc = 0;
        for (Index a = 0; a < values.rows(); ++a)
            for (Index j = 0; j < values.cols(); ++j) acc += std::pow(std::abs(values(a, j)), p);
        CHECK(discrete_site_norm(values, p) == doctest::Approx(std::pow(acc, 1.0 / p)));
    }
    CHECK(discrete_site_norm(values, inf) == doctest::Approx(values.cwiseAbs().maxCoeff()));
}

TEST_CASE("constant fields have L2 norm sqrt(d) |c| on the unit square") {
    auto grid = EvaluationGrid<double>::midpoint(Domain<double>::unit_box(2), 16);
    Matd values = Matd::Constant(2, grid.size(), -0.75);
    CHECK(grid_Lq_norm(grid, values, 2.0, 0) ==
          doctest::Approx(std::sqrt(2.0) * 0.75).epsilon(1e-12));
    CHECK(grid_Lq_norm(grid, values, inf, 0) == doctest::Approx(0.75));
    // s = 1 seminorm of a constant vanishes, so the full norm is the L2 part
    CHECK(grid_W1q_seminorm(grid, values, 2.0) == doctest::Approx(0.0));
    CHECK(grid_Lq_norm(grid, values, 2.0, 1) ==
          doctest::Approx(std::sqrt(2.0) * 0.75).epsilon(1e-12));
}

TEST_CASE("first-order seminorm is exact on linear fields") {
    auto grid = EvaluationGrid<double>::midpoint(Domain<double>::unit_box(2), 12);
    // v = (2 x1 - x2, 3 x2): gradient rows (2,-1) and (0,3)
    Matd values(2, grid.size());
    for (Index i = 0; i < grid.size(); ++i) {
        values(0, i) = 2.0 * grid.points(0, i) - grid.points(1, i);
        values(1, i) = 3.0 * grid.points(1, i);
    }
    // the seminorm combines the per-axis L_q norms in l2:
    // |v|_{W_2^1} = sqrt( |d1 v|_{L2}^2 + |d2 v|_{L2}^2 ) with |d1 v|^2 = 4,
    // |d2 v|^2 = 1 + 9 on the unit square
    CHECK(grid_W1q_seminorm(grid, values, 2.0) ==
          doctest::Approx(std::sqrt(4.0 + 10.0)).epsilon(1e-12));
    // q = inf: per-axis max entries are 2 and 3, combined in l2
    CHECK(grid_W1q_seminorm(grid, values, inf) ==
          doctest::Approx(std::sqrt(4.0 + 9.0)).epsilon(1e-12));
}

TEST_CASE("max norm scans every component and grid point") {
    auto grid = EvaluationGrid<double>::midpoint(Domain<double>::unit_box(2), 9);
    Rng rng(5);
    Matd values(2, grid.size());
    for (Index i = 0; i < grid.size(); ++i) {
        values(0, i) = rng.normal();
        values(1, i) = rng.normal();
    }
    double brute = 0;
    for (Index i = 0; i < grid.size(); ++i)
        brute = std::max({brute, std::abs(values(0, i)), std::abs(values(1, i))});
    CHECK(grid_Lq_norm(grid, values, inf, 0) == doctest::Approx(brute));
}

TEST_CASE("rate estimation recovers exact power laws") {
    std::vector<std::pair<double, double>> squares = {
        {0.4, 0.16}, {0.2, 0.04}, {0.1, 0.01}};
    auto rate = estimate_rate(squares);
    CHECK(rate.slope == doctest::Approx(2.0).epsilon(1e-12));
    for (double p : rate.pairwise) CHECK(p == doctest::Approx(2.0).epsilon(1e-12));

    std::vector<std::pair<double, double>> p15;
    for (double h : {0.5, 0.25, 0.125, 0.0625}) p15.emplace_back(h, 3.0 * std::pow(h, 1.5));
    CHECK(estimate_rate(p15).slope == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("rate estimation tolerates bounded multiplicative noise") {
    Rng rng(7);
    const double p = 2.3;
    std::vector<std::pair<double, double>> pairs;
    for (double h : {0.4, 0.2, 0.1, 0.05})
        pairs.emplace_back(h, std::pow(h, p) * (1.0 + 0.05 * (2.0 * rng.uniform() - 1.0)));
    CHECK(std::abs(estimate_rate(pairs).slope - p) <= 0.15);
}

TEST_CASE("rate estimation drops non-positive errors with a count") {
    std::vector<std::pair<double, double>> pairs = {
        {0.4, 0.16}, {0.2, 0.04}, {0.1, 0.0}};
    auto rate = estimate_rate(pairs);
    CHECK(rate.dropped == 1);
    CHECK(rate.slope == doctest::Approx(2.0).epsilon(1e-12));

    std::vector<std::pair<double, double>> too_few = {{0.4, 0.0}, {0.2, 0.0}};
    CHECK_THROWS_AS(estimate_rate(too_few), std::invalid_argument);
    std::vector<std::pair<double, double>> bad_h = {{-0.4, 0.1}, {0.2, 0.1}};
    CHECK_THROWS_AS(estimate_rate(bad_h), std::invalid_argument);
}
