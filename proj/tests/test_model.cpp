#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "retsurv/model.hpp"

using namespace retsurv;

namespace {

ModelParams reference_model() {
    ModelParams m;
    m.p = 1.5;
    m.eta = 0.1;
    m.T = 5.0;
    m.hazard = ConstantRate{1.0};
    m.claims = ExponentialClaim{1.0};
    return m;
}

}  // namespace

TEST_CASE("parameter validation names the offending field") {
    ModelParams m = reference_model();
    m.eta = 0.0;
    CHECK_THROWS_WITH_AS(m.validate(), "eta must be > 0", std::domain_error);
    m = reference_model();
    m.p = -1.0;
    CHECK_THROWS_WITH_AS(m.validate(), "p must be > 0", std::domain_error);
    m = reference_model();
    m.hazard = Erlang{0, 1.0};
    CHECK_THROWS_AS(m.validate(), std::domain_error);
    m = reference_model();
    m.claims = ExponentialClaim{0.0};
    CHECK_THROWS_AS(m.validate(), std::domain_error);
    CHECK_NOTHROW(reference_model().validate());
}

TEST_CASE("barrier is the ceded-everything certainty level") {
    const ModelParams m = reference_model();
    CHECK(barrier(m, 0.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(barrier(m, 5.0) == 0.0);
    CHECK(barrier(m, 3.0) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK_THROWS_AS(barrier(m, -0.1), std::domain_error);
    CHECK_THROWS_AS(barrier(m, 5.1), std::domain_error);
}

TEST_CASE("domain membership") {
    const ModelParams m = reference_model();
    CHECK(in_domain(m, {0.0, 0.5, 0.0}));
    CHECK(in_domain(m, {2.0, 0.45, 2.0}));
    CHECK_FALSE(in_domain(m, {2.0, 0.46, 0.0}));   // above the barrier
    CHECK_FALSE(in_domain(m, {2.0, -0.01, 0.0}));  // negative surplus
    CHECK_FALSE(in_domain(m, {2.0, 0.1, 2.1}));    // w cannot exceed s
    CHECK_FALSE(in_domain(m, {5.5, 0.0, 0.0}));    // beyond the horizon
}

TEST_CASE("grid layout is triangular in w") {
    const ModelParams m = reference_model();
    const GridSpec g = build_grid(m, 4, 3);
    CHECK(g.ds == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(g.x_max == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(g.dx == doctest::Approx(0.25).epsilon(1e-15));
    // Slice i holds (i+1) w-rows of (n_x+1) nodes.
    CHECK(g.node_count() == 4u * (1 + 2 + 3 + 4 + 5));
    CHECK(g.slice_offset(1) - g.slice_offset(0) == 4u);
    CHECK(g.slice_offset(4) - g.slice_offset(3) == 16u);

    // Every (i, j, k<=i) index is unique and in range.
    std::set<std::size_t> seen;
    for (int i = 0; i <= g.n_s; ++i)
        for (int k = 0; k <= i; ++k)
            for (int j = 0; j <= g.n_x; ++j) {
                const std::size_t idx = g.index(i, j, k);
                CHECK(idx < g.node_count());
                CHECK(seen.insert(idx).second);
            }
    CHECK(seen.size() == g.node_count());

    CHECK_THROWS_AS(build_grid(m, 1, 8), std::domain_error);
}

TEST_CASE("constant policy evaluation") {
    const Policy policy = ConstantPolicy{0.35};
    CHECK(evaluate_policy(policy, {0.0, 0.1, 0.0}) == 0.35);
    CHECK(evaluate_policy(policy, {4.9, 9.0, 1.0}) == 0.35);
}

TEST_CASE("multilinear interpolation reproduces affine fields") {
    const ModelParams m = reference_model();
    const GridSpec g = build_grid(m, 10, 8);
    std::vector<double> field(g.node_count());
    const auto f = [](double s, double x, double w) {
        return 0.4 + 0.31 * s - 0.2 * x + 0.11 * w;
    };
    for (int i = 0; i <= g.n_s; ++i)
        for (int k = 0; k <= i; ++k)
            for (int j = 0; j <= g.n_x; ++j)
                field[g.index(i, j, k)] = f(g.s_at(i), g.x_at(j), g.w_at(k));

    // Interior states with w below the lower slice extent, so no clamp
    // participates; a large eta_p disables the barrier clamp.
    const double big = 100.0;
    for (const State q : {State{1.31, 0.52, 0.9}, State{3.75, 0.11, 2.49},
                          State{2.5, 0.3, 1.2}, State{4.99, 0.74, 0.01}}) {
        CHECK(interpolate_field(g, big, field, q) ==
              doctest::Approx(f(q.s, q.x, q.w)).epsilon(1e-12));
    }
    // Node queries are exact.
    CHECK(interpolate_field(g, big, field, {g.s_at(4), g.x_at(3), g.w_at(2)}) ==
          doctest::Approx(f(g.s_at(4), g.x_at(3), g.w_at(2))).epsilon(1e-14));
}

TEST_CASE("interpolation clamps into the closed domain") {
    const ModelParams m = reference_model();
    const GridSpec g = build_grid(m, 10, 8);
    std::vector<double> field(g.node_count());
    for (int i = 0; i <= g.n_s; ++i)
        for (int k = 0; k <= i; ++k)
            for (int j = 0; j <= g.n_x; ++j)
                field[g.index(i, j, k)] = g.x_at(j);

    const double eta_p = m.eta * m.p;
    // x above the barrier clamps to barrier(s); below zero clamps to 0.
    CHECK(interpolate_field(g, eta_p, field, {0.0, 9.0, 0.0}) ==
          doctest::Approx(eta_p * g.T).epsilon(1e-12));
    CHECK(interpolate_field(g, eta_p, field, {2.5, -3.0, 0.0}) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // w beyond s clamps to s; s beyond T clamps to T.
    CHECK_NOTHROW(interpolate_field(g, eta_p, field, {2.5, 0.2, 99.0}));
    CHECK(interpolate_field(g, eta_p, field, {99.0, 0.0, 0.0}) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("table policies interpolate their retention grid") {
    const ModelParams m = reference_model();
    const GridSpec g = build_grid(m, 4, 4);
    TablePolicy table;
    table.grid = g;
    table.eta_p = m.eta * m.p;
    table.q.assign(g.node_count(), 0.25);
    CHECK(table.barrier_at(0.0) == doctest::Approx(0.75).epsilon(1e-15));
    const Policy policy = table;
    CHECK(evaluate_policy(policy, {0.6, 0.2, 0.3}) ==
          doctest::Approx(0.25).epsilon(1e-14));
    CHECK(evaluate_policy(policy, {5.0, 0.0, 5.0}) ==
          doctest::Approx(0.25).epsilon(1e-14));
}
