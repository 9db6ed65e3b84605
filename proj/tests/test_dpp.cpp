#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dominative/dpp.hpp"
#include "dominative/reference.hpp"
#include "dominative/rng.hpp"

#include <cmath>

using namespace dominative;

namespace {

// Worst-case nodal error budget for the marching scheme against a smooth
// exact solution: the per-level interpolation and quadrature bias is below
// one h^2 for the configurations used here, accumulated over the levels.
double solver_error_budget(const ValueGrid& g) {
    return static_cast<double>(g.top_level) * g.h * g.h;
}

double max_nodal_error(const ValueGrid& g, const ReferenceSolution& ref) {
    std::vector<double> x(static_cast<size_t>(g.params.n));
    double worst = 0.0;
    for (int j = 1; j <= g.top_level; ++j) {
        const auto slice = g.level(j);
        const double tj = g.level_time(j);
        for (std::int64_t f = 0; f < g.nodes_per_level; ++f) {
            if (!g.interior[static_cast<size_t>(f)]) continue;
            g.node_coords(f, x);
            worst = std::max(worst, std::abs(slice[static_cast<size_t>(f)] - ref.value(x, tj)));
        }
    }
    return worst;
}

} // namespace

TEST_CASE("constant boundary data is a fixed point") {
    const GameParams gp = make_params(2, 4.0, 0.2);
    const auto dom = SpaceTimeDomain::ball({0.0, 0.0}, 1.0, 0.15);
    const ValueGrid g = solve_dpp(dom, PayoffField::constant(5.0), gp);
    for (double v : g.values) CHECK(v == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("one-step value in one dimension") {
    // From t in (0, 0.25] a single step lands below time zero, so the value
    // at x = 0.5 is beta * (average of y over (0,1)) + alpha * (F(0)+F(1))/2.
    const GameParams gp = make_params(1, 3.0, 0.5);
    const auto dom = SpaceTimeDomain::box({0.0}, {1.0}, 0.26);
    const PayoffField F = PayoffField::linear({1.0}, 0.0);
    GridConfig cfg;
    cfg.h = 0.125;
    const ValueGrid g = solve_dpp(dom, F, gp, cfg);
    CHECK(g.value_at(Point{0.5}, 0.2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(g.value_at(Point{0.5}, 0.25) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("quadratic-plus-linear-time data is reproduced to O(h^2)") {
    const GameParams gp = make_params(2, 4.0, 0.2);
    const auto dom = SpaceTimeDomain::ball({0.0, 0.0}, 1.0, 0.13);
    const ReferenceSolution ref = ReferenceSolution::quadratic_time({0.0, 0.0}, gp);
    GridConfig cfg;
    cfg.h = gp.epsilon / 4.0;
    const ValueGrid g = solve_dpp(dom, ref.as_payoff(), gp, cfg);
    CHECK(g.top_level == 4); // ceil(0.13 / 0.04)
    CHECK(max_nodal_error(g, ref) <= solver_error_budget(g));
}

TEST_CASE("value_at reproduces nodes and linear data exactly") {
    const GameParams gp = make_params(2, 4.0, 0.2);
    const auto dom = SpaceTimeDomain::box({-1.0, -1.0}, {1.0, 1.0}, 0.1);
    const PayoffField F = PayoffField::linear({2.0, -1.0}, 0.3);
    const ValueGrid g = solve_dpp(dom, F, gp);

    // a node of the grid
    std::vector<double> x(2);
    const std::int64_t probe = g.nodes_per_level / 2;
    g.node_coords(probe, x);
    CHECK(g.value_at(x, g.level_time(1)) == g.level(1)[static_cast<size_t>(probe)]);

    // halfway between nodes on linear data, interpolation is exact
    const Point mid{x[0] + g.h / 2.0, x[1] + g.h / 2.0};
    if (dom.contains(mid)) {
        const double direct = F(mid, 0.0);
        CHECK(g.value_at(mid, 0.0) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("value_at rejects out-of-coverage queries") {
    const GameParams gp = make_params(2, 4.0, 0.2);
    const auto dom = SpaceTimeDomain::ball({0.0, 0.0}, 1.0, 0.1);
    const ValueGrid g = solve_dpp(dom, PayoffField::constant(1.0), gp);

    CHECK_THROWS_AS(g.value_at(Point{0.0, 0.0}, dom.T + 0.1), std::out_of_range);
    CHECK_THROWS_AS(g.value_at(Point{0.0, 0.0}, -g.dt * 1.6), std::out_of_range);
    CHECK_THROWS_AS(g.value_at(Point{5.0, 0.0}, 0.05), std::out_of_range);
    CHECK_NOTHROW(g.value_at(Point{0.0, 0.0}, 0.4 * g.dt)); // snaps to a level
}

TEST_CASE("self-residual of a solved grid is zero and perturbations are detected") {
    const GameParams gp = make_params(2, 4.0, 0.2);
    const auto dom = SpaceTimeDomain::ball({0.0, 0.0}, 1.0, 0.13);
    const ReferenceSolution ref = ReferenceSolution::quadratic_time({0.1, 0.0}, gp);
    ValueGrid g = solve_dpp(dom, ref.as_payoff(), gp);

    const DppResidualReport clean = dpp_residual(g);
    CHECK(clean.max_abs_residual <= 1e-10);

    // constant data: residual identically zero
    const ValueGrid gc = solve_dpp(dom, PayoffField::constant(2.0), gp);
    CHECK(dpp_residual(gc).max_abs_residual <= 1e-12);

    // perturb one interior node below the top level
    std::int64_t target = -1;
    for (std::int64_t f = 0; f < g.nodes_per_level; ++f)
        if (g.interior[static_cast<size_t>(f)]) { target = f; break; }
    REQUIRE(target >= 0);
    const int level = 1;
    g.level_mut(level)[static_cast<size_t>(target)] += 0.1;
    const DppResidualReport dirty = dpp_residual(g);
    CHECK(dirty.max_abs_residual >= 0.1 - 1e-12);
    CHECK(dirty.argmax_level == level);
    CHECK(dirty.argmax_node == target);
}

TEST_CASE("comparison principle and its input validation") {
    const GameParams gp = make_params(2, 4.0, 0.25);
    const auto dom = SpaceTimeDomain::box({0.0, 0.0}, {1.0, 1.0}, 0.12);

    SUBCASE("F1 = F2 + 1 gives a clean pass") {
        const PayoffField F2 = PayoffField::linear({0.5, 0.2}, 0.0);
        const PayoffField F1 = PayoffField::linear({0.5, 0.2}, 1.0);
        const ComparisonReport rep = check_comparison(dom, F1, F2, gp);
        CHECK(rep.ok);
        CHECK(rep.max_violation == 0.0);
    }

    SUBCASE("equal payoffs give equality") {
        const PayoffField F = PayoffField::linear({1.0, 0.0}, 0.0);
        const ComparisonReport rep = check_comparison(dom, F, F, gp);
        CHECK(rep.ok);
        CHECK(rep.max_violation <= 1e-15);
    }

    SUBCASE("unordered payoffs are an input error") {
        const auto ball = SpaceTimeDomain::ball({0.0, 0.0}, 1.0, 0.12);
        const PayoffField F1 = PayoffField::custom(
            "sq", [](std::span<const double> x, double) { return x[0] * x[0] + x[1] * x[1]; });
        const PayoffField F2 = PayoffField::custom(
            "sq-minus-x1", [](std::span<const double> x, double) {
                return x[0] * x[0] + x[1] * x[1] - x[0];
            });
        CHECK_THROWS_AS(check_comparison(ball, F1, F2, gp), std::invalid_argument);
    }
}

TEST_CASE("shift equivariance of the solved field") {
    const GameParams gp = make_params(2, 3.5, 0.25);
    const auto dom = SpaceTimeDomain::box({0.0, 0.0}, {1.0, 1.0}, 0.12);
    const PayoffField F = PayoffField::custom("mix", [](std::span<const double> x, double t) {
        return std::sin(3.0 * x[0]) + 0.5 * x[1] + 0.2 * t;
    });
    const PayoffField Fc = PayoffField::custom("mix+c", [](std::span<const double> x, double t) {
        return std::sin(3.0 * x[0]) + 0.5 * x[1] + 0.2 * t + 4.0;
    });
    const ValueGrid a = solve_dpp(dom, F, gp);
    const ValueGrid b = solve_dpp(dom, Fc, gp);
    for (size_t i = 0; i < a.values.size(); ++i)
        CHECK(b.values[i] - a.values[i] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("discrete maximum principle on random payoffs") {
    const GameParams gp = make_params(2, 5.0, 0.25);
    const auto dom = SpaceTimeDomain::box({0.0, 0.0}, {1.0, 1.0}, 0.12);
    Rng rng(stream_key(31, 0, 0));
    for (int rep = 0; rep < 5; ++rep) {
        const double a0 = 2.0 * rng.u01() - 1.0;
        const double a1 = 2.0 * rng.u01() - 1.0;
        const double c = 2.0 * rng.u01() - 1.0;
        const double q = rng.u01();
        const PayoffField F = PayoffField::custom("rand", [=](std::span<const double> x, double t) {
            return a0 * x[0] + a1 * std::cos(4.0 * x[1]) + q * (x[0] - 0.5) * (x[0] - 0.5) +
                   c * t;
        });
        const ValueGrid g = solve_dpp(dom, F, gp);

        // range of F over the nodes where boundary data is consumed
        double lo = 1e300, hi = -1e300;
        std::vector<double> x(2);
        for (int j = -1; j <= g.top_level; ++j) {
            for (std::int64_t f = 0; f < g.nodes_per_level; ++f) {
                if (j > 0 && g.interior[static_cast<size_t>(f)]) continue;
                g.node_coords(f, x);
                const double v = F(x, g.level_time(j));
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        for (double v : g.values) {
            CHECK(v >= lo - 1e-10);
            CHECK(v <= hi + 1e-10);
        }
    }
}

TEST_CASE("monotonicity in the boundary data") {
    const GameParams gp = make_params(2, 4.0, 0.25);
    const auto dom = SpaceTimeDomain::box({0.0, 0.0}, {1.0, 1.0}, 0.12);
    Rng rng(stream_key(32, 0, 0));
    for (int rep = 0; rep < 5; ++rep) {
        const double a0 = 2.0 * rng.u01() - 1.0;
        const double gap = 0.2 + rng.u01();
        const double w = rng.u01();
        const PayoffField F1 = PayoffField::custom("hi", [=](std::span<const double> x, double) {
            return a0 * x[0] + w * std::sin(3.0 * x[1]);
        });
        const PayoffField F2 = PayoffField::custom("lo", [=](std::span<const double> x, double) {
            return a0 * x[0] + w * std::sin(3.0 * x[1]) - gap * (1.0 + 0.5 * std::cos(x[0]));
        });
        const ComparisonReport rep2 = check_comparison(dom, F1, F2, gp);
        CHECK(rep2.ok);
    }
}

TEST_CASE("grid rejects too-coarse spacing and tiny horizons") {
    const GameParams gp = make_params(2, 4.0, 0.2);
    const auto dom = SpaceTimeDomain::ball({0.0, 0.0}, 1.0, 0.5);
    GridConfig cfg;
    cfg.h = 0.06; // > eps/4
    CHECK_THROWS_AS(solve_dpp(dom, PayoffField::constant(0.0), gp, cfg), std::invalid_argument);

    const auto short_dom = SpaceTimeDomain::ball({0.0, 0.0}, 1.0, 0.03); // T <= eps^2
    CHECK_THROWS_AS(solve_dpp(short_dom, PayoffField::constant(0.0), gp),
                    std::invalid_argument);
}

TEST_CASE("remark24 scaling reproduces its exact solutions") {
    const GameParams gp = make_params(2, 4.0, 0.2, TimeScaling::remark24);
    const auto dom = SpaceTimeDomain::ball({0.0, 0.0}, 1.0, 0.05);
    // time step eps^2 / 12, so this horizon still has 15 levels
    const ReferenceSolution ref = ReferenceSolution::quadratic_time({0.0, 0.0}, gp);
    CHECK(ref.time_slope == doctest::Approx(8.0).epsilon(1e-15)); // 2(n+p-2)
    const ValueGrid g = solve_dpp(dom, ref.as_payoff(), gp);
    CHECK(max_nodal_error(g, ref) <= solver_error_budget(g));
}

TEST_CASE("remark24 cosh errors shrink with eps") {
    const auto dom = SpaceTimeDomain::ball({0.0, 0.0}, 1.0, 0.05);
    // Probe halfway between the coarse run's levels; the fine run's ladder
    // nests into the coarse one, so its snapping error vanishes there.
    const double t_probe = 12.5 * make_params(2, 4.0, 0.2, TimeScaling::remark24).time_step();
    std::vector<double> errs;
    for (double eps : {0.2, 0.1}) {
        const GameParams gp = make_params(2, 4.0, eps, TimeScaling::remark24);
        const ReferenceSolution ref = ReferenceSolution::cosh_exp(gp);
        const ValueGrid g = solve_dpp(dom, ref.as_payoff(), gp);
        double worst = 0.0;
        for (const auto& pb : {std::pair<Point, double>{{0.0, 0.0}, t_probe},
                               {{0.25, -0.1}, t_probe}})
            worst = std::max(worst, std::abs(g.value_at(pb.first, pb.second) -
                                             ref.value(pb.first, pb.second)));
        errs.push_back(worst);
    }
    CHECK(errs[1] <= errs[0] * 1.1);
}

TEST_CASE("three-dimensional solve sanity") {
    const GameParams gp = make_params(3, 4.0, 0.3);
    const auto dom = SpaceTimeDomain::box({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, 0.1);
    const ValueGrid g = solve_dpp(dom, PayoffField::constant(3.0), gp);
    for (double v : g.values) CHECK(v == doctest::Approx(3.0).epsilon(1e-12));

    // linear data is preserved exactly: symmetric lattice, exact interpolation
    const PayoffField lin = PayoffField::linear({1.0, 2.0, -1.0}, 0.0);
    const ValueGrid gl = solve_dpp(dom, lin, gp);
    CHECK(gl.value_at(Point{0.5, 0.5, 0.5}, 0.09) ==
          doctest::Approx(lin(Point{0.5, 0.5, 0.5}, 0.0)).epsilon(1e-12));
}
