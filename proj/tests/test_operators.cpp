#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dominative/operators.hpp"
#include "dominative/reference.hpp"

#include "test_util.hpp"

#include <cmath>

using namespace dominative;

TEST_CASE("lambda_max on closed-form cases") {
    CHECK(lambda_max(SquareMatrix::diagonal(std::vector<double>{1.0, 3.0})) ==
          doctest::Approx(3.0).epsilon(1e-14));

    SquareMatrix two_id = SquareMatrix::identity(2);
    for (double& v : two_id.a) v *= 2.0;
    CHECK(lambda_max(two_id) == doctest::Approx(2.0).epsilon(1e-14));

    // characteristic polynomial lambda^2 - 1 = 0 by hand
    SquareMatrix offdiag(2);
    offdiag.at(0, 1) = 1.0;
    offdiag.at(1, 0) = 1.0;
    CHECK(lambda_max(offdiag) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lambda_max rejects non-finite input") {
    SquareMatrix bad(2);
    bad.at(0, 0) = std::nan("");
    CHECK_THROWS_AS(lambda_max(bad), std::invalid_argument);
}

TEST_CASE("lambda_max agrees with a power-iteration oracle") {
    Rng rng(stream_key(21, 0, 0));
    for (int n : {2, 3, 4, 5}) {
        for (int rep = 0; rep < 25; ++rep) {
            const SquareMatrix H = testutil::random_symmetric(n, rng, 3.0);
            const double byjacobi = lambda_max(H);
            const double bypower = testutil::lambda_max_power_iteration(H);
            CHECK(byjacobi == doctest::Approx(bypower).epsilon(1e-8));
        }
    }
}

TEST_CASE("lambda_max bounds and scaling") {
    Rng rng(stream_key(22, 0, 0));
    for (int rep = 0; rep < 100; ++rep) {
        const SquareMatrix H = testutil::random_symmetric(3, rng, 2.0);
        const double lam = lambda_max(H);
        CHECK(lam >= H.trace() / 3.0 - 1e-12);
        const double c = rng.u01() * 4.0;
        SquareMatrix cH = H;
        for (double& v : cH.a) v *= c;
        CHECK(lambda_max(cH) == doctest::Approx(c * lam).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("dominative operator on closed-form cases") {
    const GameParams gp = make_params(2, 4.0, 0.1);
    SquareMatrix two_id = SquareMatrix::identity(2);
    for (double& v : two_id.a) v *= 2.0;
    CHECK(dominative_operator(two_id, gp) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(dominative_operator(SquareMatrix::diagonal(std::vector<double>{1.0, 3.0}), gp) ==
          doctest::Approx(10.0).epsilon(1e-14));
    CHECK(dominative_operator(SquareMatrix(2), gp) == 0.0);
}

TEST_CASE("dominative is homogeneous and monotone") {
    const GameParams gp = make_params(3, 3.5, 0.1);
    Rng rng(stream_key(23, 0, 0));
    for (int rep = 0; rep < 50; ++rep) {
        const SquareMatrix H = testutil::random_symmetric(3, rng, 2.0);
        const double c = rng.u01() * 3.0;
        SquareMatrix cH = H;
        for (double& v : cH.a) v *= c;
        CHECK(dominative_operator(cH, gp) ==
              doctest::Approx(c * dominative_operator(H, gp)).epsilon(1e-9).scale(1.0));

        // H2 = H + A^T A >= H as quadratic forms
        const SquareMatrix A = testutil::random_symmetric(3, rng, 1.0);
        SquareMatrix H2 = H;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += A.at(k, i) * A.at(k, j);
                H2.at(i, j) += s;
            }
        CHECK(dominative_operator(H, gp) <= dominative_operator(H2, gp) + 1e-9);
    }
}

namespace {

QuadratureConfig fine_quad() {
    QuadratureConfig q;
    q.ball_cells = 101;
    return q;
}

} // namespace

TEST_CASE("mean value expression on |x|^2") {
    const GameParams gp = make_params(2, 4.0, 0.1);
    const Point x{0.0, 0.0};
    auto v = [](std::span<const double> y, double) { return y[0] * y[0] + y[1] * y[1]; };
    const double lhs = mean_value_lhs(v, x, 0.5, gp, fine_quad());
    // ball average eps^2 n/(n+2) and midpoint term eps^2, weighted by beta, alpha
    const double expected = 0.01 * (2.0 + 4.0 - 2.0) / (2.0 + 4.0);
    CHECK(std::abs(lhs - expected) <= 1e-5);
}

TEST_CASE("constants and linear fields are fixed points of the expression") {
    const GameParams gp = make_params(2, 4.0, 0.1);
    const Point x{0.3, -0.2};
    auto cst = [](std::span<const double>, double) { return 7.0; };
    CHECK(mean_value_lhs(cst, x, 0.5, gp, QuadratureConfig{}) ==
          doctest::Approx(7.0).epsilon(1e-13));

    auto lin = [](std::span<const double> y, double) { return 2.0 * y[0] - 0.7 * y[1] + 0.1; };
    CHECK(mean_value_lhs(lin, x, 0.5, gp, QuadratureConfig{}) ==
          doctest::Approx(lin(x, 0.0)).epsilon(1e-12));
}

TEST_CASE("mean value expression is shift equivariant") {
    const GameParams gp = make_params(2, 3.0, 0.15);
    const Point x{0.1, 0.2};
    auto v = [](std::span<const double> y, double t) {
        return std::sin(y[0]) * std::cosh(y[1]) + 0.3 * t;
    };
    auto v_shift = [&](std::span<const double> y, double t) { return v(y, t) + 5.0; };
    const double a = mean_value_lhs(v, x, 0.4, gp, QuadratureConfig{});
    const double b = mean_value_lhs(v_shift, x, 0.4, gp, QuadratureConfig{});
    CHECK(b - a == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("residual vanishes for the quadratic exact solution") {
    const GameParams gp = make_params(2, 4.0, 0.1);
    const ReferenceSolution ref = ReferenceSolution::quadratic_time({0.0, 0.0}, gp);
    const MeanValueReport rep =
        mean_value_residual(ref.as_smooth_field(), Point{0.25, -0.4}, 0.3, gp, fine_quad());
    CHECK(std::abs(rep.residual) <= 1e-5); // quadrature error only
}

TEST_CASE("residual is exactly zero for constants") {
    const GameParams gp = make_params(2, 4.0, 0.1);
    const ReferenceSolution ref = ReferenceSolution::constant(3.25, gp);
    const MeanValueReport rep =
        mean_value_residual(ref.as_smooth_field(), Point{0.2, 0.1}, 0.3, gp, QuadratureConfig{});
    CHECK(std::abs(rep.residual) <= 1e-13);
}

TEST_CASE("Richardson behavior of the cosh residual") {
    std::vector<double> ratios;
    for (double eps : {0.2, 0.1, 0.05}) {
        const GameParams gp = make_params(2, 4.0, eps);
        const ReferenceSolution ref = ReferenceSolution::cosh_exp(gp);
        CHECK(ref.kappa == doctest::Approx(0.25).epsilon(1e-15)); // (p-1)/(2(n+p))
        const MeanValueReport rep =
            mean_value_residual(ref.as_smooth_field(), Point{0.3, -0.2}, 0.25, gp, fine_quad());
        ratios.push_back(std::abs(rep.residual) / (eps * eps));
    }
    // decreasing toward zero, allowing a factor-2 noise band per level
    CHECK(ratios[1] <= 2.0 * ratios[0]);
    CHECK(ratios[2] <= 2.0 * ratios[1]);
    CHECK(ratios[2] < 0.5 * ratios[0]);
    CHECK(ratios[1] < ratios[0]);
}

TEST_CASE("finite differences agree with analytic derivatives") {
    const GameParams gp = make_params(2, 4.0, 0.1);
    const ReferenceSolution ref = ReferenceSolution::cosh_exp(gp);
    SmoothField f = ref.as_smooth_field();
    const Point x{0.4, -0.3};
    const double t = 0.2;
    const double hfd = f.fd_step; // eps/8

    const SquareMatrix ha = f.hessian(x, t);
    const SquareMatrix hf = f.fd_hessian(x, t).symmetrized();
    // third-derivative scale over the stencil for e^{kt} cosh(x1)
    const double scale = std::exp(ref.kappa * t) * std::cosh(std::abs(x[0]) + 2.0 * hfd);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(ha.at(i, j) - hf.at(i, j)) <= 10.0 * hfd * hfd * scale);

    const auto ga = f.gradient(x, t);
    const auto gf = f.fd_gradient(x, t);
    for (int d = 0; d < 2; ++d) CHECK(std::abs(ga[d] - gf[d]) <= 10.0 * hfd * hfd * scale);
    CHECK(std::abs(f.time_derivative(x, t) - f.fd_time_derivative(x, t)) <=
          10.0 * hfd * hfd * scale);
}

TEST_CASE("remark24 residual matches its own scaling") {
    std::vector<double> ratios;
    for (double eps : {0.2, 0.1}) {
        const GameParams gp = make_params(2, 4.0, eps, TimeScaling::remark24);
        const ReferenceSolution ref = ReferenceSolution::cosh_exp(gp);
        CHECK(ref.kappa == doctest::Approx(3.0).epsilon(1e-15)); // p - 1
        const MeanValueReport rep =
            mean_value_residual(ref.as_smooth_field(), Point{0.2, 0.1}, 0.3, gp, fine_quad());
        ratios.push_back(std::abs(rep.residual) / (eps * eps));
    }
    CHECK(ratios[1] < ratios[0]); // o(eps^2)
    CHECK(ratios[1] <= 0.05);
}
