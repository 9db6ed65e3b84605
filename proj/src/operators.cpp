#include "dominative/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dominative {

double lambda_max(const SquareMatrix& H) {
    if (H.n < 1) throw std::invalid_argument("lambda_max: empty matrix");
    if (!H.finite()) throw std::invalid_argument("lambda_max: non-finite entries");
    SquareMatrix A = H.symmetrized();
    const int n = A.n;
    if (n == 1) return A.at(0, 0);

    double scale = 0.0;
    for (double v : A.a) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0.0;
    const double tol = 1e-12 * scale;

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += A.at(i, j) * A.at(i, j);
        if (std::sqrt(off) <= tol) break;
        for (int pI = 0; pI < n; ++pI) {
            for (int q = pI + 1; q < n; ++q) {
                const double apq = A.at(pI, q);
                if (std::abs(apq) <= tol * 1e-4) continue;
                const double theta = (A.at(q, q) - A.at(pI, pI)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                const double app = A.at(pI, pI), aqq = A.at(q, q);
                A.at(pI, pI) = app - t * apq;
                A.at(q, q) = aqq + t * apq;
                A.at(pI, q) = 0.0;
                A.at(q, pI) = 0.0;
                for (int r = 0; r < n; ++r) {
                    if (r == pI || r == q) continue;
                    const double arp = A.at(r, pI), arq = A.at(r, q);
                    A.at(r, pI) = arp - s * (arq + tau * arp);
                    A.at(pI, r) = A.at(r, pI);
                    A.at(r, q) = arq + s * (arp - tau * arq);
                    A.at(q, r) = A.at(r, q);
                }
            }
        }
    }
    double lam = A.at(0, 0);
    for (int i = 1; i < n; ++i) lam = std::max(lam, A.at(i, i));
    return lam;
}

double dominative_operator(const SquareMatrix& H, const GameParams& params) {
    const SquareMatrix S = H.symmetrized();
    return S.trace() + (params.p - 2.0) * lambda_max(S);
}

namespace {

double ball_average(const SpaceTimeFn& v, std::span<const double> x, double t_eval,
                    const BallRule& rule) {
    const int dim = rule.dim;
    const int K = rule.count();
    std::vector<double> y(dim, 0.0);
    double sum = 0.0;
    for (int k = 0; k < K; ++k) {
        const double* off = rule.offsets.data() + static_cast<size_t>(k) * dim;
        for (int d = 0; d < dim; ++d) y[d] = x[d] + off[d];
        sum += v(y, t_eval);
    }
    return sum / K;
}

double midpoint(const SpaceTimeFn& v, std::span<const double> x, double t_eval,
                std::span<const double> sigma, double eps, std::vector<double>& scratch) {
    const int dim = static_cast<int>(x.size());
    for (int d = 0; d < dim; ++d) scratch[d] = x[d] + eps * sigma[d];
    const double vp = v(scratch, t_eval);
    for (int d = 0; d < dim; ++d) scratch[d] = x[d] - eps * sigma[d];
    const double vm = v(scratch, t_eval);
    return 0.5 * (vp + vm);
}

double best_midpoint(const SpaceTimeFn& v, std::span<const double> x, double t_eval,
                     const GameParams& params, const QuadratureConfig& quad) {
    const int dim = params.n;
    const DirectionSet dirs = DirectionSet::make(dim, quad.direction_count(dim));
    std::vector<double> scratch(dim, 0.0);

    double best = -std::numeric_limits<double>::infinity();
    int best_idx = 0;
    for (int i = 0; i < dirs.count(); ++i) {
        const double m = midpoint(v, x, t_eval, dirs.at(i), params.epsilon, scratch);
        if (m > best) { // strict: ties keep the lowest index
            best = m;
            best_idx = i;
        }
    }

    if (dim == 2 && quad.refine_sup && quad.refine_steps > 0) {
        // Polish the angle inside the bracket around the discrete argmax.
        const double th0 = std::numbers::pi * best_idx / dirs.count();
        const double half = std::numbers::pi / dirs.count();
        auto eval_angle = [&](double th) {
            const double s[2] = {std::cos(th), std::sin(th)};
            return midpoint(v, x, t_eval, s, params.epsilon, scratch);
        };
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = th0 - half, b = th0 + half;
        double c = b - inv_phi * (b - a);
        double d = a + inv_phi * (b - a);
        double fc = eval_angle(c), fd = eval_angle(d);
        for (int it = 0; it < quad.refine_steps; ++it) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = eval_angle(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = eval_angle(d);
            }
        }
        best = std::max({best, fc, fd});
    }
    return best;
}

} // namespace

double mean_value_lhs(const SpaceTimeFn& v, std::span<const double> x, double t,
                      const GameParams& params, const QuadratureConfig& quad) {
    const double t_eval = t - params.time_step();
    const BallRule rule = BallRule::make(params.n, params.epsilon, quad.ball_cells);
    const double avg = ball_average(v, x, t_eval, rule);
    const double sup = best_midpoint(v, x, t_eval, params, quad);
    return params.beta * avg + params.alpha * sup;
}

MeanValueReport mean_value_residual(const SmoothField& v, std::span<const double> x,
                                    double t, const GameParams& params,
                                    const QuadratureConfig& quad) {
    MeanValueReport rep;
    rep.epsilon = params.epsilon;
    rep.lhs = mean_value_lhs([&v](std::span<const double> y, double s) { return v(y, s); },
                             x, t, params, quad);
    const double vt = v.time_derivative(x, t);
    const double dp = dominative_operator(v.hessian(x, t), params);
    const double np = params.n + params.p;
    // Time-derivative weight matching the scaling's equation.
    const double ct = params.scaling == TimeScaling::standard ? 2.0 * np : 1.0;
    rep.predicted = v(x, t) + params.epsilon * params.epsilon / (2.0 * np) * (dp - ct * vt);
    rep.residual = rep.lhs - rep.predicted;
    return rep;
}

} // namespace dominative
