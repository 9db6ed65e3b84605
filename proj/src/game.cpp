#include "dominative/game.hpp"

#include "dominative/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dominative {

namespace {

constexpr std::uint64_t kSaltStep = 0;
constexpr std::uint64_t kSaltStrategy = 1;
constexpr std::uint64_t kSaltDrift = 0x9D5F;

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

void require_unit(std::span<const double> sigma) {
    if (std::abs(norm(sigma) - 1.0) > 1e-12)
        throw std::invalid_argument("game: strategy direction is not a unit vector");
}

} // namespace

Point sample_ball_offset(int dim, double radius, Rng& rng) {
    Point dir(static_cast<size_t>(dim), 0.0);
    double r = 0.0;
    do {
        for (int d = 0; d < dim; d += 2) {
            const auto [g1, g2] = rng.gauss2();
            dir[static_cast<size_t>(d)] = g1;
            if (d + 1 < dim) dir[static_cast<size_t>(d) + 1] = g2;
        }
        r = norm(dir);
    } while (r < 1e-12);
    const double scale = radius * std::pow(rng.u01(), 1.0 / dim) / r;
    for (double& c : dir) c *= scale;
    return dir;
}

StepResult step(std::span<const double> x, double t, std::span<const double> sigma,
                const GameParams& params, Rng& rng) {
    require_unit(sigma);
    const int dim = params.n;
    StepResult res;
    res.t = t - params.time_step();
    res.x.assign(x.begin(), x.end());

    const double coin = rng.u01();
    if (coin < params.beta) {
        res.outcome = MoveKind::random_move;
        const Point off = sample_ball_offset(dim, params.epsilon, rng);
        for (int d = 0; d < dim; ++d) res.x[static_cast<size_t>(d)] += off[static_cast<size_t>(d)];
    } else {
        const bool plus = rng.u01() < 0.5;
        res.outcome = plus ? MoveKind::controlled_plus : MoveKind::controlled_minus;
        const double s = plus ? params.epsilon : -params.epsilon;
        for (int d = 0; d < dim; ++d) res.x[static_cast<size_t>(d)] += s * sigma[d];
    }
    return res;
}

Strategy Strategy::fixed(Point sigma) {
    require_unit(sigma);
    Strategy s;
    s.name = "fixed";
    s.choose = [sigma](const GameTrace&, Rng&) { return sigma; };
    return s;
}

Strategy Strategy::random_direction() {
    Strategy s;
    s.name = "random";
    s.choose = [](const GameTrace& h, Rng& rng) {
        const int dim = static_cast<int>(h.states.back().size());
        Point dir = sample_ball_offset(dim, 1.0, rng);
        const double r = norm(dir);
        for (double& c : dir) c /= r;
        return dir;
    };
    return s;
}

Strategy Strategy::greedy(std::shared_ptr<const ValueGrid> grid) {
    Strategy s;
    s.name = "greedy";
    s.choose = [grid](const GameTrace& h, Rng&) {
        const Point& x = h.states.back();
        const double t_next = h.times.back() - grid->dt;
        const double eps = grid->params.epsilon;
        const int dim = grid->params.n;
        Point probe(static_cast<size_t>(dim), 0.0);
        double best = -std::numeric_limits<double>::infinity();
        int best_idx = 0;
        for (int i = 0; i < grid->directions.count(); ++i) {
            const auto sigma = grid->directions.at(i);
            for (int d = 0; d < dim; ++d) probe[static_cast<size_t>(d)] = x[static_cast<size_t>(d)] + eps * sigma[d];
            const double vp = grid->value_at(probe, t_next);
            for (int d = 0; d < dim; ++d) probe[static_cast<size_t>(d)] = x[static_cast<size_t>(d)] - eps * sigma[d];
            const double vm = grid->value_at(probe, t_next);
            const double mid = 0.5 * (vp + vm);
            if (mid > best) {
                best = mid;
                best_idx = i;
            }
        }
        const auto sigma = grid->directions.at(best_idx);
        return Point(sigma.begin(), sigma.end());
    };
    return s;
}

Strategy greedy_strategy(std::shared_ptr<const ValueGrid> grid) {
    return Strategy::greedy(std::move(grid));
}

GameTrace play(std::span<const double> x0, double t0, const Strategy& strategy,
               const PayoffField& F, const GameParams& params,
               const SpaceTimeDomain& domain, std::uint64_t seed,
               std::uint64_t trace_index) {
    if (!domain.contains(x0) || !(t0 > 0.0) || t0 > domain.T)
        throw std::invalid_argument("play: start state must lie in the open cylinder");

    const BoundaryStrip strip = BoundaryStrip::make(domain, params.epsilon);
    const double dt = params.time_step();
    const std::int64_t tau_bound =
        static_cast<std::int64_t>(std::floor(domain.T / dt)) + 1;

    GameTrace trace;
    trace.states.emplace_back(x0.begin(), x0.end());
    trace.times.push_back(t0);

    std::int64_t k = 0;
    while (!strip.contains(trace.states.back(), trace.times.back())) {
        Rng strategy_rng(stream_key(seed, trace_index, static_cast<std::uint64_t>(k), kSaltStrategy));
        Point sigma = strategy.choose(trace, strategy_rng);
        require_unit(sigma);

        Rng step_rng(stream_key(seed, trace_index, static_cast<std::uint64_t>(k), kSaltStep));
        StepResult next = step(trace.states.back(), trace.times.back(), sigma, params, step_rng);

        trace.directions.push_back(std::move(sigma));
        trace.outcomes.push_back(next.outcome);
        trace.states.push_back(std::move(next.x));
        trace.times.push_back(next.t);
        ++k;
        if (k > tau_bound)
            throw std::logic_error("play: stopping bound tau <= T/dt + 1 violated");
    }
    trace.tau = k;
    trace.payoff = F(trace.states.back(), trace.times.back());
    return trace;
}

ValueEstimate estimate_value(std::span<const double> x0, double t0,
                             const Strategy& strategy, const PayoffField& F,
                             const GameParams& params, const SpaceTimeDomain& domain,
                             std::int64_t num_samples, std::uint64_t seed) {
    if (num_samples < 2)
        throw std::invalid_argument("estimate_value: need at least two samples");

    std::vector<double> payoffs(static_cast<size_t>(num_samples), 0.0);
    std::vector<std::int64_t> taus(static_cast<size_t>(num_samples), 0);
    const Point start(x0.begin(), x0.end());
    parallel_for_chunks(num_samples, [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t i = b; i < e; ++i) {
            const GameTrace trace = play(start, t0, strategy, F, params, domain, seed,
                                         static_cast<std::uint64_t>(i));
            payoffs[static_cast<size_t>(i)] = trace.payoff;
            taus[static_cast<size_t>(i)] = trace.tau;
        }
    });

    ValueEstimate est;
    est.num_samples = num_samples;
    for (std::int64_t tau : taus) est.tau_max = std::max(est.tau_max, tau);
    double sum = 0.0;
    for (double v : payoffs) sum += v;
    est.mean = sum / static_cast<double>(num_samples);
    double sq = 0.0;
    for (double v : payoffs) sq += (v - est.mean) * (v - est.mean);
    const double var = sq / static_cast<double>(num_samples - 1);
    est.std_error = std::sqrt(var / static_cast<double>(num_samples));
    est.confidence_radius = 1.96 * est.std_error;
    return est;
}

DriftReport supermartingale_check(
    const std::function<double(std::span<const double>, double)>& process_fn,
    const Strategy& strategy, std::span<const double> x0, double t0,
    const GameParams& params, const SpaceTimeDomain& domain,
    std::int64_t samples_per_state, std::uint64_t seed, int max_states) {
    if (samples_per_state < 2)
        throw std::invalid_argument("supermartingale_check: need at least two samples");

    // States visited by one play of the strategy, pre-exit, subsampled.
    const GameTrace probe = play(x0, t0, strategy, PayoffField::constant(0.0), params,
                                 domain, seed, /*trace_index=*/0x50B0);
    std::vector<std::pair<Point, double>> tested;
    const std::int64_t visits = probe.tau;
    const std::int64_t stride = std::max<std::int64_t>(1, (visits + max_states - 1) / max_states);
    for (std::int64_t k = 0; k < visits; k += stride)
        tested.emplace_back(probe.states[static_cast<size_t>(k)], probe.times[static_cast<size_t>(k)]);

    DriftReport rep;
    rep.states.resize(tested.size());
    parallel_for_chunks(static_cast<std::int64_t>(tested.size()), [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t s = b; s < e; ++s) {
            const auto& [x, t] = tested[static_cast<size_t>(s)];
            GameTrace here;
            here.states.push_back(x);
            here.times.push_back(t);
            Rng srng(stream_key(seed, kSaltDrift, static_cast<std::uint64_t>(s), kSaltStrategy));
            const Point sigma = strategy.choose(here, srng);

            const double f0 = process_fn(x, t);
            double sum = 0.0, sq = 0.0;
            for (std::int64_t m = 0; m < samples_per_state; ++m) {
                Rng rng(stream_key(seed, kSaltDrift + 1 + static_cast<std::uint64_t>(s),
                                   static_cast<std::uint64_t>(m), kSaltStep));
                const StepResult next = step(x, t, sigma, params, rng);
                const double inc = process_fn(next.x, next.t) - f0;
                sum += inc;
                sq += inc * inc;
            }
            const double mean = sum / static_cast<double>(samples_per_state);
            const double var =
                std::max(0.0, (sq - static_cast<double>(samples_per_state) * mean * mean) /
                                  static_cast<double>(samples_per_state - 1));
            auto& out = rep.states[static_cast<size_t>(s)];
            out.x = x;
            out.t = t;
            out.drift = mean;
            out.std_error = std::sqrt(var / static_cast<double>(samples_per_state));
        }
    });
    for (const auto& st : rep.states) {
        if (st.drift > rep.max_drift) {
            rep.max_drift = st.drift;
            rep.max_drift_std_error = st.std_error;
        }
    }
    return rep;
}

} // namespace dominative
