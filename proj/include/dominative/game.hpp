#pragma once

#include "dominative/dpp.hpp"
#include "dominative/geometry.hpp"
#include "dominative/params.hpp"
#include "dominative/payoff.hpp"
#include "dominative/rng.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace dominative {

enum class MoveKind { random_move, controlled_plus, controlled_minus };

// One realized play.  Times march down by the scaling's step; the trace ends
// at the first state inside the eps-strip, where the payoff is collected.
struct GameTrace {
    std::vector<Point> states;        // (x_0, ..., x_tau)
    std::vector<double> times;        // (t_0, ..., t_tau)
    std::vector<MoveKind> outcomes;   // per step
    std::vector<Point> directions;    // strategy's choice per step
    std::int64_t tau = 0;
    double payoff = 0.0;

    const Point& exit_point() const { return states.back(); }
    double exit_time() const { return times.back(); }
};

// A rule assigning a unit direction to each game history.  The full history
// is passed to stay faithful to the general definition; the built-in rules
// only look at the current state.
struct Strategy {
    std::string name;
    std::function<Point(const GameTrace& history, Rng& rng)> choose;

    static Strategy fixed(Point sigma);
    static Strategy random_direction();
    static Strategy greedy(std::shared_ptr<const ValueGrid> grid);
};

struct StepResult {
    Point x;
    double t = 0.0;
    MoveKind outcome = MoveKind::random_move;
};

struct ValueEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t num_samples = 0;
    double confidence_radius = 0.0; // 1.96 * std_error
    std::int64_t tau_max = 0;       // worst stopping index over the sample
};

struct StateDrift {
    Point x;
    double t = 0.0;
    double drift = 0.0;     // estimated E[f(next) - f(current)]
    double std_error = 0.0;
};

struct DriftReport {
    std::vector<StateDrift> states;
    double max_drift = -std::numeric_limits<double>::infinity();
    double max_drift_std_error = 0.0;
};

// One transition of the kernel: with probability beta the token jumps to a
// uniform point of B_eps(x), with probability alpha/2 each to x +- eps*sigma.
StepResult step(std::span<const double> x, double t, std::span<const double> sigma,
                const GameParams& params, Rng& rng);

// Uniform sample of B_radius(0): normalized Gaussian direction times
// radius * U^(1/n).
Point sample_ball_offset(int dim, double radius, Rng& rng);

GameTrace play(std::span<const double> x0, double t0, const Strategy& strategy,
               const PayoffField& F, const GameParams& params,
               const SpaceTimeDomain& domain, std::uint64_t seed,
               std::uint64_t trace_index = 0);

ValueEstimate estimate_value(std::span<const double> x0, double t0,
                             const Strategy& strategy, const PayoffField& F,
                             const GameParams& params, const SpaceTimeDomain& domain,
                             std::int64_t num_samples, std::uint64_t seed);

Strategy greedy_strategy(std::shared_ptr<const ValueGrid> grid);

// One-step drift of process_fn along states visited by the strategy,
// estimated by resampling the kernel at each probed state.
DriftReport supermartingale_check(
    const std::function<double(std::span<const double>, double)>& process_fn,
    const Strategy& strategy, std::span<const double> x0, double t0,
    const GameParams& params, const SpaceTimeDomain& domain,
    std::int64_t samples_per_state, std::uint64_t seed, int max_states = 24);

} // namespace dominative
