#pragma once

#include "dominative/dpp.hpp"
#include "dominative/game.hpp"
#include "dominative/geometry.hpp"
#include "dominative/params.hpp"
#include "dominative/reference.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dominative {

struct ProbePoint {
    Point x;
    double t = 0.0;
};

struct ConvergenceLevel {
    double epsilon = 0.0;
    double h = 0.0;
    double sup_error = 0.0;
    double seconds = 0.0;
};

struct ConvergenceStudy {
    std::string reference_id;
    std::vector<ProbePoint> probes;
    std::vector<ConvergenceLevel> levels;
    bool exact = false;               // all errors at machine floor
    std::optional<double> rate;       // log-log least-squares slope
};

struct ConvergenceConfig {
    std::string reference_id = "quadratic_time";
    std::vector<double> epsilons = {0.2, 0.1, 0.05};
    double h_over_eps = 8.0;
    std::vector<ProbePoint> probes;   // empty = default probe set
};

// Solves the marching scheme with boundary data taken from a validated
// reference solution over a decreasing sequence of eps, and records the
// sup over probes of |value_at - reference|.
ConvergenceStudy run_convergence(const SpaceTimeDomain& domain, int n, double p,
                                 TimeScaling scaling, const ConvergenceConfig& config);

struct GameVsDppRow {
    ProbePoint probe;
    double grid_value = 0.0;
    double mc_mean = 0.0;
    double std_error = 0.0;
    double confidence_radius = 0.0;
    double abs_diff = 0.0;
    double standardized = 0.0; // abs_diff / std_error
};

struct GameVsDppReport {
    std::vector<GameVsDppRow> greedy;
    std::vector<GameVsDppRow> alternative; // one-sided: mean <= grid value + CI
    std::string alternative_name;
    double max_standardized = 0.0;         // over the greedy rows
    int direction_count = 0;               // greedy's direction set size
    double direction_spacing = 0.0;        // its angular resolution proxy
    std::int64_t tau_max = 0;              // worst stopping index seen
    std::int64_t tau_bound = 0;            // floor(T/dt) + 1
};

struct GameVsDppConfig {
    std::string reference_id = "quadratic_time";
    GridConfig grid;
    std::vector<ProbePoint> probes;
    std::int64_t samples = 10000;
    std::uint64_t seed = 1;
    std::string alternative = "fixed"; // or "random"
};

// Lemma-style consistency run: greedy Monte Carlo estimates against the
// solved grid at each probe, plus a non-greedy strategy for the one-sided
// sup property.
GameVsDppReport run_game_vs_dpp(const SpaceTimeDomain& domain, const GameParams& params,
                                const GameVsDppConfig& config);

std::vector<ProbePoint> default_probes(const SpaceTimeDomain& domain, double max_eps);

} // namespace dominative
