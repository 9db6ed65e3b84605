#pragma once

#include "dominative/dpp.hpp"
#include "dominative/geometry.hpp"
#include "dominative/harness.hpp"
#include "dominative/params.hpp"
#include "dominative/payoff.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dominative {

// JSON schema (all numbers plain doubles, points as arrays):
// {
//   "n": 2, "p": 4.0, "epsilon": 0.1, "scaling": "standard" | "remark24",
//   "domain": {"shape": "box", "lower": [...], "upper": [...]}
//           | {"shape": "ball", "center": [...], "radius": r},
//   "T": 0.5,
//   "payoff": {"kind": "constant", "value": c}
//           | {"kind": "linear", "a": [...], "b": b}
//           | {"kind": "from_reference", "id": "quadratic_time", "center": [...]}
//           | {"kind": "tabulated", "file": "solved_grid.csv"},
//   "payoff2": {...},                       // compare only
//   "grid": {"h": 0.0125, "ball_cells": 0, "directions": 0},
//   "study": {"epsilons": [...], "h_over_eps": 8, "probes": [[x..., t], ...]},
//   "simulate": {"samples": 10000, "seed": 42, "strategy": "greedy",
//                "sigma": [...], "start": [x..., t]},
//   "barrier": {"z": [...], "delta": 0.2, "R": 2.2, "radii": [...],
//               "samples": 100000, "probes": [[x...], ...]}
// }
struct LabConfig {
    GameParams params;
    SpaceTimeDomain domain;

    std::string payoff_kind = "constant";
    std::string payoff_id;
    PayoffField payoff;
    std::optional<PayoffField> payoff2;

    GridConfig grid;

    ConvergenceConfig study;
    bool has_study = false;

    std::int64_t samples = 10000;
    std::uint64_t seed = 42;
    std::string strategy = "greedy";
    Point sigma;
    std::optional<ProbePoint> start;

    Point barrier_z;
    double barrier_delta = 0.0;
    double barrier_R = 0.0;
    std::vector<double> barrier_radii;
    std::vector<Point> barrier_probes;
    std::int64_t barrier_samples = 100000;

    std::string raw; // file bytes, for the manifest hash
};

LabConfig load_config(const std::string& path);
LabConfig parse_config(const std::string& json_text);

// Grid CSV round-trip used by `solve` output and the tabulated payoff kind.
void save_grid_csv(const ValueGrid& grid, const std::string& csv_path);
ValueGrid load_grid_csv(const std::string& csv_path);

} // namespace dominative
