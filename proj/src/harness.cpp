#include "dominative/harness.hpp"

#include "dominative/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace dominative {

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void validate_probe(const SpaceTimeDomain& domain, const ProbePoint& pb, double max_eps) {
    if (!domain.contains(pb.x) || !(pb.t > 0.0) || pb.t > domain.T)
        throw std::invalid_argument("probe outside the open cylinder");
    const double lateral = domain.boundary_distance(pb.x).dist;
    if (!(lateral > max_eps) || !(pb.t > max_eps))
        throw std::invalid_argument(
            "probe closer than max(epsilons) to the parabolic boundary");
}

} // namespace

std::vector<ProbePoint> default_probes(const SpaceTimeDomain& domain, double max_eps) {
    Point lo, hi;
    domain.bounding_box(lo, hi);
    const int dim = domain.dim();
    Point center(static_cast<size_t>(dim), 0.0);
    double half = std::numeric_limits<double>::infinity();
    for (int d = 0; d < dim; ++d) {
        center[static_cast<size_t>(d)] = 0.5 * (lo[d] + hi[d]);
        half = std::min(half, 0.5 * (hi[d] - lo[d]));
    }
    // Generic times: no probe sits on a level of any reasonable step size.
    const double T = domain.T;
    const std::vector<double> time_fracs = {0.273, 0.523, 0.781, 0.986};
    const std::vector<double> radius_fracs = {0.0, 0.35, 0.55};

    std::vector<ProbePoint> probes;
    size_t ti = 0;
    for (double rf : radius_fracs) {
        for (int axis = 0; axis < std::min(dim, 2); ++axis) {
            Point x = center;
            x[static_cast<size_t>(axis)] += (axis % 2 == 0 ? 1.0 : -1.0) * rf * half;
            const double t = std::max(time_fracs[ti % time_fracs.size()] * T,
                                      std::nextafter(max_eps, T));
            ++ti;
            ProbePoint pb{std::move(x), t};
            if (domain.contains(pb.x) && domain.boundary_distance(pb.x).dist > max_eps &&
                pb.t > max_eps && pb.t <= T)
                probes.push_back(std::move(pb));
            if (rf == 0.0) break; // center point once per time
        }
    }
    if (probes.empty()) throw std::invalid_argument("no valid default probes; domain too small");
    return probes;
}

ConvergenceStudy run_convergence(const SpaceTimeDomain& domain, int n, double p,
                                 TimeScaling scaling, const ConvergenceConfig& config) {
    if (config.epsilons.size() < 2)
        throw std::invalid_argument("run_convergence: need at least two epsilon levels");
    for (size_t i = 1; i < config.epsilons.size(); ++i)
        if (!(config.epsilons[i] < config.epsilons[i - 1]))
            throw std::invalid_argument("run_convergence: epsilons must strictly decrease");
    const double max_eps = config.epsilons.front();

    ConvergenceStudy study;
    study.reference_id = config.reference_id;
    study.probes = config.probes.empty() ? default_probes(domain, max_eps) : config.probes;
    for (const auto& pb : study.probes) validate_probe(domain, pb, max_eps);

    for (double eps : config.epsilons) {
        const auto t0 = std::chrono::steady_clock::now();
        const GameParams params = make_params(n, p, eps, scaling);
        const ReferenceSolution ref = ReferenceSolution::by_id(config.reference_id, params);

        // The reference must actually solve the equation before it is used
        // as an oracle.
        for (const auto& pb : study.probes)
            if (std::abs(pde_residual(ref, pb.x, pb.t, params)) > 1e-10)
                throw std::invalid_argument("run_convergence: reference fails the residual check");

        GridConfig gc;
        gc.h = eps / config.h_over_eps;
        const ValueGrid grid = solve_dpp(domain, ref.as_payoff(), params, gc);

        double sup = 0.0;
        for (const auto& pb : study.probes)
            sup = std::max(sup, std::abs(grid.value_at(pb.x, pb.t) - ref.value(pb.x, pb.t)));

        study.levels.push_back({eps, gc.h, sup, seconds_since(t0)});
    }

    study.exact = std::all_of(study.levels.begin(), study.levels.end(),
                              [](const ConvergenceLevel& l) { return l.sup_error <= 1e-12; });
    if (!study.exact && study.levels.size() >= 3) {
        // Least squares slope of log(error) against log(eps).
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const auto m = static_cast<double>(study.levels.size());
        for (const auto& l : study.levels) {
            const double lx = std::log(l.epsilon);
            const double ly = std::log(std::max(l.sup_error, 1e-300));
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        study.rate = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }
    return study;
}

GameVsDppReport run_game_vs_dpp(const SpaceTimeDomain& domain, const GameParams& params,
                                const GameVsDppConfig& config) {
    if (config.samples < 100)
        throw std::invalid_argument("run_game_vs_dpp: need at least 100 samples");

    const ReferenceSolution ref = ReferenceSolution::by_id(config.reference_id, params);
    auto grid = std::make_shared<const ValueGrid>(
        solve_dpp(domain, ref.as_payoff(), params, config.grid));

    GameVsDppReport rep;
    rep.direction_count = grid->directions.count();
    rep.direction_spacing =
        params.n == 1 ? 0.0 : std::numbers::pi / std::max(1, rep.direction_count);
    rep.tau_bound = static_cast<std::int64_t>(std::floor(domain.T / grid->dt)) + 1;

    const std::vector<ProbePoint> probes =
        config.probes.empty() ? default_probes(domain, params.epsilon) : config.probes;

    const Strategy greedy = greedy_strategy(grid);
    Strategy alt;
    if (config.alternative == "random") {
        alt = Strategy::random_direction();
    } else {
        Point e1(static_cast<size_t>(params.n), 0.0);
        e1[0] = 1.0;
        alt = Strategy::fixed(std::move(e1));
    }
    rep.alternative_name = alt.name;

    const PayoffField F = ref.as_payoff();
    for (size_t i = 0; i < probes.size(); ++i) {
        const auto& pb = probes[i];
        for (const Strategy* strat : {&greedy, static_cast<const Strategy*>(&alt)}) {
            const ValueEstimate est =
                estimate_value(pb.x, pb.t, *strat, F, params, domain, config.samples,
                               config.seed + 1000 * static_cast<std::uint64_t>(i) +
                                   (strat == &alt ? 500 : 0));
            GameVsDppRow row;
            row.probe = pb;
            row.grid_value = grid->value_at(pb.x, pb.t);
            row.mc_mean = est.mean;
            row.std_error = est.std_error;
            row.confidence_radius = est.confidence_radius;
            row.abs_diff = std::abs(est.mean - row.grid_value);
            row.standardized = est.std_error > 0.0 ? row.abs_diff / est.std_error : 0.0;
            rep.tau_max = std::max(rep.tau_max, est.tau_max);
            if (strat == &greedy) {
                rep.greedy.push_back(row);
                rep.max_standardized = std::max(rep.max_standardized, row.standardized);
            } else {
                rep.alternative.push_back(row);
            }
        }
    }
    return rep;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
    nlohmann::json j;
    j["config_hash"] = manifest.config_hash;
    j["seed"] = manifest.seed;
    j["version"] = manifest.version;
    j["outputs"] = manifest.outputs;
    nlohmann::json stages = nlohmann::json::object();
    for (const auto& [k, v] : manifest.stage_seconds) stages[k] = v;
    j["stage_seconds"] = stages;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open manifest path: " + path);
    out << j.dump(2) << '\n';
}

} // namespace dominative
