#include "dominative/cli.hpp"

#include "dominative/config.hpp"
#include "dominative/harness.hpp"
#include "dominative/io.hpp"
#include "dominative/operators.hpp"
#include "dominative/reference.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

namespace dominative {

namespace {

using nlohmann::json;

class Stopwatch {
public:
    Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - t0_).count();
        t0_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point t0_;
};

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << j.dump(2) << '\n';
}

void emit_manifest(const std::string& out_prefix, const LabConfig& cfg,
                   std::vector<std::string> outputs,
                   std::vector<std::pair<std::string, double>> stages) {
    RunManifest m;
    m.config_hash = content_hash(cfg.raw);
    m.seed = cfg.seed;
    m.version = kVersion;
    m.outputs = std::move(outputs);
    m.stage_seconds = std::move(stages);
    write_manifest(out_prefix + ".manifest.json", m);
}

int run_solve(const LabConfig& cfg, const std::string& out, bool with_residual) {
    Stopwatch sw;
    const ValueGrid grid = solve_dpp(cfg.domain, cfg.payoff, cfg.params, cfg.grid);
    const double solve_s = sw.lap();

    json residual_summary = json::object();
    double residual_s = 0.0;
    if (with_residual) {
        const DppResidualReport rep = dpp_residual(grid);
        residual_s = sw.lap();
        residual_summary = {{"max_abs_residual", rep.max_abs_residual},
                            {"argmax_level", rep.argmax_level},
                            {"argmax_node", rep.argmax_node}};
    }

    save_grid_csv(grid, out + ".csv");
    const double io_s = sw.lap();

    json meta;
    meta["params"] = {{"n", cfg.params.n},
                      {"p", cfg.params.p},
                      {"epsilon", cfg.params.epsilon},
                      {"alpha", cfg.params.alpha},
                      {"beta", cfg.params.beta},
                      {"scaling", cfg.params.scaling == TimeScaling::standard ? "standard"
                                                                              : "remark24"}};
    meta["grid"] = {{"h", grid.h},
                    {"ball_cells", grid.config.ball_cells},
                    {"directions", grid.config.directions},
                    {"nodes_per_level", grid.nodes_per_level},
                    {"levels", grid.levels}};
    meta["residual"] = residual_summary;
    write_json(out + ".summary.json", meta);
    emit_manifest(out, cfg, {out + ".csv", out + ".csv.meta.json", out + ".summary.json"},
                  {{"solve", solve_s}, {"residual", residual_s}, {"io", io_s}});
    std::cout << "solved " << grid.nodes_per_level << " nodes x " << grid.levels
              << " levels -> " << out << ".csv\n";
    return 0;
}

int run_simulate(const LabConfig& cfg, const std::string& out) {
    Stopwatch sw;
    ProbePoint start;
    if (cfg.start) {
        start = *cfg.start;
    } else {
        start.x = Point(static_cast<size_t>(cfg.params.n), 0.0);
        Point lo, hi;
        cfg.domain.bounding_box(lo, hi);
        for (int d = 0; d < cfg.params.n; ++d)
            start.x[static_cast<size_t>(d)] = 0.5 * (lo[d] + hi[d]);
        start.t = cfg.domain.T / 2.0;
    }

    Strategy strategy;
    json strategy_meta;
    if (cfg.strategy == "greedy") {
        auto grid = std::make_shared<const ValueGrid>(
            solve_dpp(cfg.domain, cfg.payoff, cfg.params, cfg.grid));
        strategy = greedy_strategy(grid);
        strategy_meta = {{"name", "greedy"},
                         {"direction_count", grid->directions.count()},
                         {"direction_spacing",
                          cfg.params.n == 1 ? 0.0
                                            : std::numbers::pi / grid->directions.count()}};
    } else if (cfg.strategy == "random") {
        strategy = Strategy::random_direction();
        strategy_meta = {{"name", "random"}};
    } else if (cfg.strategy == "fixed") {
        Point sigma = cfg.sigma;
        if (sigma.empty()) {
            sigma.assign(static_cast<size_t>(cfg.params.n), 0.0);
            sigma[0] = 1.0;
        }
        strategy = Strategy::fixed(std::move(sigma));
        strategy_meta = {{"name", "fixed"}, {"sigma", cfg.sigma}};
    } else {
        throw std::invalid_argument("simulate: strategy must be greedy, random or fixed");
    }
    const double setup_s = sw.lap();

    CsvWriter csv(out + ".csv");
    {
        std::vector<std::string> header = {"sample", "tau"};
        for (int d = 0; d < cfg.params.n; ++d) header.push_back("exit_x" + std::to_string(d));
        header.push_back("exit_t");
        header.push_back("payoff");
        csv.row(header);
    }

    std::int64_t tau_max = 0;
    double sum = 0.0, sq = 0.0;
    for (std::int64_t i = 0; i < cfg.samples; ++i) {
        const GameTrace trace = play(start.x, start.t, strategy, cfg.payoff, cfg.params,
                                     cfg.domain, cfg.seed, static_cast<std::uint64_t>(i));
        std::vector<std::string> cells = {std::to_string(i), std::to_string(trace.tau)};
        for (double c : trace.exit_point()) cells.push_back(fmt(c));
        cells.push_back(fmt(trace.exit_time()));
        cells.push_back(fmt(trace.payoff));
        csv.row(cells);
        tau_max = std::max(tau_max, trace.tau);
        sum += trace.payoff;
        sq += trace.payoff * trace.payoff;
    }
    const double mean = sum / static_cast<double>(cfg.samples);
    const double var = std::max(0.0, (sq - cfg.samples * mean * mean) /
                                         static_cast<double>(cfg.samples - 1));
    const double se = std::sqrt(var / static_cast<double>(cfg.samples));
    const double sim_s = sw.lap();

    json summary;
    summary["mean"] = mean;
    summary["std_error"] = se;
    summary["confidence_radius"] = 1.96 * se;
    summary["num_samples"] = cfg.samples;
    summary["tau_max"] = tau_max;
    summary["tau_bound"] =
        static_cast<std::int64_t>(std::floor(cfg.domain.T / cfg.params.time_step())) + 1;
    summary["strategy"] = strategy_meta;
    write_json(out + ".summary.json", summary);
    emit_manifest(out, cfg, {out + ".csv", out + ".summary.json"},
                  {{"setup", setup_s}, {"simulate", sim_s}});
    std::cout << "simulate: mean=" << fmt(mean) << " se=" << fmt(se) << " tau_max=" << tau_max
              << "\n";
    return 0;
}

int run_amvf(const LabConfig& cfg, const std::string& out, std::vector<double> epsilons,
             int ball_cells, int directions, bool refine) {
    if (cfg.payoff_kind != "from_reference")
        throw std::invalid_argument("amvf-check: payoff must be kind from_reference");
    if (epsilons.empty()) epsilons = {0.2, 0.1, 0.05};

    ProbePoint probe;
    if (cfg.start) {
        probe = *cfg.start;
    } else {
        probe.x = Point(static_cast<size_t>(cfg.params.n), 0.0);
        probe.t = 0.5 * cfg.domain.T;
    }

    Stopwatch sw;
    CsvWriter csv(out + ".csv");
    csv.row({"epsilon", "lhs", "predicted", "residual"});
    json rows = json::array();
    double prev_ratio = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    for (double eps : epsilons) {
        const GameParams params = make_params(cfg.params.n, cfg.params.p, eps,
                                              cfg.params.scaling);
        const ReferenceSolution ref = ReferenceSolution::by_id(cfg.payoff_id, params);
        QuadratureConfig quad;
        quad.ball_cells = ball_cells;
        quad.directions = directions;
        quad.refine_sup = refine;
        const MeanValueReport rep =
            mean_value_residual(ref.as_smooth_field(), probe.x, probe.t, params, quad);
        csv.row({fmt(eps), fmt(rep.lhs), fmt(rep.predicted), fmt(rep.residual)});
        const double ratio = std::abs(rep.residual) / (eps * eps);
        if (ratio > prev_ratio * 1.2) decreasing = false;
        prev_ratio = ratio;
        rows.push_back({{"epsilon", eps}, {"residual_over_eps2", ratio}});
    }
    json summary;
    summary["levels"] = rows;
    summary["residual_over_eps2_decreasing"] = decreasing;
    write_json(out + ".summary.json", summary);
    emit_manifest(out, cfg, {out + ".csv", out + ".summary.json"}, {{"amvf", sw.lap()}});
    return decreasing ? 0 : 1;
}

int run_converge(const LabConfig& cfg, const std::string& out) {
    Stopwatch sw;
    ConvergenceConfig sc = cfg.study;
    if (!cfg.has_study && cfg.payoff_kind == "from_reference") sc.reference_id = cfg.payoff_id;
    const ConvergenceStudy study =
        run_convergence(cfg.domain, cfg.params.n, cfg.params.p, cfg.params.scaling, sc);

    CsvWriter csv(out + ".csv");
    csv.row({"epsilon", "h", "sup_error", "seconds"});
    for (const auto& l : study.levels)
        csv.row({fmt(l.epsilon), fmt(l.h), fmt(l.sup_error), fmt(l.seconds)});

    bool monotone = true;
    for (size_t i = 1; i < study.levels.size(); ++i)
        if (study.levels[i].sup_error > study.levels[i - 1].sup_error * 1.2) monotone = false;

    json summary;
    summary["reference"] = study.reference_id;
    if (study.exact) {
        summary["rate"] = "exact";
    } else if (study.rate) {
        summary["rate"] = *study.rate;
    } else {
        summary["rate"] = nullptr;
    }
    summary["monotone_within_noise"] = monotone;
    json probes = json::array();
    for (const auto& pb : study.probes) {
        json row = json::array();
        for (double c : pb.x) row.push_back(c);
        row.push_back(pb.t);
        probes.push_back(row);
    }
    summary["probes"] = probes;
    write_json(out + ".summary.json", summary);
    emit_manifest(out, cfg, {out + ".csv", out + ".summary.json"}, {{"converge", sw.lap()}});

    const bool rate_ok = study.exact || (study.rate && *study.rate > 0.0);
    std::cout << "converge: reference=" << study.reference_id << " monotone=" << monotone
              << " rate=" << (study.exact ? std::string("exact")
                                          : study.rate ? fmt(*study.rate) : std::string("n/a"))
              << "\n";
    return (monotone && rate_ok) ? 0 : 1;
}

int run_compare(const LabConfig& cfg, const std::string& out) {
    if (!cfg.payoff2) throw std::invalid_argument("compare: config needs payoff and payoff2");
    Stopwatch sw;
    const ComparisonReport rep =
        check_comparison(cfg.domain, cfg.payoff, *cfg.payoff2, cfg.params, cfg.grid);
    json summary;
    summary["ok"] = rep.ok;
    summary["max_violation"] = rep.max_violation;
    write_json(out + ".summary.json", summary);
    emit_manifest(out, cfg, {out + ".summary.json"}, {{"compare", sw.lap()}});
    std::cout << "compare: ok=" << rep.ok << " max_violation=" << fmt(rep.max_violation) << "\n";
    return rep.ok ? 0 : 1;
}

int run_barrier(const LabConfig& cfg, const std::string& out) {
    if (cfg.barrier_z.empty())
        throw std::invalid_argument("barrier-check: config needs a barrier section");
    Stopwatch sw;
    const BarrierFunction w =
        BarrierFunction::make(cfg.barrier_z, cfg.barrier_delta, cfg.barrier_R, cfg.params);

    // Probes: explicit list, or radii expanded along fixed directions.
    std::vector<Point> probes = cfg.barrier_probes;
    if (probes.empty()) {
        std::vector<double> radii = cfg.barrier_radii;
        if (radii.empty())
            radii = {1.5 * w.delta, 0.5 * (w.delta + w.R)};
        const int dim = cfg.params.n;
        std::vector<Point> dirs;
        Point e1(static_cast<size_t>(dim), 0.0);
        e1[0] = 1.0;
        dirs.push_back(e1);
        Point diag(static_cast<size_t>(dim), 1.0 / std::sqrt(static_cast<double>(dim)));
        dirs.push_back(diag);
        for (double r : radii)
            for (const auto& u : dirs) {
                Point x = w.z;
                for (int d = 0; d < dim; ++d) x[static_cast<size_t>(d)] += r * u[static_cast<size_t>(d)];
                probes.push_back(std::move(x));
            }
    }

    const double dom_target = -2.0 * w.a * (cfg.params.n + cfg.params.p - 2.0);
    double worst_identity = 0.0;
    for (const auto& x : probes) {
        const double v = barrier_dominative(w, x, cfg.params);
        worst_identity = std::max(worst_identity,
                                  std::abs(v - dom_target) / std::abs(dom_target));
    }
    Point on_delta = w.z;
    on_delta[0] += w.delta;
    const double w_at_delta = w.value(on_delta);
    const double dw_at_R = w.radial_derivative(w.R);

    const BarrierDriftReport drift =
        barrier_drift_check(w, cfg.params, probes, cfg.barrier_samples, cfg.seed);

    CsvWriter csv(out + ".csv");
    {
        std::vector<std::string> header;
        for (int d = 0; d < cfg.params.n; ++d) header.push_back("x" + std::to_string(d));
        for (const char* c : {"r", "increment", "increment_mc", "std_error", "ci",
                              "worst_midpoint_increment"})
            header.push_back(c);
        csv.row(header);
        for (const auto& row : drift.rows) {
            std::vector<std::string> cells;
            for (double c : row.x) cells.push_back(fmt(c));
            cells.push_back(fmt(row.r));
            cells.push_back(fmt(row.increment));
            cells.push_back(fmt(row.increment_mc));
            cells.push_back(fmt(row.std_error));
            cells.push_back(fmt(row.ci));
            cells.push_back(fmt(row.worst_midpoint_increment));
            csv.row(cells);
        }
    }

    const double eps2 = cfg.params.epsilon * cfg.params.epsilon;
    bool drift_ok = true;
    for (const auto& row : drift.rows) {
        if (!(row.increment <= -eps2 + row.ci)) drift_ok = false;
        // resampling oracle must agree with the deterministic increment
        if (!(std::abs(row.increment_mc - row.increment) <= 4.0 * row.std_error + 1e-12))
            drift_ok = false;
    }
    const bool identity_ok = worst_identity <= 1e-9;
    const bool dirichlet_ok = std::abs(w_at_delta) <= 1e-8 * std::max(1.0, std::abs(w.c));
    const bool neumann_ok = std::abs(dw_at_R) <= 1e-8 * std::max(1.0, 2.0 * w.a * w.R);

    json summary;
    summary["dominative_target"] = dom_target;
    summary["worst_identity_rel_error"] = worst_identity;
    summary["w_at_delta"] = w_at_delta;
    summary["radial_derivative_at_R"] = dw_at_R;
    summary["worst_increment"] = drift.worst_increment;
    summary["drift_ok"] = drift_ok;
    summary["identity_ok"] = identity_ok;
    summary["boundary_ok"] = dirichlet_ok && neumann_ok;
    write_json(out + ".summary.json", summary);
    emit_manifest(out, cfg, {out + ".csv", out + ".summary.json"}, {{"barrier", sw.lap()}});

    std::cout << "barrier-check: identity_rel=" << fmt(worst_identity)
              << " worst_increment=" << fmt(drift.worst_increment) << " (target <= "
              << fmt(-eps2) << " + ci)\n";
    return (drift_ok && identity_ok && dirichlet_ok && neumann_ok) ? 0 : 1;
}

} // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"numerical laboratory for a parabolic dominative p-Laplace control problem"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_prefix = "run";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out_prefix, "output path prefix");
    };

    CLI::App* solve = app.add_subcommand("solve", "march the value function and write the grid");
    bool no_residual = false;
    add_common(solve);
    solve->add_flag("--no-residual", no_residual, "skip the self-consistency residual");

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo runs of the controller game");
    add_common(simulate);
    std::int64_t samples_flag = -1;
    std::uint64_t seed_flag = 0;
    std::string strategy_flag;
    std::string start_flag;
    simulate->add_option("--samples", samples_flag, "number of traces");
    CLI::Option* seed_opt = simulate->add_option("--seed", seed_flag, "random seed");
    simulate->add_option("--strategy", strategy_flag, "greedy | random | fixed");
    simulate->add_option("--start", start_flag, "start state x0,...,t");

    CLI::App* amvf = app.add_subcommand("amvf-check", "asymptotic mean value formula residuals");
    add_common(amvf);
    std::string eps_flag;
    int amvf_cells = 101;
    int amvf_dirs = 0;
    bool amvf_no_refine = false;
    amvf->add_option("--epsilons", eps_flag, "comma separated list, default 0.2,0.1,0.05");
    amvf->add_option("--ball-cells", amvf_cells, "quadrature cells per axis (default 101)");
    amvf->add_option("--directions", amvf_dirs, "direction count (default per dimension)");
    amvf->add_flag("--no-refine", amvf_no_refine, "disable golden-section polish");

    CLI::App* converge = app.add_subcommand("converge", "solver error against a reference");
    add_common(converge);

    CLI::App* compare = app.add_subcommand("compare", "comparison principle for ordered payoffs");
    add_common(compare);

    CLI::App* barrier = app.add_subcommand("barrier-check", "barrier identities and drift");
    add_common(barrier);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        LabConfig cfg = load_config(config_path);
        if (samples_flag > 0) cfg.samples = samples_flag;
        if (seed_opt->count() > 0) cfg.seed = seed_flag;
        if (!strategy_flag.empty()) cfg.strategy = strategy_flag;
        if (!start_flag.empty()) {
            std::stringstream ss(start_flag);
            Point raw;
            std::string tok;
            while (std::getline(ss, tok, ',')) raw.push_back(std::stod(tok));
            if (static_cast<int>(raw.size()) != cfg.params.n + 1)
                throw std::invalid_argument("--start needs n coordinates plus a time");
            ProbePoint pb;
            pb.x.assign(raw.begin(), raw.end() - 1);
            pb.t = raw.back();
            cfg.start = pb;
        }

        if (solve->parsed()) return run_solve(cfg, out_prefix, !no_residual);
        if (simulate->parsed()) return run_simulate(cfg, out_prefix);
        if (amvf->parsed()) {
            std::vector<double> epsilons;
            if (!eps_flag.empty()) {
                std::stringstream ss(eps_flag);
                std::string tok;
                while (std::getline(ss, tok, ',')) epsilons.push_back(std::stod(tok));
            }
            return run_amvf(cfg, out_prefix, epsilons, amvf_cells, amvf_dirs, !amvf_no_refine);
        }
        if (converge->parsed()) return run_converge(cfg, out_prefix);
        if (compare->parsed()) return run_compare(cfg, out_prefix);
        if (barrier->parsed()) return run_barrier(cfg, out_prefix);
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace dominative
