#include "dominative/config.hpp"

#include "dominative/io.hpp"
#include "dominative/reference.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dominative {

namespace {

using nlohmann::json;

Point point_from(const json& j) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("config: expected a coordinate array");
    Point p;
    for (const auto& v : j) p.push_back(v.get<double>());
    return p;
}

SpaceTimeDomain domain_from(const json& root) {
    if (!root.contains("domain") || !root.contains("T"))
        throw std::invalid_argument("config: missing domain or T");
    const json& d = root.at("domain");
    const double T = root.at("T").get<double>();
    const std::string shape = d.at("shape").get<std::string>();
    if (shape == "box")
        return SpaceTimeDomain::box(point_from(d.at("lower")), point_from(d.at("upper")), T);
    if (shape == "ball")
        return SpaceTimeDomain::ball(point_from(d.at("center")), d.at("radius").get<double>(), T);
    throw std::invalid_argument("config: domain shape must be box or ball");
}

PayoffField payoff_from(const json& p, const GameParams& params) {
    const std::string kind = p.at("kind").get<std::string>();
    if (kind == "constant") return PayoffField::constant(p.at("value").get<double>());
    if (kind == "linear")
        return PayoffField::linear(point_from(p.at("a")), p.value("b", 0.0));
    if (kind == "from_reference") {
        const std::string id = p.at("id").get<std::string>();
        if (id == "quadratic_time" && p.contains("center"))
            return ReferenceSolution::quadratic_time(point_from(p.at("center")), params)
                .as_payoff();
        return ReferenceSolution::by_id(id, params).as_payoff();
    }
    if (kind == "tabulated") {
        auto grid = std::make_shared<ValueGrid>(load_grid_csv(p.at("file").get<std::string>()));
        return payoff_from_grid(std::move(grid));
    }
    throw std::invalid_argument("config: unknown payoff kind: " + kind);
}

ProbePoint probe_from(const json& j, int dim) {
    const Point raw = point_from(j);
    if (static_cast<int>(raw.size()) != dim + 1)
        throw std::invalid_argument("config: probes must be [x0, ..., t]");
    ProbePoint pb;
    pb.x.assign(raw.begin(), raw.end() - 1);
    pb.t = raw.back();
    return pb;
}

} // namespace

LabConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    try {
        LabConfig cfg;
        cfg.raw = json_text;
        const int n = root.at("n").get<int>();
        const double p = root.at("p").get<double>();
        const double eps = root.at("epsilon").get<double>();
        const std::string scaling_name = root.value("scaling", std::string("standard"));
        TimeScaling scaling;
        if (scaling_name == "standard")
            scaling = TimeScaling::standard;
        else if (scaling_name == "remark24")
            scaling = TimeScaling::remark24;
        else
            throw std::invalid_argument("config: scaling must be standard or remark24");
        cfg.params = make_params(n, p, eps, scaling);
        cfg.domain = domain_from(root);
        if (cfg.domain.dim() != n)
            throw std::invalid_argument("config: domain dimension does not match n");

        if (root.contains("payoff")) {
            cfg.payoff_kind = root.at("payoff").at("kind").get<std::string>();
            cfg.payoff_id = root.at("payoff").value("id", std::string());
            cfg.payoff = payoff_from(root.at("payoff"), cfg.params);
        } else {
            cfg.payoff = PayoffField::constant(0.0);
        }
        if (root.contains("payoff2")) cfg.payoff2 = payoff_from(root.at("payoff2"), cfg.params);

        if (root.contains("grid")) {
            const json& g = root.at("grid");
            cfg.grid.h = g.value("h", 0.0);
            cfg.grid.ball_cells = g.value("ball_cells", 0);
            cfg.grid.directions = g.value("directions", 0);
        }

        if (root.contains("study")) {
            const json& s = root.at("study");
            cfg.has_study = true;
            cfg.study.reference_id = s.value("reference", cfg.payoff_id.empty()
                                                              ? std::string("quadratic_time")
                                                              : cfg.payoff_id);
            if (s.contains("epsilons")) {
                cfg.study.epsilons.clear();
                for (const auto& v : s.at("epsilons")) cfg.study.epsilons.push_back(v.get<double>());
            }
            cfg.study.h_over_eps = s.value("h_over_eps", 8.0);
            if (s.contains("probes")) {
                for (const auto& pj : s.at("probes"))
                    cfg.study.probes.push_back(probe_from(pj, n));
            }
        }

        if (root.contains("simulate")) {
            const json& s = root.at("simulate");
            cfg.samples = s.value("samples", cfg.samples);
            cfg.seed = s.value("seed", cfg.seed);
            cfg.strategy = s.value("strategy", cfg.strategy);
            if (s.contains("sigma")) cfg.sigma = point_from(s.at("sigma"));
            if (s.contains("start")) cfg.start = probe_from(s.at("start"), n);
        }

        if (root.contains("barrier")) {
            const json& b = root.at("barrier");
            cfg.barrier_z = point_from(b.at("z"));
            cfg.barrier_delta = b.at("delta").get<double>();
            cfg.barrier_R = b.at("R").get<double>();
            if (b.contains("radii"))
                for (const auto& v : b.at("radii")) cfg.barrier_radii.push_back(v.get<double>());
            if (b.contains("probes"))
                for (const auto& pj : b.at("probes")) cfg.barrier_probes.push_back(point_from(pj));
            cfg.barrier_samples = b.value("samples", cfg.barrier_samples);
        }
        return cfg;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
}

LabConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void save_grid_csv(const ValueGrid& grid, const std::string& csv_path) {
    CsvWriter csv(csv_path);
    const int dim = grid.params.n;
    std::vector<std::string> header = {"level", "t"};
    for (int d = 0; d < dim; ++d) header.push_back("x" + std::to_string(d));
    header.push_back("value");
    csv.row(header);

    std::vector<double> xbuf(static_cast<size_t>(dim));
    std::vector<std::string> cells(header.size());
    for (int j = -1; j <= grid.top_level; ++j) {
        const auto slice = grid.level(j);
        for (std::int64_t f = 0; f < grid.nodes_per_level; ++f) {
            grid.node_coords(f, xbuf);
            cells[0] = std::to_string(j);
            cells[1] = fmt(grid.level_time(j));
            for (int d = 0; d < dim; ++d) cells[static_cast<size_t>(d) + 2] = fmt(xbuf[static_cast<size_t>(d)]);
            cells.back() = fmt(slice[static_cast<size_t>(f)]);
            csv.row(cells);
        }
    }

    // Geometry sidecar so the grid can be rebuilt without re-solving.
    nlohmann::json meta;
    meta["n"] = grid.params.n;
    meta["p"] = grid.params.p;
    meta["epsilon"] = grid.params.epsilon;
    meta["scaling"] = grid.params.scaling == TimeScaling::standard ? "standard" : "remark24";
    meta["T"] = grid.domain.T;
    if (grid.domain.shape == SpaceTimeDomain::Shape::box) {
        meta["domain"] = {{"shape", "box"}, {"lower", grid.domain.lower}, {"upper", grid.domain.upper}};
    } else {
        meta["domain"] = {{"shape", "ball"}, {"center", grid.domain.center}, {"radius", grid.domain.radius}};
    }
    meta["h"] = grid.h;
    meta["ball_cells"] = grid.config.ball_cells;
    meta["directions"] = grid.config.directions;
    meta["origin"] = grid.origin;
    meta["dims"] = grid.dims;
    meta["dt"] = grid.dt;
    meta["top_level"] = grid.top_level;
    std::ofstream mout(csv_path + ".meta.json", std::ios::binary);
    if (!mout) throw std::runtime_error("cannot open " + csv_path + ".meta.json");
    mout << meta.dump(2) << '\n';
}

ValueGrid load_grid_csv(const std::string& csv_path) {
    std::ifstream min(csv_path + ".meta.json", std::ios::binary);
    if (!min) throw std::invalid_argument("tabulated payoff: missing " + csv_path + ".meta.json");
    nlohmann::json meta;
    try {
        min >> meta;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("tabulated payoff: bad meta: ") + e.what());
    }

    ValueGrid g;
    const std::string scaling = meta.at("scaling").get<std::string>();
    g.params = make_params(meta.at("n").get<int>(), meta.at("p").get<double>(),
                           meta.at("epsilon").get<double>(),
                           scaling == "remark24" ? TimeScaling::remark24 : TimeScaling::standard);
    const nlohmann::json& d = meta.at("domain");
    const double T = meta.at("T").get<double>();
    if (d.at("shape").get<std::string>() == "box")
        g.domain = SpaceTimeDomain::box(d.at("lower").get<Point>(), d.at("upper").get<Point>(), T);
    else
        g.domain = SpaceTimeDomain::ball(d.at("center").get<Point>(), d.at("radius").get<double>(), T);
    g.strip = BoundaryStrip::make(g.domain, g.params.epsilon);
    g.h = meta.at("h").get<double>();
    g.config = GridConfig{g.h, meta.at("ball_cells").get<int>(), meta.at("directions").get<int>()};
    g.origin = meta.at("origin").get<Point>();
    g.dims = meta.at("dims").get<std::vector<int>>();
    g.dt = meta.at("dt").get<double>();
    g.top_level = meta.at("top_level").get<int>();
    g.levels = g.top_level + 2;

    const int dim = g.params.n;
    g.strides.assign(static_cast<size_t>(dim), 0);
    g.nodes_per_level = 1;
    for (int d2 = dim - 1; d2 >= 0; --d2) {
        g.strides[static_cast<size_t>(d2)] = g.nodes_per_level;
        g.nodes_per_level *= g.dims[static_cast<size_t>(d2)];
    }
    g.ball = BallRule::make(dim, g.params.epsilon, g.config.ball_cells);
    g.directions = DirectionSet::make(dim, g.config.directions);
    g.values.assign(static_cast<size_t>(g.levels) * g.nodes_per_level, 0.0);
    g.interior.assign(static_cast<size_t>(g.nodes_per_level), 0);
    {
        std::vector<double> xbuf(static_cast<size_t>(dim));
        for (std::int64_t f = 0; f < g.nodes_per_level; ++f) {
            g.node_coords(f, xbuf);
            if (g.domain.contains(xbuf)) g.interior[static_cast<size_t>(f)] = 1;
        }
    }

    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw std::invalid_argument("tabulated payoff: cannot open " + csv_path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("tabulated payoff: empty CSV");
    std::int64_t expected = static_cast<std::int64_t>(g.levels) * g.nodes_per_level;
    std::int64_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        // Row order matches save_grid_csv: level-major, then flat node index.
        const size_t last = line.rfind(',');
        size_t first = line.find(',');
        if (first == std::string::npos || last == std::string::npos)
            throw std::invalid_argument("tabulated payoff: malformed CSV row");
        const int level = std::stoi(line.substr(0, first));
        const double value = std::stod(line.substr(last + 1));
        const std::int64_t f = row % g.nodes_per_level;
        if (level != static_cast<int>(row / g.nodes_per_level) - 1)
            throw std::invalid_argument("tabulated payoff: CSV rows out of order");
        g.values[static_cast<size_t>((level + 1) * g.nodes_per_level + f)] = value;
        ++row;
    }
    if (row != expected)
        throw std::invalid_argument("tabulated payoff: CSV row count mismatch");
    return g;
}

} // namespace dominative
