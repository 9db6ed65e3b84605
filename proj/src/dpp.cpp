#include "dominative/dpp.hpp"

#include "dominative/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace dominative {

namespace {

int auto_ball_cells(double eps_over_h) {
    // 21 cells at the acceptance resolution h = eps/8; on finer grids the
    // lattice is refined in proportion so the quadrature cell keeps tracking
    // h instead of becoming the dominant error term.
    const double target = 21.0 * eps_over_h / 8.0;
    long m = std::lround(target);
    if (m % 2 == 0) ++m;
    return static_cast<int>(std::max(21L, m));
}

// Interpolation taps consolidated into maximal runs of consecutive flat
// offsets, so the per-node update is a handful of contiguous dot products.
struct Run {
    std::int64_t start = 0;
    std::vector<double> w;
};

std::vector<Run> to_runs(const std::map<std::int64_t, double>& taps) {
    std::vector<Run> runs;
    for (const auto& [off, w] : taps) {
        if (!runs.empty() && off == runs.back().start +
                                 static_cast<std::int64_t>(runs.back().w.size())) {
            runs.back().w.push_back(w);
        } else {
            runs.push_back({off, {w}});
        }
    }
    return runs;
}

struct Stencil {
    std::vector<Run> ball;
    std::vector<std::vector<Run>> per_direction;

    static Stencil build(const ValueGrid& g);

    double apply(const double* prev, std::int64_t node) const {
        double avg = 0.0;
        for (const Run& r : ball) {
            const double* src = prev + node + r.start;
            double dot = 0.0;
            for (size_t k = 0; k < r.w.size(); ++k) dot += r.w[k] * src[k];
            avg += dot;
        }
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& dir : per_direction) {
            double mid = 0.0;
            for (const Run& r : dir) {
                const double* src = prev + node + r.start;
                double dot = 0.0;
                for (size_t k = 0; k < r.w.size(); ++k) dot += r.w[k] * src[k];
                mid += dot;
            }
            if (mid > best) best = mid;
        }
        const GameParams& gp = grid->params;
        return gp.beta * avg + gp.alpha * best;
    }

    const ValueGrid* grid = nullptr;
};

void corner_taps(std::map<std::int64_t, double>& taps, std::span<const double> offset,
                 double h, std::span<const std::int64_t> strides, double weight) {
    const int dim = static_cast<int>(offset.size());
    std::vector<int> base(dim);
    std::vector<double> frac(dim);
    for (int d = 0; d < dim; ++d) {
        const double u = offset[d] / h;
        base[d] = static_cast<int>(std::floor(u));
        frac[d] = u - base[d];
    }
    const int corners = 1 << dim;
    for (int c = 0; c < corners; ++c) {
        double wgt = weight;
        std::int64_t off = 0;
        for (int d = 0; d < dim; ++d) {
            const bool hi = (c >> d) & 1;
            wgt *= hi ? frac[d] : 1.0 - frac[d];
            off += (base[d] + (hi ? 1 : 0)) * strides[d];
        }
        if (wgt != 0.0) taps[off] += wgt;
    }
}

Stencil Stencil::build(const ValueGrid& g) {
    Stencil st;
    st.grid = &g;
    const int dim = g.params.n;

    std::map<std::int64_t, double> ball_taps;
    const int K = g.ball.count();
    for (int k = 0; k < K; ++k) {
        std::span<const double> off{g.ball.offsets.data() + static_cast<size_t>(k) * dim,
                                    static_cast<size_t>(dim)};
        corner_taps(ball_taps, off, g.h, g.strides, 1.0 / K);
    }
    st.ball = to_runs(ball_taps);

    st.per_direction.reserve(static_cast<size_t>(g.directions.count()));
    std::vector<double> shifted(dim);
    for (int i = 0; i < g.directions.count(); ++i) {
        std::map<std::int64_t, double> taps;
        const auto sigma = g.directions.at(i);
        for (double sign : {1.0, -1.0}) {
            for (int d = 0; d < dim; ++d) shifted[d] = sign * g.params.epsilon * sigma[d];
            corner_taps(taps, shifted, g.h, g.strides, 0.5);
        }
        st.per_direction.push_back(to_runs(taps));
    }
    return st;
}

} // namespace

void ValueGrid::node_coords(std::int64_t flat, std::span<double> out) const {
    const int dim = static_cast<int>(dims.size());
    for (int d = 0; d < dim; ++d) {
        const std::int64_t i = flat / strides[d];
        flat -= i * strides[d];
        out[d] = origin[d] + static_cast<double>(i) * h;
    }
}

double ValueGrid::value_at(std::span<const double> x, double t) const {
    const double half = 0.5 * dt;
    if (t > domain.T + 1e-12 * std::max(1.0, domain.T))
        throw std::out_of_range("value_at: query above the horizon T");
    const long long j = std::llround(t / dt);
    if (j < -1 || j > top_level || std::abs(t - static_cast<double>(j) * dt) > half + 1e-12)
        throw std::out_of_range("value_at: time " + std::to_string(t) +
                                " is not within half a step of any level");

    const int dim = static_cast<int>(dims.size());
    std::int64_t base = 0;
    double frac[8];
    for (int d = 0; d < dim; ++d) {
        const double u = (x[d] - origin[d]) / h;
        auto i = static_cast<std::int64_t>(std::floor(u));
        if (i == dims[d] - 1 && u <= dims[d] - 1 + 1e-9) --i; // exact top node
        if (i < 0 || i > dims[d] - 2)
            throw std::out_of_range("value_at: point outside the grid coverage");
        base += i * strides[d];
        frac[d] = u - static_cast<double>(i);
    }
    const double* slice = values.data() + static_cast<size_t>(j + 1) * nodes_per_level;
    const int corners = 1 << dim;
    double acc = 0.0;
    for (int c = 0; c < corners; ++c) {
        double wgt = 1.0;
        std::int64_t off = 0;
        for (int d = 0; d < dim; ++d) {
            const bool hi = (c >> d) & 1;
            wgt *= hi ? frac[d] : 1.0 - frac[d];
            off += hi ? strides[d] : 0;
        }
        acc += wgt * slice[base + off];
    }
    return acc;
}

ValueGrid solve_dpp(const SpaceTimeDomain& domain, const PayoffField& F,
                    const GameParams& params, const GridConfig& config) {
    if (!F.valid()) throw std::invalid_argument("solve_dpp: payoff field is empty");
    if (domain.dim() != params.n)
        throw std::invalid_argument("solve_dpp: domain dimension does not match params");
    const double eps = params.epsilon;
    if (!(domain.T > eps * eps))
        throw std::invalid_argument("solve_dpp: horizon T must exceed epsilon^2");

    ValueGrid g;
    g.params = params;
    g.domain = domain;
    g.strip = BoundaryStrip::make(domain, eps);
    g.h = config.h > 0.0 ? config.h : eps / 4.0;
    if (g.h > eps / 4.0 + 1e-12)
        throw std::invalid_argument("solve_dpp: grid too coarse, need h <= epsilon/4");

    const int dim = params.n;
    const int cells = config.ball_cells > 0 ? config.ball_cells : auto_ball_cells(eps / g.h);
    g.ball = BallRule::make(dim, eps, cells);
    QuadratureConfig qc;
    qc.directions = config.directions;
    g.directions = DirectionSet::make(dim, qc.direction_count(dim));
    g.config = GridConfig{g.h, cells, g.directions.count()};

    Point lo, hi;
    domain.bounding_box(lo, hi);
    const double pad = eps + 2.0 * g.h;
    g.origin.resize(dim);
    g.dims.resize(dim);
    g.strides.resize(dim);
    for (int d = 0; d < dim; ++d) {
        g.origin[d] = lo[d] - pad;
        const double span = hi[d] + pad - g.origin[d];
        g.dims[d] = static_cast<int>(std::ceil(span / g.h - 1e-12)) + 1;
    }
    g.nodes_per_level = 1;
    for (int d = dim - 1; d >= 0; --d) {
        g.strides[d] = g.nodes_per_level;
        g.nodes_per_level *= g.dims[d];
    }

    g.dt = params.time_step();
    g.top_level = static_cast<int>(std::ceil(domain.T / g.dt - 1e-9));
    g.levels = g.top_level + 2;
    g.values.assign(static_cast<size_t>(g.levels) * g.nodes_per_level, 0.0);

    g.interior.assign(static_cast<size_t>(g.nodes_per_level), 0);
    std::vector<std::int64_t> interior_nodes;
    {
        std::vector<double> xbuf(dim);
        for (std::int64_t f = 0; f < g.nodes_per_level; ++f) {
            g.node_coords(f, xbuf);
            if (domain.contains(xbuf)) {
                g.interior[static_cast<size_t>(f)] = 1;
                interior_nodes.push_back(f);
            }
        }
    }

    // Boundary data on levels -1 and 0 everywhere, and on strip nodes above.
    auto fill_boundary = [&](int j, bool all_nodes) {
        const double tj = g.level_time(j);
        double* slice = g.values.data() + static_cast<size_t>(j + 1) * g.nodes_per_level;
        parallel_for_chunks(g.nodes_per_level, [&](std::int64_t b, std::int64_t e) {
            std::vector<double> xbuf(dim);
            for (std::int64_t f = b; f < e; ++f) {
                if (!all_nodes && g.interior[static_cast<size_t>(f)]) continue;
                g.node_coords(f, xbuf);
                slice[f] = F(xbuf, tj);
            }
        });
    };
    fill_boundary(-1, true);
    fill_boundary(0, true);

    const Stencil stencil = Stencil::build(g);
    const std::int64_t n_int = static_cast<std::int64_t>(interior_nodes.size());
    for (int j = 1; j <= g.top_level; ++j) {
        fill_boundary(j, false);
        const double* prev = g.values.data() + static_cast<size_t>(j) * g.nodes_per_level;
        double* cur = g.values.data() + static_cast<size_t>(j + 1) * g.nodes_per_level;
        parallel_for_chunks(n_int, [&](std::int64_t b, std::int64_t e) {
            for (std::int64_t k = b; k < e; ++k) {
                const std::int64_t f = interior_nodes[static_cast<size_t>(k)];
                cur[f] = stencil.apply(prev, f);
            }
        });
    }
    return g;
}

DppResidualReport dpp_residual(const ValueGrid& grid) {
    const Stencil stencil = Stencil::build(grid);
    DppResidualReport rep;
    rep.per_level.assign(static_cast<size_t>(grid.top_level), 0.0);

    std::vector<std::int64_t> interior_nodes;
    for (std::int64_t f = 0; f < grid.nodes_per_level; ++f)
        if (grid.interior[static_cast<size_t>(f)]) interior_nodes.push_back(f);
    const std::int64_t n_int = static_cast<std::int64_t>(interior_nodes.size());

    for (int j = 1; j <= grid.top_level; ++j) {
        const double* prev = grid.values.data() + static_cast<size_t>(j) * grid.nodes_per_level;
        const double* cur = grid.values.data() + static_cast<size_t>(j + 1) * grid.nodes_per_level;
        const int workers = std::max(1, thread_budget());
        std::vector<double> worst(static_cast<size_t>(workers), 0.0);
        std::vector<std::int64_t> where(static_cast<size_t>(workers), -1);
        const std::int64_t chunk = (n_int + workers - 1) / workers;
        parallel_for_chunks(n_int, [&](std::int64_t b, std::int64_t e) {
            const size_t slot = static_cast<size_t>(b / std::max<std::int64_t>(1, chunk));
            for (std::int64_t k = b; k < e; ++k) {
                const std::int64_t f = interior_nodes[static_cast<size_t>(k)];
                const double r = std::abs(cur[f] - stencil.apply(prev, f));
                if (slot < worst.size() && r > worst[slot]) {
                    worst[slot] = r;
                    where[slot] = f;
                }
            }
        });
        double lvl = 0.0;
        std::int64_t lvl_node = -1;
        for (size_t s = 0; s < worst.size(); ++s)
            if (worst[s] > lvl) {
                lvl = worst[s];
                lvl_node = where[s];
            }
        rep.per_level[static_cast<size_t>(j - 1)] = lvl;
        if (lvl > rep.max_abs_residual) {
            rep.max_abs_residual = lvl;
            rep.argmax_node = lvl_node;
            rep.argmax_level = j;
        }
    }
    return rep;
}

ComparisonReport check_comparison(const SpaceTimeDomain& domain, const PayoffField& F1,
                                  const PayoffField& F2, const GameParams& params,
                                  const GridConfig& config) {
    ValueGrid g1 = solve_dpp(domain, F1, params, config);

    // Validate the ordering on every node where boundary data was consumed.
    {
        std::vector<double> xbuf(static_cast<size_t>(params.n));
        for (int j = -1; j <= g1.top_level; ++j) {
            const double tj = g1.level_time(j);
            for (std::int64_t f = 0; f < g1.nodes_per_level; ++f) {
                if (j > 0 && g1.interior[static_cast<size_t>(f)]) continue;
                g1.node_coords(f, xbuf);
                const double a = F1(xbuf, tj), b = F2(xbuf, tj);
                if (a < b - 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}))
                    throw std::invalid_argument(
                        "check_comparison: F1 >= F2 fails on the boundary strip");
            }
        }
    }

    const ValueGrid g2 = solve_dpp(domain, F2, params, config);
    ComparisonReport rep;
    rep.ok = true;
    for (size_t i = 0; i < g1.values.size(); ++i) {
        const double gap = g2.values[i] - g1.values[i];
        if (gap > rep.max_violation) rep.max_violation = gap;
    }
    if (rep.max_violation > 1e-10) rep.ok = false;
    return rep;
}

PayoffField payoff_from_grid(std::shared_ptr<const ValueGrid> grid) {
    return PayoffField::tabulated(
        "grid", [grid](std::span<const double> x, double t) { return grid->value_at(x, t); });
}

} // namespace dominative
