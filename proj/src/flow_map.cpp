#include "brinkman/flow_map.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace brinkman {

void VelocitySampler::add_frame(double t, VectorField v) {
    if (!times.empty()) {
        if (!(t > times.back()))
            throw InvalidParams("VelocitySampler: timestamps must strictly increase");
        if (!(v.grid == frames.front().grid))
            throw GridMismatch("VelocitySampler: all frames share one grid");
    }
    if (mollify_eps > 0.0) {
        for (int d = 0; d < v.grid.dim; ++d) {
            ScalarField c(v.grid);
            c.values = v.comp[d];
            v.comp[d] = mollify_space(c, mollify_eps).values;
        }
    }
    v.ensure_finite("VelocitySampler frame");
    times.push_back(t);
    frames.push_back(std::move(v));
}

double VelocitySampler::max_speed() const {
    double m = 0.0;
    for (const auto& f : frames) m = std::max(m, f.max_speed());
    return m;
}

void VelocitySampler::require_span(double s, double t) const {
    if (frames.empty()) throw InvalidParams("VelocitySampler: no frames");
    if (steady()) return;
    const double lo = std::min(s, t), hi = std::max(s, t);
    const double slack = 1e-9 * (t_max() - t_min() + 1.0);
    if (lo < t_min() - slack || hi > t_max() + slack)
        throw OutOfSpan("time window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                        "] exits frame span [" + std::to_string(t_min()) + ", " +
                        std::to_string(t_max()) + "]");
}

std::array<double, 2> VelocitySampler::eval(const std::array<double, 2>& x, double t) const {
    if (steady()) return interpolate(frames.front(), x);
    // Clamp to the span edge; require_span has vetted the window.
    if (t <= times.front()) return interpolate(frames.front(), x);
    if (t >= times.back()) return interpolate(frames.back(), x);
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - times.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    const auto a = interpolate(frames[lo], x);
    const auto b = interpolate(frames[hi], x);
    return {(1.0 - w) * a[0] + w * b[0], (1.0 - w) * a[1] + w * b[1]};
}

namespace {

// M is hoisted to the caller: scanning the frames is O(n) and must not run
// once per traced cell.
std::array<double, 2> rk4_march(const std::array<double, 2>& x0, double s, double t,
                                const VelocitySampler& V, double sign, double M) {
    if (s == t) return x0;
    const double span = t - s;
    const double h = V.grid().spacing();
    double dt_ode = std::abs(span) / 8.0;
    if (M > 0.0) dt_ode = std::min(dt_ode, h / (4.0 * M));
    const int n_steps = std::max(1, static_cast<int>(std::ceil(std::abs(span) / dt_ode)));
    const double dt = span / n_steps;

    std::array<double, 2> x = x0;
    double tau = s;
    const int dim = V.grid().dim;
    auto f = [&](const std::array<double, 2>& y, double r) {
        auto v = V.eval(y, r);
        return std::array<double, 2>{sign * v[0], sign * v[1]};
    };
    for (int step = 0; step < n_steps; ++step) {
        const auto k1 = f(x, tau);
        std::array<double, 2> y2{x[0] + 0.5 * dt * k1[0], x[1] + 0.5 * dt * k1[1]};
        const auto k2 = f(y2, tau + 0.5 * dt);
        std::array<double, 2> y3{x[0] + 0.5 * dt * k2[0], x[1] + 0.5 * dt * k2[1]};
        const auto k3 = f(y3, tau + 0.5 * dt);
        std::array<double, 2> y4{x[0] + dt * k3[0], x[1] + dt * k3[1]};
        const auto k4 = f(y4, tau + dt);
        for (int d = 0; d < dim; ++d)
            x[d] += dt / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
        tau += dt;
    }
    return x;
}

}  // namespace

std::array<double, 2> integrate_trajectory(const std::array<double, 2>& x, double s, double t,
                                           const VelocitySampler& V) {
    V.require_span(s, t);
    return rk4_march(x, s, t, V, +1.0, V.max_speed());
}

FlowMapField flow_map(const Grid& grid, double s, double t, const VelocitySampler& V) {
    V.require_span(s, t);
    FlowMapField out;
    out.grid = grid;
    out.source_time = s;
    out.target_time = t;
    out.displacement = VectorField(grid);
    const int n = grid.n_cells;
    const double M = V.max_speed();
    if (grid.dim == 1) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            const std::array<double, 2> x{grid.center(i), 0.0};
            const auto y = rk4_march(x, s, t, V, +1.0, M);
            out.displacement.comp[0][i] = y[0] - x[0];
        }
    } else {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const std::array<double, 2> x{grid.center(i), grid.center(j)};
                const auto y = rk4_march(x, s, t, V, +1.0, M);
                const std::size_t c = grid.index(i, j);
                out.displacement.comp[0][c] = y[0] - x[0];
                out.displacement.comp[1][c] = y[1] - x[1];
            }
    }
    return out;
}

namespace {

ScalarField pullback(const ScalarField& u_from, const VelocitySampler& V, double t_from,
                     double t_to, double sign) {
    V.require_span(t_from, t_to);
    const Grid& g = u_from.grid;
    ScalarField out(g);
    const int n = g.n_cells;
    const double M = V.max_speed();
    if (g.dim == 1) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            const std::array<double, 2> x{g.center(i), 0.0};
            const auto y = rk4_march(x, t_to, t_from, V, sign, M);
            out.at(i) = interpolate(u_from, y);
        }
    } else {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const std::array<double, 2> x{g.center(i), g.center(j)};
                const auto y = rk4_march(x, t_to, t_from, V, sign, M);
                out.at(i, j) = interpolate(u_from, y);
            }
    }
    return out;
}

}  // namespace

ScalarField transport_by_characteristics(const ScalarField& u0, const VelocitySampler& V,
                                         double t) {
    return pullback(u0, V, 0.0, t, +1.0);
}

ScalarField evolve_patch(const ScalarField& theta0, const VelocitySampler& V, double t) {
    if (theta0.min() < -1.0 - 1e-12 || theta0.max() > 1.0 + 1e-12)
        throw InvalidParams("evolve_patch: theta0 must take values in [-1, 1]");
    // theta_t - Dtheta . V = 0 transports with velocity -V.
    return pullback(theta0, V, 0.0, t, -1.0);
}

ScalarField evolve_patch_step(const ScalarField& theta, const VectorField& V, double dt) {
    VelocitySampler s;
    s.add_frame(0.0, V);
    return pullback(theta, s, 0.0, dt, -1.0);
}

double holder_pair_slack(const FlowMapField& phi, double nhat, int n_pairs,
                         std::uint64_t seed) {
    const Grid& g = phi.grid;
    const double h = g.spacing();
    const double T = std::abs(phi.target_time - phi.source_time);
    const double expo = std::exp(-nhat * T);
    const int max_lag = std::max(1, static_cast<int>(0.25 / h));

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> cell(0, g.n_cells - 1);
    std::uniform_int_distribution<int> lag(1, max_lag);

    auto endpoint = [&](int i, int j) {
        std::array<double, 2> x{g.center(i), g.dim == 2 ? g.center(j) : 0.0};
        const std::size_t c = g.dim == 1 ? g.index(i) : g.index(i, j);
        x[0] += phi.displacement.comp[0][c];
        if (g.dim == 2) x[1] += phi.displacement.comp[1][c];
        return x;
    };

    double worst = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < n_pairs; ++s) {
        const int i1 = cell(rng);
        const int j1 = g.dim == 2 ? cell(rng) : 0;
        int i2 = i1, j2 = j1;
        if (g.dim == 1) {
            i2 = i1 + lag(rng);
        } else {
            i2 = i1 + lag(rng) * (rng() % 2 ? 1 : -1);
            j2 = j1 + (static_cast<int>(rng() % (max_lag + 1))) * (rng() % 2 ? 1 : -1);
        }
        const std::array<double, 2> a{g.center(i1), g.dim == 2 ? g.center(j1) : 0.0};
        const std::array<double, 2> b{g.center(i2), g.dim == 2 ? g.center(j2) : 0.0};
        const double r = g.periodic_distance(a, b);
        if (r < h || r > 0.25) continue;
        const auto pa = endpoint(i1, j1);
        const auto pb = endpoint(g.wrap(i2), g.dim == 2 ? g.wrap(j2) : 0);
        const double sep = g.periodic_distance(pa, pb);
        const double bound = std::pow(r, expo) + 4.0 * h;
        worst = std::max(worst, sep - bound);
    }
    return worst;
}

}  // namespace brinkman
