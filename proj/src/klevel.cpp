#include "brinkman/klevel.hpp"

#include <algorithm>
#include <cmath>

namespace brinkman {

namespace {

double smoothstep01(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * (3.0 - 2.0 * s);
}

}  // namespace

double support_seam_margin(const ScalarField& f, double threshold) {
    const Grid& g = f.grid;
    double margin = g.extent;
    const int n = g.n_cells;
    if (g.dim == 1) {
        for (int i = 0; i < n; ++i)
            if (f.at(i) > threshold)
                margin = std::min({margin, g.center(i), g.extent - g.center(i)});
    } else {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                if (f.at(i, j) > threshold)
                    margin = std::min({margin, g.center(i), g.extent - g.center(i),
                                       g.center(j), g.extent - g.center(j)});
    }
    return margin;
}

namespace {

void guard_seam(const ScalarField& f, double threshold, double t, RunAudit* audit) {
    const double margin = support_seam_margin(f, threshold);
    if (margin < f.grid.extent / 8.0) {
        const std::string msg = "support within L/8 of the periodic seam at t=" +
                                std::to_string(t) + " (margin " + std::to_string(margin) + ")";
        if (audit) audit->violations.push_back(msg);
        throw SeedTooClose(msg);
    }
}

void audit_bounds(const KLevelState& st, double P_M, RunAudit* audit) {
    const double tol = 1e-10;
    const double pmin = st.p.min(), pmax = st.p.max();
    const double wmin = st.W.min();
    std::string msg;
    if (pmin < -tol || pmax > P_M + tol)
        msg = "pressure bound breach at t=" + std::to_string(st.t) + ": [" +
              std::to_string(pmin) + ", " + std::to_string(pmax) + "]";
    else if (wmin < -tol)
        msg = "potential positivity breach at t=" + std::to_string(st.t) + ": min W = " +
              std::to_string(wmin);
    if (!msg.empty()) {
        if (audit) audit->violations.push_back(msg);
        throw BoundViolation(msg);
    }
}

}  // namespace

ScalarField density_from_pressure(const ScalarField& p, double k) {
    if (!(k >= 2.0)) throw InvalidParams("density_from_pressure: k must be >= 2");
    ScalarField n(p.grid);
    const double expo = 1.0 / (k - 1.0);
    const double scale = (k - 1.0) / k;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(p.values.size()); ++i)
        n[i] = p[i] <= 0.0 ? 0.0 : std::pow(scale * p[i], expo);
    return n;
}

ScalarField pressure_from_density(const ScalarField& n, double k) {
    if (!(k >= 2.0)) throw InvalidParams("pressure_from_density: k must be >= 2");
    ScalarField p(n.grid);
    const double scale = k / (k - 1.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n.values.size()); ++i)
        p[i] = n[i] <= 0.0 ? 0.0 : scale * std::pow(n[i], k - 1.0);
    return p;
}

KLevelState init_klevel(const KLevelConfig& config) {
    const Grid& g = config.grid;
    if (!(config.k >= 2.0)) throw InvalidParams("klevel: k must be >= 2");
    if (!config.omega0.empty() && omega0_seam_margin(config.omega0, g) < g.extent / 8.0)
        throw SeedTooClose("klevel: Omega_0 margin to the periodic seam is below L/8");

    const double h = g.spacing();
    const double a = config.amplitude_frac * config.law.P_M;
    const double erode = 2.0 * h;
    const double ramp = 4.0 * h;

    KLevelState st;
    st.t = 0.0;
    st.k = config.k;
    st.p = ScalarField(g);
    if (!config.omega0.empty()) {
        const ScalarField sd = signed_distance_field(config.omega0, g);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(sd.values.size()); ++i)
            st.p[i] = a * smoothstep01((sd[i] - erode) / ramp);
    }
    auto [W, stats] = solve_brinkman(st.p, 1.0, config.elliptic.tol, config.elliptic.method,
                                     config.elliptic.max_iter);
    st.W = std::move(W);
    st.V = velocity_from_potential(st.W);
    st.n = density_from_pressure(st.p, st.k);
    return st;
}

KLevelState step_klevel(const KLevelState& state, const GrowthLaw& law, double dt,
                        const EllipticOptions& elliptic, RunAudit* audit) {
    KLevelState st;
    st.t = state.t + dt;
    st.k = state.k;

    auto [W, stats] = solve_brinkman(state.p, 1.0, elliptic.tol, elliptic.method,
                                     elliptic.max_iter);
    st.W = std::move(W);
    st.V = velocity_from_potential(st.W);

    st.p = upwind_advect(state.p, st.V, dt);  // throws CflViolation past the limit

    bool react_failed = false;  // keep exceptions out of the parallel region
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(st.p.values.size()); ++i) {
        try {
            st.p[i] = exact_reaction_step(law, st.p[i], st.W.values[i], st.k, dt);
        } catch (const Error&) {
#pragma omp atomic write
            react_failed = true;
        }
    }
    if (react_failed) throw NoConvergence("step_klevel: reaction substep failed");

    st.n = density_from_pressure(st.p, st.k);
    audit_bounds(st, law.P_M, audit);
    return st;
}

KLevelRun run_klevel(const KLevelConfig& config, const std::vector<double>& snapshot_times) {
    for (double s : snapshot_times)
        if (s < 0.0 || s > config.t_end + 1e-12)
            throw InvalidParams("run_klevel: snapshot times must lie in [0, t_end]");
    std::vector<double> snaps = snapshot_times;
    std::sort(snaps.begin(), snaps.end());

    KLevelRun run;
    KLevelState st = init_klevel(config);
    const double h = config.grid.spacing();

    std::size_t next_snap = 0;
    while (next_snap < snaps.size() && snaps[next_snap] <= 1e-12) {
        run.snapshots.push_back(st);
        ++next_snap;
    }

    while (st.t < config.t_end - 1e-12) {
        // The CFL decision needs the velocity the step will actually advect
        // with; the solve is deterministic, so this matches the in-step one.
        auto [W_now, stats] = solve_brinkman(st.p, 1.0, config.elliptic.tol,
                                             config.elliptic.method, config.elliptic.max_iter);
        const double vmax = velocity_from_potential(W_now).max_speed_l1();
        double dt = config.t_end - st.t;
        // shave one part in 10^3 so dt * vmax <= cfl h survives rounding
        if (vmax > 0.0) dt = std::min(dt, 0.999 * config.cfl * h / vmax);
        if (next_snap < snaps.size()) dt = std::min(dt, snaps[next_snap] - st.t);
        st = step_klevel(st, config.law, dt, config.elliptic, &run.audit);
        guard_seam(st.p, 0.0, st.t, &run.audit);
        run.audit.times.push_back(st.t);
        run.audit.max_speed.push_back(st.V.max_speed());
        while (next_snap < snaps.size() && st.t >= snaps[next_snap] - 1e-12) {
            run.snapshots.push_back(st);
            ++next_snap;
        }
    }
    return run;
}

}  // namespace brinkman
