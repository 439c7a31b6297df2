#include "brinkman/limit.hpp"

#include <algorithm>
#include <cmath>

namespace brinkman {

namespace {

ScalarField masked_h_of_w(const ScalarField& W, const ScalarField& mask, const GrowthLaw& law) {
    ScalarField rhs(W.grid);
    bool failed = false;  // exceptions must not escape the parallel region
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(W.values.size()); ++i) {
        if (mask[i] == 0.0) continue;
        try {
            rhs[i] = H_inverse(law, std::max(W[i], 0.0));
        } catch (const Error&) {
#pragma omp atomic write
            failed = true;
        }
    }
    if (failed) throw NoBracket("solve_w_infinity: H inversion failed on the region");
    return rhs;
}

ScalarField threshold_mask(const ScalarField& theta) {
    ScalarField mask(theta.grid);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(theta.values.size()); ++i)
        mask[i] = theta[i] > 0.0 ? 1.0 : 0.0;
    return mask;
}

}  // namespace

WInfinityResult solve_w_infinity(const ScalarField& mask, const GrowthLaw& law, double tol,
                                 const ScalarField& W_guess, const EllipticOptions& elliptic) {
    if (!(mask.grid == W_guess.grid)) throw GridMismatch("solve_w_infinity: grids differ");
    for (double m : mask.values)
        if (m != 0.0 && m != 1.0)
            throw InvalidParams("solve_w_infinity: mask must be binary");
    if (W_guess.min() < 0.0)
        throw InvalidParams("solve_w_infinity: W_guess must be nonnegative");

    WInfinityResult res;
    res.W = W_guess;
    double prev_delta = std::numeric_limits<double>::infinity();
    int bad_streak = 0;
    const int max_sweeps = 10000;
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        const ScalarField rhs = masked_h_of_w(res.W, mask, law);
        auto [W_next, stats] =
            solve_brinkman(rhs, 1.0, elliptic.tol, elliptic.method, elliptic.max_iter);
        double delta = 0.0;
#pragma omp parallel for schedule(static) reduction(max : delta)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(W_next.values.size()); ++i)
            delta = std::max(delta, std::abs(W_next[i] - res.W[i]));
        res.W = std::move(W_next);
        res.stats.sweeps = sweep;
        res.stats.final_delta = delta;
        if (sweep > 1 && prev_delta > 0.0)
            res.stats.max_ratio = std::max(res.stats.max_ratio, delta / prev_delta);
        if (delta <= tol) break;
        if (delta >= prev_delta) {
            if (++bad_streak >= 10)
                throw NoContraction("solve_w_infinity: delta failed to decrease for 10 sweeps");
        } else {
            bad_streak = 0;
        }
        prev_delta = delta;
        if (sweep == max_sweeps)
            throw NoConvergence("solve_w_infinity: sweep cap reached, final delta " +
                                std::to_string(delta));
    }
    res.p = masked_h_of_w(res.W, mask, law);
    return res;
}

LimitState init_limit(const Omega0Spec& omega0, const GrowthLaw& law, const Grid& grid,
                      double fp_tol, const EllipticOptions& elliptic) {
    if (!omega0.empty() && omega0_seam_margin(omega0, grid) < grid.extent / 8.0)
        throw SeedTooClose("init_limit: Omega_0 margin to the periodic seam is below L/8");

    LimitState st;
    st.t = 0.0;
    st.theta = ScalarField(grid, -1.0);
    if (!omega0.empty()) {
        const ScalarField sd = signed_distance_field(omega0, grid);
        st.theta = ScalarField(grid);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(sd.values.size()); ++i)
            st.theta[i] = std::clamp(sd[i], -1.0, 1.0);
    }
    const ScalarField mask = threshold_mask(st.theta);
    auto res = solve_w_infinity(mask, law, fp_tol, ScalarField(grid), elliptic);
    st.W = std::move(res.W);
    st.p = std::move(res.p);
    st.n = mask;
    st.V = velocity_from_potential(st.W);
    return st;
}

LimitState step_limit(const LimitState& state, const GrowthLaw& law, double dt, double fp_tol,
                      const EllipticOptions& elliptic) {
    LimitState st;
    st.t = state.t + dt;
    // Transport first, then re-solve the region potential.
    st.theta = evolve_patch_step(state.theta, state.V, dt);
    const ScalarField mask = threshold_mask(st.theta);
    auto res = solve_w_infinity(mask, law, fp_tol, state.W, elliptic);
    st.W = std::move(res.W);
    st.p = std::move(res.p);
    st.n = mask;
    st.V = velocity_from_potential(st.W);
    return st;
}

std::pair<ScalarField, double> interface_cells(const ScalarField& theta) {
    const Grid& g = theta.grid;
    ScalarField mask(g);
    const int n = g.n_cells;
    long count = 0;
    if (g.dim == 1) {
#pragma omp parallel for schedule(static) reduction(+ : count)
        for (int i = 0; i < n; ++i) {
            if (theta.at(i) > 0.0) continue;
            if (theta.at(i - 1) > 0.0 || theta.at(i + 1) > 0.0) {
                mask.at(i) = 1.0;
                ++count;
            }
        }
    } else {
#pragma omp parallel for schedule(static) reduction(+ : count)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                if (theta.at(i, j) > 0.0) continue;
                if (theta.at(i - 1, j) > 0.0 || theta.at(i + 1, j) > 0.0 ||
                    theta.at(i, j - 1) > 0.0 || theta.at(i, j + 1) > 0.0) {
                    mask.at(i, j) = 1.0;
                    ++count;
                }
            }
    }
    const double measure = count * std::pow(g.spacing(), g.dim);
    return {std::move(mask), measure};
}

LimitRun run_limit(const LimitConfig& config, const std::vector<double>& snapshot_times) {
    for (double s : snapshot_times)
        if (s < 0.0 || s > config.t_end + 1e-12)
            throw InvalidParams("run_limit: snapshot times must lie in [0, t_end]");
    std::vector<double> snaps = snapshot_times;
    std::sort(snaps.begin(), snaps.end());

    LimitRun run;
    LimitState st = init_limit(config.omega0, config.law, config.grid, config.fp_tol,
                               config.elliptic);
    const double h = config.grid.spacing();

    std::size_t next_snap = 0;
    while (next_snap < snaps.size() && snaps[next_snap] <= 1e-12) {
        run.snapshots.push_back(st);
        ++next_snap;
    }

    while (st.t < config.t_end - 1e-12) {
        const double vmax = st.V.max_speed_l1();
        double dt = config.t_end - st.t;
        if (vmax > 0.0) dt = std::min(dt, 0.999 * config.cfl * h / vmax);
        if (next_snap < snaps.size()) dt = std::min(dt, snaps[next_snap] - st.t);
        st = step_limit(st, config.law, dt, config.fp_tol, config.elliptic);
        if (support_seam_margin(st.theta, 0.0) < config.grid.extent / 8.0) {
            const std::string msg = "region within L/8 of the periodic seam at t=" +
                                    std::to_string(st.t);
            run.audit.violations.push_back(msg);
            throw SeedTooClose(msg);
        }
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
