#include "brinkman/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "brinkman/elliptic.hpp"
#include "brinkman/flow_map.hpp"
#include "brinkman/grid.hpp"
#include "brinkman/growth_law.hpp"

namespace brinkman {

namespace {

GrowthLaw perturbed_law() {
    // Cubic-perturbed decreasing law; steeper than the linear one everywhere.
    const double a = 1.0, pm = 1.0;
    return GrowthLaw::custom(
        [=](double p) {
            const double s = (p - pm) / pm;
            return a * (pm - p) * (1.0 + 0.1 * s * s);
        },
        [=](double p) {
            const double s = (p - pm) / pm;
            return -a * (1.0 + 0.1 * s * s) + a * (pm - p) * 0.2 * s / pm;
        },
        a, pm);
}

CheckResult h_slope_check(const GrowthLaw& law, const std::string& name) {
    CheckResult r{name, false, 0.0, 1.0};
    const int n = 1000;
    double lo = 1.0, hi = 0.0;
    const double e = 1e-6;
    for (int i = 0; i < n; ++i) {
        const double w = e + (law.P_M - 2 * e) * i / (n - 1.0);
        const double slope = (H_inverse(law, w + e) - H_inverse(law, w - e)) / (2.0 * e);
        lo = std::min(lo, slope);
        hi = std::max(hi, slope);
    }
    r.qoi = hi;
    r.pass = lo >= 0.0 && hi < 1.0;
    return r;
}

CheckResult omega_rk4_check() {
    CheckResult r{"omega_exact_vs_rk4", false, 0.0, 1e-8};
    const GrowthLaw law = GrowthLaw::linear(1.0, 1.0);
    auto f = [&](double u) { return u * (law.alpha_bar * law.P_M - (1.0 + law.alpha_bar) * u); };
    const double dt = 1e-4;
    double worst = 0.0;
    for (int xi_i = 0; xi_i <= 10; ++xi_i) {
        const double xi = xi_i / 10.0;
        double u = xi, t = 0.0;
        int next_probe = 0;
        while (next_probe <= 10) {
            if (t >= next_probe - dt / 2) {
                worst = std::max(worst, std::abs(u - omega_exact(law, xi, next_probe)));
                ++next_probe;
            }
            const double k1 = f(u);
            const double k2 = f(u + 0.5 * dt * k1);
            const double k3 = f(u + 0.5 * dt * k2);
            const double k4 = f(u + dt * k3);
            u += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
            t += dt;
        }
    }
    r.qoi = worst;
    r.pass = worst <= r.threshold;
    return r;
}

CheckResult sandwich_check() {
    CheckResult r{"reaction_sandwich", false, 0.0, 0.0};
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> par(0.5, 2.0), unit(0.0, 1.0);
    double worst = -std::numeric_limits<double>::infinity();
    try {
        for (int i = 0; i < 10000; ++i) {
            const GrowthLaw law = GrowthLaw::linear(par(rng), par(rng));
            const double u = unit(rng) * law.P_M;
            const double W = unit(rng) * law.P_M;
            const ReactionBounds rb = reaction_bounds_check(law, u, W);
            worst = std::max(worst, std::max(rb.lower - rb.value, rb.value - rb.upper));
        }
        r.pass = true;
    } catch (const BoundViolation&) {
        r.pass = false;
    }
    r.qoi = worst;
    return r;
}

CheckResult theta_alpha_check() {
    CheckResult r{"theta_alpha_derivative_bound", false, 0.0, 1.0 + 1e-6};
    // N = 1: the closed form matches the modulus-kernel integral exactly
    // there. Samples stay inside the window where sigma increases,
    // sqrt(alpha^2 + r^2) <= e^-1.
    const double N = 1.0, alpha = 0.05;
    const double r_max = std::sqrt(std::exp(-2.0) * 0.98 - alpha * alpha);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double rr = 1e-4 + (r_max - 1e-4) * i / 199.0;
        const double e = 1e-7 * std::max(rr, 1e-2);
        const double dfd =
            (theta_alpha(N, alpha, rr + e) - theta_alpha(N, alpha, rr - e)) / (2.0 * e);
        const double bound = theta_alpha(N, alpha, rr) / sigma_log_lipschitz(N, rr);
        worst = std::max(worst, std::abs(dfd) / bound);
    }
    r.qoi = worst;
    r.pass = worst <= r.threshold;
    return r;
}

VelocitySampler steady_sine(const Grid& g, double amp) {
    VectorField v(g);
    for (int i = 0; i < g.n_cells; ++i) v.comp[0][i] = amp * std::sin(g.center(i));
    VelocitySampler s;
    s.add_frame(0.0, v);
    return s;
}

CheckResult trajectory_constant_check() {
    CheckResult r{"trajectory_constant_velocity_exact", false, 0.0, 1e-12};
    const Grid g(1, 64, 2.0 * M_PI);
    VectorField v(g);
    for (int i = 0; i < g.n_cells; ++i) v.comp[0][i] = 0.3;
    VelocitySampler s;
    s.add_frame(0.0, v);
    const auto y = integrate_trajectory({1.0, 0.0}, 0.0, 1.0, s);
    r.qoi = std::abs(y[0] - 1.3);
    r.pass = r.qoi <= r.threshold;
    return r;
}

CheckResult inverse_check() {
    const Grid g(1, 256, 2.0 * M_PI);
    const double h = g.spacing();
    CheckResult r{"forward_backward_inverse", false, 0.0, 10.0 * h * h};
    const VelocitySampler s = steady_sine(g, 0.3);
    double worst = 0.0;
    for (int i = 0; i < g.n_cells; i += 4) {
        const std::array<double, 2> x{g.center(i), 0.0};
        const auto fwd = integrate_trajectory(x, 0.0, 1.0, s);
        const auto back = integrate_trajectory(fwd, 1.0, 0.0, s);
        worst = std::max(worst, std::abs(g.periodic_delta(back[0], x[0])));
    }
    r.qoi = worst;
    r.pass = worst <= r.threshold;
    return r;
}

CheckResult holder_check() {
    CheckResult r{"holder_pair_bound", false, 0.0, 0.0};
    const Grid g(1, 512, 2.0 * M_PI);
    const VelocitySampler s = steady_sine(g, 0.3);
    const double nhat = empirical_log_lipschitz(s.frames[0], 2000);
    const FlowMapField phi = flow_map(g, 0.0, 1.0, s);
    r.qoi = holder_pair_slack(phi, nhat, 1000);
    r.pass = r.qoi <= 0.0;
    return r;
}

CheckResult time_shift_check() {
    CheckResult r{"time_shift_bound", false, 0.0, 0.0};
    const Grid g(1, 512, 2.0 * M_PI);
    const double h = g.spacing();
    VelocitySampler s;
    for (int fr = 0; fr <= 20; ++fr) {
        const double t = fr * 0.05;
        VectorField v(g);
        for (int i = 0; i < g.n_cells; ++i)
            v.comp[0][i] = 0.3 * std::sin(g.center(i)) * (1.0 + 0.5 * std::cos(t));
        s.add_frame(t, v);
    }
    const double M = s.max_speed();
    const double nhat = empirical_log_lipschitz(s.frames[0], 2000);
    const double t1 = 0.0, t2 = 0.05, T = 1.0;
    const double bound = std::pow(M * (t2 - t1), std::exp(-nhat * T)) + 4.0 * h;
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < g.n_cells; i += 16) {
        const std::array<double, 2> x{g.center(i), 0.0};
        for (double t : {0.2, 0.5, 1.0}) {
            const auto g1 = integrate_trajectory(x, t1, t, s);
            const auto g2 = integrate_trajectory(x, t2, t, s);
            worst = std::max(worst, std::abs(g.periodic_delta(g1[0], g2[0])) - bound);
        }
    }
    r.qoi = worst;
    r.pass = worst <= 0.0;
    return r;
}

}  // namespace

std::vector<CheckResult> growth_law_checks() {
    std::vector<CheckResult> out;
    out.push_back(h_slope_check(GrowthLaw::linear(1.0, 1.0), "h_prime_window_linear"));
    out.push_back(h_slope_check(perturbed_law(), "h_prime_window_perturbed"));
    out.push_back(omega_rk4_check());
    out.push_back(sandwich_check());
    out.push_back(theta_alpha_check());
    return out;
}

std::vector<CheckResult> flow_map_checks() {
    return {trajectory_constant_check(), inverse_check(), holder_check(), time_shift_check()};
}

}  // namespace brinkman
