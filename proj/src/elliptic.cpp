#include "brinkman/elliptic.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <random>
#include <vector>

namespace brinkman {

namespace {

// FFTW planning is not thread-safe; execution of a created plan is.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

double residual_linf(const ScalarField& W, const ScalarField& p, double nu) {
    ScalarField r = screened_operator(W, nu);
    double m = 0.0;
    for (std::size_t i = 0; i < r.values.size(); ++i)
        m = std::max(m, std::abs(r[i] - p[i]));
    return m;
}

// Evaluating the residual multiplies rounding noise in W by the stencil
// scale 1 + 2 d nu / h^2; no double-precision solve can beat this floor.
double rounding_floor(const Grid& g, double nu, double p_inf) {
    const double diag = 1.0 + 2.0 * g.dim * nu / (g.spacing() * g.spacing());
    return 64.0 * std::numeric_limits<double>::epsilon() * diag * (1.0 + p_inf);
}

std::pair<ScalarField, EllipticSolveStats> solve_spectral(const ScalarField& p, double nu,
                                                          double tol) {
    const Grid& g = p.grid;
    const int n = g.n_cells;
    const double h = g.spacing();
    ScalarField W(g);
    EllipticSolveStats stats;
    stats.method = EllipticMethod::spectral;
    stats.iterations = 1;

    // Symbol of the 3/5-point stencil: lambda(m) = (2 - 2 cos(2 pi m / n)) / h^2.
    std::vector<double> lam(n);
    for (int m = 0; m < n; ++m) lam[m] = (2.0 - 2.0 * std::cos(2.0 * M_PI * m / n)) / (h * h);

    if (g.dim == 1) {
        std::vector<double> in(p.values);
        std::vector<std::complex<double>> out(n / 2 + 1);
        fftw_plan fwd, bwd;
        {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            fwd = fftw_plan_dft_r2c_1d(n, in.data(),
                                       reinterpret_cast<fftw_complex*>(out.data()),
                                       FFTW_ESTIMATE);
            bwd = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(out.data()),
                                       in.data(), FFTW_ESTIMATE);
        }
        fftw_execute(fwd);
        for (int m = 0; m <= n / 2; ++m) out[m] /= (1.0 + nu * lam[m]) * n;
        fftw_execute(bwd);
        W.values = in;
        {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            fftw_destroy_plan(fwd);
            fftw_destroy_plan(bwd);
        }
    } else {
        std::vector<double> in(p.values);
        const int nc = n / 2 + 1;
        std::vector<std::complex<double>> out(static_cast<std::size_t>(n) * nc);
        fftw_plan fwd, bwd;
        {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            fwd = fftw_plan_dft_r2c_2d(n, n, in.data(),
                                       reinterpret_cast<fftw_complex*>(out.data()),
                                       FFTW_ESTIMATE);
            bwd = fftw_plan_dft_c2r_2d(n, n, reinterpret_cast<fftw_complex*>(out.data()),
                                       in.data(), FFTW_ESTIMATE);
        }
        fftw_execute(fwd);
        const double norm = static_cast<double>(n) * n;
        for (int my = 0; my < n; ++my)
            for (int mx = 0; mx < nc; ++mx)
                out[static_cast<std::size_t>(my) * nc + mx] /=
                    (1.0 + nu * (lam[mx] + lam[my])) * norm;
        fftw_execute(bwd);
        W.values = in;
        {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            fftw_destroy_plan(fwd);
            fftw_destroy_plan(bwd);
        }
    }

    stats.residual_linf = residual_linf(W, p, nu);
    const double p_inf = lp_norm(p, std::numeric_limits<double>::infinity());
    const double cap = tol * (1.0 + p_inf) + rounding_floor(g, nu, p_inf);
    if (stats.residual_linf > cap)
        throw NoConvergence("spectral solve residual above tolerance");
    return {std::move(W), stats};
}

std::pair<ScalarField, EllipticSolveStats> solve_sor(const ScalarField& p, double nu, double tol,
                                                     int max_iter) {
    const Grid& g = p.grid;
    const int n = g.n_cells;
    const double h = g.spacing();
    const double c = nu / (h * h);
    const double diag = 1.0 + 2.0 * g.dim * c;

    // Over-relaxation factor from the Jacobi spectral radius of the screened
    // operator (slowest mode is the constant).
    const double rho_j = 2.0 * g.dim * c / diag;
    double omega = 2.0 / (1.0 + std::sqrt(std::max(0.0, 1.0 - rho_j * rho_j)));
    omega = std::clamp(omega, 1.0, 1.95);

    ScalarField W(g);
    EllipticSolveStats stats;
    stats.method = EllipticMethod::sor;
    const double p_inf = lp_norm(p, std::numeric_limits<double>::infinity());
    const double cap = tol * (1.0 + p_inf) + rounding_floor(g, nu, p_inf);

    for (int it = 1; it <= max_iter; ++it) {
        for (int color = 0; color < 2; ++color) {
            if (g.dim == 1) {
#pragma omp parallel for schedule(static)
                for (int i = color; i < n; i += 2) {
                    const double nb = W.at(i - 1) + W.at(i + 1);
                    const double gs = (p.at(i) + c * nb) / diag;
                    W.at(i) = (1.0 - omega) * W.at(i) + omega * gs;
                }
            } else {
#pragma omp parallel for schedule(static)
                for (int j = 0; j < n; ++j) {
                    for (int i = (j + color) % 2; i < n; i += 2) {
                        const double nb =
                            W.at(i - 1, j) + W.at(i + 1, j) + W.at(i, j - 1) + W.at(i, j + 1);
                        const double gs = (p.at(i, j) + c * nb) / diag;
                        W.at(i, j) = (1.0 - omega) * W.at(i, j) + omega * gs;
                    }
                }
            }
        }
        stats.iterations = it;
        if (it % 8 == 0 || it == max_iter) {
            stats.residual_linf = residual_linf(W, p, nu);
            if (stats.residual_linf <= cap) return {std::move(W), stats};
        }
    }
    throw NoConvergence("SOR did not converge within " + std::to_string(max_iter) +
                        " sweeps (residual " + std::to_string(stats.residual_linf) + ")");
}

}  // namespace

ScalarField screened_operator(const ScalarField& W, double nu) {
    const Grid& g = W.grid;
    ScalarField r(g);
    const int n = g.n_cells;
    const double c = nu / (g.spacing() * g.spacing());
    if (g.dim == 1) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i)
            r.at(i) = W.at(i) - c * (W.at(i - 1) - 2.0 * W.at(i) + W.at(i + 1));
    } else {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                r.at(i, j) = W.at(i, j) - c * (W.at(i - 1, j) + W.at(i + 1, j) + W.at(i, j - 1) +
                                               W.at(i, j + 1) - 4.0 * W.at(i, j));
    }
    return r;
}

std::pair<ScalarField, EllipticSolveStats> solve_brinkman(const ScalarField& p, double nu,
                                                          double tol, EllipticMethod method,
                                                          int max_iter) {
    if (!(nu > 0.0)) throw InvalidParams("solve_brinkman: nu must be positive");
    if (!(tol >= 1e-13 && tol <= 1e-6))
        throw InvalidParams("solve_brinkman: tol must lie in [1e-13, 1e-6]");
    p.ensure_finite("solve_brinkman input");
    auto result = method == EllipticMethod::spectral ? solve_spectral(p, nu, tol)
                                                     : solve_sor(p, nu, tol, max_iter);
    result.first.ensure_finite("solve_brinkman output");
    return result;
}

VectorField velocity_from_potential(const ScalarField& W) {
    return central_gradient(W);
}

double empirical_log_lipschitz(const VectorField& V, int samples, std::uint64_t seed) {
    if (samples < 100) throw InvalidParams("empirical_log_lipschitz: samples >= 100 required");
    const Grid& g = V.grid;
    const int n = g.n_cells;
    const double h = g.spacing();
    const int max_lag = std::max(1, std::min(n / 2 - 1, static_cast<int>(0.5 / h)));

    auto speed_diff = [&](std::size_t a, std::size_t b) {
        double s = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            const double dd = V.comp[d][a] - V.comp[d][b];
            s += dd * dd;
        }
        return std::sqrt(s);
    };
    auto ratio_at = [&](std::size_t a, std::size_t b, double r) {
        if (r < h || r > 0.5) return 0.0;
        return speed_diff(a, b) / (-r * std::log(r));
    };

    double nhat = 0.0;

    // Systematic axis lags over a strided base set catch the worst pairs;
    // random pairs fill in the generic directions.
    const int stride = std::max(1, n / 256);
    for (int lag = 1; lag <= max_lag; lag = lag < 8 ? lag + 1 : lag * 2) {
        const double r = lag * h;
        if (g.dim == 1) {
            for (int i = 0; i < n; i += stride)
                nhat = std::max(nhat, ratio_at(g.index(i), g.index(i + lag), r));
        } else {
            for (int j = 0; j < n; j += stride)
                for (int i = 0; i < n; i += stride) {
                    nhat = std::max(nhat, ratio_at(g.index(i, j), g.index(i + lag, j), r));
                    nhat = std::max(nhat, ratio_at(g.index(i, j), g.index(i, j + lag), r));
                }
        }
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> cell(0, n - 1);
    std::uniform_int_distribution<int> lag(-max_lag, max_lag);
    for (int s = 0; s < samples; ++s) {
        if (g.dim == 1) {
            const int i = cell(rng);
            const int l = lag(rng);
            if (l == 0) continue;
            nhat = std::max(nhat, ratio_at(g.index(i), g.index(i + l), std::abs(l) * h));
        } else {
            const int i = cell(rng), j = cell(rng);
            const int lx = lag(rng), ly = lag(rng);
            if (lx == 0 && ly == 0) continue;
            const double r = std::hypot(lx * h, ly * h);
            nhat = std::max(nhat, ratio_at(g.index(i, j), g.index(i + lx, j + ly), r));
        }
    }
    return nhat;
}

}  // namespace brinkman
