#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "brinkman/errors.hpp"

namespace brinkman {

/// Growth law G: pressure -> rate, decreasing with slope at most -alpha_bar
/// and vanishing at the homeostatic pressure P_M. The rescaled solvers fix
/// nu = 1; the field is kept for the pre-rescaling form.
struct GrowthLaw {
    enum class Kind { linear, custom_table, custom_fn };

    Kind kind = Kind::linear;
    double alpha_bar = 1.0;
    double P_M = 1.0;
    double nu = 1.0;

    // custom_table: monotone samples with a monotone cubic interpolant.
    std::vector<double> table_p;
    std::vector<double> table_G;
    std::vector<double> table_d;  // interpolant derivatives at the knots

    // custom_fn: direct callables (used by tests for perturbed laws).
    std::function<double(double)> fn_G;
    std::function<double(double)> fn_Gp;

    double G(double p) const;
    double G_prime(double p) const;

    /// Stationary value of the reaction at full potential: H(P_M) = P_M.
    double homeostatic_pressure() const { return P_M; }

    /// Checks the structural invariants on a 1024-point grid over [0, P_M]:
    /// G'(u) <= -alpha_bar, G(P_M) = 0 to 1e-12, G(0) >= alpha_bar * P_M.
    void validate() const;

    static GrowthLaw linear(double alpha_bar, double P_M, double nu = 1.0);
    static GrowthLaw from_table(std::vector<double> p_samples, std::vector<double> g_samples,
                                double alpha_bar, double P_M, double nu = 1.0);
    static GrowthLaw custom(std::function<double(double)> g, std::function<double(double)> gp,
                            double alpha_bar, double P_M, double nu = 1.0);

    std::map<std::string, std::string> to_config() const;
    static GrowthLaw from_config(const std::map<std::string, std::string>& kv);
};

/// Frozen-potential reaction written as a logistic law:
/// p' = k a p (1 - p/cap) with a = W + alpha_bar P_M, cap = a/(1+alpha_bar).
struct LogisticParams {
    double a = 0.0;
    double cap = 0.0;
    double k = 2.0;
};

GrowthLaw make_linear_growth(double alpha_bar, double P_M);

LogisticParams logistic_params(const GrowthLaw& law, double W, double k);

/// The unique u with u - nu G(u) = w, by safeguarded Newton/bisection to
/// 1e-12 residual. Nondecreasing in w with slope in [0,1).
double H_inverse(const GrowthLaw& law, double w);

/// Closed-form solution of omega_t = omega (alpha_bar P_M - (1+alpha_bar) omega),
/// omega(xi, 0) = xi. Equilibrium a_bar = alpha_bar P_M / (1+alpha_bar).
double omega_exact(const GrowthLaw& law, double xi, double t);

/// Exact solution at time dt of p' = k p (W + alpha_bar P_M - (1+alpha_bar) p)
/// for the linear law; other laws route to a substepped RK4 fallback on
/// p' = k p (W - p + G(p)).
double exact_reaction_step(const GrowthLaw& law, double p0, double W, double k, double dt);

struct ReactionBounds {
    double lower = 0.0;
    double value = 0.0;
    double upper = 0.0;
};

/// Returns (u(aP_M - (1+a)u), u(W - u + G(u)), u(1+a)P_M) and verifies the
/// sandwich, throwing BoundViolation when it fails.
ReactionBounds reaction_bounds_check(const GrowthLaw& law, double u, double W);

/// sigma(r) = N r |ln r| on [0,1), with sigma(0) = 0.
double sigma_log_lipschitz(double N, double r);

/// theta_alpha(r) = (e^{-1/N}/alpha) / |ln sqrt(alpha^2 + r^2)|, defined while
/// the log argument stays below 1.
double theta_alpha(double N, double alpha, double r);

}  // namespace brinkman
