#pragma once

#include <cstdint>
#include <utility>

#include "brinkman/grid.hpp"

namespace brinkman {

enum class EllipticMethod : std::uint8_t { spectral, sor };

struct EllipticSolveStats {
    int iterations = 0;
    double residual_linf = 0.0;
    EllipticMethod method = EllipticMethod::spectral;
};

struct EllipticOptions {
    EllipticMethod method = EllipticMethod::spectral;
    double tol = 1e-12;
    int max_iter = 100000;
};

/// Applies the discrete operator -nu Lap_h W + W (3/5-point stencil).
ScalarField screened_operator(const ScalarField& W, double nu);

/// Solves -nu Lap_h W + W = p on the periodic grid. The spectral backend is
/// diagonal in the discrete Fourier basis using the stencil symbol, so both
/// backends target the identical discrete problem. Discrete residual on exit
/// satisfies ||A W - p||_inf <= tol (1 + ||p||_inf) plus the double-precision
/// rounding floor of the stencil, O(eps nu / h^2).
std::pair<ScalarField, EllipticSolveStats> solve_brinkman(const ScalarField& p, double nu,
                                                          double tol,
                                                          EllipticMethod method =
                                                              EllipticMethod::spectral,
                                                          int max_iter = 100000);

/// V = DW by centered differences; the caller reads max_speed() off the
/// result for CFL budgeting.
VectorField velocity_from_potential(const ScalarField& W);

/// Empirical log-Lipschitz modulus constant: max over sampled cell pairs with
/// h <= |x-y| <= 1/2 of |V(x)-V(y)| / (|x-y| |ln|x-y||). Deterministic for a
/// fixed seed.
double empirical_log_lipschitz(const VectorField& V, int samples, std::uint64_t seed = 1234);

}  // namespace brinkman
