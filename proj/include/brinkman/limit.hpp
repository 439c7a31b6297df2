#pragma once

#include <utility>
#include <vector>

#include "brinkman/elliptic.hpp"
#include "brinkman/flow_map.hpp"
#include "brinkman/grid.hpp"
#include "brinkman/growth_law.hpp"
#include "brinkman/klevel.hpp"
#include "brinkman/shapes.hpp"

namespace brinkman {

/// Incompressible-limit state: level set theta in [-1,1] whose positive set
/// is the tumor region, potential from the nonlinear fixed point, pressure
/// p = H(W) on the region and 0 outside, indicator density.
struct LimitState {
    double t = 0.0;
    ScalarField theta;
    ScalarField W;
    ScalarField p;
    ScalarField n;
    VectorField V;
};

struct FixedPointStats {
    int sweeps = 0;
    double final_delta = 0.0;
    double max_ratio = 0.0;  // worst successive delta ratio past the first sweep
};

struct LimitConfig {
    Grid grid;
    GrowthLaw law;
    Omega0Spec omega0;
    double t_end = 0.5;
    double cfl = 0.9;  // frame policy for the level-set step
    double fp_tol = 1e-10;
    EllipticOptions elliptic;
};

struct LimitRun {
    std::vector<LimitState> snapshots;
    RunAudit audit;
};

struct WInfinityResult {
    ScalarField W;
    ScalarField p;
    FixedPointStats stats;
};

/// Fixed-point iteration W <- solve_brinkman(H(W) mask) until the sup change
/// drops below tol. Contraction factor is bounded by the slope of H, which
/// stays below 1. Throws NoContraction if the deltas stop decreasing for 10
/// consecutive sweeps.
WInfinityResult solve_w_infinity(const ScalarField& mask, const GrowthLaw& law, double tol,
                                 const ScalarField& W_guess,
                                 const EllipticOptions& elliptic = {});

/// theta = signed distance to the boundary of Omega_0 clamped to [-1, 1];
/// potential from a cold-started fixed point.
LimitState init_limit(const Omega0Spec& omega0, const GrowthLaw& law, const Grid& grid,
                      double fp_tol = 1e-10, const EllipticOptions& elliptic = {});

/// Transport theta one step by the current velocity, then re-solve the fixed
/// point on the new region, warm-started from the previous potential.
LimitState step_limit(const LimitState& state, const GrowthLaw& law, double dt,
                      double fp_tol = 1e-10, const EllipticOptions& elliptic = {});

/// Cells on the outer side of the zero level set (theta <= 0 with a positive
/// face neighbor) and their total measure, count * h^dim.
std::pair<ScalarField, double> interface_cells(const ScalarField& theta);

LimitRun run_limit(const LimitConfig& config, const std::vector<double>& snapshot_times);

}  // namespace brinkman
