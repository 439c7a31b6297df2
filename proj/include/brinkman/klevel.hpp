#pragma once

#include <string>
#include <vector>

#include "brinkman/elliptic.hpp"
#include "brinkman/grid.hpp"
#include "brinkman/growth_law.hpp"
#include "brinkman/shapes.hpp"

namespace brinkman {

/// Finite-k solver state: pressure transport-reaction coupled to the
/// screened-Poisson potential. Density is diagnostic, derived from p.
struct KLevelState {
    double t = 0.0;
    double k = 2.0;
    ScalarField p;
    ScalarField n;
    ScalarField W;
    VectorField V;
};

struct KLevelConfig {
    Grid grid;
    GrowthLaw law;
    Omega0Spec omega0;
    double k = 80.0;
    double t_end = 0.5;
    double cfl = 0.9;
    double amplitude_frac = 0.2;  // initial plateau a = amplitude_frac * P_M
    EllipticOptions elliptic;
};

/// Audit trail of a march: empirical M history plus any invariant breaches
/// (the latter must stay empty; breaches also throw).
struct RunAudit {
    std::vector<double> times;
    std::vector<double> max_speed;  // sup |V| per accepted step
    std::vector<std::string> violations;
};

struct KLevelRun {
    std::vector<KLevelState> snapshots;
    RunAudit audit;
};

/// n = ((k-1) p / k)^(1/(k-1)), with n = 0 wherever p = 0.
ScalarField density_from_pressure(const ScalarField& p, double k);
ScalarField pressure_from_density(const ScalarField& n, double k);

/// Initial data: p0 = a * smoothstep supported on Omega_0 eroded by 2h, so
/// the support keeps a positive distance to the complement.
KLevelState init_klevel(const KLevelConfig& config);

/// One split step: elliptic solve, donor-cell advection by DW over dt, exact
/// frozen-potential reaction, density refresh. First order in dt.
KLevelState step_klevel(const KLevelState& state, const GrowthLaw& law, double dt,
                        const EllipticOptions& elliptic, RunAudit* audit = nullptr);

/// Smallest distance from the cells above threshold to the box seam; the
/// runs guard that the evolving support keeps a margin of at least L/8.
double support_seam_margin(const ScalarField& f, double threshold);

/// CFL-adaptive march emitting states at the requested snapshot times.
KLevelRun run_klevel(const KLevelConfig& config, const std::vector<double>& snapshot_times);

}  // namespace brinkman
