#pragma once

#include <string>
#include <vector>

#include "brinkman/klevel.hpp"
#include "brinkman/limit.hpp"

namespace brinkman {

/// One row of convergence diagnostics at a single (k, t).
struct ReportRow {
    double k = 0.0;
    double t = 0.0;
    double delta = 0.0;              // exclusion band half-width
    double sup_err_p = 0.0;          // ||p_k - p_inf||_inf off the band
    double sup_err_n = 0.0;
    double w2p_err = 0.0;            // W^{2,p} proxy on the fixed window
    double interface_measure = 0.0;
    double min_p_interface = 0.0;    // min p_inf on the inner interface ring
    double hausdorff_pos_set = 0.0;  // positivity sets {p_k > tol_pos} vs {theta > 0}
};

struct ConvergenceReport {
    std::vector<ReportRow> rows;
    // Populated when the k-ladder breaks monotone decrease (10% slack).
    std::vector<std::string> monotonicity_failures;
    double tol_pos = 0.0;
};

struct HarnessParams {
    double delta = -1.0;     // <= 0 picks the default 0.1 * diam(Omega_0)
    double p_norm = 2.0;
    double tol_pos_frac = 1e-3;  // positivity threshold as a fraction of P_M
};

/// Steps-to-seed distance transform (BFS over face neighbors, periodic).
/// Returns one step count per cell; seeds get 0. Empty seed set -> all -1.
std::vector<int> grid_distance_steps(const Grid& grid, const ScalarField& seed_mask);

/// Mask of cells farther than delta from the sign-change cells of theta; the
/// complement is an open neighborhood of the interface. Requires delta >= 2h
/// and at least one masked cell on each side of the interface.
ScalarField exclusion_band(const ScalarField& theta, double delta);

/// All ReportRow diagnostics for one matched pair of states.
ReportRow compare_at_time(const KLevelState& kstate, const LimitState& lstate, double delta,
                          double p_norm, double tol_pos);

/// Runs the limit once and one k-level run per entry of ks, comparing at the
/// requested times. ks must be nondecreasing with at least two entries.
ConvergenceReport convergence_sweep(const KLevelConfig& kbase, const LimitConfig& lbase,
                                    const std::vector<double>& ks,
                                    const std::vector<double>& times,
                                    const HarnessParams& params);

/// sup over the eroded initial region of |p_k - H(W_k)| at an early probe
/// time; measures how fast the reaction erases the initial profile.
double initial_layer_probe(const KLevelConfig& config, double k, double t_probe);

/// Fixed schema: k,t,delta,sup_err_p,sup_err_n,w2p_err,interface_measure,
/// min_p_interface,hausdorff_pos_set. A comment line above the header states
/// the finite-ladder caveat. Written atomically; bytes are deterministic.
void write_report_csv(const ConvergenceReport& report, const std::string& path);

}  // namespace brinkman
