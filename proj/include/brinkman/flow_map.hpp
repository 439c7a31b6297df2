#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "brinkman/grid.hpp"

namespace brinkman {

/// Time-indexed velocity frames with linear interpolation in time and
/// periodic multilinear interpolation in space. A single frame means a
/// steady field. Optional mollification smooths each frame on insertion.
struct VelocitySampler {
    std::vector<double> times;
    std::vector<VectorField> frames;
    double mollify_eps = 0.0;  // 0 disables; discrete fields are already Lipschitz at scale h

    /// Default smoothing radius 2h. Affects frames added afterwards.
    void enable_mollification(const Grid& g) { mollify_eps = 2.0 * g.spacing(); }

    void add_frame(double t, VectorField v);

    bool steady() const { return times.size() == 1; }
    double t_min() const { return times.front(); }
    double t_max() const { return times.back(); }
    const Grid& grid() const { return frames.front().grid; }

    /// Largest Euclidean speed over all frames (the bound M).
    double max_speed() const;

    std::array<double, 2> eval(const std::array<double, 2>& x, double t) const;

    void require_span(double s, double t) const;
};

/// Displacement form of the flow map X(., s, t): X(x) = x + displacement(x).
struct FlowMapField {
    Grid grid;
    double source_time = 0.0;
    double target_time = 0.0;
    VectorField displacement;
};

/// RK4 integration of dX/dr = V(X, r) from time s to time t (either order),
/// fixed substep min(h/(4M), |t-s|/8). The result obeys |X - x| <= M|t-s|.
std::array<double, 2> integrate_trajectory(const std::array<double, 2>& x, double s, double t,
                                           const VelocitySampler& V);

/// integrate_trajectory at every cell center.
FlowMapField flow_map(const Grid& grid, double s, double t, const VelocitySampler& V);

/// Semi-Lagrangian solution of u_t + Du . V = 0 from time 0 to time t:
/// u(x, t) = u0 evaluated at the backward-traced point X(x, t, 0).
ScalarField transport_by_characteristics(const ScalarField& u0, const VelocitySampler& V,
                                         double t);

/// Level-set transport theta_t - Dtheta . V = 0 from time 0 to time t (the
/// caller passes V = DW_infinity; the sign of the backward trace is flipped
/// internally to match). theta0 must take values in [-1, 1].
ScalarField evolve_patch(const ScalarField& theta0, const VelocitySampler& V, double t);

/// Single level-set step against a frozen velocity field.
ScalarField evolve_patch_step(const ScalarField& theta, const VectorField& V, double dt);

/// Worst Holder-bound slack over sampled cell pairs: returns
/// max over pairs of |Phi(x1) - Phi(x2)| - (|x1 - x2|^exp(-nhat T) + 4h),
/// restricted to pair separations in [h, 1/4]. Negative means the bound holds.
double holder_pair_slack(const FlowMapField& phi, double nhat, int n_pairs,
                         std::uint64_t seed = 99);

}  // namespace brinkman
