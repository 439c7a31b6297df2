#include "brinkman/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace brinkman {

namespace {
double dist_to_center(const Grid& g, const std::array<double, 2>& x,
                      const std::array<double, 2>& c) {
    return g.periodic_distance(x, c);
}
}  // namespace

double omega0_signed_distance(const Omega0Spec& spec, const Grid& grid,
                              const std::array<double, 2>& x) {
    if (spec.empty()) return -grid.extent;
    switch (spec.shape) {
        case Omega0Spec::Shape::ball:
            return spec.radii[0] - dist_to_center(grid, x, spec.centers[0]);
        case Omega0Spec::Shape::balls: {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t b = 0; b < spec.centers.size(); ++b)
                best = std::max(best, spec.radii[b] - dist_to_center(grid, x, spec.centers[b]));
            return best;
        }
        case Omega0Spec::Shape::annulus: {
            const double r = dist_to_center(grid, x, spec.centers[0]);
            return std::min(spec.radii[0] - r, r - spec.inner_radius);
        }
    }
    return -grid.extent;
}

double omega0_seam_margin(const Omega0Spec& spec, const Grid& grid) {
    if (spec.empty()) return grid.extent;
    double margin = std::numeric_limits<double>::infinity();
    const std::size_t nb = spec.shape == Omega0Spec::Shape::annulus ? 1 : spec.centers.size();
    for (std::size_t b = 0; b < nb; ++b) {
        const double R = spec.radii[b];
        for (int d = 0; d < grid.dim; ++d) {
            const double c = spec.centers[b][d];
            margin = std::min(margin, c - R);
            margin = std::min(margin, grid.extent - c - R);
        }
    }
    return margin;
}

double omega0_diameter(const Omega0Spec& spec) {
    if (spec.empty()) return 0.0;
    if (spec.shape != Omega0Spec::Shape::balls) return 2.0 * spec.radii[0];
    double diam = 0.0;
    for (std::size_t a = 0; a < spec.centers.size(); ++a) {
        diam = std::max(diam, 2.0 * spec.radii[a]);
        for (std::size_t b = a + 1; b < spec.centers.size(); ++b) {
            double gap = 0.0;
            for (int d = 0; d < 2; ++d) {
                const double dd = spec.centers[a][d] - spec.centers[b][d];
                gap += dd * dd;
            }
            diam = std::max(diam, std::sqrt(gap) + spec.radii[a] + spec.radii[b]);
        }
    }
    return diam;
}

ScalarField signed_distance_field(const Omega0Spec& spec, const Grid& grid) {
    ScalarField out(grid);
    const int n = grid.n_cells;
    if (grid.dim == 1) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i)
            out.at(i) = omega0_signed_distance(spec, grid, {grid.center(i), 0.0});
    } else {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                out.at(i, j) =
                    omega0_signed_distance(spec, grid, {grid.center(i), grid.center(j)});
    }
    return out;
}

}  // namespace brinkman
