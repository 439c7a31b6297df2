#pragma once

#include <array>
#include <string>
#include <vector>

#include "brinkman/grid.hpp"

namespace brinkman {

/// Seed region Omega_0: a ball, a union of balls, or an annulus, given in
/// box coordinates. Shapes must keep clear of the periodic seam.
struct Omega0Spec {
    enum class Shape { ball, balls, annulus };
    Shape shape = Shape::ball;
    std::vector<std::array<double, 2>> centers{{0.0, 0.0}};
    std::vector<double> radii{1.0};
    double inner_radius = 0.0;  // annulus only

    bool empty() const { return radii.empty() || radii[0] <= 0.0; }
};

/// Signed distance to the boundary: positive inside Omega_0, negative outside.
double omega0_signed_distance(const Omega0Spec& spec, const Grid& grid,
                              const std::array<double, 2>& x);

/// Smallest distance from Omega_0 to the box seam (the 0/L faces).
double omega0_seam_margin(const Omega0Spec& spec, const Grid& grid);

/// Diameter proxy used for default band widths: twice the largest radius, or
/// the largest pairwise extent for unions.
double omega0_diameter(const Omega0Spec& spec);

ScalarField signed_distance_field(const Omega0Spec& spec, const Grid& grid);

}  // namespace brinkman
