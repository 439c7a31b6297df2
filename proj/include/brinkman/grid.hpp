#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "brinkman/errors.hpp"

namespace brinkman {

/// Uniform periodic grid over the box [0,L]^dim, dim = 1 or 2.
/// Cell centers sit at (i + 1/2)h with h = L / n_cells.
struct Grid {
    int dim = 1;
    double extent = 1.0;  // box side length L
    int n_cells = 8;      // cells per axis

    Grid() = default;
    Grid(int dim_, int n_cells_, double extent_);

    double spacing() const { return extent / n_cells; }
    std::size_t size() const {
        return dim == 1 ? static_cast<std::size_t>(n_cells)
                        : static_cast<std::size_t>(n_cells) * n_cells;
    }
    double center(int i) const { return (i + 0.5) * spacing(); }

    int wrap(int i) const {
        int m = i % n_cells;
        return m < 0 ? m + n_cells : m;
    }
    std::size_t index(int ix) const { return static_cast<std::size_t>(wrap(ix)); }
    std::size_t index(int ix, int iy) const {
        return static_cast<std::size_t>(wrap(iy)) * n_cells + wrap(ix);
    }

    /// Shortest periodic displacement a-b on one axis.
    double periodic_delta(double a, double b) const;
    /// Euclidean distance between points under periodic wrap.
    double periodic_distance(const std::array<double, 2>& a,
                             const std::array<double, 2>& b) const;

    bool operator==(const Grid& o) const {
        return dim == o.dim && n_cells == o.n_cells && extent == o.extent;
    }
};

/// Real values, one per cell, row-major (x fastest).
struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : grid(g), values(g.size(), fill) {}

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    double& at(int ix) { return values[grid.index(ix)]; }
    double at(int ix) const { return values[grid.index(ix)]; }
    double& at(int ix, int iy) { return values[grid.index(ix, iy)]; }
    double at(int ix, int iy) const { return values[grid.index(ix, iy)]; }

    double min() const;
    double max() const;

    /// Throws BoundViolation if any value is NaN or Inf.
    void ensure_finite(const char* context) const;
};

/// dim velocity components per cell, stored component-major.
struct VectorField {
    Grid grid;
    std::array<std::vector<double>, 2> comp;

    VectorField() = default;
    explicit VectorField(const Grid& g) : grid(g) {
        for (int d = 0; d < g.dim; ++d) comp[d].assign(g.size(), 0.0);
    }

    /// Largest Euclidean magnitude over cells (the M of the velocity bound).
    double max_speed() const;
    /// Largest per-cell sum of |components|; this is the CFL norm.
    double max_speed_l1() const;

    void ensure_finite(const char* context) const;
};

/// Second-order centered differences with periodic wraparound.
VectorField central_gradient(const ScalarField& f);

/// Donor-cell upwind update of f_t - v.Df = 0 over dt. Monotone under the
/// CFL bound dt <= 0.9 h / max|v| (per-cell l1 norm); throws CflViolation
/// when the bound fails.
ScalarField upwind_advect(const ScalarField& f, const VectorField& v, double dt);

constexpr double kCflLimit = 0.9;

/// (sum_masked |f|^p h^dim)^(1/p), or the masked max for p = infinity.
/// mask, if given, must live on the same grid and select at least one cell.
double lp_norm(const ScalarField& f, double p, const ScalarField* mask = nullptr);

/// Convolution with a compactly supported, nonnegative bump of radius eps,
/// discrete mass renormalized to 1. Requires eps >= h.
ScalarField mollify_space(const ScalarField& f, double eps);

/// Periodic multilinear interpolation at an arbitrary point.
double interpolate(const ScalarField& f, const std::array<double, 2>& x);
std::array<double, 2> interpolate(const VectorField& v, const std::array<double, 2>& x);

ScalarField field_diff(const ScalarField& a, const ScalarField& b);

/// Binary dump: magic "BLF1", dim u32, n_cells u32, extent f64, then
/// row-major f64 values. Little-endian, written atomically (temp + rename).
void write_field_dump(const ScalarField& f, const std::string& path);
ScalarField read_field_dump(const std::string& path);

/// One line per cell: coordinates, value. Atomic like the binary dump.
void write_field_csv(const ScalarField& f, const std::string& path);

}  // namespace brinkman
