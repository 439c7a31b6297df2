#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "brinkman/grid.hpp"

namespace brinkman::test {

inline ScalarField random_field(const Grid& g, std::uint64_t seed, double lo = 0.0,
                                double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    ScalarField f(g);
    for (double& v : f.values) v = u(rng);
    return f;
}

inline ScalarField field_from_fn(const Grid& g, const std::function<double(double, double)>& fn) {
    ScalarField f(g);
    if (g.dim == 1) {
        for (int i = 0; i < g.n_cells; ++i) f.at(i) = fn(g.center(i), 0.0);
    } else {
        for (int j = 0; j < g.n_cells; ++j)
            for (int i = 0; i < g.n_cells; ++i) f.at(i, j) = fn(g.center(i), g.center(j));
    }
    return f;
}

inline double linf_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

inline double linf_diff_vec(const VectorField& a, const VectorField& b) {
    double m = 0.0;
    for (int d = 0; d < a.grid.dim; ++d)
        for (std::size_t i = 0; i < a.comp[d].size(); ++i)
            m = std::max(m, std::abs(a.comp[d][i] - b.comp[d][i]));
    return m;
}

/// Smooth periodic bump centered at c with width w (1D).
inline double bump(double x, double c, double w, double L) {
    double d = std::fmod(x - c, L);
    if (d > 0.5 * L) d -= L;
    if (d < -0.5 * L) d += L;
    const double q = d / w;
    return std::exp(-q * q);
}

}  // namespace brinkman::test
