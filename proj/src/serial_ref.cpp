#include "brinkman/serial_ref.hpp"

#include <algorithm>
#include <cmath>

namespace brinkman::serial {

VectorField central_gradient(const ScalarField& f) {
    const Grid& g = f.grid;
    VectorField out(g);
    const int n = g.n_cells;
    const double h = g.spacing();
    if (g.dim == 1) {
        for (int i = 0; i < n; ++i) {
            const double fp = f.values[g.index(i + 1)];
            const double fm = f.values[g.index(i - 1)];
            out.comp[0][i] = (fp - fm) / (2.0 * h);
        }
        return out;
    }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            out.comp[0][g.index(i, j)] =
                (f.values[g.index(i + 1, j)] - f.values[g.index(i - 1, j)]) / (2.0 * h);
            out.comp[1][g.index(i, j)] =
                (f.values[g.index(i, j + 1)] - f.values[g.index(i, j - 1)]) / (2.0 * h);
        }
    return out;
}

ScalarField upwind_advect(const ScalarField& f, const VectorField& v, double dt) {
    const Grid& g = f.grid;
    ScalarField out(g);
    const int n = g.n_cells;
    const double h = g.spacing();
    if (g.dim == 1) {
        for (int i = 0; i < n; ++i) {
            const double a = -v.comp[0][i];
            double flux;
            if (a >= 0.0)
                flux = a * (f.values[g.index(i)] - f.values[g.index(i - 1)]);
            else
                flux = a * (f.values[g.index(i + 1)] - f.values[g.index(i)]);
            out.values[i] = f.values[i] - dt / h * flux;
        }
        return out;
    }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const std::size_t c = g.index(i, j);
            double acc = 0.0;
            const double ax = -v.comp[0][c];
            if (ax >= 0.0)
                acc += ax * (f.values[c] - f.values[g.index(i - 1, j)]);
            else
                acc += ax * (f.values[g.index(i + 1, j)] - f.values[c]);
            const double ay = -v.comp[1][c];
            if (ay >= 0.0)
                acc += ay * (f.values[c] - f.values[g.index(i, j - 1)]);
            else
                acc += ay * (f.values[g.index(i, j + 1)] - f.values[c]);
            out.values[c] = f.values[c] - dt / h * acc;
        }
    return out;
}

double lp_norm(const ScalarField& f, double p, const ScalarField* mask) {
    const double cell = std::pow(f.grid.spacing(), f.grid.dim);
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            if (mask && mask->values[i] == 0.0) continue;
            m = std::max(m, std::abs(f.values[i]));
        }
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        if (mask && mask->values[i] == 0.0) continue;
        s += std::pow(std::abs(f.values[i]), p) * cell;
    }
    return std::pow(s, 1.0 / p);
}

ScalarField mollify_space(const ScalarField& f, double eps) {
    const Grid& g = f.grid;
    const double h = g.spacing();
    const int rad = static_cast<int>(std::floor(eps / h));
    const int n = g.n_cells;
    ScalarField out(g);
    auto weight = [&](double r2) {
        const double q = r2 / (eps * eps);
        return q >= 1.0 ? 0.0 : (1.0 - q) * (1.0 - q);
    };
    if (g.dim == 1) {
        double wsum = 0.0;
        for (int o = -rad; o <= rad; ++o) wsum += weight(double(o) * o * h * h);
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int o = -rad; o <= rad; ++o)
                s += weight(double(o) * o * h * h) * f.values[g.index(i + o)];
            out.values[i] = s / wsum;
        }
        return out;
    }
    double wsum = 0.0;
    for (int oy = -rad; oy <= rad; ++oy)
        for (int ox = -rad; ox <= rad; ++ox)
            wsum += weight((double(ox) * ox + double(oy) * oy) * h * h);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int oy = -rad; oy <= rad; ++oy)
                for (int ox = -rad; ox <= rad; ++ox)
                    s += weight((double(ox) * ox + double(oy) * oy) * h * h) *
                         f.values[g.index(i + ox, j + oy)];
            out.values[g.index(i, j)] = s / wsum;
        }
    return out;
}

}  // namespace brinkman::serial
