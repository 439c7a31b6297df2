#include "brinkman/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include "brinkman/io_util.hpp"

namespace brinkman {

Grid::Grid(int dim_, int n_cells_, double extent_)
    : dim(dim_), extent(extent_), n_cells(n_cells_) {
    if (dim != 1 && dim != 2)
        throw InvalidParams("Grid: dim must be 1 or 2, got " + std::to_string(dim));
    if (n_cells < 8)
        throw InvalidParams("Grid: n_cells must be >= 8, got " + std::to_string(n_cells));
    if (!(extent > 0.0) || !std::isfinite(extent))
        throw InvalidParams("Grid: extent must be positive");
}

double Grid::periodic_delta(double a, double b) const {
    double d = std::fmod(a - b, extent);
    if (d > 0.5 * extent) d -= extent;
    if (d < -0.5 * extent) d += extent;
    return d;
}

double Grid::periodic_distance(const std::array<double, 2>& a,
                               const std::array<double, 2>& b) const {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
        double dd = periodic_delta(a[d], b[d]);
        s += dd * dd;
    }
    return std::sqrt(s);
}

double ScalarField::min() const {
    double m = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(min : m)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(values.size()); ++i)
        m = std::min(m, values[i]);
    return m;
}

double ScalarField::max() const {
    double m = -std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(max : m)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(values.size()); ++i)
        m = std::max(m, values[i]);
    return m;
}

void ScalarField::ensure_finite(const char* context) const {
    for (double v : values)
        if (!std::isfinite(v))
            throw BoundViolation(std::string("non-finite field value in ") + context);
}

void VectorField::ensure_finite(const char* context) const {
    for (int d = 0; d < grid.dim; ++d)
        for (double v : comp[d])
            if (!std::isfinite(v))
                throw BoundViolation(std::string("non-finite velocity in ") + context);
}

double VectorField::max_speed() const {
    const std::size_t n = grid.size();
    double m = 0.0;
    if (grid.dim == 1) {
#pragma omp parallel for schedule(static) reduction(max : m)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
            m = std::max(m, std::abs(comp[0][i]));
    } else {
#pragma omp parallel for schedule(static) reduction(max : m)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
            m = std::max(m, std::hypot(comp[0][i], comp[1][i]));
    }
    return m;
}

double VectorField::max_speed_l1() const {
    const std::size_t n = grid.size();
    double m = 0.0;
    if (grid.dim == 1) return max_speed();
#pragma omp parallel for schedule(static) reduction(max : m)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        m = std::max(m, std::abs(comp[0][i]) + std::abs(comp[1][i]));
    return m;
}

VectorField central_gradient(const ScalarField& f) {
    const Grid& g = f.grid;
    VectorField out(g);
    const double inv2h = 1.0 / (2.0 * g.spacing());
    const int n = g.n_cells;
    if (g.dim == 1) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i)
            out.comp[0][i] = (f.at(i + 1) - f.at(i - 1)) * inv2h;
    } else {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const std::size_t c = g.index(i, j);
                out.comp[0][c] = (f.at(i + 1, j) - f.at(i - 1, j)) * inv2h;
                out.comp[1][c] = (f.at(i, j + 1) - f.at(i, j - 1)) * inv2h;
            }
        }
    }
    return out;
}

ScalarField upwind_advect(const ScalarField& f, const VectorField& v, double dt) {
    const Grid& g = f.grid;
    if (!(v.grid == g)) throw GridMismatch("upwind_advect: field/velocity grids differ");
    const double h = g.spacing();
    const double vmax = v.max_speed_l1();
    if (dt * vmax > kCflLimit * h)
        throw CflViolation("upwind_advect: dt * max|v| = " + std::to_string(dt * vmax) +
                           " exceeds " + std::to_string(kCflLimit) + " * h = " +
                           std::to_string(kCflLimit * h));
    ScalarField out(g);
    const double r = dt / h;
    const int n = g.n_cells;
    // Solves f_t - v.Df = 0: the effective advection velocity is a = -v.
    if (g.dim == 1) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            const double a = -v.comp[0][i];
            const double ap = std::max(a, 0.0), am = std::min(a, 0.0);
            out.at(i) = f.at(i) - r * (ap * (f.at(i) - f.at(i - 1)) +
                                       am * (f.at(i + 1) - f.at(i)));
        }
    } else {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const std::size_t c = g.index(i, j);
                const double ax = -v.comp[0][c], ay = -v.comp[1][c];
                const double axp = std::max(ax, 0.0), axm = std::min(ax, 0.0);
                const double ayp = std::max(ay, 0.0), aym = std::min(ay, 0.0);
                out.values[c] =
                    f.values[c] -
                    r * (axp * (f.at(i, j) - f.at(i - 1, j)) +
                         axm * (f.at(i + 1, j) - f.at(i, j)) +
                         ayp * (f.at(i, j) - f.at(i, j - 1)) +
                         aym * (f.at(i, j + 1) - f.at(i, j)));
            }
        }
    }
    return out;
}

double lp_norm(const ScalarField& f, double p, const ScalarField* mask) {
    const Grid& g = f.grid;
    if (mask && !(mask->grid == g)) throw GridMismatch("lp_norm: mask grid differs");
    if (!(p >= 1.0)) throw InvalidParams("lp_norm: p must be >= 1 or infinity");
    const std::size_t n = g.size();

    std::size_t selected = 0;
    if (mask) {
        for (std::size_t i = 0; i < n; ++i)
            if ((*mask)[i] != 0.0) ++selected;
        if (selected == 0) throw EmptyMask("lp_norm: mask selects no cells");
    }

    if (std::isinf(p)) {
        double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            if (mask && (*mask)[i] == 0.0) continue;
            m = std::max(m, std::abs(f[i]));
        }
        return m;
    }

    // Fixed-chunk partial sums combined in index order keep the result
    // bit-identical across thread counts.
    const std::size_t chunk = 4096;
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    std::vector<double> partial(n_chunks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n_chunks); ++c) {
        const std::size_t lo = c * chunk, hi = std::min(n, lo + chunk);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            if (mask && (*mask)[i] == 0.0) continue;
            s += std::pow(std::abs(f[i]), p);
        }
        partial[c] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    const double cell = std::pow(g.spacing(), g.dim);
    return std::pow(total * cell, 1.0 / p);
}

ScalarField mollify_space(const ScalarField& f, double eps) {
    const Grid& g = f.grid;
    const double h = g.spacing();
    if (eps < h) throw InvalidParams("mollify_space: eps must be >= h");
    const int rad = static_cast<int>(std::floor(eps / h));
    const int n = g.n_cells;

    // Polynomial bump (1 - (r/eps)^2)^2 on |r| < eps, sampled at cell offsets
    // and renormalized so the discrete kernel has mass exactly 1.
    auto bump = [&](double r2) {
        const double q = r2 / (eps * eps);
        if (q >= 1.0) return 0.0;
        const double w = 1.0 - q;
        return w * w;
    };

    ScalarField out(g);
    if (g.dim == 1) {
        std::vector<double> w(2 * rad + 1);
        double wsum = 0.0;
        for (int o = -rad; o <= rad; ++o) {
            w[o + rad] = bump(double(o) * o * h * h);
            wsum += w[o + rad];
        }
        for (double& x : w) x /= wsum;
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int o = -rad; o <= rad; ++o) s += w[o + rad] * f.at(i + o);
            out.at(i) = s;
        }
    } else {
        const int side = 2 * rad + 1;
        std::vector<double> w(side * side);
        double wsum = 0.0;
        for (int oy = -rad; oy <= rad; ++oy)
            for (int ox = -rad; ox <= rad; ++ox) {
                const double val = bump((double(ox) * ox + double(oy) * oy) * h * h);
                w[(oy + rad) * side + (ox + rad)] = val;
                wsum += val;
            }
        for (double& x : w) x /= wsum;
#pragma omp parallel for schedule(static)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                double s = 0.0;
                for (int oy = -rad; oy <= rad; ++oy)
                    for (int ox = -rad; ox <= rad; ++ox)
                        s += w[(oy + rad) * side + (ox + rad)] * f.at(i + ox, j + oy);
                out.at(i, j) = s;
            }
    }
    return out;
}

double interpolate(const ScalarField& f, const std::array<double, 2>& x) {
    const Grid& g = f.grid;
    const double h = g.spacing();
    if (g.dim == 1) {
        const double u = x[0] / h - 0.5;
        const int i0 = static_cast<int>(std::floor(u));
        const double w = u - i0;
        return (1.0 - w) * f.at(i0) + w * f.at(i0 + 1);
    }
    const double u = x[0] / h - 0.5, v = x[1] / h - 0.5;
    const int i0 = static_cast<int>(std::floor(u));
    const int j0 = static_cast<int>(std::floor(v));
    const double wx = u - i0, wy = v - j0;
    return (1.0 - wx) * (1.0 - wy) * f.at(i0, j0) + wx * (1.0 - wy) * f.at(i0 + 1, j0) +
           (1.0 - wx) * wy * f.at(i0, j0 + 1) + wx * wy * f.at(i0 + 1, j0 + 1);
}

std::array<double, 2> interpolate(const VectorField& v, const std::array<double, 2>& x) {
    const Grid& g = v.grid;
    std::array<double, 2> out{0.0, 0.0};
    const double h = g.spacing();
    if (g.dim == 1) {
        const double u = x[0] / h - 0.5;
        const int i0 = static_cast<int>(std::floor(u));
        const double w = u - i0;
        const std::size_t a = g.index(i0), b = g.index(i0 + 1);
        out[0] = (1.0 - w) * v.comp[0][a] + w * v.comp[0][b];
        return out;
    }
    const double u = x[0] / h - 0.5, vv = x[1] / h - 0.5;
    const int i0 = static_cast<int>(std::floor(u));
    const int j0 = static_cast<int>(std::floor(vv));
    const double wx = u - i0, wy = vv - j0;
    const std::size_t c00 = g.index(i0, j0), c10 = g.index(i0 + 1, j0);
    const std::size_t c01 = g.index(i0, j0 + 1), c11 = g.index(i0 + 1, j0 + 1);
    for (int d = 0; d < 2; ++d)
        out[d] = (1.0 - wx) * (1.0 - wy) * v.comp[d][c00] + wx * (1.0 - wy) * v.comp[d][c10] +
                 (1.0 - wx) * wy * v.comp[d][c01] + wx * wy * v.comp[d][c11];
    return out;
}

ScalarField field_diff(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid == b.grid)) throw GridMismatch("field_diff: grids differ");
    ScalarField out(a.grid);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(a.values.size()); ++i)
        out[i] = a[i] - b[i];
    return out;
}

namespace {
constexpr char kMagic[4] = {'B', 'L', 'F', '1'};
}

void write_field_dump(const ScalarField& f, const std::string& path) {
    atomic_write(path, [&](std::ostream& os) {
        os.write(kMagic, 4);
        const std::uint32_t dim = static_cast<std::uint32_t>(f.grid.dim);
        const std::uint32_t nc = static_cast<std::uint32_t>(f.grid.n_cells);
        const double extent = f.grid.extent;
        os.write(reinterpret_cast<const char*>(&dim), 4);
        os.write(reinterpret_cast<const char*>(&nc), 4);
        os.write(reinterpret_cast<const char*>(&extent), 8);
        os.write(reinterpret_cast<const char*>(f.values.data()),
                 static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    });
}

ScalarField read_field_dump(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open field dump: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("bad magic in field dump: " + path);
    std::uint32_t dim = 0, nc = 0;
    double extent = 0.0;
    is.read(reinterpret_cast<char*>(&dim), 4);
    is.read(reinterpret_cast<char*>(&nc), 4);
    is.read(reinterpret_cast<char*>(&extent), 8);
    if (!is) throw IoError("truncated field dump header: " + path);
    Grid g(static_cast<int>(dim), static_cast<int>(nc), extent);
    ScalarField f(g);
    is.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!is) throw IoError("truncated field dump payload: " + path);
    return f;
}

void write_field_csv(const ScalarField& f, const std::string& path) {
    atomic_write(path, [&](std::ostream& os) {
        char line[128];
        if (f.grid.dim == 1) {
            os << "x,value\n";
            for (int i = 0; i < f.grid.n_cells; ++i) {
                std::snprintf(line, sizeof line, "%.17g,%.17g\n", f.grid.center(i), f.at(i));
                os << line;
            }
        } else {
            os << "x,y,value\n";
            for (int j = 0; j < f.grid.n_cells; ++j)
                for (int i = 0; i < f.grid.n_cells; ++i) {
                    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", f.grid.center(i),
                                  f.grid.center(j), f.at(i, j));
                    os << line;
                }
        }
    });
}

}  // namespace brinkman
