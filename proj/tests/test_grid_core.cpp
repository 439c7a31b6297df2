#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <limits>

#include "brinkman/grid.hpp"
#include "brinkman/serial_ref.hpp"
#include "test_util.hpp"

using namespace brinkman;
using namespace brinkman::test;

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(Grid(3, 64, 1.0), InvalidParams);
    CHECK_THROWS_AS(Grid(1, 4, 1.0), InvalidParams);
    CHECK_THROWS_AS(Grid(1, 64, -1.0), InvalidParams);
    const Grid g(2, 16, 4.0);
    CHECK(g.spacing() == doctest::Approx(0.25));
    CHECK(g.center(0) == doctest::Approx(0.125));
    CHECK(g.size() == 256);
}

TEST_CASE("central_gradient: constant field gives zero") {
    const Grid g(1, 64, 2.0);
    const ScalarField f(g, 3.7);
    const VectorField grad = central_gradient(f);
    for (double v : grad.comp[0]) CHECK(v == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("central_gradient: manufactured sine derivative, second order") {
    const double L = 2.0;
    double prev_err = 0.0;
    for (int level = 0; level < 3; ++level) {
        const int n = 64 << level;
        const Grid g(1, n, L);
        const ScalarField f =
            field_from_fn(g, [&](double x, double) { return std::sin(2.0 * M_PI * x / L); });
        const VectorField grad = central_gradient(f);
        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            const double exact = 2.0 * M_PI / L * std::cos(2.0 * M_PI * g.center(i) / L);
            err = std::max(err, std::abs(grad.comp[0][i] - exact));
        }
        CHECK(err < 50.0 / (n * double(n)));  // C h^2
        if (level > 0) {
            const double ratio = prev_err / err;
            CHECK(ratio > 3.0);
            CHECK(ratio < 5.0);
        }
        prev_err = err;
    }
}

TEST_CASE("central_gradient: windowed 2D ramp against one-sided oracle") {
    const Grid g(2, 64, 1.0);
    const double h = g.spacing();
    // x-ramp times a window that kills the seam; interior gradient ~ slope.
    auto window = [&](double x) {
        const double s = std::sin(M_PI * x / g.extent);
        return s * s;
    };
    const ScalarField f = field_from_fn(g, [&](double x, double y) {
        return x * window(x) * window(y);
    });
    const VectorField grad = central_gradient(f);
    // Independent one-sided oracle, first order.
    double worst = 0.0;
    for (int j = 8; j < 56; ++j)
        for (int i = 8; i < 56; ++i) {
            const double one_sided = (f.at(i + 1, j) - f.at(i, j)) / h;
            worst = std::max(worst, std::abs(grad.comp[0][g.index(i, j)] - one_sided));
        }
    CHECK(worst < 0.5);  // one-sided is O(h); agreement at that order
    // And the interior gradient tracks the analytic slope of the product.
    const int mid = 32;
    const double x = g.center(mid), y = g.center(mid);
    const double exact = window(x) * window(y) +
                         x * window(y) * 2.0 * std::sin(M_PI * x) * std::cos(M_PI * x) * M_PI;
    CHECK(grad.comp[0][g.index(mid, mid)] ==
          doctest::Approx(exact).epsilon(0.02));
}

TEST_CASE("upwind_advect: zero velocity leaves the field unchanged") {
    const Grid g(1, 128, 2.0);
    const ScalarField f = random_field(g, 11);
    const VectorField v(g);
    const ScalarField out = upwind_advect(f, v, 10.0);
    CHECK(linf_diff(out, f) == 0.0);
}

TEST_CASE("upwind_advect: constant velocity matches exact translation f(x + v dt)") {
    const Grid g(1, 256, 4.0);
    const double h = g.spacing();
    const ScalarField f =
        field_from_fn(g, [&](double x, double) { return bump(x, 2.0, 0.4, g.extent); });
    VectorField v(g);
    for (double& c : v.comp[0]) c = 1.0;
    const double dt = 0.9 * h;  // largest step the CFL precondition allows
    const ScalarField out = upwind_advect(f, v, dt);
    // f_t - v f_x = 0 transports the bump by -v dt.
    const ScalarField oracle =
        field_from_fn(g, [&](double x, double) { return bump(x + dt, 2.0, 0.4, g.extent); });
    double slope = 0.0;
    for (int i = 0; i < g.n_cells; ++i)
        slope = std::max(slope, std::abs(f.at(i + 1) - f.at(i)) / h);
    CHECK(linf_diff(out, oracle) < slope * h);  // one-cell tolerance
}

TEST_CASE("upwind_advect: CFL precondition is enforced") {
    const Grid g(1, 64, 1.0);
    const ScalarField f = random_field(g, 3);
    VectorField v(g);
    for (double& c : v.comp[0]) c = 1.0;
    CHECK_THROWS_AS(upwind_advect(f, v, 2.0 * g.spacing()), CflViolation);
}

TEST_CASE("upwind_advect: range and ordering are preserved (monotone scheme)") {
    const Grid g(2, 32, 1.0);
    const double h = g.spacing();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const ScalarField f = random_field(g, 100 + seed, -1.0, 2.0);
        ScalarField gfield = random_field(g, 200 + seed, -1.0, 2.0);
        for (std::size_t i = 0; i < gfield.values.size(); ++i)
            gfield.values[i] = std::max(gfield.values[i], f.values[i]);  // f <= g cellwise
        VectorField v(g);
        std::mt19937_64 rng(300 + seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int d = 0; d < 2; ++d)
            for (double& c : v.comp[d]) c = u(rng);
        const double dt = 0.9 * h / v.max_speed_l1();
        const ScalarField af = upwind_advect(f, v, dt);
        const ScalarField ag = upwind_advect(gfield, v, dt);
        CHECK(af.min() >= f.min() - 1e-12);
        CHECK(af.max() <= f.max() + 1e-12);
        for (std::size_t i = 0; i < af.values.size(); ++i)
            CHECK(af.values[i] <= ag.values[i] + 1e-12);
    }
}

TEST_CASE("lp_norm: measure of the domain and masked cases") {
    const Grid g(1, 128, 2.0);
    const ScalarField ones(g, 1.0);
    CHECK(lp_norm(ones, 1.0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(lp_norm(ones, std::numeric_limits<double>::infinity()) == doctest::Approx(1.0));

    ScalarField mask(g);
    CHECK_THROWS_AS(lp_norm(ones, 2.0, &mask), EmptyMask);
    mask.at(5) = 1.0;
    CHECK(lp_norm(ones, std::numeric_limits<double>::infinity(), &mask) == doctest::Approx(1.0));
}

TEST_CASE("lp_norm: matches the direct-summation serial oracle") {
    const Grid g(2, 48, 3.0);
    const ScalarField f = random_field(g, 17, -2.0, 2.0);
    for (double p : {1.0, 2.0, 4.0}) {
        const double mine = lp_norm(f, p);
        const double oracle = serial::lp_norm(f, p);
        CHECK(mine == doctest::Approx(oracle).epsilon(1e-13));
    }
}

TEST_CASE("mollify_space: constants are exact (kernel mass 1)") {
    const Grid g(2, 32, 1.0);
    const ScalarField f(g, 2.5);
    const ScalarField out = mollify_space(f, 4.0 * g.spacing());
    CHECK(linf_diff(out, f) < 1e-12);
}

TEST_CASE("mollify_space: step becomes a monotone ramp, matches direct-sum oracle") {
    const Grid g(1, 256, 4.0);
    const double h = g.spacing();
    const ScalarField f =
        field_from_fn(g, [&](double x, double) { return x > 1.0 && x < 3.0 ? 1.0 : 0.0; });
    const double eps = 4.0 * h;
    const ScalarField out = mollify_space(f, eps);
    const ScalarField oracle = serial::mollify_space(f, eps);
    CHECK(linf_diff(out, oracle) < 1e-13);
    CHECK(out.min() >= 0.0);
    CHECK(out.max() <= 1.0 + 1e-13);
    // Monotone across the left edge of the step.
    const int i_lo = static_cast<int>((1.0 - 2.0 * eps) / h);
    const int i_hi = static_cast<int>((1.0 + 2.0 * eps) / h);
    for (int i = i_lo; i < i_hi; ++i) CHECK(out.at(i + 1) >= out.at(i) - 1e-13);
}

TEST_CASE("mollify_space: Lipschitz fields move by at most Lip * eps") {
    const Grid g(1, 512, 4.0);
    // Periodic tent, Lipschitz constant 1.
    const ScalarField f =
        field_from_fn(g, [&](double x, double) { return std::abs(x - 2.0); });
    const double eps = 8.0 * g.spacing();
    const ScalarField out = mollify_space(f, eps);
    CHECK(linf_diff(out, f) <= eps + 1e-12);
    CHECK_THROWS_AS(mollify_space(f, 0.5 * g.spacing()), InvalidParams);
}

TEST_CASE("kernels agree with the serial reference implementations") {
    for (int dim : {1, 2}) {
        const Grid g(dim, dim == 1 ? 512 : 48, 2.0);
        const ScalarField f = random_field(g, 23, -1.0, 1.0);
        VectorField v(g);
        std::mt19937_64 rng(29);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int d = 0; d < dim; ++d)
            for (double& c : v.comp[d]) c = u(rng);

        // The reference kernels use division where the fast path multiplies
        // by a reciprocal; agreement is to rounding, not bit-exact.
        CHECK(linf_diff_vec(central_gradient(f), serial::central_gradient(f)) < 1e-13);
        const double dt = 0.9 * g.spacing() / v.max_speed_l1();
        CHECK(linf_diff(upwind_advect(f, v, dt), serial::upwind_advect(f, v, dt)) < 1e-13);
    }
}

TEST_CASE("field dump round-trips bit-exactly and CSV is written") {
    const Grid g(2, 16, 1.5);
    const ScalarField f = random_field(g, 31, -10.0, 10.0);
    const std::string path = "test_field_dump.bin";
    write_field_dump(f, path);
    const ScalarField back = read_field_dump(path);
    CHECK(back.grid == g);
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(back.values[i] == f.values[i]);
    write_field_csv(f, "test_field_dump.csv");
    std::remove("test_field_dump.bin");
    std::remove("test_field_dump.csv");
}

TEST_CASE("mollified step transitions within the kernel support width") {
    const Grid g(1, 512, 4.0);
    const double h = g.spacing();
    const double eps = 4.0 * h;
    const ScalarField f =
        field_from_fn(g, [&](double x, double) { return x > 1.0 && x < 3.0 ? 1.0 : 0.0; });
    const ScalarField out = mollify_space(f, eps);
    double lo = 4.0, hi = 0.0;  // where the ramp lives around the left edge
    for (int i = 0; i < g.n_cells / 2; ++i) {
        if (out.at(i) > 0.001 && g.center(i) < lo) lo = g.center(i);
        if (out.at(i) < 0.999 && g.center(i) > hi) hi = g.center(i);
    }
    CHECK(hi - lo <= 2.0 * eps + 2.0 * h);
}
