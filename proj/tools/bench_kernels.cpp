// Timing comparison of the OpenMP kernels against the serial reference
// implementations, on field sizes matching the production runs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "brinkman/grid.hpp"
#include "brinkman/serial_ref.hpp"
#include "brinkman/threading.hpp"

using namespace brinkman;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_per_call(const std::function<void()>& fn, int repeats) {
    fn();  // warm up
    const auto t0 = clock_type::now();
    for (int i = 0; i < repeats; ++i) fn();
    const auto t1 = clock_type::now();
    return std::chrono::duration<double>(t1 - t0).count() / repeats;
}

ScalarField random_field(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ScalarField f(g);
    for (double& v : f.values) v = u(rng);
    return f;
}

void report(const char* name, double serial, double omp) {
    std::printf("%-22s %12.3f us %12.3f us %8.2fx\n", name, serial * 1e6, omp * 1e6,
                serial / omp);
}

}  // namespace

int main() {
    apply_thread_budget();
    std::printf("threads: %d\n", thread_budget());
    std::printf("%-22s %15s %15s %9s\n", "kernel", "serial", "openmp", "speedup");

    for (int dim : {1, 2}) {
        const Grid g(dim, dim == 1 ? 65536 : 512, 8.0);
        const ScalarField f = random_field(g, 7);
        VectorField v = central_gradient(f);
        const double dt = 0.5 * kCflLimit * g.spacing() / std::max(v.max_speed_l1(), 1e-12);
        std::printf("-- dim %d, %d cells/axis --\n", dim, g.n_cells);

        report("central_gradient",
               seconds_per_call([&] { serial::central_gradient(f); }, 20),
               seconds_per_call([&] { central_gradient(f); }, 20));
        report("upwind_advect",
               seconds_per_call([&] { serial::upwind_advect(f, v, dt); }, 20),
               seconds_per_call([&] { upwind_advect(f, v, dt); }, 20));
        report("lp_norm(2)",
               seconds_per_call([&] { serial::lp_norm(f, 2.0); }, 20),
               seconds_per_call([&] { lp_norm(f, 2.0); }, 20));
        report("mollify(4h)",
               seconds_per_call([&] { serial::mollify_space(f, 4.0 * g.spacing()); }, 5),
               seconds_per_call([&] { mollify_space(f, 4.0 * g.spacing()); }, 5));
    }
    return 0;
}
