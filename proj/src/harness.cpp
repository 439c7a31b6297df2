#include "brinkman/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <future>
#include <limits>

#include "brinkman/io_util.hpp"
#include "brinkman/threading.hpp"

namespace brinkman {

std::vector<int> grid_distance_steps(const Grid& grid, const ScalarField& seed_mask) {
    const int n = grid.n_cells;
    const std::size_t total = grid.size();
    std::vector<int> dist(total, -1);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < total; ++i)
        if (seed_mask[i] != 0.0) {
            dist[i] = 0;
            queue.push_back(i);
        }
    if (queue.empty()) return dist;

    auto push = [&](std::size_t c, int d) {
        if (dist[c] < 0) {
            dist[c] = d;
            queue.push_back(c);
        }
    };
    while (!queue.empty()) {
        const std::size_t c = queue.front();
        queue.pop_front();
        const int d = dist[c] + 1;
        if (grid.dim == 1) {
            const int i = static_cast<int>(c);
            push(grid.index(i - 1), d);
            push(grid.index(i + 1), d);
        } else {
            const int i = static_cast<int>(c % n);
            const int j = static_cast<int>(c / n);
            push(grid.index(i - 1, j), d);
            push(grid.index(i + 1, j), d);
            push(grid.index(i, j - 1), d);
            push(grid.index(i, j + 1), d);
        }
    }
    return dist;
}

namespace {

ScalarField sign_change_cells(const ScalarField& theta) {
    const Grid& g = theta.grid;
    ScalarField mask(g);
    const int n = g.n_cells;
    auto pos = [&](int i, int j) { return theta.at(i, j) > 0.0; };
    if (g.dim == 1) {
        for (int i = 0; i < n; ++i) {
            const bool p0 = theta.at(i) > 0.0;
            if ((theta.at(i - 1) > 0.0) != p0 || (theta.at(i + 1) > 0.0) != p0)
                mask.at(i) = 1.0;
        }
    } else {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const bool p0 = pos(i, j);
                if (pos(i - 1, j) != p0 || pos(i + 1, j) != p0 || pos(i, j - 1) != p0 ||
                    pos(i, j + 1) != p0)
                    mask.at(i, j) = 1.0;
            }
    }
    return mask;
}

ScalarField window_mask(const Grid& g) {
    // Fixed compact window for the W^{2,p} proxy: cells within L/4 of the
    // domain center, independent of the states compared.
    ScalarField mask(g);
    const std::array<double, 2> c{0.5 * g.extent, 0.5 * g.extent};
    const double r = 0.25 * g.extent;
    const int n = g.n_cells;
    if (g.dim == 1) {
        for (int i = 0; i < n; ++i)
            if (std::abs(g.periodic_delta(g.center(i), c[0])) <= r) mask.at(i) = 1.0;
    } else {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                if (g.periodic_distance({g.center(i), g.center(j)}, c) <= r)
                    mask.at(i, j) = 1.0;
    }
    return mask;
}

double lp_on_mask(const ScalarField& f, double p, const ScalarField& mask) {
    return lp_norm(f, p, &mask);
}

/// ||Z||_p + sum_d ||D_d Z||_p + sum_dd' ||D2_dd' Z||_p on the window.
double w2p_proxy(const ScalarField& Wk, const ScalarField& Wl, double p,
                 const ScalarField& window) {
    const Grid& g = Wk.grid;
    const ScalarField Z = field_diff(Wk, Wl);
    double total = lp_on_mask(Z, p, window);
    const VectorField DZ = central_gradient(Z);
    for (int d = 0; d < g.dim; ++d) {
        ScalarField comp(g);
        comp.values = DZ.comp[d];
        total += lp_on_mask(comp, p, window);
    }
    const int n = g.n_cells;
    const double h2 = g.spacing() * g.spacing();
    if (g.dim == 1) {
        ScalarField zxx(g);
        for (int i = 0; i < n; ++i)
            zxx.at(i) = (Z.at(i + 1) - 2.0 * Z.at(i) + Z.at(i - 1)) / h2;
        total += lp_on_mask(zxx, p, window);
    } else {
        ScalarField zxx(g), zyy(g), zxy(g);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                zxx.at(i, j) = (Z.at(i + 1, j) - 2.0 * Z.at(i, j) + Z.at(i - 1, j)) / h2;
                zyy.at(i, j) = (Z.at(i, j + 1) - 2.0 * Z.at(i, j) + Z.at(i, j - 1)) / h2;
                zxy.at(i, j) = (Z.at(i + 1, j + 1) - Z.at(i + 1, j - 1) - Z.at(i - 1, j + 1) +
                                Z.at(i - 1, j - 1)) /
                               (4.0 * h2);
            }
        total += lp_on_mask(zxx, p, window) + lp_on_mask(zyy, p, window) +
                 lp_on_mask(zxy, p, window);
    }
    return total;
}

double hausdorff_between(const Grid& g, const ScalarField& set_a, const ScalarField& set_b) {
    bool a_empty = true, b_empty = true;
    for (double v : set_a.values)
        if (v != 0.0) {
            a_empty = false;
            break;
        }
    for (double v : set_b.values)
        if (v != 0.0) {
            b_empty = false;
            break;
        }
    if (a_empty && b_empty) return 0.0;
    if (a_empty || b_empty) return g.extent;  // finite sentinel: maximal mismatch
    const std::vector<int> da = grid_distance_steps(g, set_a);
    const std::vector<int> db = grid_distance_steps(g, set_b);
    int worst = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (set_a[i] != 0.0) worst = std::max(worst, db[i]);
        if (set_b[i] != 0.0) worst = std::max(worst, da[i]);
    }
    return worst * g.spacing();
}

}  // namespace

ScalarField exclusion_band(const ScalarField& theta, double delta) {
    const Grid& g = theta.grid;
    const double h = g.spacing();
    if (delta < 2.0 * h)
        throw InvalidParams("exclusion_band: delta must be >= 2h (delta = " +
                            std::to_string(delta) + ", h = " + std::to_string(h) + ")");
    const ScalarField seeds = sign_change_cells(theta);
    const std::vector<int> steps = grid_distance_steps(g, seeds);

    ScalarField mask(g);
    bool inside = false, outside = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double d = steps[i] < 0 ? std::numeric_limits<double>::infinity()
                                      : steps[i] * h;
        if (d > delta) {
            mask[i] = 1.0;
            (theta[i] > 0.0 ? inside : outside) = true;
        }
    }
    const bool has_interface = [&] {
        for (double v : seeds.values)
            if (v != 0.0) return true;
        return false;
    }();
    if (has_interface && (!inside || !outside))
        throw BandTooWide("exclusion_band: band of width " + std::to_string(delta) +
                          " swallows one side of the interface");
    return mask;
}

ReportRow compare_at_time(const KLevelState& kstate, const LimitState& lstate, double delta,
                          double p_norm, double tol_pos) {
    const Grid& g = kstate.p.grid;
    if (!(g == lstate.theta.grid)) throw GridMismatch("compare_at_time: grids differ");
    if (std::abs(kstate.t - lstate.t) > 1e-6)
        throw GridMismatch("compare_at_time: timestamps differ by more than 1e-6");

    ReportRow row;
    row.k = kstate.k;
    row.t = kstate.t;
    row.delta = delta;

    const ScalarField band = exclusion_band(lstate.theta, delta);
    row.sup_err_p = lp_on_mask(field_diff(kstate.p, lstate.p),
                               std::numeric_limits<double>::infinity(), band);
    row.sup_err_n = lp_on_mask(field_diff(kstate.n, lstate.n),
                               std::numeric_limits<double>::infinity(), band);
    row.w2p_err = w2p_proxy(kstate.W, lstate.W, p_norm, window_mask(g));

    auto [iface, measure] = interface_cells(lstate.theta);
    row.interface_measure = measure;

    // Inner ring: positive-theta cells with a nonpositive face neighbor.
    double min_p = std::numeric_limits<double>::infinity();
    const int n = g.n_cells;
    bool ring_found = false;
    if (g.dim == 1) {
        for (int i = 0; i < n; ++i) {
            if (lstate.theta.at(i) <= 0.0) continue;
            if (lstate.theta.at(i - 1) <= 0.0 || lstate.theta.at(i + 1) <= 0.0) {
                min_p = std::min(min_p, lstate.p.at(i));
                ring_found = true;
            }
        }
    } else {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                if (lstate.theta.at(i, j) <= 0.0) continue;
                if (lstate.theta.at(i - 1, j) <= 0.0 || lstate.theta.at(i + 1, j) <= 0.0 ||
                    lstate.theta.at(i, j - 1) <= 0.0 || lstate.theta.at(i, j + 1) <= 0.0) {
                    min_p = std::min(min_p, lstate.p.at(i, j));
                    ring_found = true;
                }
            }
    }
    row.min_p_interface = ring_found ? min_p : 0.0;

    ScalarField pos_k(g), pos_l(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        pos_k[i] = kstate.p[i] > tol_pos ? 1.0 : 0.0;
        pos_l[i] = lstate.theta[i] > 0.0 ? 1.0 : 0.0;
    }
    row.hausdorff_pos_set = hausdorff_between(g, pos_k, pos_l);
    for (double v : {row.sup_err_p, row.sup_err_n, row.w2p_err, row.interface_measure,
                     row.min_p_interface, row.hausdorff_pos_set})
        if (!std::isfinite(v) || v < 0.0)
            throw BoundViolation("compare_at_time produced a non-finite or negative entry");
    return row;
}

ConvergenceReport convergence_sweep(const KLevelConfig& kbase, const LimitConfig& lbase,
                                    const std::vector<double>& ks,
                                    const std::vector<double>& times,
                                    const HarnessParams& params) {
    if (ks.size() < 2) throw InvalidParams("convergence_sweep: need at least 2 k values");
    for (std::size_t i = 0; i + 1 < ks.size(); ++i)
        if (ks[i + 1] < ks[i]) throw InvalidParams("convergence_sweep: ks must be nondecreasing");
    if (times.empty()) throw InvalidParams("convergence_sweep: need at least one time");

    double delta = params.delta;
    if (delta <= 0.0) delta = 0.1 * omega0_diameter(lbase.omega0);
    const double tol_pos = params.tol_pos_frac * kbase.law.P_M;

    LimitRun limit = run_limit(lbase, times);
    if (limit.snapshots.size() != times.size())
        throw NoConvergence("convergence_sweep: limit run missed snapshots");

    // One worker per k-run, capped by the configured thread budget.
    std::vector<KLevelRun> kruns(ks.size());
    const int pool = std::min<int>(static_cast<int>(ks.size()), thread_budget());
    std::vector<std::future<KLevelRun>> futures;
    std::size_t next = 0;
    while (next < ks.size()) {
        futures.clear();
        const std::size_t batch = std::min<std::size_t>(pool, ks.size() - next);
        for (std::size_t b = 0; b < batch; ++b) {
            KLevelConfig cfg = kbase;
            cfg.k = ks[next + b];
            futures.push_back(std::async(std::launch::async,
                                         [cfg, &times] { return run_klevel(cfg, times); }));
        }
        for (std::size_t b = 0; b < batch; ++b) kruns[next + b] = futures[b].get();
        next += batch;
    }

    ConvergenceReport report;
    report.tol_pos = tol_pos;
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        if (kruns[ki].snapshots.size() != times.size())
            throw NoConvergence("convergence_sweep: k-level run missed snapshots");
        for (std::size_t ti = 0; ti < times.size(); ++ti)
            report.rows.push_back(compare_at_time(kruns[ki].snapshots[ti],
                                                  limit.snapshots[ti], delta, params.p_norm,
                                                  tol_pos));
    }

    // Nonincreasing along the ladder at each time, with 10% slack for the
    // discretization floor.
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        for (std::size_t ki = 0; ki + 1 < ks.size(); ++ki) {
            const ReportRow& lo = report.rows[ki * times.size() + ti];
            const ReportRow& hi = report.rows[(ki + 1) * times.size() + ti];
            auto check = [&](double a, double b, const char* name) {
                if (b > 1.1 * a + 1e-14) {
                    char buf[160];
                    std::snprintf(buf, sizeof buf,
                                  "%s not nonincreasing at t=%g: k=%g gives %.6g, k=%g gives %.6g",
                                  name, lo.t, lo.k, a, hi.k, b);
                    report.monotonicity_failures.emplace_back(buf);
                }
            };
            check(lo.sup_err_p, hi.sup_err_p, "sup_err_p");
            check(lo.sup_err_n, hi.sup_err_n, "sup_err_n");
        }
    }
    return report;
}

double initial_layer_probe(const KLevelConfig& config, double k, double t_probe) {
    const double relax = 10.0 / (k * config.law.alpha_bar * config.law.P_M);
    if (t_probe < relax)
        throw InvalidParams("initial_layer_probe: t_probe below the reaction relaxation time");

    KLevelConfig cfg = config;
    cfg.k = k;
    cfg.t_end = t_probe;
    KLevelRun run = run_klevel(cfg, {t_probe});
    const KLevelState& st = run.snapshots.back();

    const Grid& g = cfg.grid;
    const double erode = 0.1 * omega0_diameter(cfg.omega0);
    const ScalarField sd = signed_distance_field(cfg.omega0, g);
    double gap = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (sd[i] < erode) continue;
        any = true;
        gap = std::max(gap, std::abs(st.p[i] - H_inverse(cfg.law, std::max(st.W[i], 0.0))));
    }
    if (!any) throw EmptyMask("initial_layer_probe: eroded region has no cells");
    return gap;
}

void write_report_csv(const ConvergenceReport& report, const std::string& path) {
    atomic_write(path, [&](std::ostream& os) {
        char line[320];
        std::snprintf(line, sizeof line,
                      "# positivity sets thresholded at tol_pos=%.6g; finite k-ladder trends "
                      "are evidence of convergence, not proof of the k->infinity limit\n",
                      report.tol_pos);
        os << line;
        os << "k,t,delta,sup_err_p,sup_err_n,w2p_err,interface_measure,min_p_interface,"
              "hausdorff_pos_set\n";
        for (const ReportRow& r : report.rows) {
            std::snprintf(line, sizeof line,
                          "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.k, r.t,
                          r.delta, r.sup_err_p, r.sup_err_n, r.w2p_err, r.interface_measure,
                          r.min_p_interface, r.hausdorff_pos_set);
            os << line;
        }
    });
}

}  // namespace brinkman
