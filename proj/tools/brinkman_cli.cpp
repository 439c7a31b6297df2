#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "brinkman/config.hpp"
#include "brinkman/harness.hpp"
#include "brinkman/io_util.hpp"
#include "brinkman/selfcheck.hpp"
#include "brinkman/threading.hpp"

namespace fs = std::filesystem;
using namespace brinkman;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;
constexpr int kExitAssertion = 3;

RunConfig load_config(const std::string& path) {
    if (!fs::exists(path)) throw ConfigError("config file not found: " + path);
    return parse_config_file(path);
}

fs::path prepare_output(const RunConfig& cfg) {
    fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    write_config_echo(cfg, (dir / "config_echo.cfg").string());
    return dir;
}

void write_snapshot_index(const fs::path& dir, const std::vector<double>& times,
                          const std::vector<std::string>& prefixes) {
    atomic_write((dir / "snapshots.csv").string(), [&](std::ostream& os) {
        os << "index,t,prefix\n";
        char line[160];
        for (std::size_t i = 0; i < times.size(); ++i) {
            std::snprintf(line, sizeof line, "%zu,%.17g,%s\n", i, times[i],
                          prefixes[i].c_str());
            os << line;
        }
    });
}

int cmd_klevel(const std::string& config_path) {
    RunConfig cfg = load_config(config_path);
    const fs::path dir = prepare_output(cfg);
    std::vector<double> snaps = cfg.klevel_snapshots;
    if (snaps.empty()) snaps = {cfg.klevel_t_end};

    KLevelRun run = run_klevel(cfg.klevel_config(), snaps);

    std::vector<std::string> prefixes;
    std::vector<double> times;
    for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
        const KLevelState& st = run.snapshots[i];
        char prefix[48];
        std::snprintf(prefix, sizeof prefix, "klevel_%03zu", i);
        write_field_dump(st.p, (dir / (std::string(prefix) + "_p.bin")).string());
        write_field_dump(st.n, (dir / (std::string(prefix) + "_n.bin")).string());
        write_field_dump(st.W, (dir / (std::string(prefix) + "_W.bin")).string());
        write_field_csv(st.p, (dir / (std::string(prefix) + "_p.csv")).string());
        prefixes.push_back(prefix);
        times.push_back(st.t);
    }
    write_snapshot_index(dir, times, prefixes);

    atomic_write((dir / "summary.csv").string(), [&](std::ostream& os) {
        os << "t,min_p,max_p,max_speed\n";
        char line[160];
        for (const KLevelState& st : run.snapshots) {
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", st.t, st.p.min(),
                          st.p.max(), st.V.max_speed());
            os << line;
        }
    });
    if (!run.audit.violations.empty()) {
        for (const auto& v : run.audit.violations) std::cerr << "audit: " << v << "\n";
        return kExitSolver;
    }
    std::cout << "klevel run complete: " << run.snapshots.size() << " snapshot(s) in " << dir
              << "\n";
    return kExitOk;
}

int cmd_limit(const std::string& config_path) {
    RunConfig cfg = load_config(config_path);
    const fs::path dir = prepare_output(cfg);
    std::vector<double> snaps = cfg.limit_snapshots;
    if (snaps.empty()) snaps = {cfg.limit_t_end};

    LimitRun run = run_limit(cfg.limit_config(), snaps);

    std::vector<std::string> prefixes;
    std::vector<double> times;
    for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
        const LimitState& st = run.snapshots[i];
        char prefix[48];
        std::snprintf(prefix, sizeof prefix, "limit_%03zu", i);
        write_field_dump(st.theta, (dir / (std::string(prefix) + "_theta.bin")).string());
        write_field_dump(st.p, (dir / (std::string(prefix) + "_p.bin")).string());
        write_field_dump(st.W, (dir / (std::string(prefix) + "_W.bin")).string());
        prefixes.push_back(prefix);
        times.push_back(st.t);
    }
    write_snapshot_index(dir, times, prefixes);

    atomic_write((dir / "summary.csv").string(), [&](std::ostream& os) {
        os << "t,interface_measure,min_p_region,max_speed\n";
        char line[160];
        for (const LimitState& st : run.snapshots) {
            auto [mask, measure] = interface_cells(st.theta);
            double min_p = 0.0;
            bool any = false;
            for (std::size_t c = 0; c < st.p.values.size(); ++c)
                if (st.theta[c] > 0.0) {
                    min_p = any ? std::min(min_p, st.p[c]) : st.p[c];
                    any = true;
                }
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", st.t, measure, min_p,
                          st.V.max_speed());
            os << line;
        }
    });
    std::cout << "limit run complete: " << run.snapshots.size() << " snapshot(s) in " << dir
              << "\n";
    return kExitOk;
}

int cmd_converge(const std::string& config_path, std::vector<double> ks,
                 std::vector<double> times, double delta) {
    RunConfig cfg = load_config(config_path);
    if (!ks.empty()) cfg.ks = ks;
    if (!times.empty()) cfg.times = times;
    if (delta > 0.0) cfg.harness.delta = delta;
    if (cfg.ks.size() < 2)
        throw ConfigError("converge needs at least two k values (--ks or [harness] ks)");
    for (std::size_t i = 0; i + 1 < cfg.ks.size(); ++i)
        if (cfg.ks[i + 1] < cfg.ks[i]) throw ConfigError("converge: ks must be ascending");
    if (cfg.times.empty()) throw ConfigError("converge needs at least one time (--times)");

    const fs::path dir = prepare_output(cfg);
    KLevelConfig kc = cfg.klevel_config();
    LimitConfig lc = cfg.limit_config();
    const double t_max = *std::max_element(cfg.times.begin(), cfg.times.end());
    kc.t_end = t_max;
    lc.t_end = t_max;

    ConvergenceReport report = convergence_sweep(kc, lc, cfg.ks, cfg.times, cfg.harness);
    write_report_csv(report, (dir / "report.csv").string());

    std::cout << "convergence report (" << report.rows.size() << " rows) -> "
              << (dir / "report.csv") << "\n";
    std::printf("%8s %8s %12s %12s %12s %14s\n", "k", "t", "sup_err_p", "sup_err_n", "w2p_err",
                "hausdorff");
    for (const ReportRow& r : report.rows)
        std::printf("%8g %8g %12.4e %12.4e %12.4e %14.4e\n", r.k, r.t, r.sup_err_p,
                    r.sup_err_n, r.w2p_err, r.hausdorff_pos_set);
    std::cout << "note: finite k-ladder trends are evidence of convergence, not proof; "
                 "positivity sets use threshold tol_pos = "
              << report.tol_pos << "\n";

    if (!report.monotonicity_failures.empty()) {
        for (const auto& f : report.monotonicity_failures)
            std::cerr << "monotonicity: " << f << "\n";
        return kExitAssertion;
    }
    return kExitOk;
}

int cmd_selftest() {
    std::vector<CheckResult> all = growth_law_checks();
    const std::vector<CheckResult> fm = flow_map_checks();
    all.insert(all.end(), fm.begin(), fm.end());
    bool ok = true;
    std::printf("%-38s %-6s %14s %14s\n", "check", "status", "qoi", "threshold");
    for (const CheckResult& r : all) {
        std::printf("%-38s %-6s %14.6e %14.6e\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                    r.qoi, r.threshold);
        ok = ok && r.pass;
    }
    return ok ? kExitOk : kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_budget();
    CLI::App app{"Brinkman tumor-growth laboratory: finite-k system, incompressible limit, "
                 "and convergence diagnostics"};
    app.require_subcommand(1);

    std::string config_path;
    auto* klevel = app.add_subcommand("klevel", "march the finite-k system");
    klevel->add_option("config", config_path, "config file")->required();

    auto* limit = app.add_subcommand("limit", "march the limit free-boundary system");
    limit->add_option("config", config_path, "config file")->required();

    std::vector<double> ks, times;
    double delta = -1.0;
    auto* converge = app.add_subcommand("converge", "k-ladder against the limit run");
    converge->add_option("config", config_path, "config file")->required();
    converge->add_option("--ks", ks, "ascending stiffness ladder")->delimiter(',');
    converge->add_option("--times", times, "comparison times")->delimiter(',');
    converge->add_option("--delta", delta, "interface exclusion band width");

    auto* selftest = app.add_subcommand("selftest", "analytic lemma checks, pass/fail table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (app.got_subcommand(klevel)) return cmd_klevel(config_path);
        if (app.got_subcommand(limit)) return cmd_limit(config_path);
        if (app.got_subcommand(converge)) return cmd_converge(config_path, ks, times, delta);
        if (app.got_subcommand(selftest)) return cmd_selftest();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitConfig;
}
