#include "brinkman/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "brinkman/io_util.hpp"

namespace brinkman {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw ConfigError("bad number '" + tok + "' in " + what);
        }
    }
    return out;
}

// Points are ';'-separated, coordinates within a point ','-separated.
std::vector<std::array<double, 2>> parse_points(const std::string& s, const std::string& what) {
    std::vector<std::array<double, 2>> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ';')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        const std::vector<double> coords = parse_list(tok, what);
        if (coords.empty() || coords.size() > 2)
            throw ConfigError(what + ": each point needs 1 or 2 coordinates");
        out.push_back({coords[0], coords.size() == 2 ? coords[1] : 0.0});
    }
    return out;
}

double parse_num(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (trim(s.substr(used)).empty()) return v;
    } catch (...) {
    }
    throw ConfigError("bad number '" + s + "' for " + what);
}

using Section = std::map<std::string, std::string>;
using Sections = std::map<std::string, Section>;

Sections tokenize(const std::string& text, const std::string& origin) {
    Sections out;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            out[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside a section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (out[section].count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key " + key);
        out[section][key] = value;
    }
    return out;
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"grid", {"dim", "n_cells", "extent"}},
        {"law", {"kind", "alpha_bar", "P_M", "nu", "table_p", "table_G"}},
        {"elliptic", {"method", "tol", "max_iter"}},
        {"klevel", {"k", "t_end", "cfl", "amplitude_frac", "snapshots"}},
        {"limit", {"t_end", "cfl", "fp_tol", "snapshots"}},
        {"omega0", {"shape", "centers", "radii", "inner_radius"}},
        {"harness", {"delta", "p_norm", "tol_pos_frac", "ks", "times"}},
        {"output", {"dir", "seed"}},
    };
    return s;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    const Sections sections = tokenize(text, origin);
    for (const auto& [name, kv] : sections) {
        const auto it = schema().find(name);
        if (it == schema().end()) throw ConfigError(origin + ": unknown section [" + name + "]");
        for (const auto& [key, value] : kv)
            if (!it->second.count(key))
                throw ConfigError(origin + ": unknown key '" + key + "' in [" + name + "]");
    }
    auto get = [&](const char* sec, const char* key) -> const std::string* {
        const auto s = sections.find(sec);
        if (s == sections.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    };

    RunConfig c;
    {
        int dim = 1, n_cells = 256;
        double extent = 8.0;
        if (const auto* v = get("grid", "dim")) dim = static_cast<int>(parse_num(*v, "grid.dim"));
        if (const auto* v = get("grid", "n_cells"))
            n_cells = static_cast<int>(parse_num(*v, "grid.n_cells"));
        if (const auto* v = get("grid", "extent")) extent = parse_num(*v, "grid.extent");
        try {
            c.grid = Grid(dim, n_cells, extent);
        } catch (const InvalidParams& e) {
            throw ConfigError(std::string("grid: ") + e.what());
        }
    }
    if (sections.count("law")) {
        std::map<std::string, std::string> kv(sections.at("law").begin(),
                                              sections.at("law").end());
        if (!kv.count("kind")) kv["kind"] = "linear";
        try {
            c.law = GrowthLaw::from_config(kv);
        } catch (const Error& e) {
            throw ConfigError(std::string("law: ") + e.what());
        }
    }
    if (const auto* v = get("elliptic", "method")) {
        if (*v == "spectral")
            c.elliptic.method = EllipticMethod::spectral;
        else if (*v == "sor")
            c.elliptic.method = EllipticMethod::sor;
        else
            throw ConfigError("elliptic.method must be spectral or sor");
    }
    if (const auto* v = get("elliptic", "tol")) c.elliptic.tol = parse_num(*v, "elliptic.tol");
    if (const auto* v = get("elliptic", "max_iter"))
        c.elliptic.max_iter = static_cast<int>(parse_num(*v, "elliptic.max_iter"));

    if (const auto* v = get("klevel", "k")) c.k = parse_num(*v, "klevel.k");
    if (const auto* v = get("klevel", "t_end")) c.klevel_t_end = parse_num(*v, "klevel.t_end");
    if (const auto* v = get("klevel", "cfl")) c.cfl = parse_num(*v, "klevel.cfl");
    if (const auto* v = get("klevel", "amplitude_frac"))
        c.amplitude_frac = parse_num(*v, "klevel.amplitude_frac");
    if (const auto* v = get("klevel", "snapshots"))
        c.klevel_snapshots = parse_list(*v, "klevel.snapshots");

    if (const auto* v = get("limit", "t_end")) c.limit_t_end = parse_num(*v, "limit.t_end");
    if (const auto* v = get("limit", "cfl")) c.limit_cfl = parse_num(*v, "limit.cfl");
    if (const auto* v = get("limit", "fp_tol")) c.fp_tol = parse_num(*v, "limit.fp_tol");
    if (const auto* v = get("limit", "snapshots"))
        c.limit_snapshots = parse_list(*v, "limit.snapshots");

    if (sections.count("omega0")) {
        const Section& kv = sections.at("omega0");
        std::string shape = kv.count("shape") ? kv.at("shape") : "ball";
        if (shape == "ball")
            c.omega0.shape = Omega0Spec::Shape::ball;
        else if (shape == "balls")
            c.omega0.shape = Omega0Spec::Shape::balls;
        else if (shape == "annulus")
            c.omega0.shape = Omega0Spec::Shape::annulus;
        else
            throw ConfigError("omega0.shape must be ball, balls or annulus");
        if (kv.count("centers")) c.omega0.centers = parse_points(kv.at("centers"), "omega0.centers");
        if (kv.count("radii")) c.omega0.radii = parse_list(kv.at("radii"), "omega0.radii");
        if (kv.count("inner_radius"))
            c.omega0.inner_radius = parse_num(kv.at("inner_radius"), "omega0.inner_radius");
        if (c.omega0.centers.size() != c.omega0.radii.size())
            throw ConfigError("omega0: centers and radii counts differ");
        if (c.omega0.shape != Omega0Spec::Shape::balls && c.omega0.centers.size() != 1)
            throw ConfigError("omega0: ball/annulus take exactly one center");
    } else {
        c.omega0.centers = {{0.5 * c.grid.extent, 0.5 * c.grid.extent}};
        c.omega0.radii = {1.0};
    }

    if (const auto* v = get("harness", "delta")) c.harness.delta = parse_num(*v, "harness.delta");
    if (const auto* v = get("harness", "p_norm"))
        c.harness.p_norm = parse_num(*v, "harness.p_norm");
    if (const auto* v = get("harness", "tol_pos_frac"))
        c.harness.tol_pos_frac = parse_num(*v, "harness.tol_pos_frac");
    if (const auto* v = get("harness", "ks")) c.ks = parse_list(*v, "harness.ks");
    if (const auto* v = get("harness", "times")) c.times = parse_list(*v, "harness.times");

    if (const auto* v = get("output", "seed"))
        c.seed = static_cast<std::uint64_t>(parse_num(*v, "output.seed"));
    if (const auto* v = get("output", "dir")) c.output_dir = *v;
    return c;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str(), path);
}

namespace {
std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
std::string list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += num(v[i]);
    }
    return out;
}
}  // namespace

std::string config_echo(const RunConfig& c) {
    std::ostringstream os;
    os << "[grid]\n"
       << "dim = " << c.grid.dim << "\n"
       << "n_cells = " << c.grid.n_cells << "\n"
       << "extent = " << num(c.grid.extent) << "\n\n";
    os << "[law]\n";
    for (const auto& [k, v] : c.law.to_config()) os << k << " = " << v << "\n";
    os << "\n[elliptic]\n"
       << "method = " << (c.elliptic.method == EllipticMethod::spectral ? "spectral" : "sor")
       << "\n"
       << "tol = " << num(c.elliptic.tol) << "\n"
       << "max_iter = " << c.elliptic.max_iter << "\n\n";
    os << "[klevel]\n"
       << "k = " << num(c.k) << "\n"
       << "t_end = " << num(c.klevel_t_end) << "\n"
       << "cfl = " << num(c.cfl) << "\n"
       << "amplitude_frac = " << num(c.amplitude_frac) << "\n";
    if (!c.klevel_snapshots.empty()) os << "snapshots = " << list(c.klevel_snapshots) << "\n";
    os << "\n[limit]\n"
       << "t_end = " << num(c.limit_t_end) << "\n"
       << "cfl = " << num(c.limit_cfl) << "\n"
       << "fp_tol = " << num(c.fp_tol) << "\n";
    if (!c.limit_snapshots.empty()) os << "snapshots = " << list(c.limit_snapshots) << "\n";
    os << "\n[omega0]\n";
    const char* shape = c.omega0.shape == Omega0Spec::Shape::ball
                            ? "ball"
                            : (c.omega0.shape == Omega0Spec::Shape::balls ? "balls" : "annulus");
    os << "shape = " << shape << "\n";
    os << "centers = ";
    for (std::size_t i = 0; i < c.omega0.centers.size(); ++i) {
        if (i) os << "; ";
        os << num(c.omega0.centers[i][0]);
        if (c.grid.dim == 2) os << "," << num(c.omega0.centers[i][1]);
    }
    os << "\n"
       << "radii = " << list(c.omega0.radii) << "\n";
    if (c.omega0.shape == Omega0Spec::Shape::annulus)
        os << "inner_radius = " << num(c.omega0.inner_radius) << "\n";
    os << "\n[harness]\n"
       << "delta = " << num(c.harness.delta) << "\n"
       << "p_norm = " << num(c.harness.p_norm) << "\n"
       << "tol_pos_frac = " << num(c.harness.tol_pos_frac) << "\n";
    if (!c.ks.empty()) os << "ks = " << list(c.ks) << "\n";
    if (!c.times.empty()) os << "times = " << list(c.times) << "\n";
    os << "\n[output]\n"
       << "dir = " << c.output_dir << "\n"
       << "seed = " << c.seed << "\n";
    return os.str();
}

void write_config_echo(const RunConfig& config, const std::string& path) {
    atomic_write(path, [&](std::ostream& os) { os << config_echo(config); });
}

KLevelConfig RunConfig::klevel_config() const {
    KLevelConfig kc;
    kc.grid = grid;
    kc.law = law;
    kc.omega0 = omega0;
    kc.k = k;
    kc.t_end = klevel_t_end;
    kc.cfl = cfl;
    kc.amplitude_frac = amplitude_frac;
    kc.elliptic = elliptic;
    return kc;
}

LimitConfig RunConfig::limit_config() const {
    LimitConfig lc;
    lc.grid = grid;
    lc.law = law;
    lc.omega0 = omega0;
    lc.t_end = limit_t_end;
    lc.cfl = limit_cfl;
    lc.fp_tol = fp_tol;
    lc.elliptic = elliptic;
    return lc;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    return config_echo(a) == config_echo(b);
}

}  // namespace brinkman
