#include "brinkman/growth_law.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace brinkman {

namespace {

// Fritsch-Carlson derivative limiting: keeps the cubic interpolant monotone
// wherever the data is.
std::vector<double> pchip_derivatives(const std::vector<double>& x,
                                      const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0), slope(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) slope[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    d[0] = slope[0];
    d[n - 1] = slope[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (slope[i - 1] * slope[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            const double w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
            const double w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
            d[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
        }
    }
    return d;
}

double pchip_eval(const std::vector<double>& x, const std::vector<double>& y,
                  const std::vector<double>& d, double q, bool derivative) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    if (q <= x.front()) {
        i = 0;
    } else if (q >= x[n - 2]) {
        i = n - 2;
    } else {
        i = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), q) - x.begin()) - 1;
    }
    const double hseg = x[i + 1] - x[i];
    const double t = (q - x[i]) / hseg;
    const double h00 = 2 * t * t * t - 3 * t * t + 1;
    const double h10 = t * t * t - 2 * t * t + t;
    const double h01 = -2 * t * t * t + 3 * t * t;
    const double h11 = t * t * t - t * t;
    if (!derivative)
        return h00 * y[i] + h10 * hseg * d[i] + h01 * y[i + 1] + h11 * hseg * d[i + 1];
    const double g00 = (6 * t * t - 6 * t) / hseg;
    const double g10 = 3 * t * t - 4 * t + 1;
    const double g01 = (-6 * t * t + 6 * t) / hseg;
    const double g11 = 3 * t * t - 2 * t;
    return g00 * y[i] + g10 * d[i] + g01 * y[i + 1] + g11 * d[i + 1];
}

}  // namespace

double GrowthLaw::G(double p) const {
    switch (kind) {
        case Kind::linear:
            return alpha_bar * (P_M - p);
        case Kind::custom_table:
            return pchip_eval(table_p, table_G, table_d, p, false);
        case Kind::custom_fn:
            return fn_G(p);
    }
    return 0.0;
}

double GrowthLaw::G_prime(double p) const {
    switch (kind) {
        case Kind::linear:
            return -alpha_bar;
        case Kind::custom_table:
            return pchip_eval(table_p, table_G, table_d, p, true);
        case Kind::custom_fn:
            return fn_Gp(p);
    }
    return 0.0;
}

void GrowthLaw::validate() const {
    if (!(alpha_bar > 0.0) || !(P_M > 0.0) || !(nu > 0.0))
        throw InvalidParams("GrowthLaw: alpha_bar, P_M, nu must be positive");
    const int n_check = 1024;
    const double slope_slack = 1e-9 * alpha_bar;
    for (int i = 0; i < n_check; ++i) {
        const double u = P_M * i / (n_check - 1.0);
        if (G_prime(u) > -alpha_bar + slope_slack)
            throw BoundViolation("GrowthLaw: G'(u) > -alpha_bar at u = " + std::to_string(u));
    }
    if (std::abs(G(P_M)) > 1e-12 * std::max(1.0, alpha_bar * P_M))
        throw BoundViolation("GrowthLaw: G(P_M) != 0");
    if (G(0.0) < alpha_bar * P_M - 1e-12 * std::max(1.0, alpha_bar * P_M))
        throw BoundViolation("GrowthLaw: G(0) < alpha_bar * P_M");
}

GrowthLaw GrowthLaw::linear(double alpha_bar, double P_M, double nu) {
    GrowthLaw law;
    law.kind = Kind::linear;
    law.alpha_bar = alpha_bar;
    law.P_M = P_M;
    law.nu = nu;
    law.validate();
    return law;
}

GrowthLaw GrowthLaw::from_table(std::vector<double> p_samples, std::vector<double> g_samples,
                                double alpha_bar, double P_M, double nu) {
    if (p_samples.size() < 4 || p_samples.size() != g_samples.size())
        throw InvalidParams("GrowthLaw table needs >= 4 matching samples");
    for (std::size_t i = 0; i + 1 < p_samples.size(); ++i) {
        if (!(p_samples[i] < p_samples[i + 1]))
            throw InvalidParams("GrowthLaw table pressures must increase");
        if (!(g_samples[i] > g_samples[i + 1]))
            throw InvalidParams("GrowthLaw table rates must decrease");
    }
    GrowthLaw law;
    law.kind = Kind::custom_table;
    law.alpha_bar = alpha_bar;
    law.P_M = P_M;
    law.nu = nu;
    law.table_p = std::move(p_samples);
    law.table_G = std::move(g_samples);
    law.table_d = pchip_derivatives(law.table_p, law.table_G);
    law.validate();
    return law;
}

GrowthLaw GrowthLaw::custom(std::function<double(double)> g, std::function<double(double)> gp,
                            double alpha_bar, double P_M, double nu) {
    GrowthLaw law;
    law.kind = Kind::custom_fn;
    law.alpha_bar = alpha_bar;
    law.P_M = P_M;
    law.nu = nu;
    law.fn_G = std::move(g);
    law.fn_Gp = std::move(gp);
    law.validate();
    return law;
}

namespace {
std::string join_csv(const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << v[i];
    }
    return os.str();
}
std::vector<double> split_csv(const std::string& s) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
    return out;
}
}  // namespace

std::map<std::string, std::string> GrowthLaw::to_config() const {
    std::map<std::string, std::string> kv;
    auto num = [](double x) {
        std::ostringstream os;
        os.precision(17);
        os << x;
        return os.str();
    };
    kv["kind"] = kind == Kind::linear ? "linear" : "custom-table";
    kv["alpha_bar"] = num(alpha_bar);
    kv["P_M"] = num(P_M);
    kv["nu"] = num(nu);
    if (kind == Kind::custom_table) {
        kv["table_p"] = join_csv(table_p);
        kv["table_G"] = join_csv(table_G);
    }
    return kv;
}

GrowthLaw GrowthLaw::from_config(const std::map<std::string, std::string>& kv) {
    auto get = [&](const char* key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw ConfigError(std::string("law: missing key ") + key);
        return it->second;
    };
    const std::string kind = get("kind");
    const double alpha_bar = std::stod(get("alpha_bar"));
    const double P_M = std::stod(get("P_M"));
    const double nu = kv.count("nu") ? std::stod(kv.at("nu")) : 1.0;
    if (kind == "linear") return GrowthLaw::linear(alpha_bar, P_M, nu);
    if (kind == "custom-table")
        return GrowthLaw::from_table(split_csv(get("table_p")), split_csv(get("table_G")),
                                     alpha_bar, P_M, nu);
    throw ConfigError("law: unknown kind '" + kind + "'");
}

GrowthLaw make_linear_growth(double alpha_bar, double P_M) {
    if (!(alpha_bar > 0.0) || !(P_M > 0.0))
        throw InvalidParams("make_linear_growth: alpha_bar and P_M must be positive");
    return GrowthLaw::linear(alpha_bar, P_M);
}

LogisticParams logistic_params(const GrowthLaw& law, double W, double k) {
    LogisticParams lp;
    lp.a = W + law.alpha_bar * law.P_M;
    lp.cap = lp.a / (1.0 + law.alpha_bar);
    lp.k = k;
    return lp;
}

double H_inverse(const GrowthLaw& law, double w) {
    if (w < 0.0) throw InvalidParams("H_inverse: w must be >= 0");
    if (law.kind == GrowthLaw::Kind::linear) {
        // u - nu a (P_M - u) = w  =>  u = (w + nu a P_M) / (1 + nu a)
        return (w + law.nu * law.alpha_bar * law.P_M) / (1.0 + law.nu * law.alpha_bar);
    }
    const double tol = 1e-12 * (1.0 + std::abs(w));
    auto F = [&](double u) { return u - law.nu * law.G(u) - w; };
    double lo = 0.0, hi = w + law.nu * law.G(0.0) + 1.0;
    double flo = F(lo), fhi = F(hi);
    if (flo > 0.0 || fhi < 0.0)
        throw NoBracket("H_inverse: no sign change on [0, " + std::to_string(hi) + "]");
    double u = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double f = F(u);
        if (std::abs(f) <= tol) return u;
        if (f > 0.0)
            hi = u;
        else
            lo = u;
        const double fp = 1.0 - law.nu * law.G_prime(u);
        double un = u - f / fp;
        if (!(un > lo && un < hi)) un = 0.5 * (lo + hi);
        u = un;
    }
    throw NoConvergence("H_inverse: Newton/bisection did not reach tolerance");
}

double omega_exact(const GrowthLaw& law, double xi, double t) {
    if (xi < 0.0) throw InvalidParams("omega_exact: xi must be >= 0");
    if (t < 0.0) throw InvalidParams("omega_exact: t must be >= 0");
    if (xi == 0.0) return 0.0;  // zero branch
    const double rate = law.alpha_bar * law.P_M;
    const double a_bar = rate / (1.0 + law.alpha_bar);
    const double decay = std::exp(-rate * t);
    return a_bar * xi / (xi + (a_bar - xi) * decay);
}

namespace {

// RK4 march with substeps sized off a sampled stiffness bound; fallback for
// reaction laws without a closed-form step.
double reaction_rk_fallback(const GrowthLaw& law, double p0, double W, double k, double dt) {
    auto f = [&](double p) { return k * p * (W - p + law.G(p)); };
    double lambda = 1.0;
    const double p_hi = std::max(p0, H_inverse(law, std::max(W, 0.0))) + law.P_M;
    for (int i = 0; i <= 64; ++i) {
        const double u = p_hi * i / 64.0;
        const double fp = k * std::abs(W - u + law.G(u)) + k * u * std::abs(-1.0 + law.G_prime(u));
        lambda = std::max(lambda, fp);
    }
    const int n_sub = std::max(1, static_cast<int>(std::ceil(dt * lambda / 0.1)));
    const double hsub = dt / n_sub;
    double p = p0;
    for (int s = 0; s < n_sub; ++s) {
        const double k1 = f(p);
        const double k2 = f(p + 0.5 * hsub * k1);
        const double k3 = f(p + 0.5 * hsub * k2);
        const double k4 = f(p + hsub * k3);
        p += hsub / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        p = std::max(p, 0.0);
    }
    return p;
}

}  // namespace

double exact_reaction_step(const GrowthLaw& law, double p0, double W, double k, double dt) {
    if (p0 <= 0.0) return 0.0;  // zero is invariant for the reaction
    if (law.kind != GrowthLaw::Kind::linear) return reaction_rk_fallback(law, p0, W, k, dt);
    const LogisticParams lp = logistic_params(law, W, k);
    if (lp.a <= 0.0) {
        // Degenerate frozen potential: pure decay p' = -k (1+alpha) p^2 + k a p.
        return reaction_rk_fallback(law, p0, W, k, dt);
    }
    const double decay = std::exp(-k * lp.a * dt);
    return lp.cap * p0 / (p0 + (lp.cap - p0) * decay);
}

ReactionBounds reaction_bounds_check(const GrowthLaw& law, double u, double W) {
    if (u < 0.0 || u > law.P_M * (1.0 + 1e-12))
        throw InvalidParams("reaction_bounds_check: u outside [0, P_M]");
    if (W < 0.0 || W > law.P_M * (1.0 + 1e-12))
        throw InvalidParams("reaction_bounds_check: W outside [0, P_M]");
    ReactionBounds rb;
    rb.lower = u * (law.alpha_bar * law.P_M - (1.0 + law.alpha_bar) * u);
    rb.value = u * (W - u + law.G(u));
    rb.upper = u * (1.0 + law.alpha_bar) * law.P_M;
    const double slack = 1e-12 * (1.0 + std::abs(rb.upper));
    if (rb.value < rb.lower - slack || rb.value > rb.upper + slack)
        throw BoundViolation("reaction sandwich violated at u = " + std::to_string(u) +
                             ", W = " + std::to_string(W));
    return rb;
}

double sigma_log_lipschitz(double N, double r) {
    if (r < 0.0 || r >= 1.0) throw OutOfRange("sigma: r must lie in [0,1)");
    if (r == 0.0) return 0.0;
    return -N * r * std::log(r);
}

double theta_alpha(double N, double alpha, double r) {
    if (!(N > 0.0) || !(alpha > 0.0)) throw InvalidParams("theta_alpha: N, alpha must be > 0");
    const double s = std::hypot(alpha, r);
    if (s >= 1.0) throw OutOfRange("theta_alpha: sqrt(alpha^2 + r^2) must be < 1");
    return std::exp(-1.0 / N) / alpha / (-std::log(s));
}

}  // namespace brinkman
