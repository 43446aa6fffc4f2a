#include "epdt/ode_blowup.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "epdt/finite_difference.hpp"

namespace epdt {

namespace {

struct State {
    double u = 0.0;
    double v = 0.0;
};

using Rhs = std::function<void(double, const State&, State&)>;

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200,
                 E6 = 22.0 / 525, E7 = -1.0 / 40;

struct StepResult {
    State y;
    double err = 0.0;
    bool finite = true;
};

StepResult dp_step(const Rhs& f, double t, const State& y, double h, double rtol) {
    State k1, k2, k3, k4, k5, k6, k7, tmp;
    f(t, y, k1);
    tmp = {y.u + h * A21 * k1.u, y.v + h * A21 * k1.v};
    f(t + h / 5.0, tmp, k2);
    tmp = {y.u + h * (A31 * k1.u + A32 * k2.u), y.v + h * (A31 * k1.v + A32 * k2.v)};
    f(t + 3.0 * h / 10.0, tmp, k3);
    tmp = {y.u + h * (A41 * k1.u + A42 * k2.u + A43 * k3.u),
           y.v + h * (A41 * k1.v + A42 * k2.v + A43 * k3.v)};
    f(t + 4.0 * h / 5.0, tmp, k4);
    tmp = {y.u + h * (A51 * k1.u + A52 * k2.u + A53 * k3.u + A54 * k4.u),
           y.v + h * (A51 * k1.v + A52 * k2.v + A53 * k3.v + A54 * k4.v)};
    f(t + 8.0 * h / 9.0, tmp, k5);
    tmp = {y.u + h * (A61 * k1.u + A62 * k2.u + A63 * k3.u + A64 * k4.u + A65 * k5.u),
           y.v + h * (A61 * k1.v + A62 * k2.v + A63 * k3.v + A64 * k4.v + A65 * k5.v)};
    f(t + h, tmp, k6);

    StepResult out;
    out.y = {y.u + h * (B1 * k1.u + B3 * k3.u + B4 * k4.u + B5 * k5.u + B6 * k6.u),
             y.v + h * (B1 * k1.v + B3 * k3.v + B4 * k4.v + B5 * k5.v + B6 * k6.v)};
    f(t + h, out.y, k7);
    double eu = h * (E1 * k1.u + E3 * k3.u + E4 * k4.u + E5 * k5.u + E6 * k6.u + E7 * k7.u);
    double ev = h * (E1 * k1.v + E3 * k3.v + E4 * k4.v + E5 * k5.v + E6 * k6.v + E7 * k7.v);
    double su = 1e-30 + rtol * std::max(std::abs(y.u), std::abs(out.y.u));
    double sv = 1e-30 + rtol * std::max(std::abs(y.v), std::abs(out.y.v));
    out.err = std::sqrt(0.5 * ((eu / su) * (eu / su) + (ev / sv) * (ev / sv)));
    out.finite = std::isfinite(out.y.u) && std::isfinite(out.y.v) && std::isfinite(out.err);
    return out;
}

// Fit log u = b - alpha log(T - t): scan T past the last sample, keep the T
// with the smallest lack of fit.
double extrapolate_pole(const std::vector<double>& ts, const std::vector<double>& us,
                        double t_detect, bool& ok) {
    ok = false;
    // Use the tail spanning at least one decade of growth.
    size_t n = ts.size();
    if (n < 10) return t_detect;
    double top = us.back();
    size_t start = n;
    for (size_t i = n; i-- > 0;) {
        if (us[i] <= 0.0 || us[i] < top * 1e-10) break;
        start = i;
        if (us[i] <= top * 0.1 && n - i >= 10) break;
    }
    if (n - start < 10 || us[start] > top * 0.1) return t_detect;

    std::vector<double> lt(n - start), lu(n - start);
    double span = t_detect - ts[start];
    if (span <= 0.0) return t_detect;

    auto sse_for = [&](double T) {
        for (size_t i = start; i < n; ++i) {
            lt[i - start] = std::log(T - ts[i]);
            lu[i - start] = std::log(us[i]);
        }
        FitResult fr = fit_linear(lt, lu);
        double sse = 0.0;
        for (size_t i = 0; i < lt.size(); ++i) {
            double d = lu[i] - (fr.slope * lt[i] + fr.intercept);
            sse += d * d;
        }
        return sse;
    };
    // Golden-section search for T in (t_detect, t_detect + 2 span].
    double lo = t_detect + 1e-12 * std::max(1.0, std::abs(t_detect));
    double hi = t_detect + 2.0 * span;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = sse_for(x1), f2 = sse_for(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = sse_for(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = sse_for(x2);
        }
    }
    ok = true;
    return 0.5 * (lo + hi);
}

} // namespace

void OdeScenario::validate() const {
    if (threshold <= 0.0) throw std::domain_error("ode scenario: threshold must be > 0");
    if (!(rtol > 0.0) || rtol > 1e-2)
        throw std::domain_error("ode scenario: rtol must be in (0, 1e-2]");
    if (kind == OdeKind::Zhou) {
        if (zhou.p <= 1.0) throw std::domain_error("zhou scenario: p must be > 1");
        if (zhou.c <= 0.0) throw std::domain_error("zhou scenario: c must be > 0");
        if (zhou.sigma0 <= 0.0) throw std::domain_error("zhou scenario: sigma0 must be > 0");
        if (zhou.epsilon && (*zhou.epsilon <= 0.0 || zhou.C <= 0.0 || zhou.Cprime <= 0.0))
            throw std::domain_error("zhou scenario: epsilon, C, Cprime must be > 0");
    } else {
        if (kato.p <= 1.0) throw std::domain_error("kato scenario: p must be > 1");
        if (kato.K1 <= 0.0) throw std::domain_error("kato scenario: K1 must be > 0");
        if (kato.R < 0.0 || kato.T0 + kato.R <= 0.0)
            throw std::domain_error("kato scenario: need T0 + R > 0");
        if (kato.K0 < 0.0) throw std::domain_error("kato scenario: K0 must be >= 0");
        if (kato.K0 > 0.0) {
            if (kato.a < 1.0) throw std::domain_error("kato scenario: a must be >= 1");
            if (std::abs((kato.p - 1.0) * kato.a - (kato.q - 2.0)) > 1e-12)
                throw std::domain_error("kato scenario: (p-1)a = q-2 violated");
        }
    }
}

BlowupReport integrate(const OdeScenario& scenario, double horizon) {
    scenario.validate();
    double t0, horizon_floor;
    State y;
    Rhs rhs;
    std::optional<double> v_floor;

    if (scenario.kind == OdeKind::Zhou) {
        const ZhouCoeffs& zc = scenario.zhou;
        t0 = zc.sigma0;
        if (zc.epsilon) {
            double ep = std::pow(*zc.epsilon, zc.p);
            y = {zc.C * ep * zc.sigma0, zc.Cprime * ep};
            v_floor = zc.Cprime * ep;
        } else {
            y = {zc.u0, zc.u1};
        }
        double p = zc.p, c = zc.c;
        rhs = [p, c](double s, const State& st, State& out) {
            out.u = st.v;
            out.v = -2.0 * st.v + c * std::pow(s, 1.0 - p) * std::pow(std::abs(st.u), p);
        };
        horizon_floor = t0;
    } else {
        const KatoCoeffs& kc = scenario.kato;
        t0 = kc.T0;
        double f0 = kc.f0 ? *kc.f0 : kc.K0 * std::pow(kc.T0 + kc.R, kc.a);
        double f1 = kc.f1 ? *kc.f1 : kc.a * kc.K0 * std::pow(kc.T0 + kc.R, kc.a - 1.0);
        y = {f0, f1};
        double p = kc.p, K1 = kc.K1, q = kc.q, R = kc.R;
        rhs = [p, K1, q, R](double t, const State& st, State& out) {
            out.u = st.v;
            out.v = K1 * std::pow(t + R, -q) * std::pow(std::abs(st.u), p);
        };
        horizon_floor = t0;
    }
    if (horizon <= horizon_floor) throw std::domain_error("integrate: horizon before start");

    BlowupReport rep;
    rep.threshold = scenario.threshold;

    std::vector<double> ts, us;
    ts.reserve(4096);
    us.reserve(4096);
    ts.push_back(t0);
    us.push_back(std::abs(y.u));

    double t = t0;
    double h = 1e-4 * std::max(1.0, std::abs(t0));
    const double h_min_rel = 1e-14;

    while (t < horizon) {
        h = std::min(h, horizon - t);
        StepResult st = dp_step(rhs, t, y, h, scenario.rtol);
        if (!st.finite || st.err > 1.0) {
            ++rep.rejected_steps;
            double shrink = st.finite ? std::max(0.2, 0.9 * std::pow(st.err, -0.2)) : 0.2;
            h *= shrink;
            if (h < h_min_rel * std::max(1.0, std::abs(t))) {
                rep.blew_up = true;
                rep.mode = DetectionMode::StepCollapse;
                rep.t_detect = t;
                break;
            }
            continue;
        }
        t += h;
        y = st.y;
        if (v_floor && y.v < *v_floor) y.v = *v_floor;
        ++rep.steps;
        ts.push_back(t);
        us.push_back(std::abs(y.u));
        if (std::abs(y.u) > scenario.threshold) {
            rep.blew_up = true;
            rep.mode = DetectionMode::ThresholdExceeded;
            rep.t_detect = t;
            break;
        }
        double grow = st.err > 1e-12 ? 0.9 * std::pow(st.err, -0.2) : 5.0;
        h *= std::clamp(grow, 0.2, 5.0);
    }

    if (!rep.blew_up) {
        rep.t_detect = t;
        rep.t_extrapolated = t;
        return rep;
    }
    rep.t_extrapolated = extrapolate_pole(ts, us, rep.t_detect, rep.extrapolation_ok);
    if (rep.t_extrapolated < rep.t_detect) rep.t_extrapolated = rep.t_detect;
    return rep;
}

LifespanScaling zhou_lifespan_scaling(double p, double c, double C,
                                      const std::vector<double>& eps_grid, double horizon) {
    if (eps_grid.size() < 3)
        throw std::invalid_argument("zhou_lifespan_scaling: need at least 3 epsilons");
    double emin = eps_grid[0], emax = eps_grid[0];
    for (double e : eps_grid) {
        if (e <= 0.0) throw std::invalid_argument("zhou_lifespan_scaling: epsilons must be > 0");
        emin = std::min(emin, e);
        emax = std::max(emax, e);
    }
    if (emax < emin * std::pow(10.0, 1.5) * (1.0 - 1e-9))
        throw std::invalid_argument("zhou_lifespan_scaling: eps_grid must span >= 1.5 decades");
    LifespanScaling out;
    std::vector<double> lx, ly;
    for (double eps : eps_grid) {
        OdeScenario sc;
        sc.kind = OdeKind::Zhou;
        sc.zhou.p = p;
        sc.zhou.c = c;
        sc.zhou.C = C;
        sc.zhou.Cprime = C;
        sc.zhou.epsilon = eps;
        BlowupReport rep = integrate(sc, horizon);
        LifespanRow row{eps, rep.t_detect, rep.t_extrapolated, rep.blew_up};
        out.rows.push_back(row);
        if (rep.blew_up) {
            lx.push_back(std::log(eps));
            ly.push_back(std::log(rep.t_extrapolated));
        } else {
            ++out.censored;
        }
    }
    if (lx.size() < 3)
        throw std::runtime_error("zhou_lifespan_scaling: too many censored runs for a fit");
    out.fit = fit_linear(lx, ly);
    return out;
}

double exp_substitution_check(const std::function<double(double)>& J,
                              const std::vector<double>& t_samples) {
    if (t_samples.size() < 9)
        throw std::invalid_argument(
            "exp_substitution_check: grid too coarse, need at least 9 samples");
    double worst = 0.0;
    for (double t : t_samples) {
        if (t <= 0.0) throw std::domain_error("exp_substitution_check: t must be > 0");
        double tau = std::log1p(t);
        double ht = std::min(1e-3 * (1.0 + t), 0.45 * t);
        double htau = 1e-3;

        auto J0 = [&](double ta) { return J(std::expm1(ta)); };
        double j0p = fd_first(J0, tau, htau);
        double j0pp = fd_second(J0, tau, htau);
        double jp = fd_first(J, t, ht);
        double jpp = fd_second(J, t, ht);

        double lhs = j0pp + 2.0 * j0p;
        double rhs = (1.0 + t) * (1.0 + t) * jpp + 3.0 * (1.0 + t) * jp;
        double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return worst;
}

} // namespace epdt
