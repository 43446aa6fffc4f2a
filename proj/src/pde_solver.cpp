#include "epdt/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epdt {

namespace {

struct FormCoeffs {
    double c2 = 1.0; // squared propagation speed
    double d = 0.0;  // damping
    double e = 0.0;  // mass
    double f = 0.0;  // nonlinearity prefactor
};

double gamma_exponent(const ModelParams& pr) {
    return 0.5 * (std::sqrt(pr.delta()) - pr.mu + 1.0);
}

FormCoeffs form_coeffs(const SolveConfig& cfg, double t) {
    const ModelParams& pr = cfg.params;
    double m = pr.m, mp1 = m + 1.0;
    FormCoeffs fc;
    switch (cfg.form) {
    case EquationForm::Original:
        fc = {std::pow(t, 2.0 * m), pr.mu / t, pr.nu * pr.nu / (t * t), 1.0};
        break;
    case EquationForm::Linear:
        fc = {std::pow(t, 2.0 * m), pr.mu / t, pr.nu * pr.nu / (t * t), 0.0};
        break;
    case EquationForm::Dissipative: {
        double sd = std::sqrt(pr.delta());
        double g = gamma_exponent(pr);
        fc = {std::pow(t, 2.0 * m), (1.0 + sd) / t, 0.0, std::pow(t, g * (pr.p - 1.0))};
        break;
    }
    case EquationForm::Liouville: {
        double sd = std::sqrt(pr.delta());
        double g = gamma_exponent(pr);
        double expo = (g * (pr.p - 1.0) - 2.0 * m) / mp1;
        fc = {1.0, (1.0 + sd / mp1) / t, 0.0, std::pow(mp1 * t, expo)};
        break;
    }
    case EquationForm::Delta1:
        fc = {std::pow(t, 2.0 * m), 0.0, 0.0, std::pow(t, -0.5 * pr.mu * (pr.p - 1.0))};
        break;
    }
    return fc;
}

void check_form_delta(const SolveConfig& cfg) {
    double d = cfg.params.delta();
    switch (cfg.form) {
    case EquationForm::Dissipative:
    case EquationForm::Liouville:
        if (d < 0.0) throw std::domain_error("this form requires delta >= 0");
        break;
    case EquationForm::Delta1:
        if (std::abs(d - 1.0) > 1e-9) throw std::domain_error("Delta1 form requires delta = 1");
        break;
    default:
        break;
    }
}

double wave_speed(const SolveConfig& cfg, double t) {
    return cfg.form == EquationForm::Liouville ? 1.0 : std::pow(t, cfg.params.m);
}

double travel_distance(const SolveConfig& cfg, double t0, double t1) {
    if (cfg.form == EquationForm::Liouville) return t1 - t0;
    return phi_speed(cfg.params.m, t1) - phi_speed(cfg.params.m, t0);
}

struct StepWorkspace {
    std::vector<double> du1, dv1, du2, dv2, du3, dv3, du4, dv4, ut, vt;
};

void eval_rhs(const SolveConfig& cfg, double t, const std::vector<double>& u,
              const std::vector<double>& v, std::vector<double>& du, std::vector<double>& dv,
              const std::function<double(double, double)>* source) {
    const int N = cfg.grid.n_points;
    const double dr = cfg.grid.dr();
    const double inv_dr2 = 1.0 / (dr * dr);
    const double nm1 = cfg.params.n - 1.0;
    const double p = cfg.params.p;
    FormCoeffs fc = form_coeffs(cfg, t);

    du.resize(N);
    dv.resize(N);
    for (int j = 0; j < N; ++j) du[j] = v[j];

    // r = 0: Lap u = n * u_rr by radial symmetry.
    {
        double lap = cfg.params.n * 2.0 * (u[1] - u[0]) * inv_dr2;
        double nl = fc.f != 0.0 ? fc.f * std::pow(std::abs(u[0]), p) : 0.0;
        dv[0] = fc.c2 * lap - fc.d * v[0] - fc.e * u[0] + nl;
        if (source) dv[0] += (*source)(t, 0.0);
    }
    for (int j = 1; j < N - 1; ++j) {
        double r = j * dr;
        double lap = (u[j + 1] - 2.0 * u[j] + u[j - 1]) * inv_dr2 +
                     nm1 / r * (u[j + 1] - u[j - 1]) * (0.5 / dr);
        double nl = fc.f != 0.0 ? fc.f * std::pow(std::abs(u[j]), p) : 0.0;
        dv[j] = fc.c2 * lap - fc.d * v[j] - fc.e * u[j] + nl;
        if (source) dv[j] += (*source)(t, r);
    }
    // Dirichlet wall at r_max.
    du[N - 1] = 0.0;
    dv[N - 1] = 0.0;
}

struct AttemptResult {
    bool nan_failure = false;
    double nan_t = 0.0;
    std::vector<RadialState> snapshots;
    BlowupReport blowup;
};

AttemptResult attempt_run(const SolveConfig& cfg, const std::vector<double>& u0,
                          const std::vector<double>& v0, double t_start, double cfl_eff,
                          const std::function<double(double, double)>* source) {
    const int N = cfg.grid.n_points;
    const double dr = cfg.grid.dr();
    const double p = cfg.params.p;

    std::vector<double> targets = cfg.output_times;
    if (targets.empty()) targets.push_back(cfg.t_end);

    AttemptResult out;
    out.blowup.threshold = cfg.blowup_threshold;

    std::vector<double> u = u0, v = v0;
    StepWorkspace ws;
    ws.ut.resize(N);
    ws.vt.resize(N);

    std::vector<double> hist_t, hist_umax;
    double t = t_start;
    size_t next_target = 0;
    double umax_prev = 0.0;
    for (double x : u) umax_prev = std::max(umax_prev, std::abs(x));
    hist_t.push_back(t);
    hist_umax.push_back(umax_prev);

    while (next_target < targets.size() && t >= targets[next_target] - 1e-12 * targets[next_target]) {
        out.snapshots.push_back({targets[next_target], u, v});
        ++next_target;
    }

    const long max_steps = 100'000'000L;
    long steps = 0;
    while (t < cfg.t_end - 1e-12 * cfg.t_end) {
        if (++steps > max_steps) throw std::runtime_error("pde run: step budget exceeded");
        FormCoeffs fc = form_coeffs(cfg, t);
        double dt = cfl_eff * dr / std::max(1.0, wave_speed(cfg, t));
        if (fc.d > 0.0) dt = std::min(dt, 0.5 / fc.d);
        if (fc.f > 0.0 && umax_prev > 0.0) {
            double omega = std::sqrt(p * fc.f * std::pow(umax_prev, p - 1.0));
            if (omega > 0.0) dt = std::min(dt, 0.25 / omega);
        }
        double t_stop = next_target < targets.size() ? targets[next_target] : cfg.t_end;
        bool landing = t + dt >= t_stop - 1e-14 * t_stop;
        if (landing) dt = t_stop - t;
        if (dt <= 0.0) { // already at the target within rounding
            if (next_target < targets.size()) {
                out.snapshots.push_back({targets[next_target], u, v});
                ++next_target;
                continue;
            }
            break;
        }

        // Classical RK4.
        eval_rhs(cfg, t, u, v, ws.du1, ws.dv1, source);
        for (int j = 0; j < N; ++j) {
            ws.ut[j] = u[j] + 0.5 * dt * ws.du1[j];
            ws.vt[j] = v[j] + 0.5 * dt * ws.dv1[j];
        }
        eval_rhs(cfg, t + 0.5 * dt, ws.ut, ws.vt, ws.du2, ws.dv2, source);
        for (int j = 0; j < N; ++j) {
            ws.ut[j] = u[j] + 0.5 * dt * ws.du2[j];
            ws.vt[j] = v[j] + 0.5 * dt * ws.dv2[j];
        }
        eval_rhs(cfg, t + 0.5 * dt, ws.ut, ws.vt, ws.du3, ws.dv3, source);
        for (int j = 0; j < N; ++j) {
            ws.ut[j] = u[j] + dt * ws.du3[j];
            ws.vt[j] = v[j] + dt * ws.dv3[j];
        }
        eval_rhs(cfg, t + dt, ws.ut, ws.vt, ws.du4, ws.dv4, source);
        for (int j = 0; j < N; ++j) {
            u[j] += dt / 6.0 * (ws.du1[j] + 2.0 * ws.du2[j] + 2.0 * ws.du3[j] + ws.du4[j]);
            v[j] += dt / 6.0 * (ws.dv1[j] + 2.0 * ws.dv2[j] + 2.0 * ws.dv3[j] + ws.dv4[j]);
        }
        t += dt;
        ++out.blowup.steps;

        double umax = 0.0;
        bool finite = true;
        for (double x : u) {
            if (!std::isfinite(x)) {
                finite = false;
                break;
            }
            umax = std::max(umax, std::abs(x));
        }
        if (!finite) {
            if (umax_prev > 0.01 * cfg.blowup_threshold) {
                // Overshoot straight past the threshold: still a detection.
                out.blowup.blew_up = true;
                out.blowup.mode = DetectionMode::StepCollapse;
                out.blowup.t_detect = t - dt;
            } else {
                out.nan_failure = true;
                out.nan_t = t;
            }
            break;
        }
        hist_t.push_back(t);
        hist_umax.push_back(umax);
        umax_prev = umax;
        if (umax > cfg.blowup_threshold) {
            out.blowup.blew_up = true;
            out.blowup.mode = DetectionMode::ThresholdExceeded;
            out.blowup.t_detect = t;
            break;
        }
        if (landing && next_target < targets.size() &&
            std::abs(t - targets[next_target]) <= 1e-10 * std::max(1.0, targets[next_target])) {
            out.snapshots.push_back({targets[next_target], u, v});
            ++next_target;
        }
    }

    if (out.blowup.blew_up) {
        // Self-similar heuristic: near the pole umax ~ (T - t)^{-2/(p-1)}, so
        // umax^{-(p-1)/2} is linear in t and hits zero at T.
        out.blowup.t_extrapolated = out.blowup.t_detect;
        size_t n = hist_umax.size();
        double top = hist_umax.back();
        size_t start = n;
        for (size_t i = n; i-- > 0;) {
            if (hist_umax[i] < 0.1 * top) break;
            start = i;
        }
        if (n - start >= 10 && p > 1.0) {
            std::vector<double> xs(hist_t.begin() + start, hist_t.end());
            std::vector<double> ys(n - start);
            for (size_t i = start; i < n; ++i)
                ys[i - start] = std::pow(hist_umax[i], -0.5 * (p - 1.0));
            FitResult fr = fit_linear(xs, ys);
            if (fr.slope < 0.0) {
                double T = -fr.intercept / fr.slope;
                if (T >= out.blowup.t_detect) {
                    out.blowup.t_extrapolated = T;
                    out.blowup.extrapolation_ok = true;
                }
            }
        }
    } else if (!out.nan_failure) {
        out.blowup.t_detect = t;
        out.blowup.t_extrapolated = t;
    }
    return out;
}

RadialTrajectory run_core(const SolveConfig& cfg, std::vector<double> u0, std::vector<double> v0,
                          double t_start, const std::function<double(double, double)>* source,
                          bool enforce_containment) {
    cfg.validate();
    if (int(u0.size()) != cfg.grid.n_points || int(v0.size()) != cfg.grid.n_points)
        throw std::invalid_argument("pde run: data size does not match the grid");
    if (enforce_containment) {
        double needed = travel_distance(cfg, t_start, cfg.t_end) + cfg.params.M;
        if (cfg.grid.r_max < needed)
            throw std::invalid_argument("pde run: r_max too small for the light cone (need >= " +
                                        std::to_string(needed) + ")");
    }
    u0[cfg.grid.n_points - 1] = 0.0;
    v0[cfg.grid.n_points - 1] = 0.0;

    RadialTrajectory traj;
    traj.config = cfg;
    traj.t_start = t_start;

    const int max_retries = 6;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        double cfl_eff = cfg.cfl * std::pow(0.5, attempt);
        AttemptResult res = attempt_run(cfg, u0, v0, t_start, cfl_eff, source);
        if (!res.nan_failure) {
            traj.snapshots = std::move(res.snapshots);
            traj.blowup = res.blowup;
            return traj;
        }
        if (attempt == max_retries)
            throw std::runtime_error("pde run: unstable even after halving the step " +
                                     std::to_string(max_retries) + " times (t ~ " +
                                     std::to_string(res.nan_t) + ")");
    }
    throw std::logic_error("unreachable");
}

} // namespace

void SolveConfig::validate() const {
    params.validate();
    check_form_delta(*this);
    if (grid.n_points < 16) throw std::invalid_argument("grid: n_points must be >= 16");
    if (grid.r_max <= 0.0) throw std::invalid_argument("grid: r_max must be > 0");
    if (cfl <= 0.0 || cfl > 1.0) throw std::invalid_argument("cfl must be in (0, 1]");
    if (blowup_threshold <= 0.0) throw std::invalid_argument("blowup_threshold must be > 0");
    double t0 = t_start();
    if (t_end <= t0) throw std::invalid_argument("t_end must exceed the start time");
    double prev = t0 - 1e-15;
    for (double t : output_times) {
        if (t < t0 || t > t_end) throw std::invalid_argument("output_times must lie in [start, t_end]");
        if (t <= prev) throw std::invalid_argument("output_times must be strictly increasing");
        prev = t;
    }
}

double SolveConfig::t_start() const {
    return form == EquationForm::Liouville ? phi_speed(params.m, 1.0) : 1.0;
}

RadialTrajectory run(const SolveConfig& cfg) {
    RadialProfile bump = bump_profile(cfg.params.M, cfg.params.epsilon, cfg.bump_power);
    int N = cfg.grid.n_points;
    std::vector<double> u0(N), v0(N);
    for (int j = 0; j < N; ++j) {
        double r = cfg.grid.r(j);
        u0[j] = bump(r);
        v0[j] = cfg.u1_scale * bump(r);
    }
    return run_core(cfg, std::move(u0), std::move(v0), cfg.t_start(), nullptr, true);
}

RadialTrajectory run_with_data(const SolveConfig& cfg, std::vector<double> u0,
                               std::vector<double> v0, double t_start) {
    return run_core(cfg, std::move(u0), std::move(v0), t_start, nullptr, false);
}

RadialTrajectory run_with_source(const SolveConfig& cfg, std::vector<double> u0,
                                 std::vector<double> v0, double t_start,
                                 const std::function<double(double, double)>& source) {
    return run_core(cfg, std::move(u0), std::move(v0), t_start, &source, false);
}

void rhs(const SolveConfig& cfg, const RadialState& state, std::vector<double>& du,
         std::vector<double>& dv) {
    eval_rhs(cfg, state.t, state.u, state.v, du, dv, nullptr);
}

double support_radius(const RadialState& state, const RadialGrid& grid, double tol) {
    for (int j = grid.n_points; j-- > 0;)
        if (std::abs(state.u[j]) > tol) return grid.r(j);
    return 0.0;
}

void map_original_to_form(EquationForm target, const ModelParams& pr, double t, double u,
                          double ut, double& w, double& wt) {
    switch (target) {
    case EquationForm::Dissipative:
    case EquationForm::Liouville: {
        double g = gamma_exponent(pr);
        double s = std::pow(t, -g);
        w = s * u;
        wt = s * (ut - g * u / t);
        if (target == EquationForm::Liouville) wt *= std::pow(t, -pr.m); // d/ds = t^{-m} d/dt
        break;
    }
    case EquationForm::Delta1: {
        double s = std::pow(t, 0.5 * pr.mu);
        w = s * u;
        wt = s * (ut + 0.5 * pr.mu * u / t);
        break;
    }
    default:
        w = u;
        wt = ut;
        break;
    }
}

void map_form_to_original(EquationForm source, const ModelParams& pr, double t, double w,
                          double wt, double& u, double& ut) {
    switch (source) {
    case EquationForm::Dissipative:
    case EquationForm::Liouville: {
        if (source == EquationForm::Liouville) wt *= std::pow(t, pr.m);
        double g = gamma_exponent(pr);
        double s = std::pow(t, g);
        u = s * w;
        ut = s * (wt + g * w / t);
        break;
    }
    case EquationForm::Delta1: {
        double s = std::pow(t, -0.5 * pr.mu);
        u = s * w;
        ut = s * (wt - 0.5 * pr.mu * w / t);
        break;
    }
    default:
        u = w;
        ut = wt;
        break;
    }
}

RoundTripReport transform_roundtrip(const RadialTrajectory& source, TransformDirection dir) {
    if (source.config.form != EquationForm::Original)
        throw std::domain_error("transform_roundtrip: source must be an Original-form run");
    if (source.snapshots.empty())
        throw std::invalid_argument("transform_roundtrip: source has no snapshots");
    if (std::abs(source.snapshots.front().t - source.t_start) > 1e-12)
        throw std::invalid_argument(
            "transform_roundtrip: source snapshots must start at the initial time");

    const ModelParams& pr = source.config.params;
    EquationForm target = EquationForm::Original;
    switch (dir) {
    case TransformDirection::Identity: target = EquationForm::Original; break;
    case TransformDirection::ToDissipative: target = EquationForm::Dissipative; break;
    case TransformDirection::ToDelta1: target = EquationForm::Delta1; break;
    case TransformDirection::ToLiouville: target = EquationForm::Liouville; break;
    }

    SolveConfig tc = source.config;
    tc.form = target;
    auto map_time = [&](double t) {
        return target == EquationForm::Liouville ? phi_speed(pr.m, t) : t;
    };
    tc.t_end = map_time(source.config.t_end);
    tc.output_times.clear();
    for (const auto& snap : source.snapshots) tc.output_times.push_back(map_time(snap.t));
    tc.validate();

    const RadialState& init = source.snapshots.front();
    int N = source.config.grid.n_points;
    std::vector<double> w0(N), w1(N);
    for (int j = 0; j < N; ++j)
        map_original_to_form(target, pr, init.t, init.u[j], init.v[j], w0[j], w1[j]);

    RadialTrajectory back = run_with_data(tc, std::move(w0), std::move(w1), map_time(init.t));

    double u_scale = 0.0;
    for (const auto& snap : source.snapshots)
        for (double x : snap.u) u_scale = std::max(u_scale, std::abs(x));
    if (u_scale == 0.0) u_scale = 1.0;

    RoundTripReport rep;
    rep.direction = dir;
    size_t common = std::min(source.snapshots.size(), back.snapshots.size());
    if (common == 0) throw std::runtime_error("transform_roundtrip: no common snapshots");
    for (size_t k = 0; k < common; ++k) {
        const RadialState& a = source.snapshots[k];
        const RadialState& b = back.snapshots[k];
        double t = a.t;
        double worst = 0.0;
        for (int j = 0; j < N; ++j) {
            double u, ut;
            map_form_to_original(target, pr, t, b.u[j], b.v[j], u, ut);
            worst = std::max(worst, std::abs(u - a.u[j]));
        }
        rep.per_snapshot.push_back(worst / u_scale);
        rep.max_rel_discrepancy = std::max(rep.max_rel_discrepancy, worst / u_scale);
    }
    return rep;
}

} // namespace epdt
