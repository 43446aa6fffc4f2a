#include "epdt/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

namespace epdt {

void SweepConfig::validate() const {
    if (eps_values.size() < 4)
        throw std::invalid_argument("sweep: need at least 4 epsilon values");
    for (size_t i = 0; i < eps_values.size(); ++i) {
        if (!(eps_values[i] > 0.0))
            throw std::invalid_argument("sweep: epsilon values must be positive");
        if (i > 0 && !(eps_values[i] < eps_values[i - 1]))
            throw std::invalid_argument("sweep: eps_values must be strictly decreasing");
    }
    if (!(horizon > 0.0)) throw std::invalid_argument("sweep: horizon must be positive");
    if (fit_mode == FitMode::LogVsInversePower && !(fit_power > 0.0))
        throw std::invalid_argument("sweep: fit_power must be positive");
    if (target == SweepTarget::ZhouSurrogate) {
        if (!(p > 1.0) || !(c > 0.0) || !(C > 0.0) || !(sigma0 > 0.0))
            throw std::invalid_argument("sweep: surrogate needs p>1, c>0, C>0, sigma0>0");
    } else {
        if (!pde) throw std::invalid_argument("sweep: pde target needs a solve config");
        pde->validate();
    }
    if (threads < 1) throw std::invalid_argument("sweep: threads must be >= 1");
}

namespace {

SweepRow sweep_point_zhou(const SweepConfig& cfg, double eps) {
    OdeScenario sc;
    sc.kind = OdeKind::Zhou;
    sc.zhou.p = cfg.p;
    sc.zhou.c = cfg.c;
    sc.zhou.C = cfg.C;
    sc.zhou.Cprime = cfg.C;
    sc.zhou.sigma0 = cfg.sigma0;
    sc.zhou.epsilon = eps;
    BlowupReport rep = integrate(sc, cfg.horizon);
    SweepRow row;
    row.epsilon = eps;
    row.blew_up = rep.blew_up;
    row.censored = !rep.blew_up;
    row.t_detect = rep.t_detect;
    row.lifespan = rep.blew_up
                       ? (rep.extrapolation_ok ? rep.t_extrapolated : rep.t_detect)
                       : cfg.horizon;
    return row;
}

SweepRow sweep_point_pde(const SweepConfig& cfg, double eps) {
    SolveConfig solve = *cfg.pde;
    solve.params.epsilon = eps;
    RadialTrajectory traj = run(solve);
    SweepRow row;
    row.epsilon = eps;
    row.blew_up = traj.blowup.blew_up;
    row.censored = !traj.blowup.blew_up;
    row.t_detect = traj.blowup.t_detect;
    row.lifespan = traj.blowup.blew_up ? (traj.blowup.extrapolation_ok
                                              ? traj.blowup.t_extrapolated
                                              : traj.blowup.t_detect)
                                       : solve.t_end;
    return row;
}

} // namespace

SweepResult lifespan_sweep(const SweepConfig& cfg) {
    cfg.validate();
    SweepResult res;
    res.rows.resize(cfg.eps_values.size());

    auto work = [&cfg](double eps) {
        return cfg.target == SweepTarget::ZhouSurrogate ? sweep_point_zhou(cfg, eps)
                                                        : sweep_point_pde(cfg, eps);
    };

    if (cfg.threads <= 1 || cfg.eps_values.size() <= 1) {
        for (size_t i = 0; i < cfg.eps_values.size(); ++i) res.rows[i] = work(cfg.eps_values[i]);
    } else {
        std::vector<std::future<SweepRow>> futs;
        futs.reserve(cfg.eps_values.size());
        for (double eps : cfg.eps_values)
            futs.push_back(std::async(std::launch::async, work, eps));
        for (size_t i = 0; i < futs.size(); ++i) res.rows[i] = futs[i].get();
    }

    std::vector<double> xs, ys;
    for (const SweepRow& row : res.rows) {
        if (row.censored) {
            ++res.n_censored;
            continue;
        }
        xs.push_back(cfg.fit_mode == FitMode::LogLog ? std::log(row.epsilon)
                                                     : std::pow(row.epsilon, -cfg.fit_power));
        ys.push_back(std::log(row.lifespan));
    }
    if (xs.size() >= 3) {
        res.fit = fit_linear(xs, ys);
        res.fit_valid = true;
    }

    // monotonicity in epsilon regardless of input order
    std::vector<SweepRow> sorted = res.rows;
    std::sort(sorted.begin(), sorted.end(),
              [](const SweepRow& a, const SweepRow& b) { return a.epsilon < b.epsilon; });
    res.monotone_decreasing = sorted.size() >= 2;
    for (size_t i = 1; i < sorted.size(); ++i)
        if (!(sorted[i].lifespan < sorted[i - 1].lifespan)) res.monotone_decreasing = false;

    return res;
}

} // namespace epdt
