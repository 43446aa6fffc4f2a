#include "epdt/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "epdt/exponents.hpp"
#include "epdt/quadrature.hpp"

namespace epdt {

namespace {

// int g(r) r^{n-1} dr over the whole grid times the sphere area, Simpson.
double grid_radial_integral(const RadialGrid& grid, int n, const std::vector<double>& g) {
    std::vector<double> w(g.size());
    for (size_t j = 0; j < g.size(); ++j) w[j] = g[j] * std::pow(grid.r(int(j)), n - 1.0);
    return sphere_surface(n) * simpson_uniform(w, grid.dr());
}

std::vector<double> cumtrapz_times(const std::vector<double>& t, const std::vector<double>& f) {
    return cumulative_trapezoid(std::span<const double>(t), std::span<const double>(f));
}

} // namespace

FunctionalSeries compute_series(const RadialTrajectory& traj, const TestFunctionSpec& spec) {
    if (traj.snapshots.size() < 8)
        throw std::invalid_argument("compute_series: need at least 8 snapshots");
    const RadialGrid& grid = traj.config.grid;
    const int N = grid.n_points;
    const int n = traj.config.params.n;
    const double p = traj.config.params.p;
    const double m = traj.config.params.m;

    FunctionalSeries out;
    std::vector<double> hbuf(N), fbuf(N), gbuf(N);
    std::vector<double> phi_rad(N);
    for (int j = 0; j < N; ++j) phi_rad[j] = sphere_exp_integral(grid.r(j), n);

    for (const auto& snap : traj.snapshots) {
        double t = snap.t;
        for (int j = 0; j < N; ++j) {
            double r = grid.r(j);
            double z = spec.z_of(t, r);
            double phi = z < 1.0 - 1e-14 ? phi_beta(spec, t, r) : 0.0;
            hbuf[j] = std::pow(std::abs(snap.u[j]), p) * phi;
            fbuf[j] = snap.u[j];
            gbuf[j] = snap.u[j] * phi_rad[j];
        }
        out.times.push_back(t);
        out.H.push_back(grid_radial_integral(grid, n, hbuf));
        out.F.push_back(grid_radial_integral(grid, n, fbuf));
        out.G.push_back(lambda_t(m, t) * grid_radial_integral(grid, n, gbuf));
    }
    out.I = series_I_from_H(out.times, out.H);
    out.J = series_J_from_I(out.times, out.I);
    return out;
}

std::vector<double> series_I_from_H(const std::vector<double>& times,
                                    const std::vector<double>& H) {
    if (times.size() != H.size()) throw std::invalid_argument("series_I_from_H: size mismatch");
    size_t K = times.size();
    std::vector<double> sH(K), s2H(K);
    for (size_t k = 0; k < K; ++k) {
        sH[k] = times[k] * H[k];
        s2H[k] = times[k] * times[k] * H[k];
    }
    std::vector<double> A = cumtrapz_times(times, sH);
    std::vector<double> B = cumtrapz_times(times, s2H);
    std::vector<double> I(K);
    for (size_t k = 0; k < K; ++k) I[k] = times[k] * A[k] - B[k];
    return I;
}

std::vector<double> series_J_from_I(const std::vector<double>& times,
                                    const std::vector<double>& I) {
    if (times.size() != I.size()) throw std::invalid_argument("series_J_from_I: size mismatch");
    std::vector<double> w(times.size());
    for (size_t k = 0; k < times.size(); ++k)
        w[k] = I[k] / std::pow(1.0 + times[k], 3.0);
    return cumtrapz_times(times, w);
}

IdentityE1Report check_identity_E1(const RadialTrajectory& traj, const TestFunctionSpec& spec) {
    const ModelParams& pr = traj.config.params;
    Interval iv = admissible_beta_interval(pr);
    if (!iv.contains(spec.beta))
        throw std::domain_error("check_identity_E1: beta outside the admissible interval");
    if (traj.snapshots.size() < 8)
        throw std::invalid_argument("check_identity_E1: need at least 8 snapshots");
    if (std::abs(traj.snapshots.front().t - 1.0) > 1e-12)
        throw std::invalid_argument("check_identity_E1: trajectory must start at t = 1");

    const RadialGrid& grid = traj.config.grid;
    const int N = grid.n_points;
    const int n = pr.n;
    const double p = pr.p;
    const double mp1 = pr.m + 1.0;

    // Weighted data integrals from the initial snapshot (epsilon included).
    const RadialState& init = traj.snapshots.front();
    double sup0 = support_radius(init, grid, 1e-300);
    if (mp1 * sup0 >= 1.0)
        throw std::domain_error("check_identity_E1: data support must satisfy (m+1) M < 1");
    std::vector<double> e0buf(N, 0.0), e1buf(N, 0.0);
    for (int j = 0; j < N; ++j) {
        double r = grid.r(j);
        double z = mp1 * mp1 * r * r;
        if (z >= 1.0) break;
        double ps = psi_beta(spec, z);
        double dps = psi_beta_prime(spec, z);
        e0buf[j] = init.u[j] * ps;
        e1buf[j] = init.v[j] * ps +
                   init.u[j] * (2.0 * mp1 * mp1 * mp1 * r * r * dps +
                                (pr.mu + spec.beta - 1.0) * ps);
    }
    IdentityE1Report rep;
    rep.E0 = grid_radial_integral(grid, n, e0buf);
    rep.E1 = grid_radial_integral(grid, n, e1buf);

    size_t K = traj.snapshots.size();
    std::vector<double> times(K), H(K), A(K), B(K);
    std::vector<double> hbuf(N), abuf(N), bbuf(N);
    for (size_t k = 0; k < K; ++k) {
        const RadialState& snap = traj.snapshots[k];
        double t = snap.t;
        times[k] = t;
        for (int j = 0; j < N; ++j) {
            double r = grid.r(j);
            double z = spec.z_of(t, r);
            if (z < 1.0 - 1e-14) {
                double phi = phi_beta(spec, t, r);
                hbuf[j] = std::pow(std::abs(snap.u[j]), p) * phi;
                abuf[j] = snap.u[j] * phi;
                bbuf[j] = snap.u[j] * psi_bar_beta(spec, z);
            } else {
                hbuf[j] = abuf[j] = bbuf[j] = 0.0;
            }
        }
        H[k] = grid_radial_integral(grid, n, hbuf);
        A[k] = grid_radial_integral(grid, n, abuf);
        B[k] = std::pow(t, -spec.beta) * grid_radial_integral(grid, n, bbuf);
    }

    std::vector<double> C0 = cumtrapz_times(times, H);
    std::vector<double> sH(K);
    for (size_t k = 0; k < K; ++k) sH[k] = times[k] * H[k];
    std::vector<double> C1 = cumtrapz_times(times, sH);
    std::vector<double> Bint = cumtrapz_times(times, B);

    rep.times = times;
    rep.lhs.resize(K);
    rep.rhs.resize(K);
    double scale = 0.0;
    for (size_t k = 0; k < K; ++k) {
        rep.lhs[k] = rep.E0 + rep.E1 * (times[k] - 1.0) + times[k] * C0[k] - C1[k];
        rep.rhs[k] = A[k] + Bint[k];
        scale = std::max({scale, std::abs(rep.lhs[k]), std::abs(rep.rhs[k])});
    }
    if (scale == 0.0) scale = 1.0;
    for (size_t k = 0; k < K; ++k)
        rep.max_rel_discrepancy =
            std::max(rep.max_rel_discrepancy, std::abs(rep.lhs[k] - rep.rhs[k]) / scale);
    return rep;
}

Lemma41Report check_lemma41(const FunctionalSeries& s) {
    size_t K = s.times.size();
    if (K == 0 || s.H.size() != K || s.J.size() != K)
        throw std::invalid_argument("check_lemma41: inconsistent series");
    std::vector<double> sH(K), s2H(K);
    for (size_t k = 0; k < K; ++k) {
        sH[k] = s.times[k] * s.H[k];
        s2H[k] = s.times[k] * s.times[k] * s.H[k];
    }
    std::vector<double> C0 = cumtrapz_times(s.times, s.H);
    std::vector<double> C1 = cumtrapz_times(s.times, sH);
    std::vector<double> C2 = cumtrapz_times(s.times, s2H);

    Lemma41Report rep;
    rep.times = s.times;
    rep.ok.resize(K);
    for (size_t k = 0; k < K; ++k) {
        double t = s.times[k];
        double lhs = t * t * s.J[k];
        double rhs = 0.5 * (t * t * C0[k] - 2.0 * t * C1[k] + C2[k]);
        double tol = 1e-9 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
        double margin = rhs + tol - lhs;
        rep.ok[k] = margin >= 0.0 ? 1 : 0;
        if (!rep.ok[k]) rep.all_ok = false;
        rep.worst_margin = std::min(rep.worst_margin, margin);
    }
    return rep;
}

GLowerBoundReport g_lower_bound_check(const RadialTrajectory& traj, double T0) {
    const ModelParams& pr = traj.config.params;
    if (std::abs(pr.delta() - 1.0) > 1e-9)
        throw std::domain_error("g_lower_bound_check: requires delta = 1");
    if (traj.snapshots.size() < 8)
        throw std::invalid_argument("g_lower_bound_check: need at least 8 snapshots");

    GLowerBoundReport rep;
    rep.T0 = T0;
    double umax = 0.0;
    for (const auto& snap : traj.snapshots)
        for (double x : snap.u) umax = std::max(umax, std::abs(x));
    if (umax == 0.0) {
        rep.vacuous = true;
        return rep;
    }

    const RadialGrid& grid = traj.config.grid;
    const int N = grid.n_points;
    std::vector<double> phi_rad(N), gbuf(N);
    for (int j = 0; j < N; ++j) phi_rad[j] = sphere_exp_integral(grid.r(j), pr.n);

    bool first = true;
    for (const auto& snap : traj.snapshots) {
        if (snap.t < T0) continue;
        for (int j = 0; j < N; ++j) gbuf[j] = snap.u[j] * phi_rad[j];
        double G = lambda_t(pr.m, snap.t) * grid_radial_integral(grid, pr.n, gbuf);
        double val = G * std::pow(snap.t, pr.m);
        if (first) {
            rep.inf_value = rep.sup_value = val;
            first = false;
        } else {
            rep.inf_value = std::min(rep.inf_value, val);
            rep.sup_value = std::max(rep.sup_value, val);
        }
    }
    if (first) throw std::invalid_argument("g_lower_bound_check: no snapshots past T0");
    rep.positive = rep.inf_value > 0.0;
    return rep;
}

} // namespace epdt
