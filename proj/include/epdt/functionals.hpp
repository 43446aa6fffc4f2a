#pragma once

#include <vector>

#include "epdt/pde_solver.hpp"
#include "epdt/test_functions.hpp"

namespace epdt {

/* Time series of the blow-up bookkeeping functionals along a trajectory:
 *   H(t) = int |u|^p Phi_beta dx
 *   I(t) = int_1^t (t-s) s H(s) ds
 *   J(t) = int_1^t (1+s)^{-3} I(s) ds
 *   F(t) = int u dx
 *   G(t) = lambda(t) int u(t,x) sphere_exp_integral(|x|) dx
 * Spatial integrals use the radial surface weight on the solver grid;
 * time integrals are composite trapezoids on the snapshot times.
 */
struct FunctionalSeries {
    std::vector<double> times;
    std::vector<double> H, I, J, F, G;
};

FunctionalSeries compute_series(const RadialTrajectory& traj, const TestFunctionSpec& spec);

// Time-integration helpers on an explicit (times, H) pair; exposed so the
// quadrature can be checked against closed forms.
std::vector<double> series_I_from_H(const std::vector<double>& times,
                                    const std::vector<double>& H);
std::vector<double> series_J_from_I(const std::vector<double>& times,
                                    const std::vector<double>& I);

struct IdentityE1Report {
    std::vector<double> times;
    std::vector<double> lhs;   // eps E0 + eps E1 (t-1) + int (t-s) H ds
    std::vector<double> rhs;   // int u Phi dx + int s^{-beta} int u psi_bar dx ds
    double E0 = 0.0;
    double E1 = 0.0;
    double max_rel_discrepancy = 0.0;
};

/* First-order identity satisfied by energy solutions against Phi_beta.
 * beta must lie in the admissible interval (domain error otherwise); the
 * trajectory must start at t = 1 and carry the initial snapshot.
 */
IdentityE1Report check_identity_E1(const RadialTrajectory& traj, const TestFunctionSpec& spec);

struct Lemma41Report {
    std::vector<double> times;
    std::vector<char> ok;          // t^2 J <= 1/2 int (t-s)^2 H ds, per time
    bool all_ok = true;
    double worst_margin = 0.0;     // most negative slack seen
};

Lemma41Report check_lemma41(const FunctionalSeries& s);

struct GLowerBoundReport {
    double inf_value = 0.0;     // inf over [T0, t_end] of G(t) t^m
    double sup_value = 0.0;
    bool positive = false;      // inf bounded away from zero
    bool vacuous = false;       // zero data: nothing to check
    double T0 = 2.0;
};

// Checks G(t) >= C t^{-m} on [T0, end] for a delta = 1 trajectory.
GLowerBoundReport g_lower_bound_check(const RadialTrajectory& traj, double T0 = 2.0);

} // namespace epdt
