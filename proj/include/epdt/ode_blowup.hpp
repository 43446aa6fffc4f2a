#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "epdt/fitting.hpp"

namespace epdt {

enum class OdeKind { Zhou, Kato };

/* Damped comparison system in the slow variable sigma,
 *   U'' + 2 U' = c sigma^{1-p} U^p,  sigma >= sigma0,
 * the equality form of the exponential-lifespan comparison argument.
 * When epsilon is set the initial state is the scaled pair
 * (C eps^p sigma0, Cprime eps^p) and the standing growth hypothesis
 * U' >= Cprime eps^p is enforced as a floor: the cheapest trajectory
 * compatible with all three comparison inequalities, which is what the
 * lifespan bound actually constrains.
 */
struct ZhouCoeffs {
    double p = 2.0;
    double c = 1.0;
    double C = 1.0;
    double Cprime = 1.0;
    double sigma0 = 1.0;
    std::optional<double> epsilon;
    double u0 = 1.0; // used when epsilon is not set
    double u1 = 1.0;
};

/* Power-comparison system in t,
 *   F'' = K1 (t+R)^{-q} F^p,  t >= T0,
 * with the scale-matched growth hypothesis F >= K0 (t+R)^a, (p-1)a = q-2.
 * K0 = 0 turns the growth bookkeeping off (dynamics-only scenarios); in that
 * mode f0/f1 give the initial state directly and the (p-1)a = q-2 and a >= 1
 * checks are waived.
 */
struct KatoCoeffs {
    double p = 2.0;
    double K0 = 1.0;
    double K1 = 1.0;
    double a = 1.0;
    double q = 3.0;
    double R = 1.0;
    double T0 = 1.0;
    std::optional<double> f0; // defaults to K0 (T0+R)^a
    std::optional<double> f1; // defaults to a K0 (T0+R)^{a-1}
};

struct OdeScenario {
    OdeKind kind = OdeKind::Zhou;
    ZhouCoeffs zhou;
    KatoCoeffs kato;
    double threshold = 1e12;
    double rtol = 1e-10; // relative error per step for the embedded pair

    void validate() const;
};

enum class DetectionMode { None, ThresholdExceeded, StepCollapse };

struct BlowupReport {
    bool blew_up = false;
    double t_detect = 0.0;
    double t_extrapolated = 0.0;
    double threshold = 0.0;
    long steps = 0;
    long rejected_steps = 0;
    DetectionMode mode = DetectionMode::None;
    bool extrapolation_ok = false; // enough growth history for the pole fit
};

/* Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) integration up to the
 * horizon. Blow-up is declared when the state exceeds the threshold or the
 * step size collapses; t_extrapolated then comes from fitting
 * log U ~ -alpha log(T - t) over the last decade of growth, optimizing T.
 * Without at least 10 accepted samples spanning a decade, t_extrapolated
 * falls back to t_detect (flagged).
 */
BlowupReport integrate(const OdeScenario& scenario, double horizon);

struct LifespanRow {
    double epsilon = 0.0;
    double t_detect = 0.0;
    double t_extrapolated = 0.0;
    bool blew_up = false;
};

struct LifespanScaling {
    std::vector<LifespanRow> rows;
    FitResult fit;                 // log T vs log eps over the uncensored rows
    int censored = 0;
};

/* Lifespan-vs-amplitude study for the damped comparison system: for each
 * epsilon, integrate with the scaled initial state and fit
 * log T_blow against log epsilon over the runs that blew up (non-blow-ups
 * are kept in rows but censored from the fit). The expected slope is
 * -p(p-1). The grid must span at least 1.5 decades.
 */
LifespanScaling zhou_lifespan_scaling(double p, double c, double C,
                                      const std::vector<double>& eps_grid,
                                      double horizon = 1e9);

/* Chain-rule consistency of the tau = log(1+t) substitution: compares
 *   J0''(tau) + 2 J0'(tau)   against   (1+t)^2 J''(t) + 3 (1+t) J'(t)
 * with J0(tau) = J(e^tau - 1), both sides by 4th-order differencing on their
 * own variable at the given t samples. Needs at least 9 samples.
 * Returns the worst normalized mismatch.
 */
double exp_substitution_check(const std::function<double(double)>& J,
                              const std::vector<double>& t_samples);

} // namespace epdt
