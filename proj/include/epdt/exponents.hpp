#pragma once

#include <optional>
#include <string>
#include <vector>

#include "epdt/params.hpp"

namespace epdt {

double delta_of(double mu, double nu);

/* Positive root of
 *   ((m+1)n - 1 + mu) p^2 - ((m+1)(n-2) + 3 + mu) p - 2(m+1) = 0,
 * the generalized Strauss exponent of the damped Tricomi-type model.
 * Throws std::domain_error when the leading coefficient is <= 0
 * (n = 1, m = 0, mu = 0 degenerates; the exponent is +infinity there).
 */
double strauss_exponent(int n, double m, double mu);

// Residual of the defining quadratic at a candidate p, scaled by the
// largest coefficient magnitude. Diagnostic companion to strauss_exponent.
double strauss_residual(int n, double m, double mu, double p);

// Fujita exponent 1 + 2/k; requires k > 0.
double fujita_exponent(double k);

// Argument the Fujita exponent is evaluated at in the delta-based comparison:
// (m+1)n + (mu - 1 - sqrt(delta))/2.
double fujita_shift(const ModelParams& pr);

// beta_q = ((m+1)n - mu + 1)/2 - (m+1)/q.
double beta_q(double q, const ModelParams& pr);

/* Admissible test-function index range:
 * ((1 + sqrt(delta) - mu)/2, ((m+1)n - mu + 1)/2) intersected with [1-mu, inf).
 * Empty iff delta >= (m+1)^2 n^2. Requires delta >= 0.
 */
Interval admissible_beta_interval(const ModelParams& pr);

enum class DeltaClass { SubWave, Intermediate, ParabolicLike };
enum class Ordering { Less, Equal, Greater };

struct RegimeReport {
    double delta = 0.0;
    DeltaClass delta_class = DeltaClass::SubWave;
    double p_strauss = 0.0;                 // NaN when undefined
    double p_fujita = 0.0;                  // NaN when the shift is <= 0
    Ordering dominant = Ordering::Equal;    // p_strauss vs p_fujita

    bool delta_positive = false;
    bool delta_below_wave = false;          // delta < (m+1)^2 n^2
    bool p_above_threshold = false;         // p_S > 2(m+1)/((m+1)n - sqrt(delta))
    bool n1_mu_ok = false;                  // n = 1 requires mu >= m
    bool gn_ok = false;                     // 1 < p <= n/(n-2) for n >= 3
    bool support_ok = false;                // M < 1/(m+1)
    bool admissible = false;
    std::vector<std::string> reasons;       // one entry per failed hypothesis
};

/* Checks the critical-case blow-up hypotheses at p = strauss_exponent:
 * 0 < delta < (m+1)^2 n^2, p_S above the delta threshold, mu >= m when n = 1,
 * the local-existence bound 1 < p <= n/(n-2) evaluated at params.p,
 * and M < 1/(m+1). admissible is the conjunction.
 */
RegimeReport check_theorem2_hypotheses(const ModelParams& pr);

struct ExponentComparison {
    double p_strauss = 0.0;
    double p_fujita = 0.0;
    Ordering order = Ordering::Equal;       // p_strauss vs p_fujita
    std::optional<double> a_of_m;           // n = 2 only: positive root of the
                                            // onset quadratic in mu
};

/* At delta = 1: compares p_S(n + mu/(m+1), m) with p_F((m+1)n + (mu-2)/2).
 * The ordering comes from direct evaluation of both exponents. Writing
 * K = (m+1)n - 1, the sign of p_S - p_F is the sign of
 *   2K(K - 2m) + mu (K - 2m - 2),
 * so for n >= 3 the Strauss side dominates for every mu >= 0, while for
 * n = 2 the two cross at mu = 4m + 2 (p_S = p_F = 1 + 1/(2m+1) there).
 * For n = 2 the report also carries a(m), the larger root of
 *   x^2 - (8(m+1)^3 - 8(m+1)^2 + 2(m+1) - 1) x + 8(m+1) - 8(m+1)^2 - 2 = 0,
 * a published onset bookkeeping constant; it equals the actual crossing
 * only at m = 0 (both give 2), and sits above it for m > 0.
 */
ExponentComparison compare_ps_pf_delta1(int n, double m, double mu);

// The a(m) quadratic itself; returns both roots (ascending).
void delta1_onset_roots(double m, double& root_lo, double& root_hi);

enum class DecayCase { Above, Critical, Below };

struct DecayPrediction {
    DecayCase which = DecayCase::Above;
    double exponent = 0.0;      // power of t in the predicted L^2 bound
    bool log_factor = false;    // (1 + log t)^{1/2} present
    double threshold = 0.0;     // sqrt(delta)/(2(m+1)) + 1/2 - n/2
};

/* Linear-equation L^2 decay rate for data in H^k-type spaces:
 * k above threshold  -> t^{-(mu+m)/2},
 * k at threshold     -> t^{-(mu+m)/2} (1+log t)^{1/2},
 * k below threshold  -> t^{-(m+1)(k+n/2) + (sqrt(delta)-mu+1)/2}.
 * Ties use absolute tolerance 1e-12.
 */
DecayPrediction predicted_linear_decay(double k, const ModelParams& pr);

struct GNTheta {
    double theta = 0.0;
    bool in_range = false;      // theta in [0,1]
};

// Interpolation exponent n(p-1)/(2p) used with the L^2 -> L^{2p} embedding.
GNTheta gn_theta(double p, int n);

} // namespace epdt
