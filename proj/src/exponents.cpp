#include "epdt/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace epdt {

namespace {
constexpr double kTieTol = 1e-12;

double nan_d() { return std::numeric_limits<double>::quiet_NaN(); }

// Coefficients of A p^2 - B p - C = 0.
void strauss_coeffs(int n, double m, double mu, double& A, double& B, double& C) {
    A = (m + 1.0) * n - 1.0 + mu;
    B = (m + 1.0) * (n - 2.0) + 3.0 + mu;
    C = 2.0 * (m + 1.0);
}
} // namespace

double delta_of(double mu, double nu) {
    return (mu - 1.0) * (mu - 1.0) - 4.0 * nu * nu;
}

double strauss_exponent(int n, double m, double mu) {
    if (n < 1) throw std::domain_error("strauss_exponent: n must be >= 1");
    if (m < 0.0 || mu < 0.0) throw std::domain_error("strauss_exponent: m, mu must be >= 0");
    double A, B, C;
    strauss_coeffs(n, m, mu, A, B, C);
    if (A <= 0.0)
        throw std::domain_error("strauss_exponent: leading coefficient <= 0 (exponent is +inf)");
    double disc = std::sqrt(B * B + 4.0 * A * C);
    // One positive and one negative root (product -C/A < 0). Pick the form
    // that avoids cancellation in the numerator.
    if (B >= 0.0) return (B + disc) / (2.0 * A);
    return 2.0 * C / (disc - B);
}

double strauss_residual(int n, double m, double mu, double p) {
    double A, B, C;
    strauss_coeffs(n, m, mu, A, B, C);
    double scale = std::max({std::abs(A), std::abs(B), std::abs(C)});
    return (A * p * p - B * p - C) / scale;
}

double fujita_exponent(double k) {
    if (k <= 0.0) throw std::domain_error("fujita_exponent: argument must be > 0");
    return 1.0 + 2.0 / k;
}

double fujita_shift(const ModelParams& pr) {
    double d = pr.delta();
    if (d < 0.0) throw std::domain_error("fujita_shift: delta < 0");
    return (pr.m + 1.0) * pr.n + 0.5 * (pr.mu - 1.0 - std::sqrt(d));
}

double beta_q(double q, const ModelParams& pr) {
    if (q <= 0.0) throw std::domain_error("beta_q: q must be > 0");
    return 0.5 * ((pr.m + 1.0) * pr.n - pr.mu + 1.0) - (pr.m + 1.0) / q;
}

Interval admissible_beta_interval(const ModelParams& pr) {
    double d = pr.delta();
    if (d < 0.0) throw std::domain_error("admissible_beta_interval: delta < 0");
    double lo = 0.5 * (1.0 + std::sqrt(d) - pr.mu);
    double hi = 0.5 * ((pr.m + 1.0) * pr.n - pr.mu + 1.0);
    double floor = 1.0 - pr.mu;
    Interval iv;
    if (floor > lo) {
        iv.lo = floor;
        iv.lo_closed = true;
    } else {
        iv.lo = lo;
        iv.lo_closed = false;
    }
    iv.hi = hi;
    return iv;
}

RegimeReport check_theorem2_hypotheses(const ModelParams& pr) {
    pr.validate();
    RegimeReport rep;
    rep.delta = pr.delta();

    double mp1 = pr.m + 1.0;
    double wave_bound = mp1 * mp1 * double(pr.n) * double(pr.n);
    double para_bound = mp1 * mp1 * double(pr.n + 1) * double(pr.n + 1);
    if (rep.delta < wave_bound) rep.delta_class = DeltaClass::SubWave;
    else if (rep.delta >= para_bound) rep.delta_class = DeltaClass::ParabolicLike;
    else rep.delta_class = DeltaClass::Intermediate;

    rep.delta_positive = rep.delta > 0.0;
    if (!rep.delta_positive) rep.reasons.push_back("delta <= 0");
    rep.delta_below_wave = rep.delta < wave_bound;
    if (!rep.delta_below_wave) rep.reasons.push_back("delta >= (m+1)^2 n^2");

    try {
        rep.p_strauss = strauss_exponent(pr.n, pr.m, pr.mu);
    } catch (const std::domain_error&) {
        rep.p_strauss = std::numeric_limits<double>::infinity();
    }

    if (rep.delta_positive) {
        double shift = fujita_shift(pr);
        rep.p_fujita = shift > 0.0 ? fujita_exponent(shift) : nan_d();
    } else {
        rep.p_fujita = nan_d();
    }
    if (std::isnan(rep.p_fujita) || rep.p_strauss > rep.p_fujita + kTieTol)
        rep.dominant = Ordering::Greater;
    else if (rep.p_strauss < rep.p_fujita - kTieTol)
        rep.dominant = Ordering::Less;
    else
        rep.dominant = Ordering::Equal;

    if (rep.delta_positive && rep.delta_below_wave) {
        double thr = 2.0 * mp1 / (mp1 * pr.n - std::sqrt(rep.delta));
        rep.p_above_threshold = rep.p_strauss > thr;
    } else {
        rep.p_above_threshold = false;
    }
    if (!rep.p_above_threshold)
        rep.reasons.push_back("p_S <= 2(m+1)/((m+1)n - sqrt(delta))");

    rep.n1_mu_ok = pr.n != 1 || pr.mu >= pr.m;
    if (!rep.n1_mu_ok) rep.reasons.push_back("n = 1 requires mu >= m");

    rep.gn_ok = pr.p > 1.0 && (pr.n <= 2 || pr.p <= double(pr.n) / double(pr.n - 2));
    if (!rep.gn_ok) rep.reasons.push_back("local existence needs 1 < p <= n/(n-2)");

    rep.support_ok = pr.M < 1.0 / mp1;
    if (!rep.support_ok) rep.reasons.push_back("M must be < 1/(m+1)");

    rep.admissible = rep.delta_positive && rep.delta_below_wave && rep.p_above_threshold &&
                     rep.n1_mu_ok && rep.gn_ok && rep.support_ok;
    return rep;
}

void delta1_onset_roots(double m, double& root_lo, double& root_hi) {
    double mp1 = m + 1.0;
    double b = 8.0 * mp1 * mp1 * mp1 - 8.0 * mp1 * mp1 + 2.0 * mp1 - 1.0;
    double c = 8.0 * mp1 - 8.0 * mp1 * mp1 - 2.0;
    // x^2 - b x + c = 0 with c < 0: roots of opposite sign.
    double disc = std::sqrt(b * b - 4.0 * c);
    root_hi = 0.5 * (b + disc);
    root_lo = c / root_hi; // product of roots = c
}

ExponentComparison compare_ps_pf_delta1(int n, double m, double mu) {
    if (mu < 0.0 || m < 0.0) throw std::domain_error("compare_ps_pf_delta1: m, mu must be >= 0");
    ExponentComparison cmp;
    cmp.p_strauss = strauss_exponent(n, m, mu);
    double shift = (m + 1.0) * n + 0.5 * (mu - 2.0); // delta = 1
    cmp.p_fujita = fujita_exponent(shift);
    if (cmp.p_strauss > cmp.p_fujita + kTieTol) cmp.order = Ordering::Greater;
    else if (cmp.p_strauss < cmp.p_fujita - kTieTol) cmp.order = Ordering::Less;
    else cmp.order = Ordering::Equal;
    if (n == 2) {
        double lo, hi;
        delta1_onset_roots(m, lo, hi);
        cmp.a_of_m = hi;
    }
    return cmp;
}

DecayPrediction predicted_linear_decay(double k, const ModelParams& pr) {
    double d = pr.delta();
    if (d < 0.0) throw std::domain_error("predicted_linear_decay: delta < 0");
    double mp1 = pr.m + 1.0;
    double sd = std::sqrt(d);
    DecayPrediction out;
    out.threshold = 0.5 * sd / mp1 + 0.5 - 0.5 * pr.n;
    if (k > out.threshold + kTieTol) {
        out.which = DecayCase::Above;
        out.exponent = -0.5 * (pr.mu + pr.m);
        out.log_factor = false;
    } else if (k >= out.threshold - kTieTol) {
        out.which = DecayCase::Critical;
        out.exponent = -0.5 * (pr.mu + pr.m);
        out.log_factor = true;
    } else {
        out.which = DecayCase::Below;
        out.exponent = -mp1 * (k + 0.5 * pr.n) + 0.5 * (sd - pr.mu + 1.0);
        out.log_factor = false;
    }
    return out;
}

GNTheta gn_theta(double p, int n) {
    if (p <= 1.0) throw std::domain_error("gn_theta: p must be > 1");
    GNTheta gt;
    gt.theta = double(n) * (p - 1.0) / (2.0 * p);
    gt.in_range = gt.theta >= 0.0 && gt.theta <= 1.0;
    return gt;
}

} // namespace epdt
