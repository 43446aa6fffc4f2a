#pragma once

#include <functional>
#include <vector>

#include "epdt/params.hpp"
#include "epdt/special_functions.hpp"

namespace epdt {

/* Self-similar test function of the conjugate (adjoint) equation,
 *   Phi_beta(t, x) = t^{1-beta} psi_beta(z),  z = (m+1)^2 |x|^2 / t^{2(m+1)},
 * with psi_beta = F(a,b;c;z) for
 *   a = (2 beta + mu - 1 + sqrt(delta)) / (4(m+1)),
 *   b = (2 beta + mu - 1 - sqrt(delta)) / (4(m+1)),
 *   c = n/2.
 */
struct TestFunctionSpec {
    ModelParams params;
    double beta = 1.0;
    Hyp2F1Params hyp;
    double eval_tol = 1e-13;

    double z_of(double t, double r) const {
        double mp1 = params.m + 1.0;
        double w = mp1 * r / std::pow(t, mp1);
        return w * w;
    }
};

// Builds the spec; requires delta >= 0. Does not insist that beta lie in the
// admissible interval (callers needing that check it themselves).
TestFunctionSpec make_test_function_spec(const ModelParams& params, double beta);

double psi_beta(const TestFunctionSpec& spec, double z);
double psi_beta_prime(const TestFunctionSpec& spec, double z);

// psi_bar used in the first-order identity:
// (2 beta + mu - 2) psi(z) + 4(m+1) z psi'(z).
double psi_bar_beta(const TestFunctionSpec& spec, double z);

// Phi_beta(t, r); throws std::domain_error outside the light cone (z >= 1).
double phi_beta(const TestFunctionSpec& spec, double t, double r);

// Power of (1 - sqrt(z)) governing psi' as z -> 1^-:
// ((m+1)(n-2) - mu + 1 - 2 beta) / (2(m+1)).
double psi_prime_edge_power(const TestFunctionSpec& spec);

struct SamplePoint {
    double t = 1.0;
    double r = 0.0;
};

struct ResidualReport {
    double max_abs_residual = 0.0;   // normalized by term scale at the worst point
    double scale = 0.0;              // term scale there
    std::vector<SamplePoint> points; // points actually evaluated
};

/* Residual of the conjugate equation
 *   Phi_tt - t^{2m} Lap Phi - d/dt (mu Phi / t) + (nu^2/t^2) Phi
 * at the given points, via 4th-order centered differences of Phi itself.
 * Each residual is normalized by the largest single-term magnitude.
 */
ResidualReport conjugate_residual(const TestFunctionSpec& spec,
                                  const std::vector<SamplePoint>& points);

// Residual of the z-level hypergeometric equation satisfied by psi_beta,
//   z(1-z) psi'' + (c - (a+b+1) z) psi' - a b psi,
// using series derivatives only (no differencing). Normalized.
double hypergeometric_ode_residual(const TestFunctionSpec& spec, double z);

/* Separated time factor lambda(t) of the linear-wave test pair,
 *   lambda(t) = (m+1)^{-1/(2(m+1))} t^{1/2} K_{1/(2(m+1))}(t^{m+1}/(m+1)),
 * which solves lambda'' = t^{2m} lambda and decays like t^{-m/2} e^{-phi(t)}.
 */
double lambda_t(double m, double t);

// Normalized residual of lambda'' - t^{2m} lambda at t (4th-order differences).
double lambda_ode_residual(double m, double t);

// lambda(t) t^{m/2} e^{phi(t)}: bounded above and below on [1, inf).
double lambda_band_value(double m, double t);

// Radial data profile with compact support.
struct RadialProfile {
    std::function<double(double)> f;
    double support = 0.5;
    double operator()(double r) const { return r >= support ? 0.0 : f(r); }
};

// Smooth bump (1 - (r/M)^2)_+^power.
RadialProfile bump_profile(double M, double amplitude = 1.0, int power = 4);

struct InitialFunctionals {
    double E0 = 0.0;
    double E1 = 0.0;
};

/* Weighted data integrals entering the first-order identity:
 *   E0 = int u0 psi_beta((m+1)^2 |x|^2) dx,
 *   E1 = int u1 psi_beta dx
 *      + int u0 [ 2(m+1)^3 |x|^2 psi_beta' + (mu + beta - 1) psi_beta ] dx,
 * all kernels evaluated at z = (m+1)^2 r^2. Requires the supports to satisfy
 * (m+1) * support < 1 so the kernels stay inside the unit disc.
 */
InitialFunctionals initial_functionals(const TestFunctionSpec& spec, const RadialProfile& u0,
                                       const RadialProfile& u1);

// Radial integral int_0^R g(r) r^{n-1} dr times |S^{n-1}| by composite
// Gauss-Legendre (64 nodes per panel).
double radial_integral(const std::function<double(double)>& g, double R, int n, int panels = 8);

} // namespace epdt
