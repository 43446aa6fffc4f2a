#pragma once

#include <string>

namespace epdt {

struct Hyp2F1Params {
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;
};

enum class SeriesMethod { DirectSeries, NearOneTransform, BoundaryFormula };

struct SeriesEvalReport {
    double value = 0.0;
    int terms_used = 0;
    double truncation_bound = 0.0; // estimated absolute tail of the summation
    SeriesMethod method = SeriesMethod::DirectSeries;
};

// Rising factorial (d)_k = d (d+1) ... (d+k-1); (d)_0 = 1.
// Accumulated in log space beyond k = 30; sign tracked separately.
double pochhammer(double d, int k);

// log Gamma(x) for x > 0, Lanczos approximation (relative error ~1e-14).
double log_gamma(double x);

// log |Gamma(x)| and sign for any non-pole real x (reflection for x < 0).
double log_gamma_signed(double x, int& sign);

/* Gauss hypergeometric function F(a,b;c;z) on z in [0,1).
 * Direct power series by term recurrence; for z > 0.9 with c-a-b > 0 and
 * c-a-b away from an integer, switches to the 1-z connection formula.
 * Terminating cases (a or b a nonpositive integer) sum exactly.
 * Throws std::domain_error for z outside [0,1) or c a nonpositive integer,
 * std::runtime_error when the requested tolerance is not reached.
 */
SeriesEvalReport gauss_2f1(const Hyp2F1Params& pr, double z, double tol = 1e-10);

// Direct series only, no method switching (oracle-friendly path).
SeriesEvalReport gauss_2f1_series(const Hyp2F1Params& pr, double z, double tol = 1e-10,
                                  long max_terms = 50'000'000);

// Boundary value F(a,b;c;1) = Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b)),
// defined for c-a-b > 0.
double gauss_2f1_at_one(const Hyp2F1Params& pr);

// d/dz F(a,b;c;z) = (ab/c) F(a+1,b+1;c+1;z).
double gauss_2f1_derivative(const Hyp2F1Params& pr, double z, double tol = 1e-10);

/* Richardson extrapolation of the direct series to z -> 1^- using the exact
 * exponent ladder {s, 1, s+1, 2, ...}, s = c-a-b. Independent of the Gamma
 * boundary formula; used to cross-check it. Requires s > 0.05 and s away
 * from integers.
 */
double gauss_2f1_extrapolate_to_one(const Hyp2F1Params& pr);

/* Modified Bessel function of the second kind by its integral representation
 *   K_l(z) = int_0^inf exp(-z cosh y) cosh(l y) dy,  z > 0.
 * Evaluated as exp(-z) * int exp(-z(cosh y - 1)) cosh(l y) dy to keep
 * relative accuracy for large z.
 */
double bessel_k(double l, double z);

// Surface area of the unit sphere S^{n-1}.
double sphere_surface(int n);

// Volume of the unit ball in R^n.
double ball_volume(int n);

/* Integral of exp(x . omega) over the unit sphere S^{n-1}, as a function of
 * rho = |x|. For n = 1 this is e^rho + e^{-rho}; for n >= 2 it reduces to a
 * polar-angle quadrature against the sin^{n-2} weight.
 */
double sphere_exp_integral(double rho, int n);

} // namespace epdt
