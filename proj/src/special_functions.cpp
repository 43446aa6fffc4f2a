#include "epdt/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "epdt/quadrature.hpp"

namespace epdt {

namespace {

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

// Order of termination if the series is a polynomial, else -1.
long terminating_degree(const Hyp2F1Params& pr) {
    long deg = -1;
    if (is_nonpositive_integer(pr.a)) deg = long(-pr.a);
    if (is_nonpositive_integer(pr.b)) {
        long d = long(-pr.b);
        deg = deg < 0 ? d : std::min(deg, d);
    }
    return deg;
}

void check_params(const Hyp2F1Params& pr) {
    if (is_nonpositive_integer(pr.c))
        throw std::domain_error("gauss_2f1: c is a nonpositive integer");
}

} // namespace

double pochhammer(double d, int k) {
    if (k < 0) throw std::domain_error("pochhammer: k must be >= 0");
    if (k == 0) return 1.0;
    if (k <= 30) {
        double p = 1.0;
        for (int j = 0; j < k; ++j) p *= d + j;
        return p;
    }
    double log_abs = 0.0;
    int sign = 1;
    for (int j = 0; j < k; ++j) {
        double f = d + j;
        if (f == 0.0) return 0.0;
        if (f < 0.0) sign = -sign;
        log_abs += std::log(std::abs(f));
    }
    return sign * std::exp(log_abs);
}

double log_gamma(double x) {
    if (x <= 0.0) throw std::domain_error("log_gamma: x must be > 0");
    // Lanczos, g = 7, 9 coefficients.
    static const double g = 7.0;
    static const double coef[9] = {
        0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
        771.32342877765313,    -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) {
        // Reflection keeps the approximation in its accurate range.
        return std::log(M_PI / std::sin(M_PI * x)) - log_gamma(1.0 - x);
    }
    double xx = x - 1.0;
    double acc = coef[0];
    for (int i = 1; i < 9; ++i) acc += coef[i] / (xx + i);
    double t = xx + g + 0.5;
    return 0.5 * std::log(2.0 * M_PI) + (xx + 0.5) * std::log(t) - t + std::log(acc);
}

double log_gamma_signed(double x, int& sign) {
    if (x > 0.0) {
        sign = 1;
        return log_gamma(x);
    }
    if (x == std::floor(x)) throw std::domain_error("log_gamma_signed: pole at nonpositive integer");
    // Gamma(x) = pi / (sin(pi x) Gamma(1-x)) for x < 0.
    double s = std::sin(M_PI * x);
    sign = s > 0.0 ? 1 : -1;
    return std::log(M_PI / std::abs(s)) - log_gamma(1.0 - x);
}

SeriesEvalReport gauss_2f1_series(const Hyp2F1Params& pr, double z, double tol, long max_terms) {
    check_params(pr);
    if (z < 0.0 || z >= 1.0) throw std::domain_error("gauss_2f1: z must be in [0,1)");
    SeriesEvalReport rep;
    rep.method = SeriesMethod::DirectSeries;

    long term_cap = terminating_degree(pr);
    double term = 1.0;
    double sum = 1.0;
    long k = 0;
    while (true) {
        if (term_cap >= 0 && k >= term_cap) {
            rep.truncation_bound = 0.0; // exact polynomial
            break;
        }
        double ratio = (pr.a + k) * (pr.b + k) / ((k + 1.0) * (pr.c + k)) * z;
        term *= ratio;
        sum += term;
        ++k;
        double r_abs = std::abs(ratio);
        if (r_abs < 1.0 && std::abs(term) <= tol * std::abs(sum) * (1.0 - r_abs)) {
            // Geometric tail bound |term| * r/(1-r) with r the current ratio.
            rep.truncation_bound = std::abs(term) * r_abs / (1.0 - r_abs);
            break;
        }
        if (k >= max_terms)
            throw std::runtime_error("gauss_2f1: series did not reach tolerance " +
                                     std::to_string(tol) + " within " + std::to_string(max_terms) +
                                     " terms (|last term| ~ " + std::to_string(std::abs(term)) +
                                     ")");
    }
    rep.terms_used = int(std::min<long>(k, INT32_MAX));
    rep.value = sum;
    return rep;
}

namespace {

// Linear 1-z connection formula, valid when s = c-a-b is not an integer:
// F(a,b;c;z) = P1 F(a,b;a+b-c+1;1-z) + P2 (1-z)^s F(c-a,c-b;s+1;1-z).
SeriesEvalReport gauss_2f1_near_one(const Hyp2F1Params& pr, double z, double tol) {
    double s = pr.c - pr.a - pr.b;
    double omz = 1.0 - z;
    int sg_c, sg_s, sg_ca, sg_cb, sg_ms, sg_a, sg_b;
    double lg_c = log_gamma_signed(pr.c, sg_c);

    double lp1 = lg_c + log_gamma_signed(s, sg_s) - log_gamma_signed(pr.c - pr.a, sg_ca) -
                 log_gamma_signed(pr.c - pr.b, sg_cb);
    double p1 = sg_c * sg_s * sg_ca * sg_cb * std::exp(lp1);

    double lp2 = lg_c + log_gamma_signed(-s, sg_ms) - log_gamma_signed(pr.a, sg_a) -
                 log_gamma_signed(pr.b, sg_b);
    double p2 = sg_c * sg_ms * sg_a * sg_b * std::exp(lp2) * std::pow(omz, s);

    SeriesEvalReport f1 = gauss_2f1_series({pr.a, pr.b, pr.a + pr.b - pr.c + 1.0}, omz, tol);
    SeriesEvalReport f2 = gauss_2f1_series({pr.c - pr.a, pr.c - pr.b, s + 1.0}, omz, tol);

    SeriesEvalReport rep;
    rep.method = SeriesMethod::NearOneTransform;
    rep.value = p1 * f1.value + p2 * f2.value;
    rep.terms_used = f1.terms_used + f2.terms_used;
    rep.truncation_bound =
        std::abs(p1) * f1.truncation_bound + std::abs(p2) * f2.truncation_bound;
    return rep;
}

bool transform_usable(const Hyp2F1Params& pr) {
    double s = pr.c - pr.a - pr.b;
    if (std::abs(s - std::round(s)) < 0.05) return false;
    // Gamma poles in the prefactors make the formula unusable.
    for (double x : {pr.c, pr.c - pr.a, pr.c - pr.b, pr.a, pr.b})
        if (x == std::floor(x) && x <= 0.0) return false;
    // Sub-series parameter c values must not hit poles either.
    for (double x : {pr.a + pr.b - pr.c + 1.0, s + 1.0})
        if (x == std::floor(x) && x <= 0.0) return false;
    return true;
}

} // namespace

SeriesEvalReport gauss_2f1(const Hyp2F1Params& pr, double z, double tol) {
    check_params(pr);
    if (z < 0.0 || z >= 1.0) throw std::domain_error("gauss_2f1: z must be in [0,1)");
    if (terminating_degree(pr) >= 0) return gauss_2f1_series(pr, z, tol);
    if (z > 0.9 && transform_usable(pr)) return gauss_2f1_near_one(pr, z, tol);
    return gauss_2f1_series(pr, z, tol);
}

double gauss_2f1_at_one(const Hyp2F1Params& pr) {
    check_params(pr);
    double s = pr.c - pr.a - pr.b;
    if (s <= 0.0) throw std::domain_error("gauss_2f1_at_one: requires c-a-b > 0");
    int sg_c, sg_s, sg_ca, sg_cb;
    double lg = log_gamma_signed(pr.c, sg_c) + log_gamma_signed(s, sg_s) -
                log_gamma_signed(pr.c - pr.a, sg_ca) - log_gamma_signed(pr.c - pr.b, sg_cb);
    return sg_c * sg_s * sg_ca * sg_cb * std::exp(lg);
}

double gauss_2f1_derivative(const Hyp2F1Params& pr, double z, double tol) {
    Hyp2F1Params up{pr.a + 1.0, pr.b + 1.0, pr.c + 1.0};
    return pr.a * pr.b / pr.c * gauss_2f1(up, z, tol).value;
}

double gauss_2f1_extrapolate_to_one(const Hyp2F1Params& pr) {
    double s = pr.c - pr.a - pr.b;
    if (s <= 0.05) throw std::domain_error("extrapolate_to_one: c-a-b too small");
    if (std::abs(s - std::round(s)) < 0.05)
        throw std::domain_error("extrapolate_to_one: c-a-b too close to an integer");

    // Samples at 1 - z = eta0 * 2^{-j}; the z -> 1 expansion runs over powers
    // {s, 1, s+1, 2, s+2, 3, ...}, eliminated one by one (Neville style).
    const int levels = 13;
    const double eta0 = 0.1;
    std::vector<long double> T(levels);
    for (int j = 0; j < levels; ++j) {
        double eta = eta0 * std::pow(0.5, j);
        T[j] = gauss_2f1_series(pr, 1.0 - eta, 1e-13).value;
    }
    std::vector<double> expo;
    for (int k = 0; expo.size() < 8; ++k) {
        expo.push_back(s + k);
        expo.push_back(1.0 + k);
    }
    std::sort(expo.begin(), expo.end());
    int rounds = std::min<int>(int(expo.size()), levels - 2);
    for (int r = 0; r < rounds; ++r) {
        long double f = std::pow(0.5L, (long double)expo[r]);
        for (int j = 0; j + 1 < levels - r; ++j) T[j] = (T[j + 1] - f * T[j]) / (1.0L - f);
    }
    // Entry built from the smallest 1-z samples carries the least residual.
    return double(T[levels - 1 - rounds]);
}

double bessel_k(double l, double z) {
    if (z <= 0.0) throw std::domain_error("bessel_k: z must be > 0");
    l = std::abs(l);
    // Cutoff Y with z(cosh Y - 1) - l Y >= 60 so the discarded tail is
    // below 1e-26 relative to the integrand scale e^{-z}.
    double Y = std::acosh(1.0 + 60.0 / z);
    for (int i = 0; i < 3; ++i) Y = std::acosh(1.0 + (60.0 + l * Y) / z);
    auto f = [&](double y) { return std::exp(-z * (std::cosh(y) - 1.0)) * std::cosh(l * y); };
    double I = adaptive_simpson(f, 0.0, Y, 1e-13, 48);
    return std::exp(-z) * I;
}

double sphere_surface(int n) {
    if (n < 1) throw std::domain_error("sphere_surface: n must be >= 1");
    if (n == 1) return 2.0; // S^0 = two points
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::exp(log_gamma(0.5 * n));
}

double ball_volume(int n) {
    return std::pow(M_PI, 0.5 * n) / std::exp(log_gamma(0.5 * n + 1.0));
}

double sphere_exp_integral(double rho, int n) {
    if (n < 1) throw std::domain_error("sphere_exp_integral: n must be >= 1");
    if (rho < 0.0) throw std::domain_error("sphere_exp_integral: rho must be >= 0");
    if (n == 1) return std::exp(rho) + std::exp(-rho);
    double ring = sphere_surface(n - 1); // |S^{n-2}|
    auto f = [&](double th) {
        return std::exp(rho * std::cos(th)) * std::pow(std::sin(th), double(n - 2));
    };
    return ring * adaptive_simpson(f, 0.0, M_PI, 1e-12, 44);
}

} // namespace epdt
