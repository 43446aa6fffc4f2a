#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace epdt {

/* Coefficients of the model
 *   u_tt - t^{2m} Lap u + (mu/t) u_t + (nu^2/t^2) u = |u|^p,  t >= 1,
 * with data u(1) = eps*u0, u_t(1) = eps*u1 supported in {|x| <= M}.
 */
struct ModelParams {
    double m = 0.0;      // degeneracy exponent of the propagation speed t^m
    int    n = 1;        // space dimension
    double mu = 0.0;     // damping coefficient
    double nu = 0.0;     // mass coefficient
    double p = 2.0;      // nonlinearity power
    double epsilon = 1.0;
    double M = 0.5;      // support radius of the data

    double delta() const { return (mu - 1.0) * (mu - 1.0) - 4.0 * nu * nu; }

    void validate() const {
        if (m < 0.0) throw std::domain_error("m must be >= 0");
        if (n < 1) throw std::domain_error("n must be >= 1");
        if (mu < 0.0) throw std::domain_error("mu must be >= 0");
        if (nu < 0.0) throw std::domain_error("nu must be >= 0");
        if (p <= 1.0) throw std::domain_error("p must be > 1");
        if (epsilon < 0.0) throw std::domain_error("epsilon must be >= 0");
        if (M <= 0.0) throw std::domain_error("M must be > 0");
    }
};

// Characteristic curve radius: phi(t) = t^{m+1}/(m+1).
// Signals emitted at t=1 from |x| <= M stay inside |x| <= phi(t) - phi(1) + M.
inline double phi_speed(double m, double t) {
    return std::pow(t, m + 1.0) / (m + 1.0);
}

struct CharacteristicSpeed {
    double m = 0.0;
    double operator()(double t) const { return phi_speed(m, t); }
    double support_radius(double t, double M, double t0 = 1.0) const {
        return phi_speed(m, t) - phi_speed(m, t0) + M;
    }
};

// Half-open-ish real interval; lo may be open or closed, hi is always open.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_closed = false;

    bool empty() const { return lo >= hi; } // hi is open, so lo == hi is empty too
    bool contains(double x) const {
        if (empty()) return false;
        bool above = lo_closed ? (x >= lo) : (x > lo);
        return above && x < hi;
    }
    double midpoint() const { return 0.5 * (lo + hi); }
};

} // namespace epdt
