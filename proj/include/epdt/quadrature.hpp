#pragma once

#include <functional>
#include <span>
#include <vector>

namespace epdt {

// Nodes and weights of N-point Gauss-Legendre quadrature on [-1, 1].
// Computed once per N via Newton iteration and cached.
struct GaussLegendre {
    std::vector<double> x;
    std::vector<double> w;
};
const GaussLegendre& gauss_legendre(int n);

// Single-panel Gauss-Legendre on [a, b].
double gl_integrate(const std::function<double(double)>& f, double a, double b, int n = 64);

// Composite Gauss-Legendre: panels equal subdivisions of [a, b].
double gl_integrate_composite(const std::function<double(double)>& f, double a, double b,
                              int panels, int n = 64);

// Adaptive Simpson with absolute tolerance scaled to the running estimate.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-11, int max_depth = 40);

// Trapezoid cumulative integral along sample points: out[k] = int_{x0}^{xk} f.
std::vector<double> cumulative_trapezoid(std::span<const double> x, std::span<const double> f);

// Composite Simpson over a uniform grid of values (n odd gets a trapezoid
// correction on the last interval).
double simpson_uniform(std::span<const double> f, double dx);

} // namespace epdt
