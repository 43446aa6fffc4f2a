#pragma once

#include <functional>
#include <span>
#include <vector>

namespace epdt {

// Fourth-order central first derivative: (f(x-2h) - 8f(x-h) + 8f(x+h) - f(x+2h)) / (12h).
double fd_first(const std::function<double(double)>& f, double x, double h);

// Fourth-order central second derivative.
double fd_second(const std::function<double(double)>& f, double x, double h);

/* Fornberg weights: coefficients c[j] such that
 *   f^{(order)}(x0) ~ sum_j c[j] f(nodes[j])
 * for arbitrary distinct nodes. Exact for polynomials of degree < nodes.size().
 */
std::vector<double> fornberg_weights(double x0, std::span<const double> nodes, int order);

} // namespace epdt
