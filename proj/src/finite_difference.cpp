#include "epdt/finite_difference.hpp"

#include <algorithm>
#include <stdexcept>

namespace epdt {

double fd_first(const std::function<double(double)>& f, double x, double h) {
    return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h);
}

double fd_second(const std::function<double(double)>& f, double x, double h) {
    return (-f(x - 2 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2 * h)) /
           (12.0 * h * h);
}

std::vector<double> fornberg_weights(double x0, std::span<const double> nodes, int order) {
    int n = int(nodes.size()) - 1;
    int m = order;
    if (n < m) throw std::invalid_argument("fornberg_weights: need more nodes than the order");
    // B. Fornberg, "Generation of finite difference formulas on arbitrarily
    // spaced grids", Math. Comp. 51 (1988).
    std::vector<std::vector<double>> d(n + 1, std::vector<double>(m + 1, 0.0));
    d[0][0] = 1.0;
    double c1 = 1.0;
    for (int i = 1; i <= n; ++i) {
        double c2 = 1.0;
        for (int j = 0; j < i; ++j) {
            double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = std::min(i, m); k >= 1; --k)
                    d[i][k] = c1 * (k * d[i - 1][k - 1] - (nodes[i - 1] - x0) * d[i - 1][k]) / c2;
                d[i][0] = -c1 * (nodes[i - 1] - x0) * d[i - 1][0] / c2;
            }
            for (int k = std::min(i, m); k >= 1; --k)
                d[j][k] = ((nodes[i] - x0) * d[j][k] - k * d[j][k - 1]) / c3;
            d[j][0] = (nodes[i] - x0) * d[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n + 1);
    for (int j = 0; j <= n; ++j) w[j] = d[j][m];
    return w;
}

} // namespace epdt
