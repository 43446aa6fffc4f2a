#include "epdt/fitting.hpp"

#include <cmath>
#include <stdexcept>

namespace epdt {

FitResult fit_linear(std::span<const double> x, std::span<const double> y) {
    size_t n = x.size();
    if (n != y.size()) throw std::invalid_argument("fit_linear: size mismatch");
    if (n < 3) throw std::invalid_argument("fit_linear: need at least 3 points");
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || !(sxx > 1e-300))
        throw std::invalid_argument("fit_linear: degenerate x values");
    FitResult fr;
    fr.n_points = int(n);
    fr.slope = sxy / sxx;
    fr.intercept = my - fr.slope * mx;
    if (syy <= 0.0) {
        fr.r_squared = 1.0; // constant response: the fit is exact
    } else {
        double ss_res = syy - sxy * sxy / sxx;
        fr.r_squared = 1.0 - ss_res / syy;
        if (fr.r_squared < 0.0) fr.r_squared = 0.0;
        if (fr.r_squared > 1.0) fr.r_squared = 1.0;
    }
    return fr;
}

} // namespace epdt
