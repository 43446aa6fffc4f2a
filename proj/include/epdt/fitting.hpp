#pragma once

#include <span>

namespace epdt {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
    int n_points = 0;
};

// Ordinary least squares y = slope * x + intercept. Needs >= 3 points and
// nondegenerate x variance. Constant y gives slope 0, r_squared 1.
FitResult fit_linear(std::span<const double> x, std::span<const double> y);

} // namespace epdt
