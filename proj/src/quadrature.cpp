#include "epdt/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace epdt {

namespace {

GaussLegendre build_gl(int n) {
    GaussLegendre gl;
    gl.x.resize(n);
    gl.w.resize(n);
    // Roots of P_n by Newton from the Chebyshev-like initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        gl.x[i] = -x;
        gl.x[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        gl.w[i] = w;
        gl.w[n - 1 - i] = w;
    }
    return gl;
}

double simpson_panel(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double fm, double whole, double tol, int depth, int max_depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth >= max_depth || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_panel(f, a, fa, m, fm, flm, left, 0.5 * tol, depth + 1, max_depth) +
           simpson_panel(f, m, fm, b, fb, frm, right, 0.5 * tol, depth + 1, max_depth);
}

} // namespace

const GaussLegendre& gauss_legendre(int n) {
    static std::map<int, GaussLegendre> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_gl(n)).first;
    return it->second;
}

double gl_integrate(const std::function<double(double)>& f, double a, double b, int n) {
    const GaussLegendre& gl = gauss_legendre(n);
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += gl.w[i] * f(c + h * gl.x[i]);
    return s * h;
}

double gl_integrate_composite(const std::function<double(double)>& f, double a, double b,
                              int panels, int n) {
    double s = 0.0;
    double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k) s += gl_integrate(f, a + k * h, a + (k + 1) * h, n);
    return s;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, int max_depth) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double tol = rel_tol * std::max(std::abs(whole), 1e-300);
    return simpson_panel(f, a, fa, b, fb, fm, whole, tol, 0, max_depth);
}

std::vector<double> cumulative_trapezoid(std::span<const double> x, std::span<const double> f) {
    if (x.size() != f.size()) throw std::invalid_argument("cumulative_trapezoid: size mismatch");
    std::vector<double> out(x.size(), 0.0);
    for (size_t k = 1; k < x.size(); ++k)
        out[k] = out[k - 1] + 0.5 * (x[k] - x[k - 1]) * (f[k] + f[k - 1]);
    return out;
}

double simpson_uniform(std::span<const double> f, double dx) {
    size_t n = f.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * dx * (f[0] + f[1]);
    double s = 0.0;
    size_t last = (n % 2 == 1) ? n - 1 : n - 2;
    for (size_t k = 0; k + 2 <= last; k += 2) s += dx / 3.0 * (f[k] + 4.0 * f[k + 1] + f[k + 2]);
    if (n % 2 == 0) s += 0.5 * dx * (f[n - 2] + f[n - 1]);
    return s;
}

} // namespace epdt
