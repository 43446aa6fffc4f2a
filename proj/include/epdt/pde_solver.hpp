#pragma once

#include <vector>

#include "epdt/ode_blowup.hpp"
#include "epdt/params.hpp"
#include "epdt/test_functions.hpp"

namespace epdt {

/* Model variants solved natively on a radial grid. All share the shape
 *   u_tt = c2(t) Lap u - d(t) u_t - e(t) u + f(t) |u|^p
 * with second-order differences for the radial Laplacian.
 *
 *   Original:     c2 = t^{2m},  d = mu/t,          e = nu^2/t^2,  f = 1
 *   Linear:       Original with f = 0
 *   Dissipative:  c2 = t^{2m},  d = (1+sqrt(delta))/t,  e = 0,
 *                 f = t^{g(p-1)},   g = (sqrt(delta)-mu+1)/2
 *                 (u = t^g w maps Original to this)
 *   Liouville:    c2 = 1,  d = (1 + sqrt(delta)/(m+1))/s,  e = 0,
 *                 f = ((m+1)s)^{(g(p-1)-2m)/(m+1)}, time s = t^{m+1}/(m+1)
 *   Delta1:       c2 = t^{2m},  d = 0,  e = 0,  f = t^{-mu(p-1)/2}
 *                 (requires delta = 1; u = t^{-mu/2} w)
 */
enum class EquationForm { Original, Linear, Dissipative, Liouville, Delta1 };

struct RadialGrid {
    double r_max = 1.0;
    int n_points = 256;
    double dr() const { return r_max / (n_points - 1); }
    double r(int j) const { return j * dr(); }
};

struct RadialState {
    double t = 1.0;
    std::vector<double> u;
    std::vector<double> v; // du/dt
};

struct SolveConfig {
    ModelParams params;
    EquationForm form = EquationForm::Original;
    RadialGrid grid;
    double cfl = 0.4;
    double t_end = 2.0;
    std::vector<double> output_times; // empty means {t_end}
    double blowup_threshold = 1e8;
    int bump_power = 4;
    double u1_scale = 1.0; // initial velocity = u1_scale * initial profile

    void validate() const;
    double t_start() const; // 1 for t-forms, 1/(m+1) for the Liouville time
};

struct RadialTrajectory {
    SolveConfig config;
    double t_start = 1.0;
    std::vector<RadialState> snapshots;
    BlowupReport blowup;
};

// Native solve from the built-in bump data (amplitude epsilon).
RadialTrajectory run(const SolveConfig& cfg);

// Native solve from explicit data at t_start (used by the transform machinery
// and manufactured-solution tests).
RadialTrajectory run_with_data(const SolveConfig& cfg, std::vector<double> u0,
                               std::vector<double> v0, double t_start);

// Same, with an extra source term added to u_tt (manufactured solutions).
RadialTrajectory run_with_source(const SolveConfig& cfg, std::vector<double> u0,
                                 std::vector<double> v0, double t_start,
                                 const std::function<double(double, double)>& source);

// Single right-hand-side evaluation (exposed for direct testing).
void rhs(const SolveConfig& cfg, const RadialState& state, std::vector<double>& du,
         std::vector<double>& dv);

// Largest grid radius where |u| exceeds tol; 0 when none does.
double support_radius(const RadialState& state, const RadialGrid& grid, double tol = 1e-12);

enum class TransformDirection { Identity, ToDissipative, ToDelta1, ToLiouville };

struct RoundTripReport {
    double max_rel_discrepancy = 0.0;    // worst |u_src - back-mapped| / max|u_src|
    std::vector<double> per_snapshot;    // same, per output time
    TransformDirection direction = TransformDirection::Identity;
};

/* Re-solves the trajectory natively in the transformed variables (mapped
 * initial data, mapped output times) and maps the result back. The source
 * trajectory must be an Original-form run.
 */
RoundTripReport transform_roundtrip(const RadialTrajectory& source, TransformDirection dir);

// Pointwise variable maps at fixed time (u, u_t) -> (w, w_t) and back.
void map_original_to_form(EquationForm target, const ModelParams& pr, double t, double u,
                          double ut, double& w, double& wt);
void map_form_to_original(EquationForm source, const ModelParams& pr, double t, double w,
                          double wt, double& u, double& ut);

} // namespace epdt
