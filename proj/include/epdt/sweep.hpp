#pragma once

#include <optional>
#include <vector>

#include "epdt/fitting.hpp"
#include "epdt/ode_blowup.hpp"
#include "epdt/pde_solver.hpp"

namespace epdt {

enum class SweepTarget { ZhouSurrogate, Pde };

// loglog: fit log T vs log epsilon, slope estimates the lifespan exponent.
// log_vs_inverse_power: fit log T vs epsilon^{-power}, for regimes where the
// lifespan grows like exp(c eps^{-power}).
enum class FitMode { LogLog, LogVsInversePower };

struct SweepConfig {
    SweepTarget target = SweepTarget::ZhouSurrogate;
    FitMode fit_mode = FitMode::LogLog;
    double fit_power = 2.0; // exponent for LogVsInversePower
    std::vector<double> eps_values;
    double horizon = 1e9; // censoring time for the ODE surrogate

    // ZhouSurrogate target
    double p = 2.0;
    double c = 1.0;
    double C = 1.0;
    double sigma0 = 1.0;

    // Pde target; epsilon is overridden per sweep point
    std::optional<SolveConfig> pde;

    int threads = 1;

    void validate() const;
};

struct SweepRow {
    double epsilon = 0.0;
    double lifespan = 0.0; // extrapolated blow-up time, or horizon if censored
    double t_detect = 0.0;
    bool blew_up = false;
    bool censored = false;
};

struct SweepResult {
    std::vector<SweepRow> rows; // ordered as eps_values
    FitResult fit;              // over uncensored rows only
    bool fit_valid = false;
    int n_censored = 0;
    bool monotone_decreasing = false; // lifespan strictly decreasing in epsilon
};

SweepResult lifespan_sweep(const SweepConfig& cfg);

} // namespace epdt
