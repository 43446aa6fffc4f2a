#include "epdt/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epdt/exponents.hpp"
#include "epdt/functionals.hpp"
#include "epdt/run_io.hpp"
#include "epdt/sweep.hpp"
#include "epdt/test_functions.hpp"

namespace epdt {

namespace fs = std::filesystem;

namespace {

void out_line(const std::string& k, const std::string& v) {
    std::printf("%s = %s\n", k.c_str(), v.c_str());
}
void out_line(const std::string& k, double v) { out_line(k, fmt17(v)); }
void out_line(const std::string& k, bool v) { out_line(k, std::string(v ? "true" : "false")); }

const char* class_name(DeltaClass c) {
    switch (c) {
        case DeltaClass::SubWave: return "sub_wave";
        case DeltaClass::Intermediate: return "intermediate";
        case DeltaClass::ParabolicLike: return "parabolic_like";
    }
    return "sub_wave";
}

const char* order_name(Ordering o) {
    return o == Ordering::Less ? "less" : o == Ordering::Greater ? "greater" : "equal";
}

int cmd_exponents(const std::string& config, const std::string& out) {
    ExponentsQuery q = exponents_query_from_json_file(config);
    q.params.validate();
    RegimeReport rep = check_theorem2_hypotheses(q.params);

    out_line("delta", rep.delta);
    out_line("delta_class", std::string(class_name(rep.delta_class)));
    out_line("p_strauss", rep.p_strauss);
    out_line("p_fujita", rep.p_fujita);
    out_line("dominant", std::string(order_name(rep.dominant)));
    out_line("hypotheses_admissible", rep.admissible);
    for (const std::string& r : rep.reasons) out_line("failed", r);

    JsonWriter w;
    w.begin_object();
    w.kv("delta", rep.delta);
    w.kv("delta_class", class_name(rep.delta_class));
    w.kv("p_strauss", rep.p_strauss);
    w.kv("p_fujita", rep.p_fujita);
    w.kv("dominant", order_name(rep.dominant));
    w.key("hypotheses");
    w.begin_object();
    w.kv("delta_positive", rep.delta_positive);
    w.kv("delta_below_wave", rep.delta_below_wave);
    w.kv("p_above_threshold", rep.p_above_threshold);
    w.kv("n1_mu_ok", rep.n1_mu_ok);
    w.kv("gn_ok", rep.gn_ok);
    w.kv("support_ok", rep.support_ok);
    w.kv("admissible", rep.admissible);
    w.begin_array("reasons");
    for (const std::string& r : rep.reasons) w.value(r);
    w.end_array();
    w.end_object();

    if (rep.delta >= 0.0) {
        Interval iv = admissible_beta_interval(q.params);
        out_line("beta_interval_lo", iv.lo);
        out_line("beta_interval_hi", iv.hi);
        out_line("beta_interval_empty", iv.empty());
        w.key("beta_interval");
        w.begin_object();
        w.kv("lo", iv.lo);
        w.kv("hi", iv.hi);
        w.kv("lo_closed", iv.lo_closed);
        w.kv("empty", iv.empty());
        w.end_object();

        DecayPrediction dec = predicted_linear_decay(q.k, q.params);
        out_line("decay_exponent", dec.exponent);
        w.key("decay");
        w.begin_object();
        w.kv("k", q.k);
        w.kv("case", dec.which == DecayCase::Above      ? "above"
                     : dec.which == DecayCase::Critical ? "critical"
                                                        : "below");
        w.kv("exponent", dec.exponent);
        w.kv("log_factor", dec.log_factor);
        w.kv("threshold", dec.threshold);
        w.end_object();

        if (std::fabs(rep.delta - 1.0) <= 1e-9) {
            ExponentComparison cmp = compare_ps_pf_delta1(q.params.n, q.params.m, q.params.mu);
            out_line("delta1_order", std::string(order_name(cmp.order)));
            w.key("delta1_comparison");
            w.begin_object();
            w.kv("p_strauss", cmp.p_strauss);
            w.kv("p_fujita", cmp.p_fujita);
            w.kv("order", order_name(cmp.order));
            if (cmp.a_of_m) w.kv("a_of_m", *cmp.a_of_m);
            w.end_object();
        }
    }
    if (q.q) {
        double bq = beta_q(*q.q, q.params);
        out_line("beta_q", bq);
        w.kv("beta_q", bq);
    }
    w.end_object();
    if (!out.empty()) write_text_file(fs::path(out) / "summary.json", w.str());
    return 0;
}

int cmd_hyp_verify(const std::string& config, const std::string& out, long seed) {
    HypVerifyQuery q = hyp_verify_query_from_json_file(config);
    q.params.validate();
    std::mt19937_64 gen(static_cast<unsigned long long>(seed));
    std::uniform_real_distribution<double> zdist(0.05, 0.9);
    std::uniform_real_distribution<double> tdist(q.t_min, q.t_max);

    std::string csv = "beta,z_or_t,value,residual,bound\n";
    double max_series = 0.0, max_conj = 0.0, max_lambda = 0.0;
    double band_min = HUGE_VAL, band_max = 0.0;
    long rows = 0;

    for (double beta : q.betas) {
        TestFunctionSpec spec = make_test_function_spec(q.params, beta);
        for (int i = 0; i < q.n_z; ++i) {
            double z = 0.02 + (0.96 - 0.02) * i / (q.n_z - 1);
            SeriesEvalReport ev = gauss_2f1_series(spec.hyp, z, spec.eval_tol);
            double res = hypergeometric_ode_residual(spec, z);
            max_series = std::max(max_series, std::fabs(res));
            csv += fmt17(beta) + "," + fmt17(z) + "," + fmt17(ev.value) + "," + fmt17(res) +
                   "," + fmt17(ev.truncation_bound) + "\n";
            ++rows;
        }
        for (int i = 0; i < q.n_conjugate; ++i) {
            SamplePoint pt;
            pt.t = tdist(gen);
            double rc = phi_speed(q.params.m, pt.t); // cone radius at t
            pt.r = std::sqrt(zdist(gen)) * rc;
            ResidualReport rr = conjugate_residual(spec, {pt});
            double val = phi_beta(spec, pt.t, pt.r);
            max_conj = std::max(max_conj, rr.max_abs_residual);
            csv += fmt17(beta) + "," + fmt17(pt.t) + "," + fmt17(val) + "," +
                   fmt17(rr.max_abs_residual) + "," + fmt17(rr.scale) + "\n";
            ++rows;
        }
    }
    for (double t : q.lambda_times) {
        double lam = lambda_t(q.params.m, t);
        double res = lambda_ode_residual(q.params.m, t);
        double band = lambda_band_value(q.params.m, t);
        max_lambda = std::max(max_lambda, std::fabs(res));
        band_min = std::min(band_min, band);
        band_max = std::max(band_max, band);
        csv += fmt17(q.betas.front()) + "," + fmt17(t) + "," + fmt17(lam) + "," + fmt17(res) +
               "," + fmt17(band) + "\n";
        ++rows;
    }

    out_line("max_series_residual", max_series);
    out_line("max_conjugate_residual", max_conj);
    out_line("max_lambda_residual", max_lambda);

    if (!out.empty()) {
        write_text_file(fs::path(out) / "hyp_verify.csv", csv);
        JsonWriter w;
        w.begin_object();
        w.begin_array("betas");
        for (double b : q.betas) w.value(b);
        w.end_array();
        w.kv("rows", rows);
        w.kv("seed", seed);
        w.kv("max_series_residual", max_series);
        w.kv("max_conjugate_residual", max_conj);
        w.kv("max_lambda_residual", max_lambda);
        w.kv("lambda_band_min", band_min);
        w.kv("lambda_band_max", band_max);
        w.end_object();
        write_text_file(fs::path(out) / "summary.json", w.str());
    }
    return 0;
}

int cmd_simulate(const std::string& config, const std::string& out) {
    SolveConfig cfg = solve_config_from_json_file(config);
    RadialTrajectory traj = run(cfg);
    out_line("blew_up", traj.blowup.blew_up);
    out_line("t_detect", traj.blowup.t_detect);
    out_line("t_extrapolated", traj.blowup.t_extrapolated);
    out_line("snapshots", double(traj.snapshots.size()));
    if (!out.empty()) write_run_dir(out, traj);
    return 0;
}

int cmd_ode_blowup(const std::string& config, const std::string& out) {
    std::vector<double> eps_grid;
    double horizon = 1e9;
    OdeScenario sc = ode_scenario_from_json_file(config, eps_grid, horizon);

    if (!eps_grid.empty() && sc.kind == OdeKind::Zhou) {
        LifespanScaling ls =
            zhou_lifespan_scaling(sc.zhou.p, sc.zhou.c, sc.zhou.C, eps_grid, horizon);
        out_line("fit_slope", ls.fit.slope);
        out_line("fit_r_squared", ls.fit.r_squared);
        out_line("censored", double(ls.censored));
        if (!out.empty()) {
            std::string csv = "epsilon,t_detect,t_extrapolated,blew_up\n";
            for (const LifespanRow& r : ls.rows)
                csv += fmt17(r.epsilon) + "," + fmt17(r.t_detect) + "," +
                       fmt17(r.t_extrapolated) + "," + (r.blew_up ? "1" : "0") + "\n";
            write_text_file(fs::path(out) / "rows.csv", csv);
            JsonWriter w;
            w.begin_object();
            w.kv("p", sc.zhou.p);
            w.kv("expected_slope", -sc.zhou.p * (sc.zhou.p - 1.0));
            w.kv("fit_slope", ls.fit.slope);
            w.kv("fit_intercept", ls.fit.intercept);
            w.kv("fit_r_squared", ls.fit.r_squared);
            w.kv("censored", long(ls.censored));
            w.kv("horizon", horizon);
            w.end_object();
            write_text_file(fs::path(out) / "summary.json", w.str());
        }
        return 0;
    }

    BlowupReport rep = integrate(sc, horizon);
    out_line("blew_up", rep.blew_up);
    out_line("t_detect", rep.t_detect);
    out_line("t_extrapolated", rep.t_extrapolated);
    if (!out.empty()) {
        JsonWriter w;
        w.begin_object();
        w.kv("blew_up", rep.blew_up);
        w.kv("mode", rep.mode == DetectionMode::ThresholdExceeded ? "threshold"
                     : rep.mode == DetectionMode::StepCollapse    ? "step_collapse"
                                                                  : "none");
        w.kv("t_detect", rep.t_detect);
        w.kv("t_extrapolated", rep.t_extrapolated);
        w.kv("extrapolation_ok", rep.extrapolation_ok);
        w.kv("threshold", rep.threshold);
        w.kv("steps", rep.steps);
        w.kv("rejected_steps", rep.rejected_steps);
        w.kv("horizon", horizon);
        w.end_object();
        write_text_file(fs::path(out) / "summary.json", w.str());
    }
    return 0;
}

int cmd_sweep(const std::string& config, const std::string& out) {
    SweepConfig cfg = sweep_config_from_json_file(config);
    SweepResult res = lifespan_sweep(cfg);
    out_line("fit_valid", res.fit_valid);
    if (res.fit_valid) {
        out_line("fit_slope", res.fit.slope);
        out_line("fit_r_squared", res.fit.r_squared);
    }
    out_line("n_censored", double(res.n_censored));
    out_line("monotone_decreasing", res.monotone_decreasing);
    if (!out.empty()) {
        std::string csv = "epsilon,lifespan,t_detect,blew_up,censored\n";
        for (const SweepRow& r : res.rows)
            csv += fmt17(r.epsilon) + "," + fmt17(r.lifespan) + "," + fmt17(r.t_detect) + "," +
                   (r.blew_up ? "1" : "0") + "," + (r.censored ? "1" : "0") + "\n";
        write_text_file(fs::path(out) / "sweep.csv", csv);
        JsonWriter w;
        w.begin_object();
        w.kv("target", cfg.target == SweepTarget::ZhouSurrogate ? "zhou" : "pde");
        w.kv("fit_mode",
             cfg.fit_mode == FitMode::LogLog ? "loglog" : "log_vs_inverse_power");
        if (cfg.fit_mode == FitMode::LogVsInversePower) w.kv("fit_power", cfg.fit_power);
        w.kv("fit_valid", res.fit_valid);
        w.kv("fit_slope", res.fit.slope);
        w.kv("fit_intercept", res.fit.intercept);
        w.kv("fit_r_squared", res.fit.r_squared);
        w.kv("fit_points", long(res.fit.n_points));
        w.kv("n_censored", long(res.n_censored));
        w.kv("monotone_decreasing", res.monotone_decreasing);
        w.end_object();
        write_text_file(fs::path(out) / "summary.json", w.str());
    }
    return 0;
}

int cmd_functionals(const std::string& config, const std::string& out) {
    FunctionalsQuery q = functionals_query_from_json_file(config);
    RadialTrajectory traj = load_run_dir(q.run_dir);
    TestFunctionSpec spec = make_test_function_spec(traj.config.params, q.beta);
    FunctionalSeries series = compute_series(traj, spec);
    Lemma41Report lemma = check_lemma41(series);

    IdentityE1Report e1;
    bool have_e1 = false;
    if (q.identity) {
        e1 = check_identity_E1(traj, spec);
        have_e1 = true;
        out_line("E0", e1.E0);
        out_line("E1", e1.E1);
        out_line("identity_max_rel_discrepancy", e1.max_rel_discrepancy);
    }
    out_line("lemma_all_ok", lemma.all_ok);

    GLowerBoundReport gb;
    bool have_gb = false;
    if (std::fabs(traj.config.params.delta() - 1.0) <= 1e-9 &&
        traj.snapshots.size() >= 8 && traj.snapshots.back().t > q.T0) {
        gb = g_lower_bound_check(traj, q.T0);
        have_gb = true;
        out_line("g_bound_positive", gb.positive);
    }

    if (!out.empty()) {
        std::string csv = "t,H,I,J,F,G,E1_lhs,E1_rhs,lemma41_ok\n";
        double nan = std::nan("");
        for (size_t i = 0; i < series.times.size(); ++i) {
            csv += fmt17(series.times[i]) + "," + fmt17(series.H[i]) + "," +
                   fmt17(series.I[i]) + "," + fmt17(series.J[i]) + "," + fmt17(series.F[i]) +
                   "," + fmt17(series.G[i]) + ",";
            csv += fmt17(have_e1 ? e1.lhs[i] : nan) + ",";
            csv += fmt17(have_e1 ? e1.rhs[i] : nan) + ",";
            csv += lemma.ok[i] ? "1" : "0";
            csv += "\n";
        }
        write_text_file(fs::path(out) / "functionals.csv", csv);

        JsonWriter w;
        w.begin_object();
        w.kv("run_dir", q.run_dir);
        w.kv("beta", q.beta);
        w.kv("n_times", long(series.times.size()));
        if (have_e1) {
            w.key("identity");
            w.begin_object();
            w.kv("E0", e1.E0);
            w.kv("E1", e1.E1);
            w.kv("max_rel_discrepancy", e1.max_rel_discrepancy);
            w.end_object();
        }
        w.key("lemma41");
        w.begin_object();
        w.kv("all_ok", lemma.all_ok);
        w.kv("worst_margin", lemma.worst_margin);
        w.end_object();
        if (have_gb) {
            w.key("g_lower_bound");
            w.begin_object();
            w.kv("T0", gb.T0);
            w.kv("inf_value", gb.inf_value);
            w.kv("sup_value", gb.sup_value);
            w.kv("positive", gb.positive);
            w.kv("vacuous", gb.vacuous);
            w.end_object();
        }
        w.end_object();
        write_text_file(fs::path(out) / "summary.json", w.str());
    }
    return 0;
}

} // namespace

int cli_dispatch(int argc, char** argv) {
    CLI::App app{"radial numerical laboratory for a degenerate damped wave model"};
    app.require_subcommand(1);

    struct SubArgs {
        std::string config;
        std::string out;
        long seed = 20240801;
    };
    std::map<std::string, SubArgs> args;
    const char* names[] = {"exponents", "hyp-verify", "simulate",
                           "ode-blowup", "sweep",      "functionals"};
    const char* descs[] = {"critical exponents and hypothesis checks",
                           "test-function residual scans",
                           "radial PDE solve into a run directory",
                           "comparison-ODE blow-up integration",
                           "lifespan-vs-amplitude sweep",
                           "blow-up functionals over a run directory"};
    for (int i = 0; i < 6; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], descs[i]);
        SubArgs& a = args[names[i]];
        sub->add_option("--config", a.config, "JSON config file")->required();
        sub->add_option("--out", a.out, "output directory");
        sub->add_option("--seed", a.seed, "seed for randomized sample points");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string sub = app.get_subcommands().front()->get_name();
    const SubArgs& a = args[sub];
    try {
        if (sub == "exponents") return cmd_exponents(a.config, a.out);
        if (sub == "hyp-verify") return cmd_hyp_verify(a.config, a.out, a.seed);
        if (sub == "simulate") return cmd_simulate(a.config, a.out);
        if (sub == "ode-blowup") return cmd_ode_blowup(a.config, a.out);
        if (sub == "sweep") return cmd_sweep(a.config, a.out);
        if (sub == "functionals") return cmd_functionals(a.config, a.out);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 2;
}

} // namespace epdt
