#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "epdt/functionals.hpp"

using namespace epdt;

namespace {

// Short smooth wave run used by most cases: 3-d, mu = 2, delta = 1,
// bump data well inside the unit ball so the weighted identities apply.
RadialTrajectory smooth_run(int npts, int ntimes) {
    SolveConfig cfg;
    cfg.params = {0.0, 3, 2.0, 0.0, 2.0, 0.1, 0.5};
    cfg.form = EquationForm::Original;
    cfg.grid = {2.0, npts};
    cfg.t_end = 2.0;
    for (int i = 0; i <= ntimes; ++i)
        cfg.output_times.push_back(1.0 + 1.0 * i / ntimes);
    return run(cfg);
}

FunctionalSeries synthetic_series(int K, double t_end, double (*h)(double)) {
    FunctionalSeries s;
    s.times.resize(K);
    s.H.resize(K);
    for (int k = 0; k < K; ++k) {
        s.times[k] = 1.0 + (t_end - 1.0) * k / (K - 1);
        s.H[k] = h(s.times[k]);
    }
    s.I = series_I_from_H(s.times, s.H);
    s.J = series_J_from_I(s.times, s.I);
    s.F.assign(K, 0.0);
    s.G.assign(K, 0.0);
    return s;
}

} // namespace

TEST_CASE("nested time integrals match closed forms") {
    // H(s) = s gives I(t) = t (t^3 - 1)/3 - (t^4 - 1)/4 exactly.
    auto worst_I = [](int K) {
        std::vector<double> t(K), H(K);
        for (int k = 0; k < K; ++k) {
            t[k] = 1.0 + 2.0 * k / (K - 1);
            H[k] = t[k];
        }
        std::vector<double> I = series_I_from_H(t, H);
        double worst = 0.0;
        for (int k = 0; k < K; ++k) {
            double ex = t[k] * (std::pow(t[k], 3) - 1.0) / 3.0 - (std::pow(t[k], 4) - 1.0) / 4.0;
            worst = std::max(worst, std::abs(I[k] - ex));
        }
        return worst;
    };
    CHECK(worst_I(40001) <= 1e-8);
    CHECK(worst_I(201) <= 2e-4);

    // I(s) = (1+s)^3 makes the J integrand constant, so the trapezoid is exact.
    int K = 101;
    std::vector<double> t(K), I(K);
    for (int k = 0; k < K; ++k) {
        t[k] = 1.0 + 2.0 * k / (K - 1);
        I[k] = std::pow(1.0 + t[k], 3);
    }
    std::vector<double> J = series_J_from_I(t, I);
    for (int k = 0; k < K; ++k) CHECK(std::abs(J[k] - (t[k] - 1.0)) <= 1e-13);
}

TEST_CASE("nested integrals have the advertised derivatives") {
    // dI/dt = int_1^t s H ds, d2I/dt2 = t H(t), (1+t)^3 dJ/dt = I(t).
    int K = 4001;
    std::vector<double> t(K), H(K);
    for (int k = 0; k < K; ++k) {
        t[k] = 1.0 + 2.0 * k / (K - 1);
        H[k] = t[k];
    }
    std::vector<double> I = series_I_from_H(t, H);
    std::vector<double> J = series_J_from_I(t, I);
    double h = t[1] - t[0];
    for (int k = 1; k + 1 < K; ++k) {
        double dI = (I[k + 1] - I[k - 1]) / (2 * h);
        double ddI = (I[k + 1] - 2 * I[k] + I[k - 1]) / (h * h);
        double dJ = (J[k + 1] - J[k - 1]) / (2 * h);
        CHECK(std::abs(dI - (std::pow(t[k], 3) - 1.0) / 3.0) <= 1e-6);
        CHECK(std::abs(ddI - t[k] * H[k]) <= 1e-6);
        CHECK(std::abs(std::pow(1.0 + t[k], 3) * dJ - I[k]) <= 1e-6);
    }
}

TEST_CASE("series constructors reject inconsistent inputs") {
    std::vector<double> t = {1.0, 1.5, 2.0};
    std::vector<double> g = {0.0, 1.0};
    CHECK_THROWS_AS(series_I_from_H(t, g), std::invalid_argument);
    CHECK_THROWS_AS(series_J_from_I(t, g), std::invalid_argument);

    FunctionalSeries bad = synthetic_series(64, 3.0, [](double) { return 1.0; });
    bad.J.pop_back();
    CHECK_THROWS_AS(check_lemma41(bad), std::invalid_argument);

    RadialTrajectory traj = smooth_run(65, 8);
    traj.snapshots.resize(5);
    TestFunctionSpec spec = make_test_function_spec(traj.config.params, 0.5);
    CHECK_THROWS_AS(compute_series(traj, spec), std::invalid_argument);
}

TEST_CASE("volume functional reproduces the closed-form bump integral") {
    // F(1) = int u0 dx with u0 = (1 - (r/M)^2)_+^4, which reduces to a beta
    // function: |S^{n-1}| M^n B(n/2, 5)/2. Checked through the full pipeline
    // so the surface measure in the radial quadrature is exercised.
    for (int n : {1, 2, 3}) {
        SolveConfig cfg;
        cfg.params = {0.0, n, 2.0, 0.0, 2.0, 1.0, 0.5};
        cfg.grid = {2.0, 1025};
        cfg.t_end = 1.5;
        cfg.output_times = {1.0, 1.05, 1.1, 1.15, 1.2, 1.25, 1.3, 1.35};
        RadialTrajectory traj = run(cfg);
        TestFunctionSpec spec = make_test_function_spec(cfg.params, 0.5);
        FunctionalSeries s = compute_series(traj, spec);
        double closed = sphere_surface(n) * std::pow(0.5, n) * 0.5 *
                        std::exp(std::lgamma(n / 2.0) + std::lgamma(5.0) -
                                 std::lgamma(n / 2.0 + 5.0));
        CHECK(std::abs(s.F.front() - closed) <= 1e-8 * closed);
    }
}

TEST_CASE("series from a smooth run are positive and ordered") {
    RadialTrajectory traj = smooth_run(257, 200);
    TestFunctionSpec spec = make_test_function_spec(traj.config.params, 0.5);
    FunctionalSeries s = compute_series(traj, spec);

    REQUIRE(s.times.size() == 201);
    REQUIRE(s.H.size() == s.times.size());
    REQUIRE(s.I.size() == s.times.size());
    REQUIRE(s.J.size() == s.times.size());
    REQUIRE(s.F.size() == s.times.size());
    REQUIRE(s.G.size() == s.times.size());

    CHECK(s.I.front() == 0.0);
    CHECK(s.J.front() == 0.0);
    for (size_t k = 0; k < s.times.size(); ++k) {
        CHECK(s.H[k] > 0.0);
        CHECK(std::isfinite(s.F[k]));
        CHECK(std::isfinite(s.G[k]));
        if (k > 0) {
            CHECK(s.I[k] >= s.I[k - 1]);
            CHECK(s.J[k] >= s.J[k - 1]);
        }
    }
    CHECK(s.I.back() > 0.0);
    CHECK(s.J.back() > 0.0);
}

TEST_CASE("energy identity holds and tightens under refinement") {
    RadialTrajectory coarse = smooth_run(257, 200);
    TestFunctionSpec spec = make_test_function_spec(coarse.config.params, 0.5);
    IdentityE1Report rc = check_identity_E1(coarse, spec);

    REQUIRE(rc.times.size() == 201);
    REQUIRE(rc.lhs.size() == rc.times.size());
    REQUIRE(rc.rhs.size() == rc.times.size());
    CHECK(rc.E0 > 0.0);
    CHECK(rc.E1 > 0.0);
    CHECK(rc.max_rel_discrepancy <= 0.02); // headline tolerance
    CHECK(rc.max_rel_discrepancy <= 1e-4); // measured ~5e-6 on this setup

    RadialTrajectory fine = smooth_run(513, 400);
    IdentityE1Report rf = check_identity_E1(fine, spec);
    CHECK(rf.max_rel_discrepancy <= 0.6 * rc.max_rel_discrepancy);
    CHECK(rf.max_rel_discrepancy <= 0.4 * rc.max_rel_discrepancy); // ~0.25 observed
}

TEST_CASE("energy identity rejects bad setups") {
    RadialTrajectory traj = smooth_run(129, 30);

    // weight exponent outside the admissible interval (here (0, 1))
    TestFunctionSpec bad = make_test_function_spec(traj.config.params, 1.5);
    CHECK_THROWS_AS(check_identity_E1(traj, bad), std::domain_error);

    TestFunctionSpec spec = make_test_function_spec(traj.config.params, 0.5);

    RadialTrajectory few = traj;
    few.snapshots.resize(5);
    CHECK_THROWS_AS(check_identity_E1(few, spec), std::invalid_argument);

    RadialTrajectory late = traj;
    late.snapshots.erase(late.snapshots.begin(), late.snapshots.begin() + 3);
    CHECK_THROWS_AS(check_identity_E1(late, spec), std::invalid_argument);

    // data support too wide for the weight: (m+1) M = 1.2 >= 1
    SolveConfig wide;
    wide.params = {1.0, 1, 2.0, 0.0, 2.0, 0.1, 0.6};
    wide.grid = {1.5, 129};
    wide.t_end = 1.2;
    for (int i = 0; i <= 8; ++i) wide.output_times.push_back(1.0 + 0.2 * i / 8);
    RadialTrajectory wtraj = run(wide);
    TestFunctionSpec wspec = make_test_function_spec(wide.params, 0.25);
    CHECK_THROWS_AS(check_identity_E1(wtraj, wspec), std::domain_error);
}

TEST_CASE("integrated inequality holds for synthetic and simulated series") {
    FunctionalSeries flat = synthetic_series(2001, 5.0, [](double) { return 1.0; });
    Lemma41Report lf = check_lemma41(flat);
    REQUIRE(lf.ok.size() == flat.times.size());
    CHECK(lf.all_ok);
    CHECK(lf.worst_margin >= -1e-12);

    FunctionalSeries ramp = synthetic_series(2001, 5.0, [](double t) { return t; });
    CHECK(check_lemma41(ramp).all_ok);

    RadialTrajectory traj = smooth_run(257, 200);
    TestFunctionSpec spec = make_test_function_spec(traj.config.params, 0.5);
    CHECK(check_lemma41(compute_series(traj, spec)).all_ok);
}

TEST_CASE("zero data leaves every functional at zero") {
    SolveConfig cfg;
    cfg.params = {0.0, 3, 2.0, 0.0, 2.0, 0.0, 0.5};
    cfg.grid = {2.0, 65};
    cfg.t_end = 2.0;
    for (int i = 0; i <= 8; ++i) cfg.output_times.push_back(1.0 + 1.0 * i / 8);
    RadialTrajectory traj = run(cfg);
    TestFunctionSpec spec = make_test_function_spec(cfg.params, 0.5);

    FunctionalSeries s = compute_series(traj, spec);
    for (size_t k = 0; k < s.times.size(); ++k) {
        CHECK(s.H[k] == 0.0);
        CHECK(s.I[k] == 0.0);
        CHECK(s.J[k] == 0.0);
        CHECK(s.F[k] == 0.0);
        CHECK(s.G[k] == 0.0);
    }
    CHECK(check_lemma41(s).all_ok);
    CHECK(g_lower_bound_check(traj, 1.5).vacuous);
}

TEST_CASE("auxiliary functional stays in a positive band after T0") {
    SolveConfig cfg;
    cfg.params = {0.0, 1, 2.0, 0.0, 2.0, 0.5, 0.5};
    cfg.form = EquationForm::Delta1;
    cfg.grid = {8.0, 512};
    cfg.t_end = 8.0;
    for (int i = 0; i <= 40; ++i) cfg.output_times.push_back(1.0 + 7.0 * i / 40.0);
    RadialTrajectory traj = run(cfg);
    REQUIRE_FALSE(traj.blowup.blew_up);

    GLowerBoundReport rep = g_lower_bound_check(traj, 2.0);
    CHECK(rep.T0 == 2.0);
    CHECK_FALSE(rep.vacuous);
    CHECK(rep.positive);
    CHECK(rep.inf_value > 0.15);
    CHECK(rep.sup_value < 0.30);
    CHECK(rep.inf_value <= rep.sup_value);
    CHECK(rep.sup_value < 1.5 * rep.inf_value);

    CHECK_THROWS_AS(g_lower_bound_check(traj, 100.0), std::invalid_argument);

    // the bound is only formulated on the delta = 1 branch
    SolveConfig other;
    other.params = {0.0, 1, 4.0, 0.0, 2.0, 0.1, 0.5};
    other.grid = {2.5, 96};
    other.t_end = 1.6;
    for (int i = 0; i <= 8; ++i) other.output_times.push_back(1.0 + 0.6 * i / 8);
    RadialTrajectory otraj = run(other);
    CHECK_THROWS_AS(g_lower_bound_check(otraj, 1.2), std::domain_error);
}
