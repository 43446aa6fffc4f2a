#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <optional>

#include "epdt/functionals.hpp"
#include "epdt/ode_blowup.hpp"
#include "epdt/pde_solver.hpp"
#include "epdt/sweep.hpp"

namespace epdt {

// %.17g formatting; every numeric field in CSV/JSON output goes through this
// so reruns are byte-identical.
std::string fmt17(double x);

/* Minimal ordered JSON emitter. nlohmann parses configs; output goes through
 * this writer so numbers are %.17g and key order is fixed by construction.
 */
class JsonWriter {
  public:
    std::string str() const;
    void begin_object();
    void end_object();
    void begin_array(const std::string& key = "");
    void end_array();
    void key(const std::string& k);
    void value(double v);
    void value(long v);
    void value(int v) { value(long(v)); }
    void value(bool v);
    void value(const std::string& v);
    void kv(const std::string& k, double v);
    void kv(const std::string& k, long v);
    void kv(const std::string& k, int v) { kv(k, long(v)); }
    void kv(const std::string& k, bool v);
    void kv(const std::string& k, const std::string& v);
    void kv(const std::string& k, const char* v) { kv(k, std::string(v)); }

  private:
    void comma();
    std::string out_;
    std::vector<bool> need_comma_;
};

ModelParams params_from_json_file(const std::filesystem::path& p);
SolveConfig solve_config_from_json_file(const std::filesystem::path& p);
OdeScenario ode_scenario_from_json_file(const std::filesystem::path& p,
                                        std::vector<double>& eps_grid, double& horizon);
SweepConfig sweep_config_from_json_file(const std::filesystem::path& p);

struct ExponentsQuery {
    ModelParams params;
    std::optional<double> q; // report beta_q when present
    double k = 0.0;          // data regularity index for the decay prediction
};
ExponentsQuery exponents_query_from_json_file(const std::filesystem::path& p);

struct HypVerifyQuery {
    ModelParams params;
    std::vector<double> betas;
    int n_z = 25;          // z-grid size for the series-residual scan
    int n_conjugate = 40;  // random space-time samples per beta
    double t_min = 1.2;
    double t_max = 5.0;
    std::vector<double> lambda_times; // defaults to 1..10
};
HypVerifyQuery hyp_verify_query_from_json_file(const std::filesystem::path& p);

struct FunctionalsQuery {
    std::string run_dir;
    double beta = 1.0;
    double T0 = 2.0;
    bool identity = true; // compute the first-order identity columns
};
FunctionalsQuery functionals_query_from_json_file(const std::filesystem::path& p);

std::string form_name(EquationForm f);
EquationForm form_from_name(const std::string& s);

// Run directory: summary.json plus one CSV (r,u,v) per snapshot.
void write_run_dir(const std::filesystem::path& dir, const RadialTrajectory& traj);
RadialTrajectory load_run_dir(const std::filesystem::path& dir);

void write_text_file(const std::filesystem::path& p, const std::string& content);

} // namespace epdt
