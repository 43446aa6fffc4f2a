#include "epdt/run_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace epdt {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string JsonWriter::str() const { return out_ + "\n"; }

void JsonWriter::comma() {
    if (!need_comma_.empty()) {
        if (need_comma_.back()) out_ += ",";
        need_comma_.back() = true;
    }
}

void JsonWriter::begin_object() {
    comma();
    out_ += "{";
    need_comma_.push_back(false);
}

void JsonWriter::end_object() {
    out_ += "}";
    need_comma_.pop_back();
}

void JsonWriter::begin_array(const std::string& k) {
    if (!k.empty()) key(k);
    comma();
    out_ += "[";
    need_comma_.push_back(false);
}

void JsonWriter::end_array() {
    out_ += "]";
    need_comma_.pop_back();
}

void JsonWriter::key(const std::string& k) {
    comma();
    out_ += "\"" + k + "\":";
    need_comma_.back() = false; // the value that follows must not emit a comma
}

void JsonWriter::value(double v) {
    comma();
    if (std::isfinite(v)) {
        out_ += fmt17(v);
    } else {
        // JSON has no inf/nan literals; serialize as strings
        out_ += std::isnan(v) ? "\"nan\"" : (v > 0 ? "\"inf\"" : "\"-inf\"");
    }
}

void JsonWriter::value(long v) {
    comma();
    out_ += std::to_string(v);
}

void JsonWriter::value(bool v) {
    comma();
    out_ += v ? "true" : "false";
}

void JsonWriter::value(const std::string& v) {
    comma();
    std::string esc;
    for (char c : v) {
        if (c == '"' || c == '\\') esc += '\\';
        esc += c;
    }
    out_ += "\"" + esc + "\"";
}

void JsonWriter::kv(const std::string& k, double v) { key(k); value(v); }
void JsonWriter::kv(const std::string& k, long v) { key(k); value(v); }
void JsonWriter::kv(const std::string& k, bool v) { key(k); value(v); }
void JsonWriter::kv(const std::string& k, const std::string& v) { key(k); value(v); }

namespace {

json load_json(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw std::invalid_argument("cannot open config file: " + p.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("bad JSON in " + p.string() + ": " + e.what());
    }
    return j;
}

double need_num(const json& j, const char* k) {
    if (!j.contains(k) || !j[k].is_number())
        throw std::invalid_argument(std::string("config: missing numeric field '") + k + "'");
    return j[k].get<double>();
}

double opt_num(const json& j, const char* k, double dflt) {
    if (!j.contains(k)) return dflt;
    if (!j[k].is_number())
        throw std::invalid_argument(std::string("config: field '") + k + "' must be numeric");
    return j[k].get<double>();
}

ModelParams params_from_json(const json& j) {
    ModelParams p;
    p.m = need_num(j, "m");
    p.n = int(need_num(j, "n"));
    p.mu = need_num(j, "mu");
    p.nu = need_num(j, "nu");
    p.p = opt_num(j, "p", 2.0);
    p.epsilon = opt_num(j, "epsilon", 1.0);
    p.M = opt_num(j, "M", 0.5);
    return p;
}

} // namespace

ModelParams params_from_json_file(const fs::path& file) {
    return params_from_json(load_json(file));
}

std::string form_name(EquationForm f) {
    switch (f) {
        case EquationForm::Original: return "original";
        case EquationForm::Linear: return "linear";
        case EquationForm::Dissipative: return "dissipative";
        case EquationForm::Liouville: return "liouville";
        case EquationForm::Delta1: return "delta1";
    }
    return "original";
}

EquationForm form_from_name(const std::string& s) {
    if (s == "original") return EquationForm::Original;
    if (s == "linear") return EquationForm::Linear;
    if (s == "dissipative") return EquationForm::Dissipative;
    if (s == "liouville") return EquationForm::Liouville;
    if (s == "delta1") return EquationForm::Delta1;
    throw std::invalid_argument("config: unknown form '" + s + "'");
}

namespace {

SolveConfig solve_config_from_json(const json& j) {
    SolveConfig cfg;
    cfg.params = params_from_json(j);
    if (!j.contains("grid") || !j["grid"].is_object())
        throw std::invalid_argument("config: missing 'grid' object");
    cfg.grid.r_max = need_num(j["grid"], "r_max");
    cfg.grid.n_points = int(need_num(j["grid"], "n_points"));
    cfg.cfl = opt_num(j, "cfl", 0.4);
    cfg.t_end = need_num(j, "t_end");
    if (j.contains("output_times")) {
        if (!j["output_times"].is_array())
            throw std::invalid_argument("config: 'output_times' must be an array");
        for (const auto& v : j["output_times"]) {
            if (!v.is_number())
                throw std::invalid_argument("config: 'output_times' entries must be numeric");
            cfg.output_times.push_back(v.get<double>());
        }
    }
    cfg.form = j.contains("form") ? form_from_name(j["form"].get<std::string>())
                                  : EquationForm::Original;
    cfg.blowup_threshold = opt_num(j, "blowup_threshold", cfg.blowup_threshold);
    cfg.bump_power = int(opt_num(j, "bump_power", cfg.bump_power));
    cfg.u1_scale = opt_num(j, "u1_scale", cfg.u1_scale);
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return cfg;
}

} // namespace

SolveConfig solve_config_from_json_file(const fs::path& file) {
    return solve_config_from_json(load_json(file));
}

OdeScenario ode_scenario_from_json_file(const fs::path& file, std::vector<double>& eps_grid,
                                        double& horizon) {
    json j = load_json(file);
    OdeScenario sc;
    std::string kind = j.contains("kind") ? j["kind"].get<std::string>() : "";
    if (kind == "zhou") {
        sc.kind = OdeKind::Zhou;
        sc.zhou.p = need_num(j, "p");
        sc.zhou.c = need_num(j, "c");
        sc.zhou.C = need_num(j, "C");
        sc.zhou.Cprime = opt_num(j, "Cprime", sc.zhou.C);
        sc.zhou.sigma0 = opt_num(j, "sigma0", 1.0);
        if (j.contains("epsilon")) sc.zhou.epsilon = need_num(j, "epsilon");
        if (j.contains("u0")) sc.zhou.u0 = need_num(j, "u0");
        if (j.contains("u1")) sc.zhou.u1 = need_num(j, "u1");
    } else if (kind == "kato") {
        sc.kind = OdeKind::Kato;
        sc.kato.p = need_num(j, "p");
        sc.kato.K0 = need_num(j, "K0");
        sc.kato.K1 = need_num(j, "K1");
        sc.kato.a = need_num(j, "a");
        sc.kato.q = need_num(j, "q");
        sc.kato.R = opt_num(j, "R", 1.0);
        sc.kato.T0 = opt_num(j, "T0", 1.0);
        if (j.contains("f0")) sc.kato.f0 = need_num(j, "f0");
        if (j.contains("f1")) sc.kato.f1 = need_num(j, "f1");
    } else {
        throw std::invalid_argument("config: 'kind' must be \"zhou\" or \"kato\"");
    }
    sc.threshold = opt_num(j, "threshold", sc.threshold);
    sc.rtol = opt_num(j, "rtol", sc.rtol);
    horizon = opt_num(j, "horizon", 1e9);
    eps_grid.clear();
    if (j.contains("eps_grid")) {
        if (!j["eps_grid"].is_array())
            throw std::invalid_argument("config: 'eps_grid' must be an array");
        for (const auto& v : j["eps_grid"]) eps_grid.push_back(v.get<double>());
    }
    try {
        sc.validate();
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return sc;
}

SweepConfig sweep_config_from_json_file(const fs::path& file) {
    json j = load_json(file);
    SweepConfig cfg;
    std::string target = j.contains("target") ? j["target"].get<std::string>() : "zhou";
    if (target == "zhou") cfg.target = SweepTarget::ZhouSurrogate;
    else if (target == "pde") cfg.target = SweepTarget::Pde;
    else throw std::invalid_argument("config: 'target' must be \"zhou\" or \"pde\"");

    std::string mode = j.contains("fit_mode") ? j["fit_mode"].get<std::string>() : "loglog";
    if (mode == "loglog") cfg.fit_mode = FitMode::LogLog;
    else if (mode == "log_vs_inverse_power") cfg.fit_mode = FitMode::LogVsInversePower;
    else throw std::invalid_argument("config: unknown fit_mode '" + mode + "'");
    cfg.fit_power = opt_num(j, "fit_power", cfg.fit_power);

    if (!j.contains("eps_values") || !j["eps_values"].is_array())
        throw std::invalid_argument("config: 'eps_values' array is required");
    for (const auto& v : j["eps_values"]) cfg.eps_values.push_back(v.get<double>());
    cfg.horizon = opt_num(j, "horizon", cfg.horizon);
    cfg.threads = int(opt_num(j, "threads", 1));

    if (cfg.target == SweepTarget::ZhouSurrogate) {
        cfg.p = need_num(j, "p");
        cfg.c = opt_num(j, "c", 1.0);
        cfg.C = opt_num(j, "C", 1.0);
        cfg.sigma0 = opt_num(j, "sigma0", 1.0);
    } else {
        if (!j.contains("pde") || !j["pde"].is_object())
            throw std::invalid_argument("config: pde target needs a 'pde' object");
        cfg.pde = solve_config_from_json(j["pde"]);
    }
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return cfg;
}

ExponentsQuery exponents_query_from_json_file(const fs::path& file) {
    json j = load_json(file);
    ExponentsQuery q;
    q.params = params_from_json(j);
    if (j.contains("q")) q.q = need_num(j, "q");
    q.k = opt_num(j, "k", 0.0);
    return q;
}

HypVerifyQuery hyp_verify_query_from_json_file(const fs::path& file) {
    json j = load_json(file);
    HypVerifyQuery q;
    q.params = params_from_json(j);
    if (j.contains("betas")) {
        if (!j["betas"].is_array())
            throw std::invalid_argument("config: 'betas' must be an array");
        for (const auto& v : j["betas"]) q.betas.push_back(v.get<double>());
    } else if (j.contains("beta")) {
        q.betas.push_back(need_num(j, "beta"));
    } else {
        throw std::invalid_argument("config: need 'beta' or 'betas'");
    }
    q.n_z = int(opt_num(j, "n_z", q.n_z));
    q.n_conjugate = int(opt_num(j, "n_conjugate", q.n_conjugate));
    q.t_min = opt_num(j, "t_min", q.t_min);
    q.t_max = opt_num(j, "t_max", q.t_max);
    if (j.contains("lambda_times"))
        for (const auto& v : j["lambda_times"]) q.lambda_times.push_back(v.get<double>());
    if (q.lambda_times.empty())
        for (int i = 1; i <= 10; ++i) q.lambda_times.push_back(double(i));
    if (q.n_z < 2 || q.n_conjugate < 1 || !(q.t_min > 1.0) || !(q.t_max > q.t_min))
        throw std::invalid_argument("config: bad sampling ranges");
    return q;
}

FunctionalsQuery functionals_query_from_json_file(const fs::path& file) {
    json j = load_json(file);
    FunctionalsQuery q;
    if (!j.contains("run_dir") || !j["run_dir"].is_string())
        throw std::invalid_argument("config: 'run_dir' string is required");
    q.run_dir = j["run_dir"].get<std::string>();
    q.beta = need_num(j, "beta");
    q.T0 = opt_num(j, "T0", q.T0);
    if (j.contains("identity")) q.identity = j["identity"].get<bool>();
    return q;
}

namespace {

void emit_config(JsonWriter& w, const SolveConfig& cfg) {
    w.key("config");
    w.begin_object();
    w.kv("m", cfg.params.m);
    w.kv("n", long(cfg.params.n));
    w.kv("mu", cfg.params.mu);
    w.kv("nu", cfg.params.nu);
    w.kv("p", cfg.params.p);
    w.kv("epsilon", cfg.params.epsilon);
    w.kv("M", cfg.params.M);
    w.key("grid");
    w.begin_object();
    w.kv("r_max", cfg.grid.r_max);
    w.kv("n_points", long(cfg.grid.n_points));
    w.end_object();
    w.kv("cfl", cfg.cfl);
    w.kv("t_end", cfg.t_end);
    w.begin_array("output_times");
    for (double t : cfg.output_times) w.value(t);
    w.end_array();
    w.kv("form", form_name(cfg.form));
    w.kv("blowup_threshold", cfg.blowup_threshold);
    w.kv("bump_power", long(cfg.bump_power));
    w.kv("u1_scale", cfg.u1_scale);
    w.end_object();
}

void emit_blowup(JsonWriter& w, const BlowupReport& b) {
    w.key("blowup");
    w.begin_object();
    w.kv("blew_up", b.blew_up);
    const char* mode = b.mode == DetectionMode::ThresholdExceeded ? "threshold"
                       : b.mode == DetectionMode::StepCollapse    ? "step_collapse"
                                                                  : "none";
    w.kv("mode", mode);
    w.kv("t_detect", b.t_detect);
    w.kv("t_extrapolated", b.t_extrapolated);
    w.kv("extrapolation_ok", b.extrapolation_ok);
    w.kv("threshold", b.threshold);
    w.kv("steps", long(b.steps));
    w.kv("rejected_steps", long(b.rejected_steps));
    w.end_object();
}

std::string snap_name(size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snap_%04zu.csv", i);
    return buf;
}

} // namespace

void write_text_file(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
}

void write_run_dir(const fs::path& dir, const RadialTrajectory& traj) {
    fs::create_directories(dir);
    for (size_t i = 0; i < traj.snapshots.size(); ++i) {
        const RadialState& s = traj.snapshots[i];
        std::string csv = "r,u,v\n";
        for (int j = 0; j < traj.config.grid.n_points; ++j) {
            csv += fmt17(traj.config.grid.r(j));
            csv += ",";
            csv += fmt17(s.u[j]);
            csv += ",";
            csv += fmt17(s.v[j]);
            csv += "\n";
        }
        write_text_file(dir / snap_name(i), csv);
    }

    JsonWriter w;
    w.begin_object();
    emit_config(w, traj.config);
    w.kv("t_start", traj.t_start);
    emit_blowup(w, traj.blowup);
    w.begin_array("snapshots");
    for (size_t i = 0; i < traj.snapshots.size(); ++i) {
        w.begin_object();
        w.kv("time", traj.snapshots[i].t);
        w.kv("file", snap_name(i));
        w.kv("max_abs_u", [&] {
            double mx = 0.0;
            for (double u : traj.snapshots[i].u) mx = std::max(mx, std::fabs(u));
            return mx;
        }());
        w.end_object();
    }
    w.end_array();
    w.end_object();
    write_text_file(dir / "summary.json", w.str());
}

RadialTrajectory load_run_dir(const fs::path& dir) {
    json j = load_json(dir / "summary.json");
    RadialTrajectory traj;
    const json& jc = j.at("config");
    traj.config.params = params_from_json(jc);
    traj.config.grid.r_max = need_num(jc.at("grid"), "r_max");
    traj.config.grid.n_points = int(need_num(jc.at("grid"), "n_points"));
    traj.config.cfl = need_num(jc, "cfl");
    traj.config.t_end = need_num(jc, "t_end");
    for (const auto& v : jc.at("output_times")) traj.config.output_times.push_back(v.get<double>());
    traj.config.form = form_from_name(jc.at("form").get<std::string>());
    traj.config.blowup_threshold = need_num(jc, "blowup_threshold");
    traj.config.bump_power = int(need_num(jc, "bump_power"));
    traj.config.u1_scale = need_num(jc, "u1_scale");
    traj.t_start = need_num(j, "t_start");

    const json& jb = j.at("blowup");
    traj.blowup.blew_up = jb.at("blew_up").get<bool>();
    std::string mode = jb.at("mode").get<std::string>();
    traj.blowup.mode = mode == "threshold"       ? DetectionMode::ThresholdExceeded
                       : mode == "step_collapse" ? DetectionMode::StepCollapse
                                                 : DetectionMode::None;
    traj.blowup.t_detect = need_num(jb, "t_detect");
    traj.blowup.t_extrapolated = need_num(jb, "t_extrapolated");
    traj.blowup.extrapolation_ok = jb.at("extrapolation_ok").get<bool>();
    traj.blowup.threshold = need_num(jb, "threshold");
    traj.blowup.steps = long(need_num(jb, "steps"));
    traj.blowup.rejected_steps = long(need_num(jb, "rejected_steps"));

    for (const auto& js : j.at("snapshots")) {
        fs::path file = dir / js.at("file").get<std::string>();
        std::ifstream in(file);
        if (!in) throw std::invalid_argument("run dir missing snapshot " + file.string());
        std::string line;
        std::getline(in, line); // header
        RadialState st;
        st.t = need_num(js, "time");
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            double r, u, v;
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &r, &u, &v) != 3)
                throw std::invalid_argument("bad snapshot row in " + file.string());
            (void)r;
            st.u.push_back(u);
            st.v.push_back(v);
        }
        if (int(st.u.size()) != traj.config.grid.n_points)
            throw std::invalid_argument("snapshot size mismatch in " + file.string());
        traj.snapshots.push_back(std::move(st));
    }
    return traj;
}

} // namespace epdt
