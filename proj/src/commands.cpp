#include "resetctl/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "resetctl/approx.hpp"
#include "resetctl/elements.hpp"
#include "resetctl/hosidf.hpp"
#include "resetctl/simulator.hpp"
#include "resetctl/tuner.hpp"

namespace resetctl::cli {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 2.0 * M_PI;

std::string fmt_full(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json load_config(const std::string& path) {
    if (path.empty()) {
        return json::object();
    }
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
}

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw ConfigError("config field '" + key + "' must be a number");
    }
    return j[key].get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j[key].is_number()) {
        throw ConfigError("config field '" + key + "' must be a number");
    }
    return j[key].get<double>();
}

/// "auto" (or absent) selects the documented default; a number overrides.
std::optional<double> optional_number(const json& j, const std::string& key) {
    if (!j.contains(key) || (j[key].is_string() && j[key] == "auto")) {
        return std::nullopt;
    }
    if (!j[key].is_number()) {
        throw ConfigError("config field '" + key + "' must be a number or \"auto\"");
    }
    return j[key].get<double>();
}

void write_text_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write output file: " + path.string());
    }
    out << body;
}

void write_manifest(const std::filesystem::path& out_dir, const std::string& command,
                    const std::string& config_path, const json& parameters,
                    const std::vector<std::string>& outputs) {
    json manifest;
    manifest["command"] = command;
    manifest["tool_version"] = kToolVersion;
    manifest["timestamp"] = utc_timestamp();
    manifest["config_path"] = config_path;
    manifest["parameters"] = parameters;
    json files = json::array();
    for (const auto& o : outputs) {
        files.push_back(o);
    }
    files.push_back((out_dir / "manifest.json").string());
    manifest["outputs"] = files;
    write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

std::filesystem::path prepare_out_dir(const std::string& out_dir) {
    std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
    std::filesystem::create_directories(dir);
    return dir;
}

// ---------------------------------------------------------------------------
// Element / chain construction from config (all frequencies in Hz).
// ---------------------------------------------------------------------------

struct BuiltElement {
    SeriesChain chain;
    json resolved; ///< element description with every default filled in
};

CgLpDesign design_from_json(const json& spec) {
    CgLpDesign d;
    d.order = static_cast<int>(number_or(spec, "order", 1));
    d.gamma = require_number(spec, "gamma");
    d.omega_r = kTwoPi * require_number(spec, "corner_hz");
    d.omega_f = kTwoPi * require_number(spec, "cutoff_hz");
    if (auto g = optional_number(spec, "gain_corr")) {
        d.gain_corr = *g;
    } else {
        d.gain_corr = d.order == 1 ? alpha_choice(d.gamma) : kappa_numeric(d.gamma);
    }
    if (d.order == 2) {
        d.beta = optional_number(spec, "beta").value_or(beta_choice(d.gain_corr));
        d.zeta = number_or(spec, "zeta", 1.0);
    }
    d.validate();
    return d;
}

json design_to_json(const CgLpDesign& d) {
    json j;
    j["type"] = "cglp";
    j["order"] = d.order;
    j["gamma"] = d.gamma;
    j["corner_hz"] = d.omega_r / kTwoPi;
    j["cutoff_hz"] = d.omega_f / kTwoPi;
    j["gain_corr"] = d.gain_corr;
    if (d.order == 2) {
        j["beta"] = d.beta;
        j["zeta"] = d.zeta;
    }
    return j;
}

BuiltElement build_element(const json& spec);

BuiltElement build_single(const json& spec) {
    if (!spec.contains("type") || !spec["type"].is_string()) {
        throw ConfigError("element config needs a string 'type'");
    }
    const std::string type = spec["type"].get<std::string>();
    BuiltElement out;
    out.resolved["type"] = type;

    if (type == "clegg") {
        out.chain.push_back(make_clegg());
        return out;
    }
    if (type == "gfore") {
        const double corner_hz = require_number(spec, "corner_hz");
        const double gamma = require_number(spec, "gamma");
        const double alpha = optional_number(spec, "alpha").value_or(alpha_choice(gamma));
        out.chain.push_back(make_gfore(kTwoPi * corner_hz, gamma, alpha));
        out.resolved["corner_hz"] = corner_hz;
        out.resolved["gamma"] = gamma;
        out.resolved["alpha"] = alpha;
        return out;
    }
    if (type == "gsore") {
        const double corner_hz = require_number(spec, "corner_hz");
        const double gamma = require_number(spec, "gamma");
        const double kappa = optional_number(spec, "kappa").value_or(kappa_choice(gamma));
        const double beta = optional_number(spec, "beta").value_or(beta_choice(kappa));
        out.chain.push_back(make_gsore(kTwoPi * corner_hz, gamma, kappa, beta));
        out.resolved["corner_hz"] = corner_hz;
        out.resolved["gamma"] = gamma;
        out.resolved["kappa"] = kappa;
        out.resolved["beta"] = beta;
        return out;
    }
    if (type == "lead") {
        const int order = static_cast<int>(number_or(spec, "order", 1));
        const double corner_hz = require_number(spec, "corner_hz");
        const double cutoff_hz = require_number(spec, "cutoff_hz");
        const double zeta = number_or(spec, "zeta", 1.0);
        out.chain.push_back(
            make_lead(order, kTwoPi * corner_hz, kTwoPi * cutoff_hz, zeta));
        out.resolved["order"] = order;
        out.resolved["corner_hz"] = corner_hz;
        out.resolved["cutoff_hz"] = cutoff_hz;
        out.resolved["zeta"] = zeta;
        return out;
    }
    if (type == "pid") {
        const double kp = number_or(spec, "kp", 1.0);
        const double integrator_hz = require_number(spec, "integrator_hz");
        const double lowpass_hz = require_number(spec, "lowpass_hz");
        out.chain.push_back(
            make_pid(kp, kTwoPi * integrator_hz, kTwoPi * lowpass_hz));
        out.resolved["kp"] = kp;
        out.resolved["integrator_hz"] = integrator_hz;
        out.resolved["lowpass_hz"] = lowpass_hz;
        return out;
    }
    if (type == "plant") {
        out.chain.push_back(make_plant());
        return out;
    }
    if (type == "cglp") {
        const CgLpDesign d = design_from_json(spec);
        const SeriesChain cglp = make_cglp(d);
        for (const auto& e : cglp.elements()) {
            out.chain.push_back(e);
        }
        out.resolved = design_to_json(d);
        return out;
    }
    throw ConfigError("unknown element type '" + type + "'");
}

BuiltElement build_element(const json& spec) {
    if (spec.contains("type") && spec["type"] == "chain") {
        if (!spec.contains("elements") || !spec["elements"].is_array() ||
            spec["elements"].empty()) {
            throw ConfigError("chain element needs a non-empty 'elements' array");
        }
        BuiltElement out;
        out.resolved["type"] = "chain";
        out.resolved["elements"] = json::array();
        for (const auto& sub : spec["elements"]) {
            BuiltElement part = build_single(sub);
            for (const auto& e : part.chain.elements()) {
                out.chain.push_back(e);
            }
            out.resolved["elements"].push_back(part.resolved);
        }
        return out;
    }
    return build_single(spec);
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

int analyze_impl(const std::string& config_path, const std::string& out_dir,
                 const Overrides& overrides) {
    const json cfg = load_config(config_path);
    if (!cfg.contains("element")) {
        throw ConfigError("analyze config needs an 'element' section");
    }
    BuiltElement built = build_element(cfg["element"]);

    double fmin_hz = 0.0;
    double fmax_hz = 0.0;
    std::size_t points = 0;
    if (overrides.grid) {
        fmin_hz = overrides.grid->fmin_hz;
        fmax_hz = overrides.grid->fmax_hz;
        points = overrides.grid->points;
    } else {
        if (!cfg.contains("grid")) {
            throw ConfigError("analyze config needs a 'grid' section or --grid");
        }
        const json& g = cfg["grid"];
        fmin_hz = require_number(g, "fmin_hz");
        fmax_hz = require_number(g, "fmax_hz");
        points = static_cast<std::size_t>(number_or(g, "points", 0.0));
    }
    if (!(fmin_hz > 0.0) || !(fmax_hz > fmin_hz)) {
        throw ConfigError("grid: need 0 < fmin_hz < fmax_hz");
    }
    if (points == 0) {
        // Default density: 1000 points per decade of requested range.
        points = static_cast<std::size_t>(
            std::ceil(1000.0 * std::log10(fmax_hz / fmin_hz)));
        points = std::max<std::size_t>(points, 2);
    }

    std::vector<int> orders = {1, 3, 5, 7, 9};
    if (overrides.orders) {
        orders = *overrides.orders;
    } else if (cfg.contains("orders")) {
        orders = cfg["orders"].get<std::vector<int>>();
    }
    if (orders.empty()) {
        throw ConfigError("orders list must not be empty");
    }

    const std::vector<double> grid_hz = log_grid(fmin_hz, fmax_hz, points);
    std::vector<double> grid_rad(grid_hz.size());
    for (std::size_t i = 0; i < grid_hz.size(); ++i) {
        grid_rad[i] = kTwoPi * grid_hz[i];
    }

    const HarmonicResponse resp = sweep(built.chain, grid_rad, orders);

    std::ostringstream csv;
    csv << "freq_hz,order,mag_db,phase_deg\n";
    for (std::size_t i = 0; i < resp.omega_grid.size(); ++i) {
        for (std::size_t jj = 0; jj < resp.orders.size(); ++jj) {
            const Complex v = resp.values[i][jj];
            csv << fmt_full(grid_hz[i]) << ',' << resp.orders[jj] << ',';
            const double mag = std::abs(v);
            if (mag > 0.0) {
                csv << fmt_full(20.0 * std::log10(mag)) << ','
                    << fmt_full(std::arg(v) * 180.0 / M_PI);
            } else {
                csv << ',';  // zero response: no finite dB value
            }
            csv << '\n';
        }
    }

    const auto dir = prepare_out_dir(out_dir);
    const auto csv_path = dir / "analyze.csv";
    write_text_file(csv_path, csv.str());

    json params;
    params["element"] = built.resolved;
    params["grid"] = {{"fmin_hz", fmin_hz}, {"fmax_hz", fmax_hz}, {"points", points}};
    params["orders"] = orders;
    params["sweep_errors"] = json::array();
    for (const auto& err : resp.errors) {
        params["sweep_errors"].push_back(
            {{"freq_hz", err.omega / kTwoPi}, {"message", err.message}});
    }
    write_manifest(dir, "analyze", config_path, params, {csv_path.string()});
    return kOk;
}

// ---------------------------------------------------------------------------
// tune
// ---------------------------------------------------------------------------

int tune_impl(const std::string& config_path, const std::string& out_dir) {
    const json cfg = load_config(config_path);
    TuningProblem problem;
    problem.order = static_cast<int>(number_or(cfg, "order", 1));
    problem.phi_target_deg = require_number(cfg, "phi_target_deg");
    problem.omega_c = kTwoPi * require_number(cfg, "bandwidth_hz");
    problem.omega_f = kTwoPi * require_number(cfg, "cutoff_hz");
    if (!cfg.contains("gamma_candidates") || !cfg["gamma_candidates"].is_array() ||
        cfg["gamma_candidates"].empty()) {
        throw ConfigError("tune config needs a non-empty 'gamma_candidates' array");
    }
    problem.gamma_candidates = cfg["gamma_candidates"].get<std::vector<double>>();
    problem.refinement_rounds = static_cast<int>(number_or(cfg, "refinement_rounds", 0));
    problem.phase_tolerance_deg = number_or(cfg, "phase_tolerance_deg", 0.1);
    problem.zeta = number_or(cfg, "zeta", 1.0);
    problem.validate();

    TuningOutcome outcome = enumerate_candidates(problem);
    if (problem.refinement_rounds > 0) {
        outcome = refine(problem, outcome);
    }

    // Rows in candidate order for round-0 tables (reference-table parity);
    // refined tables are ranked by sigma.
    std::vector<CandidateResult> rows = outcome.candidates;
    if (problem.refinement_rounds == 0) {
        std::vector<CandidateResult> ordered;
        for (double g : problem.gamma_candidates) {
            for (const auto& c : outcome.candidates) {
                if (std::abs(c.gamma - g) < 1e-12) {
                    ordered.push_back(c);
                }
            }
        }
        rows = ordered;
    }

    const char prefix = problem.order == 1 ? 'f' : 's';
    std::ostringstream csv;
    csv << "ctrl,gamma,a,sigma,achieved_phase_deg\n";
    int index = 1;
    for (const auto& c : rows) {
        csv << prefix << index++ << ',' << fmt_full(c.gamma) << ','
            << fmt_full(c.a_ratio) << ',' << fmt_full(c.sigma) << ','
            << fmt_full(c.achieved_phase_deg) << '\n';
    }

    const CandidateResult& best = outcome.best();
    json best_json;
    best_json["design"] = design_to_json(candidate_design(problem, best.gamma,
                                                          best.omega_r));
    best_json["gamma"] = best.gamma;
    best_json["a"] = best.a_ratio;
    best_json["corner_hz"] = best.omega_r / kTwoPi;
    best_json["sigma"] = best.sigma;
    best_json["achieved_phase_deg"] = best.achieved_phase_deg;
    best_json["infeasible"] = json::array();
    for (const auto& inf : outcome.infeasible) {
        best_json["infeasible"].push_back({{"gamma", inf.gamma},
                                           {"asymptote_deg", inf.asymptote_deg},
                                           {"reason", inf.reason}});
    }

    const auto dir = prepare_out_dir(out_dir);
    const auto csv_path = dir / "candidates.csv";
    const auto best_path = dir / "best_design.json";
    write_text_file(csv_path, csv.str());
    write_text_file(best_path, best_json.dump(2) + "\n");

    json params;
    params["order"] = problem.order;
    params["phi_target_deg"] = problem.phi_target_deg;
    params["bandwidth_hz"] = problem.omega_c / kTwoPi;
    params["cutoff_hz"] = problem.omega_f / kTwoPi;
    params["gamma_candidates"] = problem.gamma_candidates;
    params["refinement_rounds"] = problem.refinement_rounds;
    params["phase_tolerance_deg"] = problem.phase_tolerance_deg;
    params["zeta"] = problem.zeta;
    write_manifest(dir, "tune", config_path, params,
                   {csv_path.string(), best_path.string()});

    for (const auto& inf : outcome.infeasible) {
        std::cerr << "tune: infeasible gamma " << inf.gamma << " (asymptote "
                  << inf.asymptote_deg << " deg)\n";
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int simulate_impl(const std::string& config_path, const std::string& out_dir) {
    const json cfg = load_config(config_path);
    if (!cfg.contains("design")) {
        throw ConfigError("simulate config needs a 'design' section");
    }
    const CgLpDesign design = design_from_json(cfg["design"]);

    const json pid_cfg = cfg.contains("pid") ? cfg["pid"] : json::object();
    const double integrator_hz = number_or(pid_cfg, "integrator_hz", 10.0);
    const double lowpass_hz = number_or(pid_cfg, "lowpass_hz", 500.0);
    const double bandwidth_hz = number_or(pid_cfg, "bandwidth_hz", 100.0);
    const std::optional<double> kp_given = optional_number(pid_cfg, "kp");

    const json ref_cfg = cfg.contains("reference") ? cfg["reference"] : json::object();
    SimConfig sim_cfg;
    sim_cfg.amplitude = number_or(ref_cfg, "amplitude", 20e-6);
    sim_cfg.freq_hz = number_or(ref_cfg, "freq_hz", 1.0);

    const json sim_json = cfg.contains("sim") ? cfg["sim"] : json::object();
    sim_cfg.dt = number_or(sim_json, "dt", 0.0);
    sim_cfg.duration = number_or(sim_json, "duration", 0.0);
    sim_cfg.settle_periods = static_cast<int>(number_or(sim_json, "settle_periods", 2));
    sim_cfg.analysis_periods =
        static_cast<int>(number_or(sim_json, "analysis_periods", 4));
    sim_cfg.quantizer_step = number_or(sim_json, "quantizer_step", 0.0);
    sim_cfg.validate();

    const LinearElement plant = make_plant();

    double kp = kp_given.value_or(1.0);
    if (!kp_given) {
        SeriesChain probe = make_cglp(design);
        probe.push_back(make_pid(1.0, kTwoPi * integrator_hz, kTwoPi * lowpass_hz));
        probe.push_back(plant);
        kp = normalize_loop_gain(probe, kTwoPi * bandwidth_hz);
    }

    SeriesChain controller = make_cglp(design);
    controller.push_back(make_pid(kp, kTwoPi * integrator_hz, kTwoPi * lowpass_hz));

    const auto dir = prepare_out_dir(out_dir);
    const auto csv_path = dir / "timeseries.csv";
    const auto summary_path = dir / "summary.json";

    json params;
    params["design"] = design_to_json(design);
    params["pid"] = {{"kp", kp},
                     {"integrator_hz", integrator_hz},
                     {"lowpass_hz", lowpass_hz},
                     {"bandwidth_hz", bandwidth_hz}};
    params["reference"] = {{"amplitude", sim_cfg.amplitude},
                           {"freq_hz", sim_cfg.freq_hz}};
    params["sim"] = {{"dt", sim_cfg.dt},
                     {"duration", sim_cfg.duration},
                     {"settle_periods", sim_cfg.settle_periods},
                     {"analysis_periods", sim_cfg.analysis_periods},
                     {"quantizer_step", sim_cfg.quantizer_step}};

    SimResult result;
    try {
        result = simulate_closed_loop(controller, plant, sim_cfg);
    } catch (const DivergenceError& e) {
        json summary;
        summary["diverged"] = true;
        summary["last_stable_time"] = e.last_stable_time();
        summary["message"] = e.what();
        write_text_file(summary_path, summary.dump(2) + "\n");
        write_manifest(dir, "simulate", config_path, params, {summary_path.string()});
        std::cerr << "simulate: diverged at t = " << e.last_stable_time() << " s\n";
        return kDivergence;
    }

    std::ostringstream csv;
    csv << "t,reference,error,control,output\n";
    for (std::size_t k = 0; k < result.output.samples.size(); ++k) {
        const double t = static_cast<double>(k) * result.output.dt;
        csv << fmt_full(t) << ',' << fmt_full(result.reference.samples[k]) << ','
            << fmt_full(result.error.samples[k]) << ','
            << fmt_full(result.control.samples[k]) << ','
            << fmt_full(result.output.samples[k]) << '\n';
    }
    write_text_file(csv_path, csv.str());

    json summary;
    summary["diverged"] = false;
    summary["rms_measured"] = result.rms_error;
    summary["reset_count"] = result.resets.size();
    summary["kp"] = kp;
    summary["dt"] = result.output.dt;
    if (sim_cfg.amplitude > 0.0) {
        const double expected =
            expected_rms_error(controller, plant, sim_cfg.amplitude, sim_cfg.freq_hz);
        summary["rms_expected"] = expected;
        summary["deviation_ratio"] = deviation_ratio(result.rms_error, expected);
    } else {
        summary["rms_expected"] = 0.0;
        summary["deviation_ratio"] = nullptr;
    }
    write_text_file(summary_path, summary.dump(2) + "\n");
    write_manifest(dir, "simulate", config_path, params,
                   {csv_path.string(), summary_path.string()});
    return kOk;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

struct ValidateCase {
    std::string name;
    SeriesChain chain;
};

/// Analytic chain harmonic with the Theta_D perturbation hook applied to
/// the reset element (scale 1 reproduces chain_harmonic exactly).
Complex perturbed_chain_harmonic(const SeriesChain& chain, double omega, int n,
                                 double theta_scale) {
    if (n % 2 == 0) {
        return {0.0, 0.0};
    }
    const Complex j{0.0, 1.0};
    const Complex s_n{0.0, static_cast<double>(n) * omega};
    Complex acc{1.0, 0.0};
    for (const auto& e : chain.elements()) {
        if (std::holds_alternative<LinearElement>(e)) {
            acc *= std::get<LinearElement>(e).eval(s_n);
            continue;
        }
        const auto& ctrl = std::get<ResetController>(e);
        const HosidfKernels k = kernels(ctrl, omega);
        const std::size_t dim = ctrl.order();
        CMatrix resolvent(dim, dim);
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c) {
                resolvent(r, c) = (r == c ? s_n : Complex{0.0, 0.0}) - ctrl.A(r, c);
            }
        }
        CMatrix weight = (j * theta_scale) * k.theta_d;
        if (n == 1) {
            weight = CMatrix::identity(dim) + weight;
        }
        const CMatrix inner = mat_inv(resolvent) * weight;
        Complex g{0.0, 0.0};
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c) {
                g += ctrl.C(0, r) * inner(r, c) * ctrl.B(c, 0);
            }
        }
        if (n == 1) {
            g += ctrl.D;
        }
        acc *= g;
    }
    return acc;
}

int validate_impl(const std::string& config_path, const std::string& out_dir) {
    const json cfg = load_config(config_path);
    const auto freq_count =
        static_cast<std::size_t>(number_or(cfg, "frequencies_per_element", 12));
    const double theta_scale = number_or(cfg, "theta_d_scale", 1.0);
    std::vector<int> odd_orders = {1, 3, 5};
    if (cfg.contains("orders")) {
        odd_orders = cfg["orders"].get<std::vector<int>>();
    }
    const std::vector<int> even_orders = {2, 4};

    // Built-in grid: 7 elements, omega_r = 1 rad/s, frequencies spanning
    // [omega_r/10, 10 omega_r].
    std::vector<ValidateCase> cases;
    {
        SeriesChain c;
        c.push_back(make_clegg());
        cases.push_back({"clegg", std::move(c)});
    }
    for (double gamma : {-0.3, 0.0, 0.3}) {
        SeriesChain c;
        c.push_back(make_gfore(1.0, gamma, alpha_choice(gamma)));
        std::ostringstream name;
        name << "gfore_g" << gamma;
        cases.push_back({name.str(), std::move(c)});
    }
    for (double gamma : {0.0, 0.2}) {
        const double kappa = kappa_choice(gamma);
        SeriesChain c;
        c.push_back(make_gsore(1.0, gamma, kappa, beta_choice(kappa)));
        std::ostringstream name;
        name << "gsore_g" << gamma;
        cases.push_back({name.str(), std::move(c)});
    }
    {
        CgLpDesign d;
        d.order = 1;
        d.gamma = 0.0;
        d.omega_r = 1.0;
        d.omega_f = 20.0;
        d.gain_corr = alpha_choice(0.0);
        cases.push_back({"cglp_fore_g0", make_cglp(d)});
    }

    const std::vector<double> omegas = log_grid(0.1, 10.0, freq_count);

    std::ostringstream csv;
    csv << "element,omega,order,mag_analytic,mag_sim,rel_mag_err,phase_err_deg,pass\n";
    std::size_t failures = 0;
    std::size_t checks = 0;

    for (const auto& vc : cases) {
        for (double omega : omegas) {
            SimConfig sim_cfg;
            sim_cfg.freq_hz = omega / kTwoPi;
            sim_cfg.settle_periods = 12;
            sim_cfg.analysis_periods = 8;
            const SimResult run = simulate_chain(vc.chain, sim_cfg);

            std::vector<int> all_orders = odd_orders;
            all_orders.insert(all_orders.end(), even_orders.begin(), even_orders.end());
            const auto extracted =
                extract_harmonics(run, sim_cfg.freq_hz, all_orders);

            for (int n : all_orders) {
                const Complex ana =
                    perturbed_chain_harmonic(vc.chain, omega, n, theta_scale);
                const Complex sim = extracted.at(n);
                const double mag_ana = std::abs(ana);
                const double mag_sim = std::abs(sim);
                bool pass = true;
                double rel_err = 0.0;
                double phase_err = 0.0;
                ++checks;
                if (n % 2 == 0) {
                    pass = mag_sim < 1e-6;
                    rel_err = mag_sim;
                } else if (mag_ana > 1e-8) {
                    rel_err = std::abs(mag_sim - mag_ana) / mag_ana;
                    phase_err = std::arg(sim / ana) * 180.0 / M_PI;
                    pass = rel_err <= 0.02 && std::abs(phase_err) <= 2.0;
                }
                if (!pass) {
                    ++failures;
                }
                csv << vc.name << ',' << fmt_full(omega) << ',' << n << ','
                    << fmt_full(mag_ana) << ',' << fmt_full(mag_sim) << ','
                    << fmt_full(rel_err) << ',' << fmt_full(phase_err) << ','
                    << (pass ? 1 : 0) << '\n';
            }
        }
    }

    const auto dir = prepare_out_dir(out_dir);
    const auto csv_path = dir / "validate_report.csv";
    const auto summary_path = dir / "summary.json";
    write_text_file(csv_path, csv.str());

    json summary;
    summary["checks"] = checks;
    summary["failures"] = failures;
    summary["pass"] = failures == 0;
    summary["contract"] = "2% magnitude / 2 deg phase where |G_n| > 1e-8; even < 1e-6";
    write_text_file(summary_path, summary.dump(2) + "\n");

    json params;
    params["frequencies_per_element"] = freq_count;
    params["orders"] = odd_orders;
    params["theta_d_scale"] = theta_scale;
    write_manifest(dir, "validate", config_path, params,
                   {csv_path.string(), summary_path.string()});

    if (failures != 0) {
        std::cerr << "validate: " << failures << " of " << checks
                  << " checks violated the oracle contract\n";
        return kValidationFailure;
    }
    return kOk;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << '\n';
        return kDivergence;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
}

} // namespace

int run_analyze(const std::string& config_path, const std::string& out_dir,
                const Overrides& overrides) {
    return guarded([&] { return analyze_impl(config_path, out_dir, overrides); });
}

int run_tune(const std::string& config_path, const std::string& out_dir) {
    return guarded([&] { return tune_impl(config_path, out_dir); });
}

int run_simulate(const std::string& config_path, const std::string& out_dir) {
    return guarded([&] { return simulate_impl(config_path, out_dir); });
}

int run_validate(const std::string& config_path, const std::string& out_dir) {
    return guarded([&] { return validate_impl(config_path, out_dir); });
}

} // namespace resetctl::cli
