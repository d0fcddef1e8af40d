#include "cbf/harness.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "cbf/checkpoint.hpp"
#include "cbf/fft.hpp"
#include "cbf/initial_conditions.hpp"

namespace cbf {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(ScenarioKind k) {
    switch (k) {
    case ScenarioKind::simulate: return "simulate";
    case ScenarioKind::certify: return "certify";
    case ScenarioKind::perturb_sweep: return "perturb_sweep";
    case ScenarioKind::inequality_suite: return "inequality_suite";
    case ScenarioKind::exponent_sweep: return "exponent_sweep";
    case ScenarioKind::twin_run: return "twin_run";
    }
    return "simulate";
}

namespace {

const char* to_string(PerturbationSpec::Mode m) {
    switch (m) {
    case PerturbationSpec::Mode::initial: return "initial";
    case PerturbationSpec::Mode::forcing: return "forcing";
    case PerturbationSpec::Mode::both: return "both";
    }
    return "initial";
}

ScenarioKind kind_from_string(const std::string& s) {
    for (ScenarioKind k : {ScenarioKind::simulate, ScenarioKind::certify, ScenarioKind::perturb_sweep,
                           ScenarioKind::inequality_suite, ScenarioKind::exponent_sweep,
                           ScenarioKind::twin_run})
        if (s == to_string(k)) return k;
    throw ConfigError("unknown scenario kind '" + s + "'");
}

PerturbationSpec::Mode mode_from_string(const std::string& s) {
    if (s == "initial") return PerturbationSpec::Mode::initial;
    if (s == "forcing") return PerturbationSpec::Mode::forcing;
    if (s == "both") return PerturbationSpec::Mode::both;
    throw ConfigError("unknown perturbation mode '" + s + "'");
}

void check_keys(const json& j, const std::set<std::string>& allowed, const char* where) {
    if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
T field(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Artifact writing

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path.string());
    os << text;
    if (!os) throw IoError("write failed for " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json outcome_json(const Outcome& o) { return {{"kind", to_string(o.kind)}, {"t", o.t}}; }

int outcome_code(const Outcome& o) {
    switch (o.kind) {
    case Outcome::Kind::completed: return exit_code::ok;
    case Outcome::Kind::blow_up: return exit_code::blow_up;
    case Outcome::Kind::tail_unresolved: return exit_code::unresolved;
    }
    return exit_code::ok;
}

void write_run(const fs::path& dir, const SimulationConfig& cfg, const SimulationResult& run) {
    write_diagnostics_csv(dir / "diagnostics.csv", run.diagnostics);
    fs::create_directories(dir / "checkpoints");
    for (const Snapshot& s : run.trajectory.snapshots) {
        char name[64];
        std::snprintf(name, sizeof name, "step_%08ld.cbf", s.step);
        CheckpointHeader h{cfg.n, cfg.r, cfg.mu, cfg.alpha, cfg.beta, s.t};
        try {
            write_checkpoint(dir / "checkpoints" / name, h, s.state);
        } catch (const CheckpointError& e) {
            throw IoError(e.what());
        }
    }
    json summary{{"outcome", outcome_json(run.outcome)},
                 {"steps", run.trajectory.final_snapshot().step},
                 {"final_t", run.trajectory.final_snapshot().t},
                 {"warnings", cfg.warnings()}};
    write_json(dir / "summary.json", summary);
    emit_plot_data(dir, run.diagnostics);
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---------------------------------------------------------------------------
// Scenario bodies

int run_simulate(const ScenarioSpec& spec, std::ostream& log) {
    const SimulationResult run = simulate(spec.base);
    write_run(spec.output_dir, spec.base, run);
    log << "simulate: " << to_string(run.outcome.kind) << " at t = " << run.outcome.t << "\n";
    return outcome_code(run.outcome);
}

int run_certify(const ScenarioSpec& spec, std::ostream& log) {
    const SpectralField u0 = initial_state(spec.base);
    const SimulationResult run = simulate(spec.base, u0);
    write_run(spec.output_dir, spec.base, run);
    if (run.outcome.kind != Outcome::Kind::completed) {
        log << "certify: reference run did not complete\n";
        return outcome_code(run.outcome);
    }
    json calib;
    const CertificateConstants k = scenario_constants(spec, u0, &calib);
    json reports = json::array();
    if (spec.perturbations.empty()) {
        reports.push_back(to_json(certify_pair(run, spec.base, u0, spec.base.forcing, k)));
    } else {
        for (const PerturbationSpec& p : spec.perturbations) {
            const Perturbation pert = build_perturbation(spec.base, u0, p, k.c0, spec.seed);
            json rep = to_json(certify_pair(run, spec.base, pert.v0, pert.g, k));
            rep["epsilon"] = p.epsilon;
            rep["perturbation"] = to_string(p.mode);
            reports.push_back(rep);
        }
    }
    write_json(spec.output_dir / "certificates.json", {{"reports", reports}});
    if (!calib.is_null()) write_json(spec.output_dir / "calibration.json", calib);
    log << "certify: " << reports.size() << " report(s)\n";
    return exit_code::ok;
}

int run_perturb_sweep(const ScenarioSpec& spec, std::ostream& log) {
    const SpectralField u0 = initial_state(spec.base);
    const SimulationResult run = simulate(spec.base, u0);
    write_run(spec.output_dir, spec.base, run);
    if (run.outcome.kind != Outcome::Kind::completed) {
        log << "perturb_sweep: reference run did not complete\n";
        return outcome_code(run.outcome);
    }
    json calib;
    const CertificateConstants k = scenario_constants(spec, u0, &calib);
    const SweepResult sweep = perturb_sweep(spec, u0, run, k);

    double sup_u = 0.0;
    for (const DiagnosticsRow& row : run.diagnostics) sup_u = std::max(sup_u, row.h1);
    json rows = json::array();
    int counterexamples = 0;
    for (const SweepRow& r : sweep) {
        const bool regular = r.simulated_outcome.kind == Outcome::Kind::completed &&
                             r.sup_h1_of_perturbed <= 10.0 * sup_u;
        if (r.certified && !regular) ++counterexamples;
        rows.push_back({{"epsilon", r.epsilon},
                        {"lhs", r.lhs},
                        {"r_of_u", r.r_of_u},
                        {"margin", r.margin},
                        {"verdict", r.certified ? "certified" : "not_certified"},
                        {"simulated_outcome", outcome_json(r.simulated_outcome)},
                        {"sup_h1_of_difference", r.sup_h1_of_difference},
                        {"sup_h1_of_perturbed", r.sup_h1_of_perturbed}});
    }
    write_json(spec.output_dir / "sweep.json", {{"rows", rows},
                                                {"constants", to_json(k)},
                                                {"sup_h1_of_reference", sup_u},
                                                {"counterexamples", counterexamples}});
    if (!calib.is_null()) write_json(spec.output_dir / "calibration.json", calib);
    emit_plot_data(spec.output_dir, sweep);
    log << "perturb_sweep: " << sweep.size() << " rows, " << counterexamples
        << " counterexample(s)\n";
    return counterexamples == 0 ? exit_code::ok : exit_code::checks_failed;
}

int run_inequality_suite(const ScenarioSpec& spec, std::ostream& log) {
    PointwiseSweepOptions po;
    po.samples_per_exponent = spec.pointwise_samples;
    po.seed = spec.seed;
    FieldSweepOptions fo;
    fo.n = spec.field_n;
    fo.fields = spec.field_samples;
    fo.seed = spec.seed;
    const std::vector<InequalityReport> reps{
        sweep_monotonicity(po), sweep_difference_bound(po), sweep_power_mean(po),
        sweep_dissipation_bracket(fo), sweep_grad_l6(fo)};
    bool pass = true;
    json arr = json::array();
    for (const InequalityReport& r : reps) {
        pass = pass && r.pass;
        arr.push_back(to_json(r));
        log << to_string(r.lemma_id) << ": worst " << r.worst_ratio << (r.pass ? " pass" : " FAIL")
            << "\n";
    }
    write_json(spec.output_dir / "inequality_reports.json", {{"reports", arr}, {"pass", pass}});
    emit_plot_data(spec.output_dir, reps);
    return pass ? exit_code::ok : exit_code::checks_failed;
}

int run_exponent_sweep(const ScenarioSpec& spec, std::ostream& log) {
    const SimulationResult run = simulate(spec.base);
    write_run(spec.output_dir, spec.base, run);
    if (run.outcome.kind != Outcome::Kind::completed) return outcome_code(run.outcome);
    const double c0 = spec.constants == CertificateConstants::Mode::unit
                          ? 1.0
                          : scenario_constants(spec, run.trajectory.snapshots.front().state).c0;
    json rows = json::array();
    std::string csv = "r,s,lhs\n";
    for (const auto& [r, s] : spec.exponent_pairs) {
        const double v = exponent_robustness_lhs(run.trajectory, r, s, c0);
        rows.push_back({{"r", r}, {"s", s}, {"lhs", v}});
        csv += format_number(r) + "," + format_number(s) + "," + format_number(v) + "\n";
    }
    write_json(spec.output_dir / "exponent_sweep.json", {{"rows", rows}, {"c0", c0}});
    write_text(spec.output_dir / "exponent_sweep.csv", csv);
    write_text(spec.output_dir / "exponent_sweep.columns.txt",
               "r: absorption exponent of the trajectory\n"
               "s: comparison exponent (s >= r)\n"
               "lhs: c0 int_0^T (int |u|^{2r} (|u|^{s-r} - 1)^2 dx)^{1/2} dt\n");
    log << "exponent_sweep: " << spec.exponent_pairs.size() << " pair(s)\n";
    return exit_code::ok;
}

int run_twin(const ScenarioSpec& spec, std::ostream& log) {
    const TwinRunReport rep = twin_run_divergence(spec.base);
    const SpectralField u0 = initial_state(spec.base);

    // Zero initial difference: the twin must coincide with the reference run.
    const PairRun same = run_pair(spec.base, u0, {u0, spec.base.forcing});
    // Small initial perturbation against a Gronwall rate fitted on another seed.
    const double eps = spec.perturbations.empty() ? 1e-3 : spec.perturbations.front().epsilon;
    const Grid grid(spec.base.n);
    const PairRun fit = run_pair(spec.base, u0,
                                 {u0 + initial_perturbation(grid, spec.seed + 1, eps),
                                  spec.base.forcing});
    const double c = calibrate_gronwall({fit});
    const PairRun check = run_pair(spec.base, u0,
                                   {u0 + initial_perturbation(grid, spec.seed, eps),
                                    spec.base.forcing});
    double w0 = std::sqrt(check.samples.front().w_l2_sq);
    double integral = 0.0, worst = 0.0;
    bool under = true;
    for (std::size_t i = 0; i < check.samples.size(); ++i) {
        const PairSample& s = check.samples[i];
        if (i > 0) {
            const PairSample& p = check.samples[i - 1];
            integral += 0.5 * (s.t - p.t) *
                        (s.u_l2 * s.u_l2 + s.u_stokes * s.u_stokes + p.u_l2 * p.u_l2 +
                         p.u_stokes * p.u_stokes);
        }
        const double env = w0 * w0 * std::exp(c * integral);
        worst = std::max(worst, s.w_l2_sq / env);
        under = under && s.w_l2_sq <= env;
    }
    json j{{"sup_h1_dt_vs_half", rep.sup_h1_dt_vs_half},
           {"sup_h1_half_vs_quarter", rep.sup_h1_half_vs_quarter},
           {"sup_h1_n_vs_2n", rep.sup_h1_n_vs_2n},
           {"time_refinement_ratio", rep.time_ratio()},
           {"observed_order", rep.observed_order()},
           {"identical_data_sup_h1", same.sup_w_h1()},
           {"gronwall", {{"c", c}, {"epsilon", eps}, {"worst_ratio_to_envelope", worst},
                         {"under_envelope", under}}}};
    write_json(spec.output_dir / "twin_run.json", j);
    log << "twin_run: observed order " << rep.observed_order() << "\n";
    const bool ok = same.sup_w_h1() <= 1e-10 && under && rep.time_ratio() < 1.0;
    return ok ? exit_code::ok : exit_code::checks_failed;
}

int dispatch(const ScenarioSpec& spec, std::ostream& log) {
    switch (spec.kind) {
    case ScenarioKind::simulate: return run_simulate(spec, log);
    case ScenarioKind::certify: return run_certify(spec, log);
    case ScenarioKind::perturb_sweep: return run_perturb_sweep(spec, log);
    case ScenarioKind::inequality_suite: return run_inequality_suite(spec, log);
    case ScenarioKind::exponent_sweep: return run_exponent_sweep(spec, log);
    case ScenarioKind::twin_run: return run_twin(spec, log);
    }
    return exit_code::config;
}

template <class Body>
int guarded(const ScenarioSpec& spec, std::ostream& log, Body body) {
    const std::string started = utc_now();
    try {
        spec.validate();
        try {
            fs::create_directories(spec.output_dir);
        } catch (const fs::filesystem_error& e) {
            throw IoError(e.what());
        }
        write_json(spec.output_dir / "config.json", to_json(spec));
        for (const std::string& w : spec.base.warnings()) log << "warning: " << w << "\n";
        const int code = body();
        write_manifest(spec.output_dir);
        write_json(spec.output_dir / "metadata.json",
                   {{"started_utc", started},
                    {"finished_utc", utc_now()},
                    {"threads", fft::threads()},
                    {"deterministic", fft::deterministic()},
                    {"exit_code", code}});
        return code;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return exit_code::config;
    } catch (const CheckpointError& e) {
        log << "checkpoint error: " << e.what() << "\n";
        return exit_code::io;
    } catch (const IoError& e) {
        log << "io error: " << e.what() << "\n";
        return exit_code::io;
    } catch (const fs::filesystem_error& e) {
        log << "io error: " << e.what() << "\n";
        return exit_code::io;
    }
}

}  // namespace

// ---------------------------------------------------------------------------

void ScenarioSpec::validate() const {
    base.validate();
    double prev = 0.0;
    for (const PerturbationSpec& p : perturbations) {
        if (!(p.epsilon > 0.0)) throw ConfigError("perturbation epsilon must be > 0");
        if (!(p.epsilon > prev)) throw ConfigError("perturbation epsilons must be ascending");
        prev = p.epsilon;
    }
    for (const auto& [r, s] : exponent_pairs)
        if (!(r >= 1.0) || !(s >= r)) throw ConfigError("exponent pairs need s >= r >= 1");
    if (pointwise_samples == 0 || field_samples == 0)
        throw ConfigError("sample counts must be positive");
    if (field_n < 4 || field_n % 2 != 0) throw ConfigError("field n must be even and >= 4");
    if (kind == ScenarioKind::perturb_sweep && perturbations.empty())
        throw ConfigError("perturb_sweep needs perturbations");
    if (kind == ScenarioKind::exponent_sweep && exponent_pairs.empty())
        throw ConfigError("exponent_sweep needs exponent_pairs");
    const bool pairs = kind == ScenarioKind::perturb_sweep || kind == ScenarioKind::twin_run ||
                       (kind == ScenarioKind::certify &&
                        constants == CertificateConstants::Mode::calibrated);
    if (pairs && !base.dt) throw ConfigError(std::string(to_string(kind)) + " needs a fixed dt");
}

ScenarioSpec scenario_from_json(const json& j) {
    check_keys(j,
               {"cbf_config_version", "kind", "seed", "base", "perturbations", "exponent_pairs",
                "constants", "inequality_samples"},
               "scenario");
    if (!j.contains("cbf_config_version")) throw ConfigError("missing cbf_config_version");
    if (field(j, "cbf_config_version", 0) != kConfigVersion)
        throw ConfigError("unsupported cbf_config_version");
    ScenarioSpec spec;
    spec.kind = kind_from_string(field<std::string>(j, "kind", "simulate"));
    spec.seed = field<std::uint64_t>(j, "seed", spec.seed);
    if (j.contains("base")) spec.base = config_from_json(j.at("base"));
    if (j.contains("perturbations")) {
        for (const json& p : j.at("perturbations")) {
            check_keys(p, {"epsilon", "mode"}, "perturbation");
            spec.perturbations.push_back(
                {field(p, "epsilon", 0.0), mode_from_string(field<std::string>(p, "mode", "initial"))});
        }
    }
    if (j.contains("exponent_pairs")) {
        for (const json& p : j.at("exponent_pairs")) {
            if (!p.is_array() || p.size() != 2) throw ConfigError("exponent pair must be [r, s]");
            spec.exponent_pairs.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
    }
    const std::string constants = field<std::string>(j, "constants", "unit");
    if (constants == "unit") spec.constants = CertificateConstants::Mode::unit;
    else if (constants == "calibrated") spec.constants = CertificateConstants::Mode::calibrated;
    else throw ConfigError("constants must be \"unit\" or \"calibrated\"");
    if (j.contains("inequality_samples")) {
        const json& s = j.at("inequality_samples");
        check_keys(s, {"pointwise", "fields", "n"}, "inequality_samples");
        spec.pointwise_samples = field<std::uint64_t>(s, "pointwise", spec.pointwise_samples);
        spec.field_samples = field<std::uint64_t>(s, "fields", spec.field_samples);
        spec.field_n = field(s, "n", spec.field_n);
    }
    spec.validate();
    return spec;
}

json to_json(const ScenarioSpec& spec) {
    json p = json::array();
    for (const PerturbationSpec& x : spec.perturbations)
        p.push_back({{"epsilon", x.epsilon}, {"mode", to_string(x.mode)}});
    json e = json::array();
    for (const auto& [r, s] : spec.exponent_pairs) e.push_back({r, s});
    return {{"cbf_config_version", kConfigVersion},
            {"kind", to_string(spec.kind)},
            {"seed", spec.seed},
            {"base", to_json(spec.base)},
            {"perturbations", p},
            {"exponent_pairs", e},
            {"constants", to_string(spec.constants)},
            {"inequality_samples",
             {{"pointwise", spec.pointwise_samples},
              {"fields", spec.field_samples},
              {"n", spec.field_n}}}};
}

ScenarioSpec load_scenario(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot read " + path.string());
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    return scenario_from_json(j);
}

// ---------------------------------------------------------------------------

Perturbation build_perturbation(const SimulationConfig& cfg, const SpectralField& u0,
                                const PerturbationSpec& p, double c0, std::uint64_t seed) {
    const Grid grid(cfg.n);
    Perturbation out{u0, cfg.forcing};
    const double share = p.mode == PerturbationSpec::Mode::both ? p.epsilon / std::sqrt(2.0)
                                                                : p.epsilon;
    if (p.mode != PerturbationSpec::Mode::forcing)
        out.v0 += initial_perturbation(grid, seed, share);
    if (p.mode != PerturbationSpec::Mode::initial)
        out.g.offset.push_back(forcing_perturbation(share, c0, cfg.t_end));
    return out;
}

SweepResult perturb_sweep(const ScenarioSpec& spec, const SpectralField& u0,
                          const SimulationResult& base_run, const CertificateConstants& k) {
    SweepResult rows;
    for (const PerturbationSpec& p : spec.perturbations) {
        const Perturbation pert = build_perturbation(spec.base, u0, p, k.c0, spec.seed);
        const CertificateReport rep = certify_pair(base_run, spec.base, pert.v0, pert.g, k);
        const PairRun pr = run_pair(spec.base, u0, pert);
        SweepRow row;
        row.epsilon = p.epsilon;
        row.lhs = rep.lhs;
        row.r_of_u = rep.r_of_u;
        row.margin = rep.margin;
        row.certified = rep.certified;
        row.simulated_outcome = pr.v_outcome;
        row.sup_h1_of_difference = pr.sup_w_h1();
        row.sup_h1_of_perturbed = pr.sup_v_h1();
        rows.push_back(row);
    }
    return rows;
}

CertificateConstants scenario_constants(const ScenarioSpec& spec, const SpectralField& u0,
                                        json* calibration_record) {
    if (spec.constants == CertificateConstants::Mode::unit) return CertificateConstants::unit();
    const std::string source = "calibration-seed-" + std::to_string(spec.seed);
    const InequalityFit fit = calibrate_certificate_constants(
        spec.base, u0, default_calibration_library(spec.base, u0, spec.seed), source);
    if (calibration_record)
        *calibration_record = {{"c_star", fit.c_star},
                               {"samples", fit.samples},
                               {"headroom", 2.0},
                               {"constants", to_json(fit.constants)}};
    return fit.constants;
}

int run_scenario(const ScenarioSpec& spec, std::ostream& log) {
    return guarded(spec, log, [&] { return dispatch(spec, log); });
}

int resume(const ScenarioSpec& spec, const fs::path& checkpoint, std::ostream& log) {
    return guarded(spec, log, [&] {
        if (spec.kind != ScenarioKind::simulate) throw ConfigError("resume needs a simulate scenario");
        CheckpointData data = read_checkpoint(checkpoint);
        if (data.header.n != spec.base.n)
            throw CheckpointError("checkpoint grid " + std::to_string(data.header.n) +
                                  " does not match n = " + std::to_string(spec.base.n));
        if (!(data.header.t < spec.base.t_end))
            throw ConfigError("checkpoint time is not before t_end");
        const long step0 =
            spec.base.dt ? std::lround(data.header.t / *spec.base.dt) : 0L;
        const SimulationResult run = simulate(spec.base, data.state, data.header.t, step0);
        write_run(spec.output_dir, spec.base, run);
        log << "resume: " << to_string(run.outcome.kind) << " at t = " << run.outcome.t << "\n";
        return outcome_code(run.outcome);
    });
}

// ---------------------------------------------------------------------------

namespace {

void write_csv_with_sidecar(const fs::path& dir, const std::string& name, const std::string& csv,
                            const std::string& columns) {
    write_text(dir / (name + ".csv"), csv);
    write_text(dir / (name + ".columns.txt"), columns);
}

}  // namespace

void emit_plot_data(const fs::path& dir, const DiagnosticsSeries& diag) {
    if (diag.empty()) throw std::invalid_argument("emit_plot_data: empty diagnostics");
    std::string csv = "t,l2,grad_l2,h1,stokes_l2,lr1\n";
    for (const DiagnosticsRow& r : diag)
        csv += format_number(r.t) + "," + format_number(r.l2) + "," + format_number(r.grad_l2) +
               "," + format_number(r.h1) + "," + format_number(r.stokes_l2) + "," +
               format_number(r.lr1) + "\n";
    write_csv_with_sidecar(dir, "norms_vs_time", csv,
                           "t: time\n"
                           "l2: ||u||\n"
                           "grad_l2: ||grad u||\n"
                           "h1: ||u||_{H^1}\n"
                           "stokes_l2: ||Au||\n"
                           "lr1: ||u||_{L^{r+1}}\n");
}

void emit_plot_data(const fs::path& dir, const SweepResult& sweep) {
    if (sweep.empty()) throw std::invalid_argument("emit_plot_data: empty sweep");
    std::string csv = "epsilon,lhs,r_of_u,margin,certified,completed,sup_h1_of_difference\n";
    for (const SweepRow& r : sweep)
        csv += format_number(r.epsilon) + "," + format_number(r.lhs) + "," +
               format_number(r.r_of_u) + "," + format_number(r.margin) + "," +
               (r.certified ? "1" : "0") + "," +
               (r.simulated_outcome.kind == Outcome::Kind::completed ? "1" : "0") + "," +
               format_number(r.sup_h1_of_difference) + "\n";
    write_csv_with_sidecar(dir, "margin_vs_epsilon", csv,
                           "epsilon: perturbation size\n"
                           "lhs: ||u0 - v0||_{H^1}^2 + c0 int ||f - g||^2\n"
                           "r_of_u: robustness functional of the reference run\n"
                           "margin: r_of_u - lhs\n"
                           "certified: 1 when margin > 0\n"
                           "completed: 1 when the perturbed run reached T\n"
                           "sup_h1_of_difference: sup_t ||u - v||_{H^1}\n");
}

void emit_plot_data(const fs::path& dir, const std::vector<InequalityReport>& reps) {
    if (reps.empty()) throw std::invalid_argument("emit_plot_data: no reports");
    std::string csv = "lemma_id,samples,worst_ratio,certified_bound,pass\n";
    for (const InequalityReport& r : reps)
        csv += to_string(r.lemma_id) + "," + std::to_string(r.samples) + "," +
               format_number(r.worst_ratio) + "," +
               (r.certified_bound ? format_number(*r.certified_bound) : std::string()) + "," +
               (r.pass ? "1" : "0") + "\n";
    write_csv_with_sidecar(dir, "inequality_worst_ratios", csv,
                           "lemma_id: checked inequality\n"
                           "samples: number of evaluated cases\n"
                           "worst_ratio: largest ratio, oriented so that <= certified_bound holds\n"
                           "certified_bound: empty when the check is empirical only\n"
                           "pass: 1 when the bound holds (or the ratio is finite)\n");
}

std::string sha256_hex(const fs::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw IoError("cannot read " + file.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw IoError("sha256 init failed");
    }
    std::vector<char> buf(1 << 16);
    while (is) {
        is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (is.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(is.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::string hex;
    char two[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(two, sizeof two, "%02x", md[i]);
        hex += two;
    }
    return hex;
}

void write_manifest(const fs::path& dir) {
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string rel = fs::relative(entry.path(), dir).generic_string();
        if (rel == "manifest.json" || rel == "metadata.json") continue;
        files.push_back(rel);
    }
    std::sort(files.begin(), files.end());
    json arr = json::array();
    for (const std::string& f : files)
        arr.push_back({{"path", f},
                       {"bytes", fs::file_size(dir / f)},
                       {"sha256", sha256_hex(dir / f)}});
    write_json(dir / "manifest.json", {{"artifacts", arr}});
}

}  // namespace cbf
