#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "cbf/checkpoint.hpp"
#include "cbf/harness.hpp"
#include "cbf/initial_conditions.hpp"

using namespace cbf;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "cbf_test_harness" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    os << text;
}

json small_scenario(const std::string& kind) {
    return {{"cbf_config_version", 1},
            {"kind", kind},
            {"seed", 3},
            {"base",
             {{"n", 16},
              {"mu", 1.0},
              {"beta", 1.0},
              {"r", 3.0},
              {"t_end", 0.2},
              {"dt", 0.02},
              {"checkpoint_every", 5},
              {"initial", {{"kind", "taylor_green"}, {"amplitude", 0.1}}}}}};
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CBF_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> csv_lines(const fs::path& p) {
    std::istringstream is(slurp(p));
    std::vector<std::string> lines;
    for (std::string line; std::getline(is, line);) lines.push_back(line);
    return lines;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

TEST(Config, RoundTrip) {
    json j = small_scenario("perturb_sweep");
    j["perturbations"] = {{{"epsilon", 0.01}, {"mode", "initial"}}, {{"epsilon", 0.1}, {"mode", "both"}}};
    j["base"]["forcing"] = {{"kind", "time_harmonic"},
                            {"omega", 2.0},
                            {"modes", {{{"k", {1, 0, 0}}, {"amplitude", {0.0, 1.0, 0.0}}}}}};
    j["constants"] = "calibrated";
    const ScenarioSpec spec = scenario_from_json(j);
    EXPECT_EQ(spec.kind, ScenarioKind::perturb_sweep);
    EXPECT_EQ(spec.seed, 3u);
    ASSERT_EQ(spec.perturbations.size(), 2u);
    EXPECT_EQ(spec.perturbations[1].mode, PerturbationSpec::Mode::both);
    EXPECT_EQ(spec.base.forcing.kind, Forcing::Kind::time_harmonic);
    EXPECT_EQ(spec.base.forcing.modes.at(0).k, (Wavevector{1, 0, 0}));
    EXPECT_EQ(spec.constants, CertificateConstants::Mode::calibrated);
    EXPECT_EQ(to_json(scenario_from_json(to_json(spec))), to_json(spec));
}

TEST(Config, AdaptiveStep) {
    json j = small_scenario("simulate");
    j["base"]["dt"] = "adaptive";
    EXPECT_FALSE(scenario_from_json(j).base.dt.has_value());
    j["base"]["dt"] = "fast";
    EXPECT_THROW(scenario_from_json(j), ConfigError);
    j["base"]["dt"] = "adaptive";
    j["kind"] = "twin_run";
    EXPECT_THROW(scenario_from_json(j), ConfigError);
}

TEST(Config, InvariantViolations) {
    const std::vector<std::pair<std::string, json>> bad{
        {"n", 15}, {"n", 2}, {"mu", 0.0}, {"beta", -1.0}, {"alpha", -0.5}, {"r", 0.5},
        {"t_end", 0.0}, {"dt", -0.1}, {"cfl", 1.5}, {"record_every", 0}};
    for (const auto& [key, value] : bad) {
        json j = small_scenario("simulate");
        j["base"][key] = value;
        EXPECT_THROW(scenario_from_json(j), ConfigError) << key << " = " << value;
    }
}

TEST(Config, SchemaErrors) {
    json j = small_scenario("simulate");
    j.erase("cbf_config_version");
    EXPECT_THROW(scenario_from_json(j), ConfigError);
    j["cbf_config_version"] = 2;
    EXPECT_THROW(scenario_from_json(j), ConfigError);
    j = small_scenario("simulate");
    j["base"]["viscosity"] = 1.0;
    EXPECT_THROW(scenario_from_json(j), ConfigError);
    j = small_scenario("dance");
    EXPECT_THROW(scenario_from_json(j), ConfigError);
    j = small_scenario("perturb_sweep");
    j["perturbations"] = {{{"epsilon", 0.1}}, {{"epsilon", 0.01}}};
    EXPECT_THROW(scenario_from_json(j), ConfigError);
    j["perturbations"] = json::array();
    EXPECT_THROW(scenario_from_json(j), ConfigError);
    j = small_scenario("exponent_sweep");
    j["exponent_pairs"] = {{2.0, 1.5}};
    EXPECT_THROW(scenario_from_json(j), ConfigError);
    j = small_scenario("simulate");
    j["base"]["forcing"] = {{"kind", "steady_modes"},
                            {"modes", {{{"k", {9, 0, 0}}, {"amplitude", {0.0, 1.0, 0.0}}}}}};
    EXPECT_THROW(scenario_from_json(j), ConfigError);
}

TEST(Config, WarnsAboveCubicAbsorption) {
    json j = small_scenario("simulate");
    j["base"]["r"] = 4.0;
    const ScenarioSpec spec = scenario_from_json(j);
    EXPECT_FALSE(spec.base.warnings().empty());
    j["base"]["r"] = 3.0;
    EXPECT_TRUE(scenario_from_json(j).base.warnings().empty());
}

TEST(Config, LoadScenarioErrors) {
    const fs::path dir = scratch("load");
    EXPECT_THROW(load_scenario(dir / "missing.json"), IoError);
    write_file(dir / "broken.json", "{ not json");
    EXPECT_THROW(load_scenario(dir / "broken.json"), ConfigError);
}

// ---------------------------------------------------------------------------
// Command line

TEST(Cli, ExitCodes) {
    const fs::path dir = scratch("cli");
    write_file(dir / "bad.json", R"({"cbf_config_version": 1, "base": {"n": 7}})");
    EXPECT_EQ(run_cli("simulate --config " + (dir / "bad.json").string() + " --out " + (dir / "o1").string()), 2);
    EXPECT_EQ(run_cli("simulate --config " + (dir / "nope.json").string() + " --out " + (dir / "o2").string()), 5);
    EXPECT_EQ(run_cli("simulate --config " + (dir / "bad.json").string()), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);

    json mismatch = small_scenario("certify");
    write_file(dir / "mismatch.json", mismatch.dump());
    EXPECT_EQ(run_cli("simulate --config " + (dir / "mismatch.json").string() + " --out " + (dir / "o3").string()), 2);

    json blow = small_scenario("simulate");
    blow["base"]["blowup_h1"] = 0.01;
    write_file(dir / "blow.json", blow.dump());
    EXPECT_EQ(run_cli("simulate --config " + (dir / "blow.json").string() + " --out " + (dir / "o4").string()), 3);

    json tail = small_scenario("simulate");
    tail["base"]["n"] = 8;
    tail["base"]["initial"]["amplitude"] = 1.0;
    write_file(dir / "tail.json", tail.dump());
    EXPECT_EQ(run_cli("simulate --config " + (dir / "tail.json").string() + " --out " + (dir / "o5").string()), 4);

    json ok = small_scenario("simulate");
    write_file(dir / "ok.json", ok.dump());
    EXPECT_EQ(run_cli("simulate --deterministic --threads 1 --config " + (dir / "ok.json").string() +
                      " --out " + (dir / "o6").string()),
              0);
    EXPECT_TRUE(fs::exists(dir / "o6" / "manifest.json"));
}

TEST(Cli, CorruptedCheckpointExitsWithIoCode) {
    const fs::path dir = scratch("corrupt");
    write_checkpoint(dir / "c.cbf", {16, 3.0, 1.0, 0.0, 1.0, 0.0}, taylor_green(Grid(16), 0.1));
    {
        std::fstream f(dir / "c.cbf", std::ios::binary | std::ios::in | std::ios::out);
        f.write("CBF9", 4);
    }
    write_file(dir / "cfg.json", small_scenario("simulate").dump());
    EXPECT_EQ(run_cli("resume --config " + (dir / "cfg.json").string() + " --checkpoint " +
                      (dir / "c.cbf").string() + " --out " + (dir / "out").string()),
              5);

    write_checkpoint(dir / "g.cbf", {8, 3.0, 1.0, 0.0, 1.0, 0.0}, SpectralField(Grid(8)));
    EXPECT_EQ(run_cli("resume --config " + (dir / "cfg.json").string() + " --checkpoint " +
                      (dir / "g.cbf").string() + " --out " + (dir / "out2").string()),
              5);
}

// ---------------------------------------------------------------------------
// Scenarios

TEST(Scenario, SimulateZeroData) {
    json j = small_scenario("simulate");
    j["base"]["initial"]["amplitude"] = 0.0;
    ScenarioSpec spec = scenario_from_json(j);
    spec.output_dir = scratch("zero");
    std::ostringstream log;
    ASSERT_EQ(run_scenario(spec, log), exit_code::ok);
    const auto lines = csv_lines(spec.output_dir / "diagnostics.csv");
    ASSERT_EQ(lines.size(), 12u);
    EXPECT_EQ(lines[0], "step,t,dt,l2,grad_l2,h1,stokes_l2,lr1,energy_residual,tail_fraction");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream row(lines[i]);
        std::vector<double> v;
        for (std::string cell; std::getline(row, cell, ',');) v.push_back(std::stod(cell));
        ASSERT_EQ(v.size(), 10u);
        for (int c = 3; c < 10; ++c) EXPECT_EQ(v[c], 0.0);
    }
    EXPECT_EQ(read_json(spec.output_dir / "summary.json").at("outcome").at("kind"), "completed");
}

TEST(Scenario, ManifestListsEveryArtifact) {
    ScenarioSpec spec = scenario_from_json(small_scenario("simulate"));
    spec.output_dir = scratch("manifest");
    std::ostringstream log;
    ASSERT_EQ(run_scenario(spec, log), exit_code::ok);
    const json m = read_json(spec.output_dir / "manifest.json");
    std::set<std::string> listed;
    for (const json& a : m.at("artifacts")) {
        const std::string path = a.at("path");
        listed.insert(path);
        EXPECT_EQ(a.at("sha256"), sha256_hex(spec.output_dir / path));
        EXPECT_EQ(a.at("bytes"), fs::file_size(spec.output_dir / path));
    }
    std::set<std::string> on_disk;
    for (const auto& e : fs::recursive_directory_iterator(spec.output_dir))
        if (e.is_regular_file()) on_disk.insert(fs::relative(e.path(), spec.output_dir).generic_string());
    on_disk.erase("manifest.json");
    on_disk.erase("metadata.json");
    EXPECT_EQ(listed, on_disk);
    for (const char* f : {"config.json", "diagnostics.csv", "summary.json", "norms_vs_time.csv",
                          "norms_vs_time.columns.txt", "checkpoints/step_00000000.cbf",
                          "checkpoints/step_00000010.cbf"})
        EXPECT_TRUE(listed.count(f)) << f;
    EXPECT_TRUE(read_json(spec.output_dir / "metadata.json").contains("started_utc"));
}

TEST(Scenario, Sha256KnownVector) {
    const fs::path dir = scratch("sha");
    write_file(dir / "abc", "abc");
    EXPECT_EQ(sha256_hex(dir / "abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Scenario, ArtifactTreeIsDeterministic) {
    const fs::path dir = scratch("determinism");
    json j = small_scenario("simulate");
    j["base"]["initial"] = {{"kind", "random_divfree"}, {"seed", 9}, {"amplitude", 1.0}, {"kcut", 3}};
    write_file(dir / "cfg.json", j.dump());
    for (const char* out : {"a", "b"})
        ASSERT_EQ(run_cli("simulate --deterministic --config " + (dir / "cfg.json").string() + " --out " +
                          (dir / out).string()),
                  0);
    std::vector<std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir / "a"))
        if (e.is_regular_file()) files.push_back(fs::relative(e.path(), dir / "a").generic_string());
    EXPECT_GT(files.size(), 5u);
    for (const std::string& f : files) {
        if (f == "metadata.json") continue;
        EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
    }
}

TEST(Scenario, ResumeEqualsFreshRun) {
    ScenarioSpec spec = scenario_from_json(small_scenario("simulate"));
    spec.output_dir = scratch("fresh");
    std::ostringstream log;
    ASSERT_EQ(run_scenario(spec, log), exit_code::ok);

    ScenarioSpec half = spec;
    half.output_dir = scratch("resumed");
    ASSERT_EQ(resume(half, spec.output_dir / "checkpoints" / "step_00000005.cbf", log), exit_code::ok);
    EXPECT_EQ(slurp(half.output_dir / "checkpoints" / "step_00000010.cbf"),
              slurp(spec.output_dir / "checkpoints" / "step_00000010.cbf"));

    ScenarioSpec start = spec;
    start.output_dir = scratch("resumed0");
    ASSERT_EQ(resume(start, spec.output_dir / "checkpoints" / "step_00000000.cbf", log), exit_code::ok);
    EXPECT_EQ(slurp(start.output_dir / "diagnostics.csv"), slurp(spec.output_dir / "diagnostics.csv"));
    EXPECT_EQ(slurp(start.output_dir / "checkpoints" / "step_00000010.cbf"),
              slurp(spec.output_dir / "checkpoints" / "step_00000010.cbf"));
}

TEST(Scenario, CertifyIdenticalPair) {
    ScenarioSpec spec = scenario_from_json(small_scenario("certify"));
    spec.output_dir = scratch("certify");
    std::ostringstream log;
    ASSERT_EQ(run_scenario(spec, log), exit_code::ok);
    const json rep = read_json(spec.output_dir / "certificates.json").at("reports").at(0);
    EXPECT_EQ(rep.at("verdict"), "certified");
    EXPECT_EQ(rep.at("lhs"), 0.0);
    EXPECT_EQ(rep.at("margin"), rep.at("r_of_u"));
    EXPECT_EQ(rep.at("constants").at("mode"), "unit");
}

TEST(Scenario, SweepFlipsAtThreshold) {
    json j = small_scenario("perturb_sweep");
    json eps = json::array();
    for (double e : {0.01, 0.03, 0.1, 0.2, 0.3, 0.5, 1.0}) eps.push_back({{"epsilon", e}, {"mode", "initial"}});
    j["perturbations"] = eps;
    ScenarioSpec spec = scenario_from_json(j);
    spec.output_dir = scratch("sweep");
    std::ostringstream log;
    const int code = run_scenario(spec, log);
    const json sweep = read_json(spec.output_dir / "sweep.json");
    const json& rows = sweep.at("rows");
    ASSERT_EQ(rows.size(), 7u);
    const double R = rows[0].at("r_of_u");
    bool flipped = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double e = rows[i].at("epsilon"), lhs = rows[i].at("lhs");
        EXPECT_NEAR(lhs, e * e, 1e-12 * e * e);
        if (i) {
            EXPECT_GE(lhs, static_cast<double>(rows[i - 1].at("lhs")));
        }
        EXPECT_EQ(rows[i].at("verdict") == "certified", lhs < R);
        if (!flipped && lhs >= R) {
            flipped = true;
            EXPECT_EQ(rows[i].at("verdict"), "not_certified");
            if (i) {
                EXPECT_EQ(rows[i - 1].at("verdict"), "certified");
            }
        }
    }
    EXPECT_TRUE(flipped);
    EXPECT_EQ(code, sweep.at("counterexamples") == 0 ? exit_code::ok : exit_code::checks_failed);
    EXPECT_EQ(csv_lines(spec.output_dir / "margin_vs_epsilon.csv").size(), 8u);
    EXPECT_TRUE(fs::exists(spec.output_dir / "margin_vs_epsilon.columns.txt"));
}

TEST(Scenario, InequalitySuiteReportsEveryCheck) {
    json j = small_scenario("inequality_suite");
    j["inequality_samples"] = {{"pointwise", 100000}, {"fields", 3}, {"n", 8}};
    ScenarioSpec spec = scenario_from_json(j);
    spec.output_dir = scratch("suite");
    std::ostringstream log;
    const int code = run_scenario(spec, log);
    const json out = read_json(spec.output_dir / "inequality_reports.json");
    ASSERT_EQ(out.at("reports").size(), 5u);
    std::map<std::string, bool> pass;
    for (const json& r : out.at("reports")) pass[r.at("lemma_id")] = r.at("pass");
    EXPECT_TRUE(pass.at("monotonicity"));
    EXPECT_TRUE(pass.at("dissipation_bracket"));
    EXPECT_TRUE(pass.at("grad_l6"));
    // The default exponents include r = 1.5, where the difference bound and the
    // power-mean fact (s = 0.5) fail.
    EXPECT_FALSE(pass.at("difference_bound"));
    EXPECT_FALSE(pass.at("power_mean_fact"));
    EXPECT_EQ(out.at("pass"), false);
    EXPECT_EQ(code, exit_code::checks_failed);
    EXPECT_EQ(csv_lines(spec.output_dir / "inequality_worst_ratios.csv").size(), 6u);
}

TEST(Scenario, ExponentSweep) {
    json j = small_scenario("exponent_sweep");
    j["exponent_pairs"] = {{1.0, 2.0}, {1.0, 1.5}, {1.0, 1.1}, {1.0, 1.01}};
    ScenarioSpec spec = scenario_from_json(j);
    spec.output_dir = scratch("exponent");
    std::ostringstream log;
    ASSERT_EQ(run_scenario(spec, log), exit_code::ok);
    const json rows = read_json(spec.output_dir / "exponent_sweep.json").at("rows");
    ASSERT_EQ(rows.size(), 4u);
    for (std::size_t i = 1; i < rows.size(); ++i)
        EXPECT_LT(static_cast<double>(rows[i].at("lhs")), static_cast<double>(rows[i - 1].at("lhs")));
    EXPECT_EQ(csv_lines(spec.output_dir / "exponent_sweep.csv").size(), 5u);
}

TEST(Scenario, TwinRun) {
    ScenarioSpec spec = scenario_from_json(small_scenario("twin_run"));
    spec.output_dir = scratch("twin");
    std::ostringstream log;
    EXPECT_EQ(run_scenario(spec, log), exit_code::ok) << log.str();
    const json t = read_json(spec.output_dir / "twin_run.json");
    EXPECT_EQ(t.at("identical_data_sup_h1"), 0.0);
    EXPECT_EQ(t.at("gronwall").at("under_envelope"), true);
}

// ---------------------------------------------------------------------------
// Plot data

TEST(PlotData, EmptyInputWritesNothing) {
    const fs::path dir = scratch("plot_empty");
    EXPECT_THROW(emit_plot_data(dir, SweepResult{}), std::invalid_argument);
    EXPECT_THROW(emit_plot_data(dir, DiagnosticsSeries{}), std::invalid_argument);
    EXPECT_THROW(emit_plot_data(dir, std::vector<InequalityReport>{}), std::invalid_argument);
    EXPECT_TRUE(fs::is_empty(dir));
}

TEST(PlotData, SingleDiagnosticsRow) {
    const fs::path dir = scratch("plot_single");
    DiagnosticsSeries d(1);
    d[0].l2 = 2.0;
    emit_plot_data(dir, d);
    const auto lines = csv_lines(dir / "norms_vs_time.csv");
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[0], "t,l2,grad_l2,h1,stokes_l2,lr1");
    const auto sidecar = csv_lines(dir / "norms_vs_time.columns.txt");
    EXPECT_EQ(sidecar.size(), 6u);
}

TEST(PlotData, TenPointSweep) {
    const fs::path dir = scratch("plot_sweep");
    SweepResult s;
    for (int i = 1; i <= 10; ++i) {
        SweepRow r;
        r.epsilon = 0.1 * i;
        r.lhs = r.epsilon * r.epsilon;
        r.r_of_u = 0.2;
        r.margin = r.r_of_u - r.lhs;
        r.certified = r.margin > 0;
        s.push_back(r);
    }
    emit_plot_data(dir, s);
    const auto lines = csv_lines(dir / "margin_vs_epsilon.csv");
    ASSERT_EQ(lines.size(), 11u);
    double prev = -1.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream row(lines[i]);
        std::string eps, lhs;
        std::getline(row, eps, ',');
        std::getline(row, lhs, ',');
        EXPECT_GE(std::stod(lhs), prev);
        prev = std::stod(lhs);
    }
}
