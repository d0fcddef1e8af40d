/// @file harness.hpp
/// @brief Scenario specs, orchestration, artifacts and exit codes.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cbf/calibration.hpp"
#include "cbf/certificates.hpp"
#include "cbf/config.hpp"
#include "cbf/inequalities.hpp"
#include "cbf/integrator.hpp"

namespace cbf {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int checks_failed = 1;
inline constexpr int config = 2;
inline constexpr int blow_up = 3;
inline constexpr int unresolved = 4;
inline constexpr int io = 5;
}  // namespace exit_code

enum class ScenarioKind { simulate, certify, perturb_sweep, inequality_suite, exponent_sweep, twin_run };

const char* to_string(ScenarioKind k);

struct PerturbationSpec {
    enum class Mode { initial, forcing, both };
    double epsilon = 0.0;
    Mode mode = Mode::initial;
};

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::simulate;
    SimulationConfig base;
    std::vector<PerturbationSpec> perturbations;
    std::vector<std::pair<double, double>> exponent_pairs;  ///< (r, s)
    std::filesystem::path output_dir;
    std::uint64_t seed = 1;
    CertificateConstants::Mode constants = CertificateConstants::Mode::unit;
    std::uint64_t pointwise_samples = 100000;  ///< per exponent
    std::uint64_t field_samples = 100;
    int field_n = 16;

    /// Throws ConfigError.
    void validate() const;
};

inline constexpr int kConfigVersion = 1;

/// Requires "cbf_config_version": 1. The output directory is not part of the file.
ScenarioSpec scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioSpec& spec);
/// Throws IoError when the file cannot be read, ConfigError when it is malformed.
ScenarioSpec load_scenario(const std::filesystem::path& path);

struct SweepRow {
    double epsilon = 0.0;
    double lhs = 0.0;
    double r_of_u = 0.0;
    double margin = 0.0;
    bool certified = false;
    Outcome simulated_outcome;
    double sup_h1_of_difference = 0.0;
    double sup_h1_of_perturbed = 0.0;
};
using SweepResult = std::vector<SweepRow>;

/// Perturbed data (v0, g). Initial perturbations use the same seed for every
/// epsilon so that rows differ only by scale; "both" splits eps^2 evenly.
Perturbation build_perturbation(const SimulationConfig& cfg, const SpectralField& u0,
                                const PerturbationSpec& p, double c0, std::uint64_t seed);

SweepResult perturb_sweep(const ScenarioSpec& spec, const SpectralField& u0,
                          const SimulationResult& base_run, const CertificateConstants& k);

/// Unit constants or constants fitted on the default perturbation library.
CertificateConstants scenario_constants(const ScenarioSpec& spec, const SpectralField& u0,
                                        nlohmann::json* calibration_record = nullptr);

/// Runs the scenario into spec.output_dir and returns an exit code.
int run_scenario(const ScenarioSpec& spec, std::ostream& log);

/// Continues a simulate scenario from a CBF1 checkpoint. The step counter is
/// recovered from t / dt for a fixed step.
int resume(const ScenarioSpec& spec, const std::filesystem::path& checkpoint, std::ostream& log);

// ---------------------------------------------------------------------------
// Plot data: one CSV per panel plus a "<name>.columns.txt" sidecar.

void emit_plot_data(const std::filesystem::path& dir, const DiagnosticsSeries& diag);
void emit_plot_data(const std::filesystem::path& dir, const SweepResult& sweep);
void emit_plot_data(const std::filesystem::path& dir, const std::vector<InequalityReport>& reps);

std::string sha256_hex(const std::filesystem::path& file);
/// manifest.json listing every file under dir (except the manifest and
/// metadata.json) with size and SHA-256, sorted by path.
void write_manifest(const std::filesystem::path& dir);

}  // namespace cbf
