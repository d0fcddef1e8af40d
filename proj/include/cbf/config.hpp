/// @file config.hpp
/// @brief Simulation configuration, forcing and initial data descriptions, JSON I/O.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cbf/fields.hpp"

namespace cbf {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One forcing mode a cos(k.x); the Leray projector is applied when the field is built.
struct ForcingMode {
    Wavevector k{0, 0, 0};
    Vec3 amplitude{0.0, 0.0, 0.0};
};

struct Forcing {
    enum class Kind { none, steady_modes, time_harmonic };
    Kind kind = Kind::none;
    std::vector<ForcingMode> modes;
    double omega = 0.0;  ///< time_harmonic: f(x,t) = cos(omega t) sum_j a_j cos(k_j.x)
    /// Steady modes added on top of the kind-specific part (used for forcing perturbations).
    std::vector<ForcingMode> offset;

    bool is_zero() const { return (kind == Kind::none || modes.empty()) && offset.empty(); }
    /// Projected spatial profile of the modulated part (without the time factor).
    SpectralField profile(const Grid& grid) const;
    SpectralField offset_profile(const Grid& grid) const;
    double time_factor(double t) const;
    /// f(., t) = time_factor(t) profile + offset_profile.
    SpectralField evaluate(const Grid& grid, double t) const;
};

struct InitialCondition {
    enum class Kind { taylor_green, random_divfree, checkpoint, single_mode };
    Kind kind = Kind::taylor_green;
    double amplitude = 1.0;      ///< taylor_green amplitude; random_divfree L2 norm target
    std::uint64_t seed = 0;      ///< random_divfree
    double slope = 2.0;          ///< random_divfree spectrum slope
    int kcut = 4;                ///< random_divfree support max_j |k_j| <= kcut
    std::filesystem::path path;  ///< checkpoint
    Wavevector k{1, 0, 0};       ///< single_mode: a sin(k.x)
    Vec3 vector{0.0, 1.0, 0.0};
};

struct SimulationConfig {
    int n = 32;
    double mu = 1.0;
    double alpha = 0.0;
    double beta = 1.0;
    double r = 3.0;
    double t_end = 1.0;
    std::optional<double> dt = 0.01;  ///< nullopt selects the adaptive step
    double cfl = 0.5;
    double dt_max = 0.05;             ///< cap for the adaptive step
    Forcing forcing;
    InitialCondition initial;
    bool dealias = true;
    int record_every = 1;
    int checkpoint_every = 0;  ///< 0 keeps only the initial and final states
    double tail_limit = 1e-6;  ///< <= 0 disables the resolution monitor
    double blowup_h1 = 1e12;

    /// Throws ConfigError. r > 3 is accepted; see warnings().
    void validate() const;
    std::vector<std::string> warnings() const;
};

SimulationConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SimulationConfig& cfg);

}  // namespace cbf
