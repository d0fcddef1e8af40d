/// @file integrator.hpp
/// @brief Integrating-factor midpoint stepping of
/// du/dt + mu A u + B(u) + alpha u + beta C_r(u) = P f, with per-step diagnostics.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cbf/config.hpp"
#include "cbf/fields.hpp"

namespace cbf {

/// Raised when the state stops being finite or exceeds the configured H^1 ceiling.
class BlowUp : public std::runtime_error {
public:
    BlowUp(double t, const std::string& what) : std::runtime_error(what), t_(t) {}
    double time() const { return t_; }

private:
    double t_;
};

struct DiagnosticsRow {
    long step = 0;
    double t = 0.0;
    double dt = 0.0;  ///< step that produced this state; 0 for the initial row
    double l2 = 0.0;
    double grad_l2 = 0.0;
    double h1 = 0.0;
    double stokes_l2 = 0.0;
    double lr1 = 0.0;              ///< ||u||_{L^{r+1}}
    double energy_residual = 0.0;  ///< residual over the interval ending at this row
    double tail_fraction = 0.0;
    double forcing_work = 0.0;  ///< <f(t), u(t)>; kept in memory only
};

using DiagnosticsSeries = std::vector<DiagnosticsRow>;

struct Snapshot {
    long step = 0;
    double t = 0.0;
    SpectralField state;
};

/// Initial state first, then every checkpoint_every steps, then the final state.
struct Trajectory {
    std::vector<Snapshot> snapshots;
    const Snapshot& final_snapshot() const { return snapshots.back(); }
};

struct Outcome {
    enum class Kind { completed, blow_up, tail_unresolved };
    Kind kind = Kind::completed;
    double t = 0.0;  ///< time of the event (t_end when completed)
};

const char* to_string(Outcome::Kind k);

struct SimulationResult {
    Trajectory trajectory;
    DiagnosticsSeries diagnostics;
    Outcome outcome;
};

/// Energy fraction in modes with max_j |k_j| > (2/3) of the dealiasing cutoff.
double tail_fraction(const SpectralField& u);

/// Diagnostics of a single state (energy_residual left at 0).
DiagnosticsRow diagnose(const SpectralField& u, double t, const SimulationConfig& cfg,
                        const SpectralField& forcing_at_t);

class Stepper {
public:
    explicit Stepper(const SimulationConfig& cfg);

    /// One integrating-factor midpoint step. Throws BlowUp on a non-finite state.
    SpectralField step(const SpectralField& u, double t, double dt) const;
    /// Explicit part -B(u) - beta C_r(u) + P f(t), dealiased when configured.
    SpectralField nonlinear(const SpectralField& u, double t) const;
    SpectralField forcing_at(double t) const;
    /// Adaptive step from the advective and absorption limits, capped by dt_max.
    double adaptive_dt(const SpectralField& u) const;
    const SimulationConfig& config() const { return cfg_; }

private:
    void apply_factor(SpectralField& u, double h) const;

    SimulationConfig cfg_;
    Grid grid_;
    SpectralField modulated_;
    SpectralField offset_;
};

SpectralField step(const SpectralField& u, double t, double dt, const SimulationConfig& cfg);

/// Integrates from u0 at time t0 (step counter starting at step0) to cfg.t_end.
SimulationResult simulate(const SimulationConfig& cfg, const SpectralField& u0, double t0 = 0.0,
                          long step0 = 0);
/// Integrates from the configured initial condition.
SimulationResult simulate(const SimulationConfig& cfg);

/// Signed residuals, one per recording interval.
std::vector<double> energy_balance_residual(const DiagnosticsSeries& diag,
                                            const SimulationConfig& cfg);

/// Trapezoidal integral of g(row) over the recorded times in [0, T]. Throws
/// std::invalid_argument when the rows do not start at 0 or stop short of T.
template <class F>
double time_integral(const DiagnosticsSeries& diag, double T, F g);

struct TwinRunReport {
    double sup_h1_dt_vs_half = 0.0;       ///< (n, dt) vs (n, dt/2)
    double sup_h1_half_vs_quarter = 0.0;  ///< (n, dt/2) vs (n, dt/4)
    double sup_h1_n_vs_2n = 0.0;          ///< (n, dt) vs (2n, dt)
    double time_ratio() const { return sup_h1_half_vs_quarter / sup_h1_dt_vs_half; }
    double observed_order() const;
};

/// sup over common snapshot times of ||a - b||_{H^1}; the coarser grid is padded.
double sup_h1_difference(const Trajectory& a, const Trajectory& b);

/// Needs a fixed dt.
TwinRunReport twin_run_divergence(const SimulationConfig& cfg);

void write_diagnostics_csv(std::ostream& os, const DiagnosticsSeries& diag);
void write_diagnostics_csv(const std::filesystem::path& path, const DiagnosticsSeries& diag);

// ---------------------------------------------------------------------------

template <class F>
double time_integral(const DiagnosticsSeries& diag, double T, F g) {
    if (diag.empty() || diag.front().t != 0.0)
        throw std::invalid_argument("diagnostics do not start at t = 0");
    if (diag.back().t < T * (1.0 - 1e-12))
        throw std::invalid_argument("diagnostics do not cover [0, T]");
    double acc = 0.0;
    for (std::size_t i = 1; i < diag.size(); ++i) {
        const double t0 = diag[i - 1].t;
        if (t0 >= T) break;
        const double t1 = diag[i].t;
        const double g0 = g(diag[i - 1]);
        const double g1 = g(diag[i]);
        if (t1 <= T) {
            acc += 0.5 * (t1 - t0) * (g0 + g1);
        } else {
            const double s = (T - t0) / (t1 - t0);
            const double gT = g0 + s * (g1 - g0);
            acc += 0.5 * (T - t0) * (g0 + gT);
        }
    }
    return acc;
}

}  // namespace cbf
