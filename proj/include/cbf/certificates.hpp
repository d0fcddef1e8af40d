/// @file certificates.hpp
/// @brief ODE comparison threshold, blow-up and local-existence times, the
/// robustness functional R(u) with its data-side LHS, the exponent-robustness
/// integral and the Gronwall envelope for differences of solutions.

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cbf/config.hpp"
#include "cbf/fields.hpp"
#include "cbf/integrator.hpp"

namespace cbf {

struct CertificateConstants {
    enum class Mode { unit, calibrated };
    double c0 = 1.0;
    double c1 = 1.0;
    double c2 = 1.0;
    double c3 = 1.0;
    double c_r = 1.0;
    double c_R = 1.0;
    Mode mode = Mode::unit;
    std::string source;  ///< calibration run id when calibrated

    static CertificateConstants unit() { return {}; }
    /// Constants of the differential inequality
    ///   X' + ||Aw||^2 <= c0 ||f-g||^2 + c_r X^r + c3 X^3 + c1 (...) X,  X = ||w||_{H^1}^2,
    /// turned into the R(u) prefactors: X^r <= X + X^3 for r in [1, 3], so the cubic
    /// coefficient becomes c3 + c_r and the linear rate gains c_r; hence
    /// c_R = 1/sqrt(2 (c3 + c_r)) and c2 = c_r + c1.
    static CertificateConstants from_inequality(double c0, double c1, double c3, double c_r,
                                                std::string source);
    /// Throws std::invalid_argument unless all constants are positive and finite.
    void validate() const;
};

struct CertificateReport {
    double r_of_u = 0.0;
    double lhs = 0.0;
    double margin = 0.0;
    bool certified = false;
    CertificateConstants constants;
    double T = 0.0;
};

const char* to_string(CertificateConstants::Mode m);
nlohmann::json to_json(const CertificateConstants& k);
nlohmann::json to_json(const CertificateReport& rep);

struct TimeSample {
    double t = 0.0;
    double value = 0.0;
};
using TimeSeries = std::vector<TimeSample>;

/// Trapezoidal integral over the samples.
double trapezoid(const TimeSeries& s);

/// eta* = [(n - 1) a T]^{-1/(n-1)}.
double ode_threshold(double a, int n_exp, double T);
/// Blow-up time 1/(2 c y0^2) of X' = c X^3.
double ode_blowup_time(double c, double y0);
/// (4 c ||u0||_{H^1}^4)^{-1}.
double local_existence_horizon(double h1_of_u0, double c);

/// Time integral over [0, T] of h1^4 + grad*stokes + h1^{2(r-1)} + grad.
double robustness_integral(const DiagnosticsSeries& diag, double T, double r);
/// c_R exp(-c2 T)/sqrt(T) exp(-c1 * robustness_integral).
double robustness_R(const DiagnosticsSeries& diag, double T, double r,
                    const CertificateConstants& k);

/// ||u0 - v0||_{H^1}^2 + c0 int ||f - g||^2 dt; the series holds ||f - g|| samples.
double robustness_lhs(const SpectralField& u0, const SpectralField& v0,
                      const TimeSeries& f_minus_g_l2, const CertificateConstants& k);

/// ||f(t) - g(t)|| at the given times.
TimeSeries forcing_difference_series(const Forcing& f, const Forcing& g, const Grid& grid,
                                     const std::vector<double>& times);

/// Report for the perturbed data (v0, g) against the completed run of cfg_u.
CertificateReport certify_pair(const SimulationResult& run_u, const SimulationConfig& cfg_u,
                               const SpectralField& v0, const Forcing& g,
                               const CertificateConstants& k);

/// c0 int (int |u|^{2r} (|u|^{s-r} - 1)^2 dx)^{1/2} dt over the trajectory snapshots.
double exponent_robustness_lhs(const Trajectory& traj, double r, double s, double c0);

/// ||w0||^2 exp(c int_0^t (l2^2 + stokes_l2^2)) at every diagnostics time.
TimeSeries gronwall_envelope(const DiagnosticsSeries& diag_u, double w0_l2, double c);

}  // namespace cbf
