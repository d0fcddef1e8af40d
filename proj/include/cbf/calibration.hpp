/// @file calibration.hpp
/// @brief Lockstep pair runs and the empirical constants fitted from them.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cbf/certificates.hpp"
#include "cbf/config.hpp"
#include "cbf/fields.hpp"
#include "cbf/integrator.hpp"

namespace cbf {

/// Scalars of u, v and w = u - v at one time level of a pair run.
struct PairSample {
    double t = 0.0;
    double X = 0.0;        ///< ||w||_{H^1}^2
    double Aw_sq = 0.0;    ///< ||A w||^2
    double w_l2_sq = 0.0;  ///< ||w||^2
    double fg_sq = 0.0;    ///< ||f - g||^2
    double u_l2 = 0.0;
    double u_grad = 0.0;
    double u_h1 = 0.0;
    double u_stokes = 0.0;
    double v_h1 = 0.0;
};

struct PairRun {
    std::vector<PairSample> samples;
    Outcome u_outcome;
    Outcome v_outcome;
    double sup_u_h1() const;
    double sup_v_h1() const;
    double sup_w_h1() const;
};

struct Perturbation {
    SpectralField v0;
    Forcing g;
};

/// Steps u (data of cfg from u0) and v (v0, forcing g) with the same fixed dt.
/// Stops at t_end or when either run blows up or loses resolution.
PairRun run_pair(const SimulationConfig& cfg, const SpectralField& u0, const Perturbation& p);

/// Unit-constant right side of the difference inequality at one sample.
double unit_inequality_rhs(const PairSample& s, double r);

struct InequalityFit {
    double c_star = 0.0;  ///< max over samples of (X' + ||Aw||^2) / unit rhs
    std::size_t samples = 0;
    CertificateConstants constants;
};

/// c0 = c1 = c3 = c_r = headroom * max(c_star, floor).
InequalityFit calibrate_certificate_constants(const SimulationConfig& cfg,
                                              const SpectralField& u0,
                                              const std::vector<Perturbation>& library,
                                              const std::string& source, double headroom = 2.0,
                                              double floor = 1e-2);

/// Initial-data perturbations of several sizes plus forcing and combined ones.
std::vector<Perturbation> default_calibration_library(const SimulationConfig& cfg,
                                                      const SpectralField& u0,
                                                      std::uint64_t seed);

/// Max over t > 0 of ln(||w||^2 / ||w0||^2) / int_0^t (||u||^2 + ||Au||^2).
double gronwall_exponent(const PairRun& run);
/// headroom * max(0, max over runs of gronwall_exponent).
double calibrate_gronwall(const std::vector<PairRun>& runs, double headroom = 2.0);

/// 1.1 * max ||u||_{L^p} / ||u||_{H^1} over random divergence-free fields (with mean).
double calibrate_sobolev(double p, int n, int fields, std::uint64_t seed);
/// 1.1 * max ||grad u||_{L^6} / ||Au|| over random divergence-free fields.
double calibrate_grad_l6(int n, int fields, std::uint64_t seed);

}  // namespace cbf
