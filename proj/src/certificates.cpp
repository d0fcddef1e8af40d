#include "cbf/certificates.hpp"

#include <cmath>
#include <stdexcept>

namespace cbf {

CertificateConstants CertificateConstants::from_inequality(double c0, double c1, double c3,
                                                           double c_r, std::string source) {
    CertificateConstants k;
    k.c0 = c0;
    k.c1 = c1;
    k.c3 = c3;
    k.c_r = c_r;
    k.c_R = 1.0 / std::sqrt(2.0 * (c3 + c_r));
    k.c2 = c_r + c1;
    k.mode = Mode::calibrated;
    k.source = std::move(source);
    k.validate();
    return k;
}

void CertificateConstants::validate() const {
    for (double v : {c0, c1, c2, c3, c_r, c_R})
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("certificate constants must be positive and finite");
}

const char* to_string(CertificateConstants::Mode m) {
    return m == CertificateConstants::Mode::unit ? "unit" : "calibrated";
}

nlohmann::json to_json(const CertificateConstants& k) {
    nlohmann::json j{{"c0", k.c0},   {"c1", k.c1},   {"c2", k.c2},
                     {"c3", k.c3},   {"c_r", k.c_r}, {"c_R", k.c_R},
                     {"mode", to_string(k.mode)}};
    if (k.mode == CertificateConstants::Mode::calibrated) j["source"] = k.source;
    return j;
}

nlohmann::json to_json(const CertificateReport& rep) {
    return {{"r_of_u", rep.r_of_u},
            {"lhs", rep.lhs},
            {"margin", rep.margin},
            {"verdict", rep.certified ? "certified" : "not_certified"},
            {"constants", to_json(rep.constants)},
            {"T", rep.T}};
}

double trapezoid(const TimeSeries& s) {
    double acc = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i)
        acc += 0.5 * (s[i].t - s[i - 1].t) * (s[i].value + s[i - 1].value);
    return acc;
}

// ---------------------------------------------------------------------------

double ode_threshold(double a, int n_exp, double T) {
    if (!(a > 0.0)) throw std::invalid_argument("ode_threshold: a must be > 0");
    if (!(T > 0.0)) throw std::invalid_argument("ode_threshold: T must be > 0");
    if (n_exp <= 1) throw std::invalid_argument("ode_threshold: exponent must be > 1");
    const double m = n_exp - 1.0;
    return std::pow(m * a * T, -1.0 / m);
}

double ode_blowup_time(double c, double y0) {
    if (!(c > 0.0) || !(y0 > 0.0))
        throw std::invalid_argument("ode_blowup_time: c and y0 must be > 0");
    return 1.0 / (2.0 * c * y0 * y0);
}

double local_existence_horizon(double h1_of_u0, double c) {
    if (!(h1_of_u0 > 0.0) || !(c > 0.0))
        throw std::invalid_argument("local_existence_horizon: inputs must be > 0");
    const double h2 = h1_of_u0 * h1_of_u0;
    return 1.0 / (4.0 * c * h2 * h2);
}

double robustness_integral(const DiagnosticsSeries& diag, double T, double r) {
    return time_integral(diag, T, [r](const DiagnosticsRow& row) {
        const double h2 = row.h1 * row.h1;
        return h2 * h2 + row.grad_l2 * row.stokes_l2 + std::pow(row.h1, 2.0 * (r - 1.0)) +
               row.grad_l2;
    });
}

double robustness_R(const DiagnosticsSeries& diag, double T, double r,
                    const CertificateConstants& k) {
    if (!(T > 0.0)) throw std::invalid_argument("robustness_R: T must be > 0");
    k.validate();
    const double integral = robustness_integral(diag, T, r);
    return k.c_R * std::exp(-k.c2 * T) / std::sqrt(T) * std::exp(-k.c1 * integral);
}

double robustness_lhs(const SpectralField& u0, const SpectralField& v0,
                      const TimeSeries& f_minus_g_l2, const CertificateConstants& k) {
    if (!(u0.grid() == v0.grid())) throw std::invalid_argument("robustness_lhs: grid mismatch");
    const double d = norm_hs(u0 - v0, 1.0);
    TimeSeries sq = f_minus_g_l2;
    for (TimeSample& s : sq) s.value *= s.value;
    return d * d + k.c0 * trapezoid(sq);
}

TimeSeries forcing_difference_series(const Forcing& f, const Forcing& g, const Grid& grid,
                                     const std::vector<double>& times) {
    const SpectralField fm = f.profile(grid), fo = f.offset_profile(grid);
    const SpectralField gm = g.profile(grid), go = g.offset_profile(grid);
    SpectralField steady = fo - go;
    TimeSeries out;
    out.reserve(times.size());
    for (double t : times) {
        SpectralField d = steady;
        d.axpy(f.time_factor(t), fm);
        d.axpy(-g.time_factor(t), gm);
        out.push_back({t, norm_l2(d)});
    }
    return out;
}

CertificateReport certify_pair(const SimulationResult& run_u, const SimulationConfig& cfg_u,
                               const SpectralField& v0, const Forcing& g,
                               const CertificateConstants& k) {
    if (run_u.outcome.kind != Outcome::Kind::completed)
        throw std::invalid_argument("certify_pair: reference run did not complete");
    const DiagnosticsSeries& diag = run_u.diagnostics;
    std::vector<double> times;
    for (const DiagnosticsRow& row : diag) times.push_back(row.t);
    const Grid grid(cfg_u.n);

    CertificateReport rep;
    rep.T = diag.back().t;
    rep.constants = k;
    rep.lhs = robustness_lhs(run_u.trajectory.snapshots.front().state, v0,
                             forcing_difference_series(cfg_u.forcing, g, grid, times), k);
    rep.r_of_u = robustness_R(diag, rep.T, cfg_u.r, k);
    rep.margin = rep.r_of_u - rep.lhs;
    rep.certified = rep.margin > 0.0;
    return rep;
}

double exponent_robustness_lhs(const Trajectory& traj, double r, double s, double c0) {
    if (!(r >= 1.0)) throw std::invalid_argument("exponent_robustness_lhs: r must be >= 1");
    if (!(s >= r)) throw std::invalid_argument("exponent_robustness_lhs: s must be >= r");
    TimeSeries inner_norms;
    for (const Snapshot& snap : traj.snapshots) {
        const Grid fine(2 * snap.state.grid().n());
        const PhysicalField p = to_physical_padded(snap.state, fine);
        double acc = 0.0;
        for (std::size_t i = 0; i < fine.points(); ++i) {
            const double m = p.magnitude(i);
            if (m == 0.0) continue;
            const double d = std::pow(m, s - r) - 1.0;
            acc += std::pow(m, 2.0 * r) * d * d;
        }
        inner_norms.push_back({snap.t, std::sqrt(std::pow(fine.spacing(), 3) * acc)});
    }
    return c0 * trapezoid(inner_norms);
}

TimeSeries gronwall_envelope(const DiagnosticsSeries& diag_u, double w0_l2, double c) {
    TimeSeries out;
    double integral = 0.0;
    const double w0 = w0_l2 * w0_l2;
    auto h2 = [](const DiagnosticsRow& row) {
        return row.l2 * row.l2 + row.stokes_l2 * row.stokes_l2;
    };
    for (std::size_t i = 0; i < diag_u.size(); ++i) {
        if (i > 0)
            integral += 0.5 * (diag_u[i].t - diag_u[i - 1].t) * (h2(diag_u[i]) + h2(diag_u[i - 1]));
        out.push_back({diag_u[i].t, w0 * std::exp(c * integral)});
    }
    return out;
}

}  // namespace cbf
