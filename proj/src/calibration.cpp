#include "cbf/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cbf/initial_conditions.hpp"
#include "cbf/inequalities.hpp"
#include "cbf/operators.hpp"

namespace cbf {

double PairRun::sup_u_h1() const {
    double m = 0.0;
    for (const PairSample& s : samples) m = std::max(m, s.u_h1);
    return m;
}

double PairRun::sup_v_h1() const {
    double m = 0.0;
    for (const PairSample& s : samples) m = std::max(m, s.v_h1);
    return m;
}

double PairRun::sup_w_h1() const {
    double m = 0.0;
    for (const PairSample& s : samples) m = std::max(m, std::sqrt(s.X));
    return m;
}

PairRun run_pair(const SimulationConfig& cfg, const SpectralField& u0, const Perturbation& p) {
    if (!cfg.dt) throw ConfigError("pair runs need a fixed dt");
    SimulationConfig cfg_v = cfg;
    cfg_v.forcing = p.g;
    const Stepper su(cfg), sv(cfg_v);
    if (!(u0.grid() == p.v0.grid()) || u0.grid().n() != cfg.n)
        throw std::invalid_argument("run_pair: grid mismatch");

    PairRun run;
    SpectralField u = u0, v = p.v0;
    double t = 0.0;
    auto sample = [&] {
        const SpectralField w = u - v;
        const NormRecord nu = norm_record(u);
        PairSample s;
        s.t = t;
        const double wh1 = norm_hs(w, 1.0);
        s.X = wh1 * wh1;
        const double aw = norm_stokes(w);
        s.Aw_sq = aw * aw;
        const double wl2 = norm_l2(w);
        s.w_l2_sq = wl2 * wl2;
        const double fg = norm_l2(su.forcing_at(t) - sv.forcing_at(t));
        s.fg_sq = fg * fg;
        s.u_l2 = nu.l2;
        s.u_grad = nu.grad_l2;
        s.u_h1 = nu.h1;
        s.u_stokes = nu.stokes_l2;
        s.v_h1 = norm_hs(v, 1.0);
        run.samples.push_back(s);
    };
    auto unresolved = [&](const SpectralField& x) {
        return cfg.tail_limit > 0.0 && tail_fraction(x) > cfg.tail_limit;
    };

    sample();
    run.u_outcome = run.v_outcome = {Outcome::Kind::completed, cfg.t_end};
    const double dt = *cfg.dt;
    while (t < cfg.t_end) {
        double h = dt;
        const bool last = t + h >= cfg.t_end - 1e-9 * h;
        if (last) h = cfg.t_end - t;
        SpectralField un(u.grid()), vn(v.grid());
        try {
            un = su.step(u, t, h);
        } catch (const BlowUp& e) {
            run.u_outcome = {Outcome::Kind::blow_up, e.time()};
        }
        try {
            vn = sv.step(v, t, h);
        } catch (const BlowUp& e) {
            run.v_outcome = {Outcome::Kind::blow_up, e.time()};
        }
        if (run.u_outcome.kind == Outcome::Kind::completed && !(norm_hs(un, 1.0) <= cfg.blowup_h1))
            run.u_outcome = {Outcome::Kind::blow_up, t + h};
        if (run.v_outcome.kind == Outcome::Kind::completed && !(norm_hs(vn, 1.0) <= cfg.blowup_h1))
            run.v_outcome = {Outcome::Kind::blow_up, t + h};
        if (run.u_outcome.kind != Outcome::Kind::completed ||
            run.v_outcome.kind != Outcome::Kind::completed)
            break;
        u = std::move(un);
        v = std::move(vn);
        t = last ? cfg.t_end : t + h;
        sample();
        if (unresolved(u)) run.u_outcome = {Outcome::Kind::tail_unresolved, t};
        if (unresolved(v)) run.v_outcome = {Outcome::Kind::tail_unresolved, t};
        if (run.u_outcome.kind != Outcome::Kind::completed ||
            run.v_outcome.kind != Outcome::Kind::completed)
            break;
    }
    return run;
}

double unit_inequality_rhs(const PairSample& s, double r) {
    const double h2 = s.u_h1 * s.u_h1;
    const double rate =
        h2 * h2 + s.u_grad * s.u_stokes + std::pow(s.u_h1, 2.0 * (r - 1.0)) + s.u_grad + 1.0;
    return s.fg_sq + std::pow(s.X, r) + s.X * s.X * s.X + rate * s.X;
}

InequalityFit calibrate_certificate_constants(const SimulationConfig& cfg,
                                              const SpectralField& u0,
                                              const std::vector<Perturbation>& library,
                                              const std::string& source, double headroom,
                                              double floor) {
    InequalityFit fit;
    fit.c_star = -std::numeric_limits<double>::infinity();
    for (const Perturbation& p : library) {
        const PairRun run = run_pair(cfg, u0, p);
        const auto& s = run.samples;
        for (std::size_t i = 1; i + 1 < s.size(); ++i) {
            const double rhs = unit_inequality_rhs(s[i], cfg.r);
            if (!(rhs > 0.0)) continue;
            const double dX = (s[i + 1].X - s[i - 1].X) / (s[i + 1].t - s[i - 1].t);
            fit.c_star = std::max(fit.c_star, (dX + s[i].Aw_sq) / rhs);
            ++fit.samples;
        }
    }
    const double c = headroom * std::max(fit.c_star, floor);
    fit.constants = CertificateConstants::from_inequality(c, c, c, c, source);
    return fit;
}

std::vector<Perturbation> default_calibration_library(const SimulationConfig& cfg,
                                                      const SpectralField& u0,
                                                      std::uint64_t seed) {
    const Grid grid(cfg.n);
    std::vector<Perturbation> lib;
    std::uint64_t s = seed;
    for (double eps : {0.01, 0.1, 0.5, 1.0, 2.0})
        lib.push_back({u0 + initial_perturbation(grid, s++, eps), cfg.forcing});
    for (double eps : {0.1, 1.0}) {
        Forcing g = cfg.forcing;
        g.offset.push_back(forcing_perturbation(eps, 1.0, cfg.t_end));
        lib.push_back({u0, g});
    }
    Forcing g = cfg.forcing;
    g.offset.push_back(forcing_perturbation(0.5, 1.0, cfg.t_end));
    lib.push_back({u0 + initial_perturbation(grid, s++, 0.5), g});
    return lib;
}

double gronwall_exponent(const PairRun& run) {
    const auto& s = run.samples;
    if (s.empty() || !(s.front().w_l2_sq > 0.0))
        throw std::invalid_argument("gronwall_exponent: needs a nonzero initial difference");
    double best = -std::numeric_limits<double>::infinity();
    double integral = 0.0;
    auto h2 = [](const PairSample& x) { return x.u_l2 * x.u_l2 + x.u_stokes * x.u_stokes; };
    for (std::size_t i = 1; i < s.size(); ++i) {
        integral += 0.5 * (s[i].t - s[i - 1].t) * (h2(s[i]) + h2(s[i - 1]));
        if (!(integral > 0.0) || !(s[i].w_l2_sq > 0.0)) continue;
        best = std::max(best, std::log(s[i].w_l2_sq / s.front().w_l2_sq) / integral);
    }
    return best;
}

double calibrate_gronwall(const std::vector<PairRun>& runs, double headroom) {
    double best = 0.0;
    for (const PairRun& run : runs) best = std::max(best, gronwall_exponent(run));
    return headroom * best;
}

namespace {

SpectralField calibration_field(const Grid& grid, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> cut(1, grid.dealias_cutoff());
    std::uniform_real_distribution<double> slope(0.0, 3.0);
    const int kc = cut(rng);
    const double sl = slope(rng);
    return random_divfree_field(grid, rng, kc, sl, /*with_mean=*/true);
}

}  // namespace

double calibrate_sobolev(double p, int n, int fields, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Grid grid(n);
    double worst = 0.0;
    for (int i = 0; i < fields; ++i) {
        const SpectralField u = calibration_field(grid, rng);
        const double h1 = norm_hs(u, 1.0);
        if (h1 > 0.0) worst = std::max(worst, norm_lp(u, p) / h1);
    }
    return 1.1 * worst;
}

double calibrate_grad_l6(int n, int fields, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Grid grid(n);
    double worst = 0.0;
    for (int i = 0; i < fields; ++i) {
        const SpectralField u = calibration_field(grid, rng);
        if (norm_stokes(u) > 0.0) worst = std::max(worst, grad_l6_ratio(u));
    }
    return 1.1 * worst;
}

}  // namespace cbf
