#include "cbf/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "cbf/initial_conditions.hpp"
#include "cbf/operators.hpp"

namespace cbf {

const char* to_string(Outcome::Kind k) {
    switch (k) {
    case Outcome::Kind::completed: return "completed";
    case Outcome::Kind::blow_up: return "blow_up";
    case Outcome::Kind::tail_unresolved: return "tail_unresolved";
    }
    return "unknown";
}

double tail_fraction(const SpectralField& u) {
    const Grid& g = u.grid();
    const int n = g.n();
    const double threshold = 2.0 / 3.0 * g.dealias_cutoff();
    double total = 0.0, tail = 0.0;
    for (int c = 0; c < 3; ++c)
        for (int i0 = 0; i0 < n; ++i0)
            for (int i1 = 0; i1 < n; ++i1)
                for (int i2 = 0; i2 < n; ++i2) {
                    const double e = std::norm(u(c, i0, i1, i2));
                    total += e;
                    const int m = std::max({std::abs(g.wavenumber(i0)), std::abs(g.wavenumber(i1)),
                                            std::abs(g.wavenumber(i2))});
                    if (m > threshold) tail += e;
                }
    return total > 0.0 ? tail / total : 0.0;
}

DiagnosticsRow diagnose(const SpectralField& u, double t, const SimulationConfig& cfg,
                        const SpectralField& forcing_at_t) {
    DiagnosticsRow row;
    row.t = t;
    const NormRecord nr = norm_record(u);
    row.l2 = nr.l2;
    row.grad_l2 = nr.grad_l2;
    row.h1 = nr.h1;
    row.stokes_l2 = nr.stokes_l2;
    row.lr1 = norm_lp(u, cfg.r + 1.0);
    row.tail_fraction = tail_fraction(u);
    row.forcing_work = inner(forcing_at_t, u);
    return row;
}

namespace {

double dissipation(const DiagnosticsRow& row, const SimulationConfig& cfg) {
    return cfg.mu * row.grad_l2 * row.grad_l2 + cfg.alpha * row.l2 * row.l2 +
           cfg.beta * std::pow(row.lr1, cfg.r + 1.0);
}

double interval_residual(const DiagnosticsRow& a, const DiagnosticsRow& b,
                         const SimulationConfig& cfg) {
    const double h = b.t - a.t;
    return 0.5 * b.l2 * b.l2 - 0.5 * a.l2 * a.l2 +
           0.5 * h * (dissipation(a, cfg) + dissipation(b, cfg)) -
           0.5 * h * (a.forcing_work + b.forcing_work);
}

bool all_finite(const SpectralField& u) {
    for (const Complex& z : u.data())
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------

Stepper::Stepper(const SimulationConfig& cfg)
    : cfg_(cfg),
      grid_(cfg.n),
      modulated_(cfg.forcing.profile(grid_)),
      offset_(cfg.forcing.offset_profile(grid_)) {
    cfg_.validate();
}

SpectralField Stepper::forcing_at(double t) const {
    SpectralField f = modulated_;
    f *= cfg_.forcing.time_factor(t);
    f += offset_;
    return f;
}

SpectralField Stepper::nonlinear(const SpectralField& u, double t) const {
    SpectralField nl = convective(u, u);
    nl *= -1.0;
    if (cfg_.beta != 0.0) nl.axpy(-cfg_.beta, absorption(u, cfg_.r));
    nl += forcing_at(t);
    if (cfg_.dealias) dealias_in_place(nl);
    return nl;
}

void Stepper::apply_factor(SpectralField& u, double h) const {
    const int n = grid_.n();
    std::vector<double> factor(grid_.points());
    for (int i0 = 0; i0 < n; ++i0)
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2) {
                const double k0 = grid_.wavenumber(i0), k1 = grid_.wavenumber(i1),
                             k2 = grid_.wavenumber(i2);
                const double rate = cfg_.mu * (k0 * k0 + k1 * k1 + k2 * k2) + cfg_.alpha;
                factor[grid_.flat(i0, i1, i2)] = std::exp(-rate * h);
            }
    for (int c = 0; c < 3; ++c) {
        std::span<Complex> comp = u.component(c);
        for (std::size_t p = 0; p < comp.size(); ++p) comp[p] *= factor[p];
    }
}

SpectralField Stepper::step(const SpectralField& u, double t, double dt) const {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
    if (!(u.grid() == grid_)) throw std::invalid_argument("step: grid does not match config");
    SpectralField mid = u;
    mid.axpy(0.5 * dt, nonlinear(u, t));
    apply_factor(mid, 0.5 * dt);
    SpectralField n1 = nonlinear(mid, t + 0.5 * dt);
    apply_factor(n1, 0.5 * dt);
    SpectralField out = u;
    apply_factor(out, dt);
    out.axpy(dt, n1);
    if (!all_finite(out)) throw BlowUp(t + dt, "non-finite state");
    return out;
}

double Stepper::adaptive_dt(const SpectralField& u) const {
    const PhysicalField p = to_physical(u);
    double umax = 0.0;
    for (std::size_t i = 0; i < grid_.points(); ++i) umax = std::max(umax, p.magnitude(i));
    double dt = cfg_.dt_max;
    if (umax > 0.0) {
        dt = std::min(dt, cfg_.cfl * grid_.spacing() / umax);
        if (cfg_.beta > 0.0)
            dt = std::min(dt, cfg_.cfl / (cfg_.beta * std::pow(umax, cfg_.r - 1.0)));
    }
    return dt;
}

SpectralField step(const SpectralField& u, double t, double dt, const SimulationConfig& cfg) {
    return Stepper(cfg).step(u, t, dt);
}

// ---------------------------------------------------------------------------

SimulationResult simulate(const SimulationConfig& cfg, const SpectralField& u0, double t0,
                          long step0) {
    cfg.validate();
    if (u0.grid().n() != cfg.n) throw ConfigError("initial state grid does not match n");
    const Stepper stepper(cfg);

    SimulationResult res;
    SpectralField u = u0;
    double t = t0;
    long step = step0;

    DiagnosticsRow row = diagnose(u, t, cfg, stepper.forcing_at(t));
    row.step = step;
    res.diagnostics.push_back(row);
    res.trajectory.snapshots.push_back({step, t, u});

    auto record = [&](double h) {
        DiagnosticsRow r = diagnose(u, t, cfg, stepper.forcing_at(t));
        r.step = step;
        r.dt = h;
        r.energy_residual = interval_residual(res.diagnostics.back(), r, cfg);
        res.diagnostics.push_back(r);
    };

    res.outcome = {Outcome::Kind::completed, cfg.t_end};
    while (t < cfg.t_end) {
        double h = cfg.dt ? *cfg.dt : stepper.adaptive_dt(u);
        const bool last = t + h >= cfg.t_end - 1e-9 * h;
        if (last) h = cfg.t_end - t;

        SpectralField next(u.grid());
        try {
            next = stepper.step(u, t, h);
        } catch (const BlowUp& e) {
            res.outcome = {Outcome::Kind::blow_up, e.time()};
            break;
        }
        if (!(norm_hs(next, 1.0) <= cfg.blowup_h1)) {
            res.outcome = {Outcome::Kind::blow_up, t + h};
            break;
        }
        u = std::move(next);
        t = last ? cfg.t_end : t + h;
        ++step;

        const bool tail_bad = cfg.tail_limit > 0.0 && tail_fraction(u) > cfg.tail_limit;
        if (last || tail_bad || step % cfg.record_every == 0) record(h);
        if (tail_bad) {
            res.outcome = {Outcome::Kind::tail_unresolved, t};
            break;
        }
        if (!last && cfg.checkpoint_every > 0 && step % cfg.checkpoint_every == 0)
            res.trajectory.snapshots.push_back({step, t, u});
    }
    if (res.trajectory.snapshots.back().step != step)
        res.trajectory.snapshots.push_back({step, t, u});
    return res;
}

SimulationResult simulate(const SimulationConfig& cfg) {
    cfg.validate();
    return simulate(cfg, initial_state(cfg));
}

std::vector<double> energy_balance_residual(const DiagnosticsSeries& diag,
                                            const SimulationConfig& cfg) {
    std::vector<double> out;
    for (std::size_t i = 1; i < diag.size(); ++i)
        out.push_back(interval_residual(diag[i - 1], diag[i], cfg));
    return out;
}

// ---------------------------------------------------------------------------

double TwinRunReport::observed_order() const {
    return std::log2(sup_h1_dt_vs_half / sup_h1_half_vs_quarter);
}

double sup_h1_difference(const Trajectory& a, const Trajectory& b) {
    double sup = 0.0;
    bool any = false;
    for (const Snapshot& sa : a.snapshots) {
        for (const Snapshot& sb : b.snapshots) {
            if (std::abs(sa.t - sb.t) > 1e-9 * std::max(1.0, std::abs(sa.t))) continue;
            any = true;
            const int na = sa.state.grid().n(), nb = sb.state.grid().n();
            double d;
            if (na == nb) {
                d = norm_hs(sa.state - sb.state, 1.0);
            } else if (na < nb) {
                d = norm_hs(pad(sa.state, sb.state.grid()) - sb.state, 1.0);
            } else {
                d = norm_hs(sa.state - pad(sb.state, sa.state.grid()), 1.0);
            }
            sup = std::max(sup, d);
            break;
        }
    }
    if (!any) throw std::invalid_argument("trajectories share no snapshot times");
    return sup;
}

TwinRunReport twin_run_divergence(const SimulationConfig& cfg) {
    if (!cfg.dt) throw ConfigError("twin run needs a fixed dt");
    cfg.validate();
    const int every = std::max(1, cfg.checkpoint_every);
    const SpectralField u0 = initial_state(cfg);

    auto refined = [&](int factor) {
        SimulationConfig c = cfg;
        c.dt = *cfg.dt / factor;
        c.checkpoint_every = every * factor;
        c.record_every = cfg.record_every * factor;
        return simulate(c, u0);
    };
    const SimulationResult r1 = refined(1);
    const SimulationResult r2 = refined(2);
    const SimulationResult r4 = refined(4);

    SimulationConfig fine = cfg;
    fine.n = 2 * cfg.n;
    fine.checkpoint_every = every;
    const SimulationResult rf = simulate(fine, pad(u0, Grid(fine.n)));

    TwinRunReport rep;
    rep.sup_h1_dt_vs_half = sup_h1_difference(r1.trajectory, r2.trajectory);
    rep.sup_h1_half_vs_quarter = sup_h1_difference(r2.trajectory, r4.trajectory);
    rep.sup_h1_n_vs_2n = sup_h1_difference(r1.trajectory, rf.trajectory);
    return rep;
}

// ---------------------------------------------------------------------------

void write_diagnostics_csv(std::ostream& os, const DiagnosticsSeries& diag) {
    os << "step,t,dt,l2,grad_l2,h1,stokes_l2,lr1,energy_residual,tail_fraction\n";
    char buf[512];
    for (const DiagnosticsRow& r : diag) {
        std::snprintf(buf, sizeof buf,
                      "%ld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.step, r.t,
                      r.dt, r.l2, r.grad_l2, r.h1, r.stokes_l2, r.lr1, r.energy_residual,
                      r.tail_fraction);
        os << buf;
    }
}

void write_diagnostics_csv(const std::filesystem::path& path, const DiagnosticsSeries& diag) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    write_diagnostics_csv(os, diag);
    if (!os) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace cbf
