#include "cbf/initial_conditions.hpp"

#include <cmath>
#include <random>

#include "cbf/checkpoint.hpp"
#include "cbf/operators.hpp"

namespace cbf {

SpectralField taylor_green(const Grid& grid, double amplitude) {
    // sin a cos b cos c expands into the eight modes (+-1, +-1, +-1).
    SpectralField u(grid);
    const Complex q = amplitude / 8.0 * Complex(0.0, 1.0);
    for (int s0 : {-1, 1})
        for (int s1 : {-1, 1})
            for (int s2 : {-1, 1}) {
                const Wavevector k{s0, s1, s2};
                u.mode(0, k) = -q * static_cast<double>(s0);
                u.mode(1, k) = q * static_cast<double>(s1);
            }
    return u;
}

SpectralField single_mode(const Grid& grid, const Wavevector& k, const Vec3& a) {
    SpectralField u(grid);
    if (k == Wavevector{0, 0, 0}) return u;
    const Wavevector neg{-k[0], -k[1], -k[2]};
    for (int c = 0; c < 3; ++c) {
        u.mode(c, k) = Complex(0.0, -0.5 * a[c]);
        u.mode(c, neg) = Complex(0.0, 0.5 * a[c]);
    }
    leray_project_in_place(u);
    return u;
}

SpectralField random_divfree(const Grid& grid, std::uint64_t seed, double slope, int kcut,
                             double l2) {
    std::mt19937_64 rng(seed);
    SpectralField u = random_divfree_field(grid, rng, kcut, slope);
    const double norm = norm_l2(u);
    if (norm > 0.0) u *= l2 / norm;
    return u;
}

SpectralField initial_state(const SimulationConfig& cfg) {
    const Grid grid(cfg.n);
    const InitialCondition& ic = cfg.initial;
    switch (ic.kind) {
    case InitialCondition::Kind::taylor_green: return taylor_green(grid, ic.amplitude);
    case InitialCondition::Kind::random_divfree:
        return random_divfree(grid, ic.seed, ic.slope, std::min(ic.kcut, grid.dealias_cutoff()),
                              ic.amplitude);
    case InitialCondition::Kind::single_mode: {
        Vec3 a = ic.vector;
        for (double& x : a) x *= ic.amplitude;
        return single_mode(grid, ic.k, a);
    }
    case InitialCondition::Kind::checkpoint: {
        CheckpointData data = read_checkpoint(ic.path);
        if (data.header.n != cfg.n)
            throw CheckpointError("checkpoint grid " + std::to_string(data.header.n) +
                                  " does not match n = " + std::to_string(cfg.n));
        return std::move(data.state);
    }
    }
    return SpectralField(grid);
}

SpectralField initial_perturbation(const Grid& grid, std::uint64_t seed, double eps) {
    std::mt19937_64 rng(seed);
    // Support stays below the shell watched by the tail monitor.
    const int kcut = std::max(1, std::min(4, 2 * grid.dealias_cutoff() / 3));
    SpectralField d = random_divfree_field(grid, rng, kcut, 2.0);
    const double h1 = norm_hs(d, 1.0);
    if (h1 > 0.0) d *= eps / h1;
    return d;
}

ForcingMode forcing_perturbation(double eps, double c0, double T) {
    // ||a cos(k.x)||^2 = |T^3| |a|^2 / 2 for k != 0.
    const double a = eps * std::sqrt(2.0 / (c0 * T * kDomainVolume));
    const double s = a / std::sqrt(2.0);
    return ForcingMode{{1, 1, 0}, {s, -s, 0.0}};
}

}  // namespace cbf
