/// @file initial_conditions.hpp
/// @brief Initial data and the perturbation builders used by pair runs.

#pragma once

#include <cstdint>

#include "cbf/config.hpp"
#include "cbf/fields.hpp"

namespace cbf {

/// A (sin x1 cos x2 cos x3, -cos x1 sin x2 cos x3, 0).
SpectralField taylor_green(const Grid& grid, double amplitude);

/// Projected a sin(k.x).
SpectralField single_mode(const Grid& grid, const Wavevector& k, const Vec3& a);

/// Fixed-seed random divergence-free field with ||u|| = l2 (zero amplitude gives zero).
SpectralField random_divfree(const Grid& grid, std::uint64_t seed, double slope, int kcut,
                             double l2);

/// Initial state described by cfg.initial on the grid of cfg. A checkpoint must
/// match cfg.n; throws CheckpointError otherwise.
SpectralField initial_state(const SimulationConfig& cfg);

/// Random divergence-free perturbation with ||delta||_{H^1} = eps.
SpectralField initial_perturbation(const Grid& grid, std::uint64_t seed, double eps);

/// Steady single mode delta = a cos(k.x) with c0 * T * ||delta||^2 = eps^2.
ForcingMode forcing_perturbation(double eps, double c0, double T);

}  // namespace cbf
