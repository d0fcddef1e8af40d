/// @file operators.hpp
/// @brief Leray projector, Stokes operator, convective form B(u,v) = P(u.grad)v and
/// absorption C_r(u,v) = P(|u|^{r-1} v) on the periodic lattice.

#pragma once

#include <cmath>

#include "cbf/fields.hpp"

namespace cbf {

/// Per mode k != 0: u_k - k (k.u_k)/|k|^2. The k = 0 mode is left unchanged.
SpectralField leray_project(const SpectralField& u);
void leray_project_in_place(SpectralField& u);

/// A u = |k|^2 P u_k; zero at k = 0.
SpectralField stokes(const SpectralField& u);

/// Pseudospectral P[(u.grad)v]: products on the collocation grid, then the 2/3
/// mask and the Leray projector. Alias-free when u and v are 2/3-band-limited.
SpectralField convective(const SpectralField& u, const SpectralField& v);

/// P[|u|^{r-1} v] with the product formed on a 2x zero-padded grid and
/// restricted back. Exact on the retained modes for r = 3 and r = 1; for other
/// r the product is not a trigonometric polynomial and a residual alias remains.
SpectralField absorption(const SpectralField& u, const SpectralField& v, double r);
/// C_r(u) = C_r(u, u).
SpectralField absorption(const SpectralField& u, double r);

/// |w|^{r-1} w, equal to 0 at w = 0.
Vec3 absorption_pointwise(const Vec3& w, double r);

/// |w|^{r-1} for the collocation kernels; r = 1 and r = 3 avoid pow.
inline double absorption_weight(double magnitude_sq, double r) {
    if (r == 1.0) return 1.0;
    if (r == 3.0) return magnitude_sq;
    if (magnitude_sq == 0.0) return 0.0;
    return std::pow(magnitude_sq, 0.5 * (r - 1.0));
}

}  // namespace cbf

namespace cbf {

/// Random divergence-free field supported on max_j |k_j| <= kcut with
/// amplitudes proportional to (1+|k|)^{-slope}; mean (k = 0) mode optional.
SpectralField random_divfree_field(const Grid& grid, std::mt19937_64& rng, int kcut, double slope,
                                   bool with_mean = false);

}  // namespace cbf
