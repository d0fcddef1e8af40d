/// @file fields.hpp
/// @brief Spectral and collocation representations of periodic vector fields on [0,2pi)^3.
///
/// Coefficients follow u(x) = sum_k u_k exp(i k.x) with
/// u_k = |T^3|^{-1} int u exp(-i k.x) dx, so the Sobolev norms below are the
/// lattice sums |T^3| sum_k (1 + |k|^{2s}) |u_k|^2 without extra factors.
///
/// Storage is the full complex lattice (not the r2c half spectrum), component
/// major, row-major over (i0, i1, i2) with FFT index ordering.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace cbf {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;
using Wavevector = std::array<int, 3>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
/// |T^3| = (2 pi)^3
inline constexpr double kDomainVolume = kTwoPi * kTwoPi * kTwoPi;

/// Uniform collocation grid with n points per direction (n even, n >= 4).
class Grid {
public:
    explicit Grid(int n);

    int n() const { return n_; }
    std::size_t points() const { return static_cast<std::size_t>(n_) * n_ * n_; }
    double spacing() const { return kTwoPi / n_; }

    /// Lattice wavenumber of FFT index i, in [-n/2, n/2).
    int wavenumber(int i) const { return i < n_ / 2 ? i : i - n_; }
    /// FFT index of wavenumber k (k taken modulo n).
    int index(int k) const { return ((k % n_) + n_) % n_; }
    bool is_nyquist(int i) const { return i == n_ / 2; }

    /// Largest |k_j| retained by the 2/3 dealiasing rule.
    int dealias_cutoff() const { return (n_ - 1) / 3; }

    std::size_t flat(int i0, int i1, int i2) const {
        return (static_cast<std::size_t>(i0) * n_ + i1) * n_ + i2;
    }

    bool operator==(const Grid&) const = default;

private:
    int n_;
};

/// Fourier coefficients of a 3-component field on the full lattice of a Grid.
class SpectralField {
public:
    explicit SpectralField(Grid grid);

    const Grid& grid() const { return grid_; }

    Complex& operator()(int comp, int i0, int i1, int i2) {
        return coeffs_[comp * grid_.points() + grid_.flat(i0, i1, i2)];
    }
    const Complex& operator()(int comp, int i0, int i1, int i2) const {
        return coeffs_[comp * grid_.points() + grid_.flat(i0, i1, i2)];
    }

    /// Access by wavevector (k_j in [-n/2, n/2)).
    Complex& mode(int comp, const Wavevector& k) {
        return (*this)(comp, grid_.index(k[0]), grid_.index(k[1]), grid_.index(k[2]));
    }
    const Complex& mode(int comp, const Wavevector& k) const {
        return (*this)(comp, grid_.index(k[0]), grid_.index(k[1]), grid_.index(k[2]));
    }

    std::span<Complex> component(int comp) {
        return {coeffs_.data() + comp * grid_.points(), grid_.points()};
    }
    std::span<const Complex> component(int comp) const {
        return {coeffs_.data() + comp * grid_.points(), grid_.points()};
    }

    std::vector<Complex>& data() { return coeffs_; }
    const std::vector<Complex>& data() const { return coeffs_; }

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s);
    /// this += s * other
    void axpy(double s, const SpectralField& other);

    bool operator==(const SpectralField&) const = default;

private:
    Grid grid_;
    std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Real samples at x_j = 2 pi j / n, component major.
class PhysicalField {
public:
    explicit PhysicalField(Grid grid);

    const Grid& grid() const { return grid_; }

    double& operator()(int comp, int j0, int j1, int j2) {
        return samples_[comp * grid_.points() + grid_.flat(j0, j1, j2)];
    }
    double operator()(int comp, int j0, int j1, int j2) const {
        return samples_[comp * grid_.points() + grid_.flat(j0, j1, j2)];
    }

    std::span<double> component(int comp) {
        return {samples_.data() + comp * grid_.points(), grid_.points()};
    }
    std::span<const double> component(int comp) const {
        return {samples_.data() + comp * grid_.points(), grid_.points()};
    }

    std::vector<double>& data() { return samples_; }
    const std::vector<double>& data() const { return samples_; }

    /// Euclidean magnitude |u(x_p)| at flat point index p.
    double magnitude(std::size_t p) const;

private:
    Grid grid_;
    std::vector<double> samples_;
};

/// Derivative tensor: entry [m] holds the field d_m u (all three components).
using SpectralTensor = std::array<SpectralField, 3>;

struct NormRecord {
    double l2 = 0.0;
    double grad_l2 = 0.0;
    double h1 = 0.0;
    double stokes_l2 = 0.0;
};

// ---------------------------------------------------------------------------
// Transforms

PhysicalField to_physical(const SpectralField& u);
SpectralField to_spectral(const PhysicalField& p);

/// Spectral interpolation onto a finer grid. Nyquist planes of the source are
/// dropped so that the embedded field stays real.
SpectralField pad(const SpectralField& u, const Grid& fine);
/// Restriction of the lattice to a coarser grid; the target's Nyquist planes are zeroed.
SpectralField restrict_to(const SpectralField& u, const Grid& coarse);

/// to_physical(pad(u, fine)) without forming the padded lattice.
PhysicalField to_physical_padded(const SpectralField& u, const Grid& fine);
/// restrict_to(to_spectral(p), coarse) without forming the fine lattice.
SpectralField to_spectral_restricted(const PhysicalField& p, const Grid& coarse);
/// Max |u_k - conj(u_{-k})| over the lattice (index partner taken mod n).
double hermitian_defect(const SpectralField& u);
/// Replace u_k by (u_k + conj(u_{-k}))/2.
void hermitian_symmetrize(SpectralField& u);

// ---------------------------------------------------------------------------
// Norms

double norm_l2(const SpectralField& u);
double norm_hs(const SpectralField& u, double s);
double norm_grad_l2(const SpectralField& u);
/// ||A u|| = ||P(-Laplacian) u||, lattice sum of |k|^4 |P u_k|^2.
double norm_stokes(const SpectralField& u);
NormRecord norm_record(const SpectralField& u);

/// Collocation quadrature ((2pi/n)^3 sum |u(x_j)|^p)^{1/p}. Throws for p < 1.
double norm_lp(const PhysicalField& field, double p);
/// L^p norm of a spectral field; quadrature on a 2x oversampled grid when p > 2.
double norm_lp(const SpectralField& u, double p);

/// L^2 inner product |T^3| sum_k u_k . conj(v_k) (real part).
double inner(const SpectralField& u, const SpectralField& v);

// ---------------------------------------------------------------------------
// Derivatives and truncations

/// Coefficients i k_m u_k. The derivative wavenumber at a Nyquist index is 0.
SpectralTensor gradient(const SpectralField& u);

SpectralField truncate_cube(const SpectralField& u, int m);
SpectralField truncate_ball(const SpectralField& u, int m);
/// 2/3-rule mask: zero modes with max_j |k_j| > grid.dealias_cutoff().
void dealias_in_place(SpectralField& u);

/// Max over k != 0 of |k . u_k|.
double divergence_defect(const SpectralField& u);

// ---------------------------------------------------------------------------
// Random fields (test data and initial conditions)

/// Independent Gaussian coefficients on every represented mode, then
/// Hermitian-symmetrized. With include_nyquist=false the Nyquist planes are zero.
SpectralField random_hermitian_field(const Grid& grid, std::mt19937_64& rng,
                                     bool include_nyquist = true);

/// Band-limited random field: modes with max_j |k_j| <= kcut, amplitude
/// proportional to (1+|k|)^{-slope}. Not projected.
SpectralField random_smooth_field(const Grid& grid, std::mt19937_64& rng, int kcut,
                                  double slope);

}  // namespace cbf
