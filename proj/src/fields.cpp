#include "cbf/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cbf/detail/lattice.hpp"
#include "cbf/fft.hpp"

namespace cbf {

Grid::Grid(int n) : n_(n) {
    if (n < 4 || n % 2 != 0)
        throw std::invalid_argument("grid size must be even and >= 4, got " + std::to_string(n));
}

// ---------------------------------------------------------------------------

SpectralField::SpectralField(Grid grid) : grid_(grid), coeffs_(3 * grid.points()) {}

namespace {
void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}
}  // namespace

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    require_same_grid(grid_, other.grid_, "SpectralField +=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    require_same_grid(grid_, other.grid_, "SpectralField -=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

void SpectralField::axpy(double s, const SpectralField& other) {
    require_same_grid(grid_, other.grid_, "SpectralField axpy");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * other.coeffs_[i];
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

PhysicalField::PhysicalField(Grid grid) : grid_(grid), samples_(3 * grid.points()) {}

double PhysicalField::magnitude(std::size_t p) const {
    const std::size_t np = grid_.points();
    const double a = samples_[p], b = samples_[np + p], c = samples_[2 * np + p];
    return std::sqrt(a * a + b * b + c * c);
}

// ---------------------------------------------------------------------------
// Transforms

PhysicalField to_physical(const SpectralField& u) {
    const Grid& g = u.grid();
    const int n = g.n();
    const int nh = n / 2 + 1;
    PhysicalField out(g);
    std::vector<Complex> half(static_cast<std::size_t>(n) * n * nh);
    for (int c = 0; c < 3; ++c) {
        for (int i0 = 0; i0 < n; ++i0)
            for (int i1 = 0; i1 < n; ++i1)
                for (int i2 = 0; i2 < nh; ++i2)
                    half[(static_cast<std::size_t>(i0) * n + i1) * nh + i2] = u(c, i0, i1, i2);
        fft::inverse_r2c(n, half, out.component(c));
    }
    return out;
}

SpectralField to_spectral(const PhysicalField& p) {
    const Grid& g = p.grid();
    const int n = g.n();
    const int nh = n / 2 + 1;
    const double scale = 1.0 / static_cast<double>(g.points());
    SpectralField out(g);
    std::vector<Complex> half(static_cast<std::size_t>(n) * n * nh);
    for (int c = 0; c < 3; ++c) {
        fft::forward_r2c(n, p.component(c), half);
        for (int i0 = 0; i0 < n; ++i0) {
            const int m0 = (n - i0) % n;
            for (int i1 = 0; i1 < n; ++i1) {
                const int m1 = (n - i1) % n;
                for (int i2 = 0; i2 < n; ++i2) {
                    if (i2 < nh) {
                        out(c, i0, i1, i2) =
                            scale * half[(static_cast<std::size_t>(i0) * n + i1) * nh + i2];
                    } else {
                        out(c, i0, i1, i2) = scale * std::conj(
                            half[(static_cast<std::size_t>(m0) * n + m1) * nh + (n - i2)]);
                    }
                }
            }
        }
    }
    return out;
}

SpectralField pad(const SpectralField& u, const Grid& fine) {
    const Grid& g = u.grid();
    if (fine.n() < g.n()) throw std::invalid_argument("pad: target grid is coarser");
    SpectralField out(fine);
    const int n = g.n();
    for (int c = 0; c < 3; ++c)
        for (int i0 = 0; i0 < n; ++i0) {
            if (g.is_nyquist(i0)) continue;
            const int j0 = fine.index(g.wavenumber(i0));
            for (int i1 = 0; i1 < n; ++i1) {
                if (g.is_nyquist(i1)) continue;
                const int j1 = fine.index(g.wavenumber(i1));
                for (int i2 = 0; i2 < n; ++i2) {
                    if (g.is_nyquist(i2)) continue;
                    out(c, j0, j1, fine.index(g.wavenumber(i2))) = u(c, i0, i1, i2);
                }
            }
        }
    return out;
}

PhysicalField to_physical_padded(const SpectralField& u, const Grid& fine) {
    const Grid& g = u.grid();
    if (fine.n() < g.n()) throw std::invalid_argument("to_physical_padded: target grid is coarser");
    const int n = g.n();
    const int nf = fine.n();
    const int nhf = nf / 2 + 1;
    PhysicalField out(fine);
    std::vector<Complex> half(static_cast<std::size_t>(nf) * nf * nhf);
    for (int c = 0; c < 3; ++c) {
        std::fill(half.begin(), half.end(), Complex(0.0, 0.0));
        for (int i0 = 0; i0 < n; ++i0) {
            if (g.is_nyquist(i0)) continue;
            const int j0 = fine.index(g.wavenumber(i0));
            for (int i1 = 0; i1 < n; ++i1) {
                if (g.is_nyquist(i1)) continue;
                const int j1 = fine.index(g.wavenumber(i1));
                for (int i2 = 0; i2 < n / 2; ++i2)
                    half[(static_cast<std::size_t>(j0) * nf + j1) * nhf + i2] = u(c, i0, i1, i2);
            }
        }
        fft::inverse_r2c(nf, half, out.component(c));
    }
    return out;
}

SpectralField to_spectral_restricted(const PhysicalField& p, const Grid& coarse) {
    const Grid& g = p.grid();
    if (coarse.n() > g.n())
        throw std::invalid_argument("to_spectral_restricted: target grid is finer");
    const int nf = g.n();
    const int nhf = nf / 2 + 1;
    const int n = coarse.n();
    const double scale = 1.0 / static_cast<double>(g.points());
    SpectralField out(coarse);
    std::vector<Complex> half(static_cast<std::size_t>(nf) * nf * nhf);
    for (int c = 0; c < 3; ++c) {
        fft::forward_r2c(nf, p.component(c), half);
        for (int i0 = 0; i0 < n; ++i0) {
            if (coarse.is_nyquist(i0)) continue;
            const int k0 = coarse.wavenumber(i0);
            for (int i1 = 0; i1 < n; ++i1) {
                if (coarse.is_nyquist(i1)) continue;
                const int k1 = coarse.wavenumber(i1);
                for (int i2 = 0; i2 < n; ++i2) {
                    if (coarse.is_nyquist(i2)) continue;
                    const int k2 = coarse.wavenumber(i2);
                    if (k2 >= 0) {
                        out(c, i0, i1, i2) =
                            scale * half[(static_cast<std::size_t>(g.index(k0)) * nf +
                                          g.index(k1)) * nhf + k2];
                    } else {
                        out(c, i0, i1, i2) =
                            scale * std::conj(half[(static_cast<std::size_t>(g.index(-k0)) * nf +
                                                    g.index(-k1)) * nhf + (-k2)]);
                    }
                }
            }
        }
    }
    return out;
}

SpectralField restrict_to(const SpectralField& u, const Grid& coarse) {
    const Grid& g = u.grid();
    if (coarse.n() > g.n()) throw std::invalid_argument("restrict_to: target grid is finer");
    SpectralField out(coarse);
    const int n = coarse.n();
    for (int c = 0; c < 3; ++c)
        for (int i0 = 0; i0 < n; ++i0) {
            if (coarse.is_nyquist(i0)) continue;
            const int j0 = g.index(coarse.wavenumber(i0));
            for (int i1 = 0; i1 < n; ++i1) {
                if (coarse.is_nyquist(i1)) continue;
                const int j1 = g.index(coarse.wavenumber(i1));
                for (int i2 = 0; i2 < n; ++i2) {
                    if (coarse.is_nyquist(i2)) continue;
                    out(c, i0, i1, i2) = u(c, j0, j1, g.index(coarse.wavenumber(i2)));
                }
            }
        }
    return out;
}

double hermitian_defect(const SpectralField& u) {
    const int n = u.grid().n();
    double worst = 0.0;
    for (int c = 0; c < 3; ++c)
        for (int i0 = 0; i0 < n; ++i0)
            for (int i1 = 0; i1 < n; ++i1)
                for (int i2 = 0; i2 < n; ++i2) {
                    const Complex a = u(c, i0, i1, i2);
                    const Complex b = u(c, (n - i0) % n, (n - i1) % n, (n - i2) % n);
                    worst = std::max(worst, std::abs(a - std::conj(b)));
                }
    return worst;
}

void hermitian_symmetrize(SpectralField& u) {
    const int n = u.grid().n();
    const SpectralField src = u;
    for (int c = 0; c < 3; ++c)
        for (int i0 = 0; i0 < n; ++i0)
            for (int i1 = 0; i1 < n; ++i1)
                for (int i2 = 0; i2 < n; ++i2) {
                    const Complex b = src(c, (n - i0) % n, (n - i1) % n, (n - i2) % n);
                    u(c, i0, i1, i2) = 0.5 * (src(c, i0, i1, i2) + std::conj(b));
                }
}

// ---------------------------------------------------------------------------
// Norms

namespace {

/// |T^3| sum_k weight(k) |u_k|^2 in a fixed (component, i0, i1, i2) order.
template <class Weight>
double weighted_sum(const SpectralField& u, Weight weight) {
    const Grid& g = u.grid();
    const int n = g.n();
    double acc = 0.0;
    for (int i0 = 0; i0 < n; ++i0) {
        const int k0 = g.wavenumber(i0);
        for (int i1 = 0; i1 < n; ++i1) {
            const int k1 = g.wavenumber(i1);
            for (int i2 = 0; i2 < n; ++i2) {
                const int k2 = g.wavenumber(i2);
                const double w = weight(k0, k1, k2);
                if (w == 0.0) continue;
                const double e = std::norm(u(0, i0, i1, i2)) + std::norm(u(1, i0, i1, i2)) +
                                 std::norm(u(2, i0, i1, i2));
                acc += w * e;
            }
        }
    }
    return kDomainVolume * acc;
}

}  // namespace

double norm_l2(const SpectralField& u) {
    return std::sqrt(weighted_sum(u, [](int, int, int) { return 1.0; }));
}

double norm_hs(const SpectralField& u, double s) {
    if (s < 0.0) throw std::invalid_argument("norm_hs: s must be >= 0");
    return std::sqrt(weighted_sum(u, [s](int k0, int k1, int k2) {
        const double kk = detail::squared_magnitude(k0, k1, k2);
        return 1.0 + std::pow(kk, s);
    }));
}

double norm_grad_l2(const SpectralField& u) {
    return std::sqrt(
        weighted_sum(u, [](int k0, int k1, int k2) { return detail::squared_magnitude(k0, k1, k2); }));
}

double norm_stokes(const SpectralField& u) {
    const Grid& g = u.grid();
    const int n = g.n();
    double acc = 0.0;
    for (int i0 = 0; i0 < n; ++i0)
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2) {
                const int k0 = g.wavenumber(i0), k1 = g.wavenumber(i1), k2 = g.wavenumber(i2);
                const double kk = detail::squared_magnitude(k0, k1, k2);
                if (kk == 0.0) continue;
                Complex a = u(0, i0, i1, i2), b = u(1, i0, i1, i2), c = u(2, i0, i1, i2);
                detail::project_mode(k0, k1, k2, a, b, c);
                acc += kk * kk * (std::norm(a) + std::norm(b) + std::norm(c));
            }
    return std::sqrt(kDomainVolume * acc);
}

NormRecord norm_record(const SpectralField& u) {
    NormRecord rec;
    const double l2sq = weighted_sum(u, [](int, int, int) { return 1.0; });
    const double gsq = weighted_sum(
        u, [](int k0, int k1, int k2) { return detail::squared_magnitude(k0, k1, k2); });
    rec.l2 = std::sqrt(l2sq);
    rec.grad_l2 = std::sqrt(gsq);
    rec.h1 = norm_hs(u, 1.0);
    rec.stokes_l2 = norm_stokes(u);
    return rec;
}

double norm_lp(const PhysicalField& field, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("norm_lp: p must be >= 1");
    const Grid& g = field.grid();
    const double cell = std::pow(g.spacing(), 3);
    const std::size_t np = g.points();
    // Scaled by the peak so that |u|^p cannot overflow.
    double peak = 0.0;
    for (std::size_t i = 0; i < np; ++i) peak = std::max(peak, field.magnitude(i));
    if (peak == 0.0 || !std::isfinite(peak)) return peak;
    double acc = 0.0;
    if (p == 2.0) {
        for (std::size_t i = 0; i < np; ++i) {
            const double m = field.magnitude(i) / peak;
            acc += m * m;
        }
    } else {
        for (std::size_t i = 0; i < np; ++i) acc += std::pow(field.magnitude(i) / peak, p);
    }
    return peak * std::pow(cell * acc, 1.0 / p);
}

double norm_lp(const SpectralField& u, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("norm_lp: p must be >= 1");
    if (p > 2.0) return norm_lp(to_physical_padded(u, Grid(2 * u.grid().n())), p);
    return norm_lp(to_physical(u), p);
}

double inner(const SpectralField& u, const SpectralField& v) {
    require_same_grid(u.grid(), v.grid(), "inner");
    double acc = 0.0;
    const auto& a = u.data();
    const auto& b = v.data();
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] * std::conj(b[i])).real();
    return kDomainVolume * acc;
}

// ---------------------------------------------------------------------------
// Derivatives and truncations

SpectralTensor gradient(const SpectralField& u) {
    const Grid& g = u.grid();
    const int n = g.n();
    SpectralTensor out{SpectralField(g), SpectralField(g), SpectralField(g)};
    const Complex I(0.0, 1.0);
    for (int c = 0; c < 3; ++c)
        for (int i0 = 0; i0 < n; ++i0)
            for (int i1 = 0; i1 < n; ++i1)
                for (int i2 = 0; i2 < n; ++i2) {
                    const std::array<int, 3> idx{i0, i1, i2};
                    const Complex v = u(c, i0, i1, i2);
                    for (int m = 0; m < 3; ++m) {
                        const int k = g.is_nyquist(idx[m]) ? 0 : g.wavenumber(idx[m]);
                        out[m](c, i0, i1, i2) = I * double(k) * v;
                    }
                }
    return out;
}

namespace {
template <class Keep>
SpectralField mask(const SpectralField& u, Keep keep) {
    const Grid& g = u.grid();
    const int n = g.n();
    SpectralField out(g);
    for (int c = 0; c < 3; ++c)
        for (int i0 = 0; i0 < n; ++i0)
            for (int i1 = 0; i1 < n; ++i1)
                for (int i2 = 0; i2 < n; ++i2)
                    if (keep(g.wavenumber(i0), g.wavenumber(i1), g.wavenumber(i2)))
                        out(c, i0, i1, i2) = u(c, i0, i1, i2);
    return out;
}
}  // namespace

SpectralField truncate_cube(const SpectralField& u, int m) {
    if (m < 0) throw std::invalid_argument("truncate_cube: m must be >= 0");
    return mask(u, [m](int k0, int k1, int k2) {
        return std::abs(k0) <= m && std::abs(k1) <= m && std::abs(k2) <= m;
    });
}

SpectralField truncate_ball(const SpectralField& u, int m) {
    if (m < 0) throw std::invalid_argument("truncate_ball: m must be >= 0");
    const double mm = static_cast<double>(m) * m;
    return mask(u, [mm](int k0, int k1, int k2) {
        return detail::squared_magnitude(k0, k1, k2) <= mm;
    });
}

void dealias_in_place(SpectralField& u) {
    const Grid& g = u.grid();
    const int n = g.n();
    const int kc = g.dealias_cutoff();
    for (int c = 0; c < 3; ++c)
        for (int i0 = 0; i0 < n; ++i0)
            for (int i1 = 0; i1 < n; ++i1)
                for (int i2 = 0; i2 < n; ++i2)
                    if (std::abs(g.wavenumber(i0)) > kc || std::abs(g.wavenumber(i1)) > kc ||
                        std::abs(g.wavenumber(i2)) > kc)
                        u(c, i0, i1, i2) = 0.0;
}

double divergence_defect(const SpectralField& u) {
    const Grid& g = u.grid();
    const int n = g.n();
    double worst = 0.0;
    for (int i0 = 0; i0 < n; ++i0)
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2) {
                const double k0 = g.wavenumber(i0), k1 = g.wavenumber(i1), k2 = g.wavenumber(i2);
                const Complex d = k0 * u(0, i0, i1, i2) + k1 * u(1, i0, i1, i2) + k2 * u(2, i0, i1, i2);
                worst = std::max(worst, std::abs(d));
            }
    return worst;
}

// ---------------------------------------------------------------------------
// Random fields

SpectralField random_hermitian_field(const Grid& grid, std::mt19937_64& rng, bool include_nyquist) {
    std::normal_distribution<double> normal(0.0, 1.0);
    SpectralField u(grid);
    const int n = grid.n();
    for (int c = 0; c < 3; ++c)
        for (int i0 = 0; i0 < n; ++i0)
            for (int i1 = 0; i1 < n; ++i1)
                for (int i2 = 0; i2 < n; ++i2) {
                    const double re = normal(rng);
                    const double im = normal(rng);
                    if (!include_nyquist &&
                        (grid.is_nyquist(i0) || grid.is_nyquist(i1) || grid.is_nyquist(i2)))
                        continue;
                    u(c, i0, i1, i2) = Complex(re, im);
                }
    hermitian_symmetrize(u);
    return u;
}

SpectralField random_smooth_field(const Grid& grid, std::mt19937_64& rng, int kcut, double slope) {
    std::normal_distribution<double> normal(0.0, 1.0);
    SpectralField u(grid);
    const int n = grid.n();
    const int kc = std::min(kcut, n / 2 - 1);
    for (int c = 0; c < 3; ++c)
        for (int i0 = 0; i0 < n; ++i0)
            for (int i1 = 0; i1 < n; ++i1)
                for (int i2 = 0; i2 < n; ++i2) {
                    const double re = normal(rng);
                    const double im = normal(rng);
                    const int k0 = grid.wavenumber(i0), k1 = grid.wavenumber(i1),
                              k2 = grid.wavenumber(i2);
                    if (std::abs(k0) > kc || std::abs(k1) > kc || std::abs(k2) > kc) continue;
                    const double amp =
                        std::pow(1.0 + std::sqrt(detail::squared_magnitude(k0, k1, k2)), -slope);
                    u(c, i0, i1, i2) = amp * Complex(re, im);
                }
    hermitian_symmetrize(u);
    return u;
}

}  // namespace cbf
