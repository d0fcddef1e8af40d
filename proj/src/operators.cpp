#include "cbf/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "cbf/detail/lattice.hpp"

namespace cbf {

void leray_project_in_place(SpectralField& u) {
    const Grid& g = u.grid();
    const int n = g.n();
    for (int i0 = 0; i0 < n; ++i0)
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2)
                detail::project_mode(g.wavenumber(i0), g.wavenumber(i1), g.wavenumber(i2),
                                     u(0, i0, i1, i2), u(1, i0, i1, i2), u(2, i0, i1, i2));
}

SpectralField leray_project(const SpectralField& u) {
    SpectralField out = u;
    leray_project_in_place(out);
    return out;
}

SpectralField stokes(const SpectralField& u) {
    const Grid& g = u.grid();
    const int n = g.n();
    SpectralField out = leray_project(u);
    for (int i0 = 0; i0 < n; ++i0)
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2) {
                const double kk = detail::squared_magnitude(g.wavenumber(i0), g.wavenumber(i1),
                                                            g.wavenumber(i2));
                for (int c = 0; c < 3; ++c) out(c, i0, i1, i2) *= kk;
            }
    return out;
}

SpectralField convective(const SpectralField& u, const SpectralField& v) {
    if (!(u.grid() == v.grid())) throw std::invalid_argument("convective: grid mismatch");
    const Grid& g = u.grid();
    const std::size_t np = g.points();
    const PhysicalField up = to_physical(u);
    const SpectralTensor dv = gradient(v);
    PhysicalField prod(g);
    for (int m = 0; m < 3; ++m) {
        const PhysicalField dmv = to_physical(dv[m]);
        const auto um = up.component(m);
        for (int l = 0; l < 3; ++l) {
            auto out = prod.component(l);
            const auto d = dmv.component(l);
            for (std::size_t p = 0; p < np; ++p) out[p] += um[p] * d[p];
        }
    }
    SpectralField result = to_spectral(prod);
    dealias_in_place(result);
    leray_project_in_place(result);
    return result;
}

namespace {

void check_exponent(double r) {
    if (!(r >= 1.0)) throw std::invalid_argument("absorption: exponent r must be >= 1");
}

SpectralField finish_absorption(PhysicalField& prod, const Grid& target) {
    SpectralField out = to_spectral_restricted(prod, target);
    leray_project_in_place(out);
    return out;
}

}  // namespace

SpectralField absorption(const SpectralField& u, const SpectralField& v, double r) {
    check_exponent(r);
    if (!(u.grid() == v.grid())) throw std::invalid_argument("absorption: grid mismatch");
    const Grid fine(2 * u.grid().n());
    const PhysicalField up = to_physical_padded(u, fine);
    PhysicalField prod = to_physical_padded(v, fine);
    const std::size_t np = fine.points();
    for (std::size_t p = 0; p < np; ++p) {
        const double m = up.magnitude(p);
        const double w = absorption_weight(m * m, r);
        for (int c = 0; c < 3; ++c) prod.component(c)[p] *= w;
    }
    return finish_absorption(prod, u.grid());
}

SpectralField absorption(const SpectralField& u, double r) {
    check_exponent(r);
    const Grid fine(2 * u.grid().n());
    PhysicalField prod = to_physical_padded(u, fine);
    const std::size_t np = fine.points();
    for (std::size_t p = 0; p < np; ++p) {
        const double m = prod.magnitude(p);
        const double w = absorption_weight(m * m, r);
        for (int c = 0; c < 3; ++c) prod.component(c)[p] *= w;
    }
    return finish_absorption(prod, u.grid());
}

Vec3 absorption_pointwise(const Vec3& w, double r) {
    if (!(r >= 1.0)) throw std::invalid_argument("absorption_pointwise: r must be >= 1");
    const double sq = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
    if (sq == 0.0) return {0.0, 0.0, 0.0};
    const double s = absorption_weight(sq, r);
    return {s * w[0], s * w[1], s * w[2]};
}

}  // namespace cbf

namespace cbf {

SpectralField random_divfree_field(const Grid& grid, std::mt19937_64& rng, int kcut, double slope,
                                   bool with_mean) {
    SpectralField u = random_smooth_field(grid, rng, kcut, slope);
    if (!with_mean)
        for (int c = 0; c < 3; ++c) u(c, 0, 0, 0) = 0.0;
    leray_project_in_place(u);
    return u;
}

}  // namespace cbf
