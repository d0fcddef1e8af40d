#include "cbf/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cbf/operators.hpp"

namespace cbf {

std::string to_string(LemmaId id) {
    switch (id) {
    case LemmaId::monotonicity: return "monotonicity";
    case LemmaId::difference_bound: return "difference_bound";
    case LemmaId::dissipation_bracket: return "dissipation_bracket";
    case LemmaId::grad_l6: return "grad_l6";
    case LemmaId::power_mean_fact: return "power_mean_fact";
    }
    return "unknown";
}

nlohmann::json to_json(const InequalityReport& rep) {
    nlohmann::json j;
    j["lemma_id"] = to_string(rep.lemma_id);
    j["samples"] = rep.samples;
    j["worst_ratio"] = rep.worst_ratio;
    j["certified_bound"] = rep.certified_bound ? nlohmann::json(*rep.certified_bound)
                                               : nlohmann::json(nullptr);
    j["pass"] = rep.pass;
    return j;
}

namespace {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

void require_exponent(double r, const char* what) {
    if (!(r >= 1.0)) throw std::invalid_argument(std::string(what) + ": r must be >= 1");
}

InequalityReport finish(LemmaId id, std::uint64_t samples, double worst,
                        std::optional<double> bound) {
    InequalityReport rep;
    rep.lemma_id = id;
    rep.samples = samples;
    rep.worst_ratio = worst;
    rep.certified_bound = bound;
    rep.pass = std::isfinite(worst) && (!bound || worst <= *bound);
    return rep;
}

}  // namespace

double monotonicity_constant(double r) {
    require_exponent(r, "monotonicity_constant");
    return std::min(1.0 / r, 0.25 * std::pow(12.0, -0.5 * (r + 1.0)));
}

double monotonicity_case_bound(const Vec3& u, const Vec3& v, double r) {
    require_exponent(r, "monotonicity_case_bound");
    const Vec3 w = sub(u, v);
    const double c = norm(u) >= norm(w) ? 1.0 / r : 0.25 * std::pow(12.0, -0.5 * (r + 1.0));
    return c * std::pow(norm(w), r + 1.0);
}

GapResult monotonicity_gap(const Vec3& u, const Vec3& v, double r) {
    require_exponent(r, "monotonicity_gap");
    const Vec3 w = sub(u, v);
    const Vec3 d = sub(absorption_pointwise(u, r), absorption_pointwise(v, r));
    return {dot(d, w), monotonicity_constant(r) * std::pow(norm(w), r + 1.0)};
}

BoundResult difference_bound_check(const Vec3& u, const Vec3& v, double r) {
    require_exponent(r, "difference_bound_check");
    const Vec3 w = sub(u, v);
    const double nw = norm(w);
    const double lhs = norm(sub(absorption_pointwise(u, r), absorption_pointwise(v, r)));
    const double rhs =
        std::pow(2.0, r - 2.0) * r * (std::pow(norm(u), r - 1.0) * nw + std::pow(nw, r));
    return {lhs, rhs};
}

BoundResult power_mean_fact(double x, double s) {
    if (x < 0.0 || s < 0.0) throw std::invalid_argument("power_mean_fact: x and s must be >= 0");
    return {std::pow(1.0 + x, s) / (1.0 + std::pow(x, s)), std::pow(2.0, s - 1.0)};
}

BracketResult dissipation_bracket(const SpectralField& u, double r) {
    require_exponent(r, "dissipation_bracket");
    const Grid fine(2 * u.grid().n());
    const PhysicalField up = to_physical_padded(u, fine);
    const PhysicalField aup = to_physical_padded(stokes(u), fine);
    const SpectralTensor du = gradient(u);
    std::array<PhysicalField, 3> dup{to_physical_padded(du[0], fine), to_physical_padded(du[1], fine),
                                     to_physical_padded(du[2], fine)};
    const std::size_t np = fine.points();
    double pairing = 0.0, lower = 0.0;
    for (std::size_t p = 0; p < np; ++p) {
        const double m = up.magnitude(p);
        const double weight = absorption_weight(m * m, r);
        double au_dot_u = 0.0;
        for (int c = 0; c < 3; ++c) au_dot_u += aup.component(c)[p] * up.component(c)[p];
        double grad_sq = 0.0;
        for (int mm = 0; mm < 3; ++mm)
            for (int c = 0; c < 3; ++c) {
                const double g = dup[mm].component(c)[p];
                grad_sq += g * g;
            }
        pairing += weight * au_dot_u;
        lower += weight * grad_sq;
    }
    const double cell = std::pow(fine.spacing(), 3);
    BracketResult res;
    res.pairing = cell * pairing;
    res.lower = cell * lower;
    res.upper = r * res.lower;
    return res;
}

double grad_l6_ratio(const SpectralField& u) {
    const double au = norm_stokes(u);
    if (!(au > 0.0)) throw std::invalid_argument("grad_l6_ratio: field has Au = 0");
    const Grid fine(2 * u.grid().n());
    const SpectralTensor du = gradient(u);
    std::array<PhysicalField, 3> dup{to_physical_padded(du[0], fine), to_physical_padded(du[1], fine),
                                     to_physical_padded(du[2], fine)};
    const std::size_t np = fine.points();
    double acc = 0.0;
    for (std::size_t p = 0; p < np; ++p) {
        double sq = 0.0;
        for (int m = 0; m < 3; ++m)
            for (int c = 0; c < 3; ++c) {
                const double g = dup[m].component(c)[p];
                sq += g * g;
            }
        acc += sq * sq * sq;
    }
    const double l6 = std::pow(std::pow(fine.spacing(), 3) * acc, 1.0 / 6.0);
    return l6 / au;
}

// ---------------------------------------------------------------------------

std::pair<Vec3, Vec3> random_vector_pair(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> decade(-2.0, 2.0);
    const double su = std::pow(10.0, decade(rng));
    const double sv = std::pow(10.0, decade(rng));
    Vec3 u{}, v{};
    for (double& x : u) x = su * normal(rng);
    for (double& x : v) x = sv * normal(rng);
    return {u, v};
}

InequalityReport sweep_monotonicity(const PointwiseSweepOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    double worst = 0.0;
    std::uint64_t count = 0;
    for (double r : opt.exponents) {
        for (std::uint64_t i = 0; i < opt.samples_per_exponent; ++i) {
            const auto [u, v] = random_vector_pair(rng);
            const GapResult g = monotonicity_gap(u, v, r);
            ++count;
            if (g.certified == 0.0) continue;
            const double ratio = g.lhs > 0.0 ? g.certified / g.lhs
                                             : std::numeric_limits<double>::infinity();
            worst = std::max(worst, ratio);
        }
    }
    return finish(LemmaId::monotonicity, count, worst, 1.0);
}

InequalityReport sweep_difference_bound(const PointwiseSweepOptions& opt) {
    std::mt19937_64 rng(opt.seed + 1);
    double worst = 0.0;
    std::uint64_t count = 0;
    for (double r : opt.exponents) {
        for (std::uint64_t i = 0; i < opt.samples_per_exponent; ++i) {
            const auto [u, v] = random_vector_pair(rng);
            const BoundResult b = difference_bound_check(u, v, r);
            ++count;
            if (b.rhs == 0.0) continue;
            worst = std::max(worst, b.lhs / b.rhs);
        }
    }
    return finish(LemmaId::difference_bound, count, worst, 1.0);
}

InequalityReport sweep_power_mean(const PointwiseSweepOptions& opt) {
    std::mt19937_64 rng(opt.seed + 2);
    std::uniform_real_distribution<double> decade(-3.0, 3.0);
    double worst = 0.0;
    std::uint64_t count = 0;
    for (double r : opt.exponents) {
        const double s = r - 1.0;
        for (std::uint64_t i = 0; i < opt.samples_per_exponent; ++i) {
            double x;
            if (i == 0) x = 0.0;
            else if (i == 1) x = 1.0;
            else x = std::pow(10.0, decade(rng));
            const BoundResult b = power_mean_fact(x, s);
            ++count;
            worst = std::max(worst, b.lhs / b.rhs);
        }
    }
    return finish(LemmaId::power_mean_fact, count, worst, 1.0);
}

InequalityReport sweep_dissipation_bracket(const FieldSweepOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    const Grid grid(opt.n);
    double worst = -std::numeric_limits<double>::infinity();
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < opt.fields; ++i) {
        const SpectralField u =
            random_divfree_field(grid, rng, grid.dealias_cutoff(), 2.0, /*with_mean=*/true);
        for (double r : opt.exponents) {
            const BracketResult b = dissipation_bracket(u, r);
            ++count;
            if (b.lower == 0.0) continue;
            // Violation measured relative to the lower integral; 0 when both sides hold.
            const double below = (b.lower - b.pairing) / b.lower;
            const double above = (b.pairing - b.upper) / b.lower;
            worst = std::max({worst, below, above});
        }
    }
    return finish(LemmaId::dissipation_bracket, count, worst, opt.relative_tolerance);
}

InequalityReport sweep_grad_l6(const FieldSweepOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    const Grid grid(opt.n);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < opt.fields; ++i) {
        const SpectralField u =
            random_divfree_field(grid, rng, grid.dealias_cutoff(), 2.0, /*with_mean=*/true);
        worst = std::max(worst, grad_l6_ratio(u));
    }
    return finish(LemmaId::grad_l6, opt.fields, worst, std::nullopt);
}

}  // namespace cbf
