/// @file inequalities.hpp
/// @brief Executable forms of the vector and field inequalities behind the
/// absorption term: monotonicity lower bound, difference bound, the power-mean
/// fact, the <Au, C_r(u)> bracket and the ||grad u||_{L^6} <= c ||Au|| ratio.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cbf/fields.hpp"

namespace cbf {

enum class LemmaId { monotonicity, difference_bound, dissipation_bracket, grad_l6, power_mean_fact };

std::string to_string(LemmaId id);

/// Outcome of a randomized sweep. worst_ratio is oriented so that the
/// inequality holds iff worst_ratio <= certified_bound; without a certified
/// bound the check only requires a finite ratio.
struct InequalityReport {
    LemmaId lemma_id = LemmaId::monotonicity;
    std::uint64_t samples = 0;
    double worst_ratio = 0.0;
    std::optional<double> certified_bound;
    bool pass = false;
};

nlohmann::json to_json(const InequalityReport& rep);

struct GapResult {
    double lhs = 0.0;
    double certified = 0.0;
};

struct BoundResult {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// min(1/r, 12^{-(r+1)/2}/4): the two cases |u| >= |u-v| and |u| < |u-v|.
double monotonicity_constant(double r);

/// Bound from whichever case applies: |u-v|^{r+1}/r when |u| >= |u-v|,
/// otherwise 12^{-(r+1)/2}/4 |u-v|^{r+1}.
double monotonicity_case_bound(const Vec3& u, const Vec3& v, double r);

/// lhs = (|u|^{r-1}u - |v|^{r-1}v).(u-v), certified = c(r)|u-v|^{r+1}.
GapResult monotonicity_gap(const Vec3& u, const Vec3& v, double r);

/// lhs = ||u|^{r-1}u - |v|^{r-1}v|, rhs = 2^{r-2} r (|u|^{r-1}|w| + |w|^r), w = u - v.
BoundResult difference_bound_check(const Vec3& u, const Vec3& v, double r);

/// value = (1+x)^s/(1+x^s), bound = 2^{s-1}.
BoundResult power_mean_fact(double x, double s);

struct BracketResult {
    double pairing = 0.0;  ///< <Au, C_r(u)>
    double lower = 0.0;    ///< int |grad u|^2 |u|^{r-1}
    double upper = 0.0;    ///< r * lower
};

/// Quadrature on the 2x oversampled grid. u must be divergence-free.
BracketResult dissipation_bracket(const SpectralField& u, double r);

/// ||grad u||_{L^6} / ||Au||. Throws for a field with Au = 0.
double grad_l6_ratio(const SpectralField& u);

// ---------------------------------------------------------------------------
// Randomized sweeps

struct PointwiseSweepOptions {
    std::uint64_t samples_per_exponent = 100000;
    std::vector<double> exponents{1.0, 1.5, 2.0, 3.0};
    std::uint64_t seed = 1;
};

InequalityReport sweep_monotonicity(const PointwiseSweepOptions& opt);
InequalityReport sweep_difference_bound(const PointwiseSweepOptions& opt);
/// The fact enters the difference bound with s = r - 1, so s runs over r - 1 for r in
/// opt.exponents; x drawn log-uniformly on [1e-3, 1e3] plus x = 0 and x = 1.
InequalityReport sweep_power_mean(const PointwiseSweepOptions& opt);

/// Random pair (u, v) with Gaussian components scaled by a log-uniform factor.
std::pair<Vec3, Vec3> random_vector_pair(std::mt19937_64& rng);

struct FieldSweepOptions {
    int n = 16;
    std::uint64_t fields = 100;
    std::vector<double> exponents{1.0, 2.0, 3.0};
    std::uint64_t seed = 1;
    double relative_tolerance = 1e-6;
};

InequalityReport sweep_dissipation_bracket(const FieldSweepOptions& opt);
/// Empirical only: reports the max ratio over random fields.
InequalityReport sweep_grad_l6(const FieldSweepOptions& opt);

}  // namespace cbf
