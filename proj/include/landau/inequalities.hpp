#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "landau/grid.hpp"

namespace landau {

struct IneqReport {
    std::string id;
    long trials = 0;
    long violations = 0;
    double worst_slack = 0;  // max lhs/rhs over the checked split (rhs includes the constant)
    std::optional<double> fitted_constant;
    long train_size = 0, test_size = 0;
    std::uint64_t seed = 0;

    std::string to_json() const;
};

std::string reports_to_json(const std::vector<IneqReport>& reports);

/// |a log a - b log b| ≤ C_p|a-b|^{1/p} + |a-b| log⁺|a-b| + 2√(a∧b)√|a-b|,
/// C_p = p/(e(p-1)). Convention 0·log 0 = 0; roundoff slack 1e-12.
bool log_inequality_holds(double a, double b, double p, double* slack_out = nullptr);

/// Random sweep over a, b ∈ [0, 10⁶], p ∈ (1, 5].
IneqReport check_log_inequality(long trials, std::uint64_t seed);

/// Deterministic test corpus: Maxwellians across temperatures, normalized
/// symmetric mixtures, band-limited noise and a dilation family, split
/// train/test by alternating index.
struct FieldCorpus {
    std::vector<Field> train, test;
    std::uint64_t seed = 0;
};

FieldCorpus build_inequality_corpus(const VelocityGrid& grid, std::uint64_t seed,
                                    int per_class = 6);
/// Nonnegative normalized mixtures only (for bounds that need f ≥ 0,
/// moments (1,0,1)).
FieldCorpus build_mixture_corpus(const VelocityGrid& grid, std::uint64_t seed, int count = 16);

/// One mixture datum with moments (1,0,1) up to quadrature error.
Field random_normalized_mixture(const VelocityGrid& grid, std::uint64_t seed);

/// Sharp-constant-free convolution bound ‖f*g‖_∞ ≤ ‖f‖_{L^{p,q₁}}‖g‖_{L^{p',q₂}}
/// plus the two fitted Sobolev/product bounds.
std::vector<IneqReport> check_oneil(const FieldCorpus& corpus);

/// Fitted-constant interpolation inequalities (Lorentz against weighted L¹/H¹
/// and the two H¹_m bounds), m ∈ {0, 2, 6}.
std::vector<IneqReport> check_interpolations(const FieldCorpus& corpus);

/// |H(f₁|μ)-H(f₂|μ)| ≤ C(d^{3/10} + d^{6/5} + d^{1/5}) with d = ‖f₁-f₂‖_{Ḣ¹};
/// fitted constant, train/test split over the pair list.
IneqReport check_entropy_continuity(const std::vector<std::pair<Field, Field>>& pairs,
                                    std::uint64_t seed);

/// Two-scale datum: (1-η+ηε²)^{3/2}[(1-η)μ(√s v) + ηε⁻³μ(ε⁻¹√s v)] with
/// η = ε^{11/9}; normalized to (1,0,3) by construction.
double oscillatory_datum_value(Vec3 v, double osc_scale);

/// Samples the two-scale datum. Requires osc_scale ∈ (0, 1/4] and a grid that
/// resolves the fine scale (Δv ≤ ε̃/4); throws a resolution error otherwise.
Field make_oscillatory_data(double osc_scale, const VelocityGrid& grid);

/// max of the linear convolution f*g over the padded output cube.
double convolution_max(const Field& f, const Field& g);

/// Fitted-constant helper: C = max lhs/rhs over the train pairs; violations
/// counted on the test pairs against inflation·C·rhs.
struct FitCheck {
    double fitted = 0;
    long violations = 0;
    double worst_slack = 0;
};
FitCheck fit_and_verify(const std::vector<std::pair<double, double>>& train,
                        const std::vector<std::pair<double, double>>& test,
                        double inflation = 1.1);

}  // namespace landau
