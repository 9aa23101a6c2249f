#pragma once

#include <map>
#include <optional>
#include <string>

#include "landau/collision.hpp"
#include "landau/grid.hpp"

namespace landau {

/// q_{ℓ,θ} = -(2ℓ²-25ℓ+57)/(18(ℓ-2)) · (1-θ/ℓ) + θ/ℓ.
/// Interpretation: ‖h(t)‖_{L¹_θ} decays like (1+t)^q (q < 0 for θ well below ℓ).
/// Requires ℓ > 31 and θ ∈ [0, ℓ].
double decay_exponent(double ell, double theta);

struct RateConstants {
    double k1 = 0, k2 = 0, k = 0;
    bool k2_hypothesis_ok = false;  // k2 > 7/2
};

/// Positive decay rates r(θ) = -q_{ℓ,θ} and the derived exponents
/// k2 = 2 r(99/4), k1 = (4/5) r(theta_k1), k = min((2k2-7)/5, k1).
/// theta_k1 defaults to 15/4; 14/5 is the alternative reading.
RateConstants rate_constants(double ell, double theta_k1 = 15.0 / 4.0);

enum class Provenance { formula, calibrated, user };

struct TaggedConstant {
    double value = 1.0;
    Provenance provenance = Provenance::user;
};

std::string provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& s);

/// Named constants and exponents of the decay/monotonicity estimates.
/// Constants without a closed form default to 1 and are tagged `user` until a
/// calibration run refits them; C6 and B* are derived from the others while
/// tagged `formula`.
class ConstantsRegistry {
  public:
    double ell = 55.0;
    double tau = 45.0;
    double K = 1.0;
    double theta_k1 = 15.0 / 4.0;
    double delta_rate = 0.0;  // safety margin subtracted from nominal rates

    ConstantsRegistry();

    double q(double theta) const { return decay_exponent(ell, theta); }
    double rate(double theta) const { return -q(theta) - delta_rate; }
    double r1() const { return rate(99.0 / 4.0); }
    double r2() const { return rate(tau); }
    double k1() const { return 0.8 * rate(theta_k1); }
    double k2() const { return 2.0 * r1(); }
    double k() const { return std::min((2.0 * k2() - 7.0) / 5.0, k1()); }
    double k3() const { return 0.8 * rate(15.0 / 4.0 + 7.0); }

    const TaggedConstant& constant(const std::string& name) const;
    double value(const std::string& name) const { return constant(name).value; }
    void set(const std::string& name, double v, Provenance p);
    const std::map<std::string, TaggedConstant>& constants() const { return constants_; }

    /// B* = 𝓑(1/C₃) while tagged formula, else the stored value.
    double b_star() const;
    /// C₆ = 2^{-2/5} min(C₁, c₁), c₁ = (B*)^{-2/5}(k₂-2), while tagged formula.
    double c6() const;

    std::string to_json() const;
    static ConstantsRegistry from_json(const std::string& text);
    static ConstantsRegistry load(const std::string& path);
    void save(const std::string& path) const;

  private:
    std::map<std::string, TaggedConstant> constants_;
};

/// 𝓑(x) = C₂ x^{-13} exp(7 x^{-450/14}); log variant for small x where the
/// value overflows.
double blowup_envelope(double x, const ConstantsRegistry& reg);
double log_blowup_envelope(double x, const ConstantsRegistry& reg);

/// M(t) = H - (5/2)(X² + B*(1+t)^{1-k₂})^{-2/5}
double monotone_functional(double H, double X2, double t, const ConstantsRegistry& reg);

enum class Regime { stable, above_threshold };

struct RegimeReport {
    Regime classification = Regime::stable;
    double threshold_value = 0;        // H(0)(X₀²+B*)^{2/5}
    std::optional<double> t_star;      // present iff above threshold
    double relaxed_rhs = 0;            // C₆/(k+1)((1+𝓣)^{k+1}-1)
    bool relaxed_criterion_ok = false;  // M(0) ≤ relaxed_rhs
    std::string to_json() const;
};

/// Stable iff H0·(X0²+B*)^{2/5} ≤ 5/2; otherwise reports
/// T* = ((1+k)/C₆ [H0 - (5/2)(X0²+B*)^{-2/5}] + 1)^{1/(k+1)} - 1.
RegimeReport classify_regime(double H0, double X02, const ConstantsRegistry& reg);

enum class EnvelopeVariant { stable, post_tstar };

/// Upper bound on ‖h(t)‖_{Ḣ¹}: (2/5)^{-5/4} (H(t) + C₆/(k+1)[(1+t)^{1+k}-1])^{-5/4}
/// for the stable branch; the post-T* branch replaces the bracket by
/// C₆/(k+1)[(1+t)^{1+k}-(1+T*)^{1+k}] and is +inf at t ≤ T*.
double envelope_bound(double t, double H_t, const ConstantsRegistry& reg, EnvelopeVariant variant,
                      double t_star = 0.0);

/// lhs of the entropy ceiling H(t)[X² + B*(1+t)^{1-k₂}]^{-2/5} ≤ 5/2.
double entropy_ceiling_value(double t, double H_t, double X2, const ConstantsRegistry& reg);

/// 𝓣 = (5/4)(X0² + C₇^{-1})^{-4/5}
double local_lifespan(double X02, const ConstantsRegistry& reg);

struct BlowupBounds {
    double lower = 0;       // C (H(t) - H̄)^{-5/4}; inf when H(t) ≤ H̄
    bool lower_defined = false;
    double log_upper = 0;   // log of the inf-envelope (the value itself overflows)
    double upper = 0;       // +inf when not representable
};

/// Bounds near a blowup time T̄: lower bound on X(t) from the entropy gap and
/// the upper bound (𝓑(c(T̄-t)) (2/C₁) (1+T̄)^{-(k₁+k₂)})^{5/14} on inf X over
/// [t, T̄]. Constants C (lower) and c live in the registry as C_blowup_lower
/// and c_blowup.
BlowupBounds blowup_bounds(double t, double T_bar, double H_t, double H_bar,
                           const ConstantsRegistry& reg);

/// Csiszár-Kullback-Pinsker ceiling √(2H) for ‖f-μ‖_{L¹}.
double ckp_bound(double H);

struct CkpCheck {
    double l1_distance = 0;
    double ceiling = 0;
    bool holds = false;
};
CkpCheck ckp_check(const Field& f, const Field& mu);

struct DissipationBoundSide {
    double lhs = 0, rhs = 0;
    bool holds = false;
};

struct DissipationBoundReport {
    double dissipation = 0;
    DissipationBoundSide l3_bound;     // ‖f‖_{L³_{-3}} ≤ C₀(1+D)
    DissipationBoundSide sqrt_h1;      // C_{D,1}‖√f‖²_{H¹_{-3/2}} ≤ 1+D
    DissipationBoundSide lorentz31;    // C_{D,2}‖f‖_{L^{3,1}_{-3}} ≤ 1+D
    std::string to_json() const;
};

/// Evaluates both sides of the three dissipation lower bounds with the
/// registry constants.
DissipationBoundReport dissipation_bound_check(const Field& f, const ConvolutionPlan& plan,
                                               const ConstantsRegistry& reg);

}  // namespace landau
