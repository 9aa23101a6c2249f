#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "landau/analytics.hpp"

namespace landau {

/// Scalar (t, X², H, D) history. D is the dissipation -H'.
struct ScalarTrajectory {
    std::vector<double> t, x2, H, D;

    std::size_t size() const { return t.size(); }
    void push(double time, double X2, double h, double d) {
        t.push_back(time);
        x2.push_back(X2);
        H.push_back(h);
        D.push_back(d);
    }
};

/// Nonincreasing entropy profile H(t) with derivative -D(t).
class HProfile {
  public:
    static HProfile constant(double H0);
    /// H0 (1+t)^{-beta}, beta >= 0
    static HProfile power_law(double H0, double beta);
    /// linear interpolation of (t, H) samples; H must be nonincreasing
    static HProfile from_samples(std::vector<double> t, std::vector<double> H);

    double H(double t) const;
    double D(double t) const;

  private:
    std::function<double(double)> h_, d_;
};

struct MasterEvents {
    std::optional<double> blowup_time;
    std::optional<double> threshold_crossing;  // first M(t) = 0 crossing
};

/// Integrates the saturated master inequality
///   dX²/dt = -C₁(1+t)^{k₁} X^{14/5} + D(t) X^{14/5} + B*(1+t)^{-k₂}
/// with adaptive step-doubled RK4, X² clamped at 0. Blowup (X² beyond 1e12)
/// is located by bisection to 1e-6 relative time accuracy.
ScalarTrajectory integrate_master(double X02, const HProfile& profile,
                                  const ConstantsRegistry& reg, double t_end,
                                  MasterEvents* events = nullptr, double tol = 1e-10);

struct MonotonicityViolation {
    double t1 = 0, t2 = 0, excess = 0;
};

struct MonotonicityReport {
    std::size_t intervals = 0;
    std::vector<MonotonicityViolation> violations;
    double worst_excess = 0;

    bool clean() const { return violations.empty(); }
};

/// Per-interval check of M(t₂) + C₆ ∫_{t₁}^{t₂} (1+s)^k ds ≤ M(t₁) along a
/// trajectory. Requires at least 50 samples. `slack` relaxes the comparison
/// multiplicatively on the dissipation integral (calibration headroom) and
/// `abs_tol` absorbs integration roundoff.
MonotonicityReport verify_monotonicity(const ScalarTrajectory& traj, const ConstantsRegistry& reg,
                                       double slack = 0.0, double abs_tol = 1e-9);

struct BranchEnvelopes {
    RegimeReport regime;
    std::vector<double> t;
    std::vector<double> bound;  // Ḣ¹ envelope (entropy contribution omitted)
};

BranchEnvelopes branch_predict(double X02, double H0, const ConstantsRegistry& reg, double t_end,
                               int samples = 128);

struct LifespanResult {
    double lifespan = 0;    // 𝓣 = (5/4)(X0² + 2 C₁₁^{5/9})^{-4/5}
    double asymptote = 0;   // (5/4)(X0² + C₁₁^{5/9})^{-4/5}
    double c7 = 0;          // ½ C₁₁^{-5/9}
};

/// Closed-form envelope [(X0²+C₁₁^{5/9})^{-4/5} - (4/5)t]^{-5/4} - C₁₁^{5/9};
/// +inf at and beyond the asymptote.
double lifespan_envelope(double X02, double C11, double t);

LifespanResult lifespan_ode(double X02, const ConstantsRegistry& reg);

enum class WodeClass { global_decay, blowup, marginal };

struct WodeResult {
    WodeClass classification = WodeClass::marginal;
    ScalarTrajectory trajectory;  // H, D unused (zero)
    std::optional<double> blowup_time;
    std::optional<double> fitted_exponent;  // late-time slope of log Y vs log(1+t)
    double expected_exponent = 0;           // -(5/4) k₃
};

/// Integrates the saturated small-data inequality
///   dY²/dt = -C₄(1+t)^{k₃} Y^{14/5} + C₅(Y⁴+Y²)
/// and classifies the outcome.
WodeResult wode_run(double Y02, const ConstantsRegistry& reg, double t_end,
                    std::optional<double> k3_override = std::nullopt);

struct BlowupCheckReport {
    bool applicable = false;
    double calibrated_lower_c = 0;  // min X (H-H̄)^{5/4} over the ladder
    bool lower_consistent = false;  // calibrated bound is meaningful (X diverging)
    bool upper_holds = false;       // log X ≤ log upper bound at every ladder point
    bool exp_term_dominates = false;
    std::string note;
};

/// Evaluates the two blowup estimates on a trajectory that diverges at
/// t_blowup; H̄ is taken from the final sample.
BlowupCheckReport blowup_lemma_check(const ScalarTrajectory& traj,
                                     std::optional<double> t_blowup,
                                     const ConstantsRegistry& reg);

}  // namespace landau
