#pragma once

#include <optional>
#include <string>
#include <vector>

#include "landau/analytics.hpp"
#include "landau/collision.hpp"
#include "landau/grid.hpp"

namespace landau {

enum class Scheme { rk2, rk4 };
enum class PositivityPolicy { none, clip };

struct SolverConfig {
    Scheme scheme = Scheme::rk2;
    double dt = 0.0;  // <= 0 selects the CFL heuristic dt = cfl·Δv²/λ_max
    double cfl = 0.5;
    double t_end = 1.0;
    double sample_interval = 0.1;
    bool project_moments = true;
    PositivityPolicy positivity = PositivityPolicy::none;
    bool allow_unnormalized = false;
    bool well_balanced = false;  // subtract the discrete equilibrium residual Q(μ,μ)
    std::vector<double> weighted_balance_orders;  // extra m values recorded per sample
};

/// Grid + kernel + reference Maxwellian bundle; owns the convolution plan.
class LandauSystem {
  public:
    LandauSystem(const VelocityGrid& grid, const KernelSpec& spec);

    const VelocityGrid& grid() const { return grid_; }
    const KernelSpec& spec() const { return spec_; }
    const ConvolutionPlan& plan() const { return plan_; }
    const Field& mu() const { return mu_; }
    const Field& equilibrium_residual() const { return q_mu_mu_; }

    /// Q(f,f) in divergence form (minus the equilibrium residual when
    /// well_balanced is set on the evaluation call).
    Field rhs(const Field& f, bool well_balanced = false) const;

    /// max diagonal entry of a*f over the grid (CFL diffusivity scale)
    double max_diffusivity(const Field& f) const;

  private:
    VelocityGrid grid_;
    KernelSpec spec_;
    ConvolutionPlan plan_;
    Field mu_;
    Field q_mu_mu_;
};

double auto_dt(const Field& f, const LandauSystem& sys, double cfl);

/// Moment projection: a fitted dilation/shift α f(β(v-δ)) applied in
/// linearized form, followed by an exact multiplicative quadratic correction
/// so the discrete moments match the targets to roundoff.
Field project_moments(const Field& f, const FluidMoments& targets);

/// One explicit step (stage-composed), then optional positivity clip with
/// mass rescale, then optional moment projection. Throws std::runtime_error
/// with a diagnostic when the result is not finite.
Field step(const Field& f, double dt, const LandauSystem& sys, const SolverConfig& config,
           const std::optional<FluidMoments>& targets = std::nullopt);

/// Ḣ¹-balance terms: W_i = Σ_k ⟨Q(·,·), ⟨v⟩^m ∂_k h⟩ for the four slots of
/// the derivative equation, plus the coercive part of W₁.
struct BalanceTerms {
    double w1 = 0, w2 = 0, w3 = 0, w4 = 0;
    double coercive = 0;   // I_{1,1}: Σ_k ∫ (a*f) : ∇∂_k h ⊗ ∇∂_k h ⟨v⟩^m dv
    double remainder = 0;  // I_{1,2} = W₁ + I_{1,1}
    double sum() const { return w1 + w2 + w3 + w4; }
};

BalanceTerms balance_terms(const Field& f, const LandauSystem& sys, double m);

/// L² balance pair ⟨Q(f,h), ⟨v⟩^m h⟩, ⟨Q(h,μ), ⟨v⟩^m h⟩ and the
/// E-decomposition of the first pairing.
struct L2Balance {
    double qf_h = 0, qh_mu = 0;
    double e1 = 0, e2 = 0, e3 = 0;  // ⟨Q(f,h), wh⟩ = -e1 - e2 + e3 (integration by parts)
    double pair_sum() const { return qf_h + qh_mu; }
};

L2Balance l2_balance(const Field& f, const LandauSystem& sys, double m);

struct WeightedBalanceSample {
    double m = 0;
    double seminorm2 = 0;  // ‖∇h‖²_{L²_{m/2}}
    double l2norm2 = 0;    // ‖h‖²_{L²_{m/2}}
    BalanceTerms terms;
    L2Balance l2;
};

struct DiagnosticsRecord {
    double t = 0;
    double mass = 0, ux = 0, uy = 0, uz = 0, temperature = 0;
    double entropy = 0;      // H(f|μ)
    double dissipation = 0;  // D(f), single form
    double h1_h = 0;         // ‖∇h‖_{L²} (discrete gradient)
    double l2_h = 0;
    BalanceTerms balance;  // m = 0
    std::vector<WeightedBalanceSample> weighted;
    double monotone = 0;  // M(t)
    double env_upper = 0;
    double lorentz31_m3 = 0;
    double min_f = 0;
    double max_abs_q = 0;
};

struct Trajectory {
    std::vector<DiagnosticsRecord> samples;
    bool aborted = false;
    std::string abort_reason;
    Regime initial_regime = Regime::stable;
    double t_star = 0;
    double dt_used = 0;
};

DiagnosticsRecord diagnose(const Field& f, double t, const LandauSystem& sys,
                           const SolverConfig& config, const ConstantsRegistry& reg,
                           Regime regime, double t_star);

/// Integrates ∂_t f = Q(f,f) from f0, recording diagnostics every
/// sample_interval. An instability aborts with the partial trajectory.
Trajectory run(const Field& f0, const LandauSystem& sys, const SolverConfig& config,
               const ConstantsRegistry& reg);

/// Exact column set: t,mass,ux,uy,uz,T,H,D,h1_h,l2_h,I1,I2,I3,I4,M,env_upper,lorentz31_m3
std::string trajectory_csv(const Trajectory& traj);
/// Long-format weighted-balance table: t,m,seminorm2,l2norm2,W1,W2,W3,W4,sumW,l2_pair_sum
std::string weighted_balance_csv(const Trajectory& traj);

}  // namespace landau
