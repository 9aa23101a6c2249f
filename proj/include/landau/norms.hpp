#pragma once

#include <limits>
#include <vector>

#include "landau/grid.hpp"

namespace landau {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// ‖f‖_{L^p_l} = (∫ |f|^p ⟨v⟩^{pl} dv)^{1/p}; p = inf returns max |f|⟨v⟩^l.
/// Throws std::domain_error for p < 1.
double lp_norm(const Field& f, double p, double l);

/// ∫ |f| log(1+|f|) dv
double llogl(const Field& f);

/// Decreasing rearrangement of a grid field: strictly decreasing levels with
/// the measure carried by each level (multiples of the cell volume).
/// Evaluators for the distribution function, f* and the maximal function f**
/// are derived from the steps.
struct StepProfile {
    std::vector<double> levels;    // strictly decreasing, > 0
    std::vector<double> measures;  // positive

    double total_measure() const;
    double total_integral() const;  // ∫ f*
    /// a_f(t) = |{ |f| > t }|
    double distribution(double t) const;
    double decreasing_rearrangement(double s) const;  // f*(s)
    double maximal(double t) const;                   // f**(t) = (1/t)∫₀ᵗ f*
    /// ∫ (f*)^p ds — equals the grid L^p norm of |f| to roundoff
    double lp(double p) const;
};

/// Rearrangement of |f|·⟨v⟩^l. Zero values carry no step.
StepProfile rearrange(const Field& f, double l);

enum class LorentzFlavor { starred, maximal };

/// Lorentz norm of |f|⟨v⟩^l. `maximal` integrates t^{1/p} f**(t); `starred`
/// integrates t^{1/p} f*(t). Supported: p ∈ (1,∞) with q ∈ [1,∞], and
/// p ∈ {1,∞} with q = ∞. Segment integrals are evaluated in closed form for
/// integer q (Gauss quadrature otherwise).
double lorentz_norm(const Field& f, double p, double q, double l, LorentzFlavor flavor);
double lorentz_norm(const StepProfile& profile, double p, double q, LorentzFlavor flavor);

enum class SobolevFlavor { homogeneous, weighted };

/// homogeneous: (∫ |ξ|^{2m} |f̂(ξ)|² dξ)^{1/2} with the unitary transform of
/// the zero-extended field, zero padded to 2N per axis; any real m (the ξ=0
/// mode is skipped when m < 0). weighted: (Σ_{|α|≤m} ‖∂^α(f⟨v⟩^l)‖²_{L²})^{1/2}
/// with finite-difference derivatives; integer m ∈ {0,1,2}.
double sobolev_norm(const Field& f, double m, double l, SobolevFlavor flavor);

/// Smooth radial partition of unity: psi supported in B_{4/3},
/// phi in the annulus (3/4, 8/3), psi(x) + Σ_{j≥0} phi(2^{-j}x) = 1.
/// Built from the exp(-1/x) glue.
struct DyadicPartition {
    static double glue(double u);  // smooth 1→0 transition on [0,1]
    static double chi(double r);   // 1 for r ≤ 3/4, 0 for r ≥ 4/3
    static double psi(double r) { return chi(r); }
    static double phi(double r) { return chi(r / 2.0) - chi(r); }
};

/// P_j f: multiplication by phi(2^{-j}|v|) in velocity space (j ≥ 0) or by
/// psi(|v|) for j = -1.
Field dyadic_block(const Field& f, int j);

/// Highest block index with support meeting the grid cube.
int dyadic_max_level(const VelocityGrid& grid);

/// (Σ_{k≥-1} 2^{2kl} ‖P_k f‖²_{H^s})^{1/2}, blocks until their support leaves
/// the cube |v| ≤ √3 L.
double dyadic_norm(const Field& f, int s, double l);

}  // namespace landau
