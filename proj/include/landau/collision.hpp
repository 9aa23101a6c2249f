#pragma once

#include <array>
#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include "landau/fft.hpp"
#include "landau/grid.hpp"

namespace landau {

/// Collision kernel family. epsilon = 0 is the bare Coulomb kernel
/// a(z) = |z|^{γ+2}(Id - ẑ⊗ẑ); epsilon > 0 replaces the radial factor by
/// (|z|²+ε²)^{-1/2} (γ = -3 only).
struct KernelSpec {
    double epsilon = 0.0;
    double gamma = -3.0;

    void validate() const;  // throws std::invalid_argument
};

struct Mat3 {
    double xx = 0, xy = 0, xz = 0, yy = 0, yz = 0, zz = 0;

    Vec3 apply(Vec3 v) const {
        return {xx * v.x + xy * v.y + xz * v.z, xy * v.x + yy * v.y + yz * v.z,
                xz * v.x + yz * v.y + zz * v.z};
    }
    double quad(Vec3 v) const { return dot(apply(v), v); }  // v·(M v)
};

/// a(z); throws std::domain_error at z = 0 with ε = 0. For ε > 0 the value at
/// z = 0 is the direction average (2/3)ε^{-1}·Id.
Mat3 kernel_a(Vec3 z, const KernelSpec& spec);
/// b(z) = Σ_j ∂_j a_ij(z); odd, b(0) = 0.
Vec3 kernel_b(Vec3 z, const KernelSpec& spec);
/// c(z) = -Σ_i ∂_i b_i(z). For ε = 0, γ = -3 this is 8πδ₀ and has no pointwise
/// value (throws); for ε > 0 it is 2ε²|z|^{-2}(|z|²+ε²)^{-3/2} (throws at z=0).
double kernel_c(Vec3 z, const KernelSpec& spec);

/// Kernel samples used on the displacement grid: pointwise away from the
/// origin, cell averages (midpoint subsampling on an even subgrid, so the
/// origin is never evaluated) on cells within a few Δv of z = 0 where the
/// kernels are singular.
Mat3 kernel_a_cell_sample(Vec3 z, const KernelSpec& spec, double dv);
Vec3 kernel_b_cell_sample(Vec3 z, const KernelSpec& spec, double dv);
double kernel_c_cell_sample(Vec3 z, const KernelSpec& spec, double dv);

/// Zero-padded linear convolution engine. Kernel transforms for the six
/// independent a-components, three b-components and c are precomputed once
/// per (grid, spec) and reusable across fields. Set LANDAU_CACHE_DIR to cache
/// the transforms on disk.
class ConvolutionPlan {
  public:
    enum Component { A00 = 0, A01, A02, A11, A12, A22, B0, B1, B2, C, kNumComponents };

    ConvolutionPlan(const VelocityGrid& grid, const KernelSpec& spec);

    const VelocityGrid& grid() const { return grid_; }
    const KernelSpec& spec() const { return spec_; }
    bool has_component(Component c) const { return !kernel_[c].empty(); }

    struct Spectrum {
        std::vector<std::complex<double>> data;
    };

    Spectrum forward(const Field& f) const;
    Field convolve(const Spectrum& s, Component c) const;
    Field convolve(const Field& f, Component c) const;

    static int component_a(int i, int j) { return hessian_index(i, j); }

  private:
    VelocityGrid grid_;
    KernelSpec spec_;
    int pad_;
    mutable RealFft3 fft_;
    std::array<std::vector<std::complex<double>>, kNumComponents> kernel_;

    void build_kernels();
    bool load_cache(const std::string& path);
    void save_cache(const std::string& path) const;
};

/// Kernel convolutions against one field g. a_grad holds Σ_j a_ij * ∂_j g
/// (the drift [a*∇g] of the flux form, equal to b*g in the continuum but
/// discretized through the a-samples so the projection identity a(z)·z = 0
/// cancels the equilibrium flux exactly).
struct ConvolvedKernels {
    std::array<Field, 6> a;
    std::array<Field, 3> a_grad;
    std::array<Field, 3> b;
    std::optional<Field> c;
};
ConvolvedKernels convolve_all(const ConvolutionPlan& plan, const Field& g, bool need_c);

enum class QForm { divergence, nondivergence };

/// Flux-form discrete divergence with zero boundary flux; the cell sum of the
/// result telescopes to zero exactly.
Field flux_divergence(const std::array<Field, 3>& flux);

/// Landau bilinear operator Q(g,h). The divergence form conserves discrete
/// mass exactly; the nondivergence form uses (c*g)·h for ε > 0 and the local
/// 8π g h term for the bare Coulomb kernel.
Field landau_Q(const Field& g, const Field& h, const ConvolutionPlan& plan, QForm form);
Field landau_Q_from(const ConvolvedKernels& cg, const Field& g, const Field& h,
                    const ConvolutionPlan& plan, QForm form);

/// H(f|μ) = ∫ (f log(f/μ) - f + μ) dv, with the 0·log 0 = 0 convention.
double relative_entropy(const Field& f, const Field& mu);

enum class DissipationMethod { single, double_form };

/// D(f) = -∫ Q(f,f) log f dv. `single` evaluates the quadrature against the
/// divergence-form operator; `double_form` evaluates the symmetric 6-D
/// quadratic form by direct summation (N ≤ 12). Negative f values throw
/// unless clamp_negative is set.
double entropy_dissipation(const Field& f, const ConvolutionPlan& plan,
                           DissipationMethod method, bool clamp_negative = false);

enum class CoercivityRoute { direct, convolution };

struct CoercivityResult {
    double lhs = 0;  // ∫ |∇p|² ⟨v⟩^{m-3} dv
    double rhs = 0;  // 4 ‖f‖_{L¹₅} A_j^{-2} ∫∫ a(v-v*) : ∇p⊗∇p f(v*) ⟨v⟩^m
    double a_j = 0;
};

/// Coercivity pair for the bare Coulomb kernel. `direct` evaluates the 6-D
/// double sum (N ≤ 12); `convolution` uses ∫ (a*f) : ∇p⊗∇p ⟨v⟩^m dv with the
/// same kernel samples. Throws std::domain_error when A_j(f) vanishes.
CoercivityResult coercivity_pair(const Field& f, const Field& p, double m, int j,
                                 CoercivityRoute route,
                                 const ConvolutionPlan* plan = nullptr);

}  // namespace landau
