#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace landau {

struct Vec3 {
    double x = 0, y = 0, z = 0;

    double norm2() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double c, Vec3 a) { return {c * a.x, c * a.y, c * a.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

/// ⟨v⟩ = (1+|v|²)^{1/2}
inline double bracket(Vec3 v) { return std::sqrt(1.0 + v.norm2()); }

/// Truncated uniform cell-centered velocity grid on [-L, L)³.
/// Nodes are v_i = -L + (i+1/2)Δv, so the origin is never a node.
struct VelocityGrid {
    double extent = 8.0;  // L
    int n = 32;           // points per axis, even

    double dv() const { return 2.0 * extent / n; }
    double cell_volume() const { return dv() * dv() * dv(); }
    double node(int i) const { return -extent + (i + 0.5) * dv(); }
    Vec3 node3(int ix, int iy, int iz) const { return {node(ix), node(iy), node(iz)}; }
    std::size_t size() const { return std::size_t(n) * n * n; }
    std::size_t index(int ix, int iy, int iz) const {
        return std::size_t(ix) + std::size_t(n) * (std::size_t(iy) + std::size_t(n) * iz);
    }
    bool operator==(const VelocityGrid& o) const { return extent == o.extent && n == o.n; }
    bool operator!=(const VelocityGrid& o) const { return !(*this == o); }
};

/// Validates L > 0, N even, N >= 8. Throws std::invalid_argument otherwise.
VelocityGrid build_grid(double extent, int n);

/// Scalar distribution sampled at the grid nodes, x-fastest storage.
struct Field {
    VelocityGrid grid;
    std::vector<double> values;
    bool nonnegative = false;

    Field() = default;
    explicit Field(const VelocityGrid& g, double fill = 0.0)
        : grid(g), values(g.size(), fill) {}

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    double& at(int ix, int iy, int iz) { return values[grid.index(ix, iy, iz)]; }
    double at(int ix, int iy, int iz) const { return values[grid.index(ix, iy, iz)]; }
    std::size_t size() const { return values.size(); }
};

/// Throws std::invalid_argument when the grids of a and b differ.
void require_same_grid(const Field& a, const Field& b, const char* what);

struct FluidMoments {
    double rho = 0;
    Vec3 u;
    double temperature = 0;
    bool temperature_defined = false;
};

/// Neumaier-compensated accumulator; fixed summation order keeps reductions
/// bit-reproducible.
struct CompensatedSum {
    double s = 0, c = 0;
    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

/// μ_{ρ,u,T}(v) = ρ (2πT)^{-3/2} exp(-|v-u|²/(2T))
double maxwellian_value(Vec3 v, double rho, Vec3 u, double temperature);

/// Samples μ_{ρ,u,T} on the grid. Throws std::domain_error for T <= 0 or rho < 0.
Field sample_maxwellian(const VelocityGrid& grid, double rho, Vec3 u, double temperature);

/// Standard normalized Maxwellian μ = μ_{1,0,1}.
Field sample_mu(const VelocityGrid& grid);

struct MaxwellianComponent {
    double weight = 1.0;
    Vec3 u;
    double temperature = 1.0;
};

/// Weighted sum of Maxwellians.
Field sample_maxwellian_mixture(const VelocityGrid& grid,
                                const std::vector<MaxwellianComponent>& parts);

/// Symmetric two-bump datum ½(μ_{1,+u₀,T₀} + μ_{1,-u₀,T₀}) with T₀ chosen so
/// the moments are exactly (1, 0, 1); separation is |u₀|, direction x.
Field sample_bimodal(const VelocityGrid& grid, double separation,
                     double weight_first = 0.5);

/// Midpoint-rule mass, mean velocity and temperature. When rho <= 0 the
/// temperature is reported undefined.
FluidMoments moments(const Field& f);

/// ∫ f(v) ⟨v⟩^l dv by the midpoint rule.
double weighted_integral(const Field& f, double l);

/// ∫ f(v) g(v) w(v) dv with w = ⟨v⟩^l.
double weighted_inner(const Field& f, const Field& g, double l = 0.0);

/// 4th-order finite-difference gradient; one-sided stencils within two cells
/// of the boundary.
std::array<Field, 3> gradient(const Field& f);

/// Single directional derivative along axis ∈ {0,1,2}.
Field derivative(const Field& f, int axis);

/// Second derivatives. Component order: xx, xy, xz, yy, yz, zz; the mixed
/// entries are computed once and shared, so ∂_ij == ∂_ji exactly.
std::array<Field, 6> hessian(const Field& f);

/// Index into the hessian() array for (i,j), i,j ∈ {0,1,2}.
int hessian_index(int i, int j);

// small linear-algebra helpers on fields
Field axpy(double alpha, const Field& x, const Field& y);   // alpha*x + y
Field scaled(double alpha, const Field& x);
Field subtract(const Field& a, const Field& b);             // a - b
double max_abs(const Field& f);
double min_value(const Field& f);
bool all_finite(const Field& f);

}  // namespace landau
