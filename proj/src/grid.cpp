#include "landau/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace landau {

VelocityGrid build_grid(double extent, int n) {
    if (!(extent > 0.0))
        throw std::invalid_argument("grid extent L must be positive");
    if (n % 2 != 0)
        throw std::invalid_argument("N must be even");
    if (n < 8)
        throw std::invalid_argument("N must be at least 8");
    return VelocityGrid{extent, n};
}

void require_same_grid(const Field& a, const Field& b, const char* what) {
    if (a.grid != b.grid)
        throw std::invalid_argument(std::string(what) + ": fields live on different grids");
}

double maxwellian_value(Vec3 v, double rho, Vec3 u, double temperature) {
    const Vec3 w = v - u;
    const double norm = rho * std::pow(2.0 * M_PI * temperature, -1.5);
    return norm * std::exp(-w.norm2() / (2.0 * temperature));
}

Field sample_maxwellian(const VelocityGrid& grid, double rho, Vec3 u, double temperature) {
    if (!(temperature > 0.0))
        throw std::domain_error("Maxwellian temperature must be positive");
    if (rho < 0.0)
        throw std::domain_error("Maxwellian density must be nonnegative");
    Field f(grid);
    const double norm = rho * std::pow(2.0 * M_PI * temperature, -1.5);
    std::size_t idx = 0;
    for (int iz = 0; iz < grid.n; ++iz)
        for (int iy = 0; iy < grid.n; ++iy) {
            const double y = grid.node(iy), z = grid.node(iz);
            const double ryz = (y - u.y) * (y - u.y) + (z - u.z) * (z - u.z);
            for (int ix = 0; ix < grid.n; ++ix, ++idx) {
                const double x = grid.node(ix) - u.x;
                f.values[idx] = norm * std::exp(-(x * x + ryz) / (2.0 * temperature));
            }
        }
    f.nonnegative = true;
    return f;
}

Field sample_mu(const VelocityGrid& grid) { return sample_maxwellian(grid, 1.0, {}, 1.0); }

Field sample_maxwellian_mixture(const VelocityGrid& grid,
                                const std::vector<MaxwellianComponent>& parts) {
    Field f(grid);
    for (const auto& p : parts) {
        const Field comp = sample_maxwellian(grid, p.weight, p.u, p.temperature);
        for (std::size_t i = 0; i < f.size(); ++i) f.values[i] += comp.values[i];
    }
    f.nonnegative = true;
    return f;
}

Field sample_bimodal(const VelocityGrid& grid, double separation, double weight_first) {
    const double w1 = weight_first, w2 = 1.0 - weight_first;
    if (!(w1 > 0.0 && w2 > 0.0))
        throw std::invalid_argument("bimodal weights must lie strictly inside (0,1)");
    // centers ±u0 shifted so the mean vanishes; temperature fixes the energy at 3
    const double shift = (w1 - w2) * separation;
    const double c1 = separation - shift, c2 = -separation - shift;
    const double u2avg = w1 * c1 * c1 + w2 * c2 * c2;
    const double T0 = 1.0 - u2avg / 3.0;
    if (!(T0 > 0.0))
        throw std::invalid_argument("bimodal separation too large for unit temperature");
    return sample_maxwellian_mixture(grid, {{w1, {c1, 0, 0}, T0}, {w2, {c2, 0, 0}, T0}});
}

FluidMoments moments(const Field& f) {
    const auto& g = f.grid;
    CompensatedSum mass, mx, my, mz, e2;
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix, ++idx) {
                const double w = f.values[idx];
                const Vec3 v = g.node3(ix, iy, iz);
                mass.add(w);
                mx.add(w * v.x);
                my.add(w * v.y);
                mz.add(w * v.z);
                e2.add(w * v.norm2());
            }
    const double vol = g.cell_volume();
    FluidMoments m;
    m.rho = mass.value() * vol;
    if (m.rho > 0.0) {
        m.u = {mx.value() / mass.value(), my.value() / mass.value(), mz.value() / mass.value()};
        // 3 rho T = ∫ |v-u|² f = ∫ |v|² f - rho |u|²
        m.temperature = (e2.value() * vol - m.rho * m.u.norm2()) / (3.0 * m.rho);
        m.temperature_defined = true;
    }
    return m;
}

double weighted_integral(const Field& f, double l) {
    const auto& g = f.grid;
    CompensatedSum acc;
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix, ++idx) {
                const double w2 = 1.0 + g.node3(ix, iy, iz).norm2();
                acc.add(f.values[idx] * std::pow(w2, 0.5 * l));
            }
    return acc.value() * g.cell_volume();
}

double weighted_inner(const Field& f, const Field& g, double l) {
    require_same_grid(f, g, "weighted_inner");
    const auto& gr = f.grid;
    CompensatedSum acc;
    std::size_t idx = 0;
    for (int iz = 0; iz < gr.n; ++iz)
        for (int iy = 0; iy < gr.n; ++iy)
            for (int ix = 0; ix < gr.n; ++ix, ++idx) {
                double w = f.values[idx] * g.values[idx];
                if (l != 0.0)
                    w *= std::pow(1.0 + gr.node3(ix, iy, iz).norm2(), 0.5 * l);
                acc.add(w);
            }
    return acc.value() * gr.cell_volume();
}

namespace {

// 4th-order first-derivative stencils (units of 1/(12 dv)).
constexpr double kD1Center[5] = {1, -8, 0, 8, -1};
constexpr double kD1Edge0[5] = {-25, 48, -36, 16, -3};
constexpr double kD1Edge1[5] = {-3, -10, 18, -6, 1};

// 4th-order second-derivative stencils (units of 1/(12 dv²)).
constexpr double kD2Center[5] = {-1, 16, -30, 16, -1};
constexpr double kD2Edge0[6] = {45, -154, 214, -156, 61, -10};
constexpr double kD2Edge1[6] = {10, -15, -4, 14, -6, 1};

template <int Order>
void line_derivative(const double* in, double* out, int n, std::ptrdiff_t stride, double scale) {
    auto v = [&](int i) { return in[std::ptrdiff_t(i) * stride]; };
    if (Order == 1) {
        out[0 * stride] = scale * (kD1Edge0[0] * v(0) + kD1Edge0[1] * v(1) + kD1Edge0[2] * v(2) +
                                   kD1Edge0[3] * v(3) + kD1Edge0[4] * v(4));
        out[1 * stride] = scale * (kD1Edge1[0] * v(0) + kD1Edge1[1] * v(1) + kD1Edge1[2] * v(2) +
                                   kD1Edge1[3] * v(3) + kD1Edge1[4] * v(4));
        for (int i = 2; i < n - 2; ++i)
            out[std::ptrdiff_t(i) * stride] =
                scale * (kD1Center[0] * v(i - 2) + kD1Center[1] * v(i - 1) +
                         kD1Center[3] * v(i + 1) + kD1Center[4] * v(i + 2));
        out[std::ptrdiff_t(n - 2) * stride] =
            -scale * (kD1Edge1[0] * v(n - 1) + kD1Edge1[1] * v(n - 2) + kD1Edge1[2] * v(n - 3) +
                      kD1Edge1[3] * v(n - 4) + kD1Edge1[4] * v(n - 5));
        out[std::ptrdiff_t(n - 1) * stride] =
            -scale * (kD1Edge0[0] * v(n - 1) + kD1Edge0[1] * v(n - 2) + kD1Edge0[2] * v(n - 3) +
                      kD1Edge0[3] * v(n - 4) + kD1Edge0[4] * v(n - 5));
    } else {
        out[0 * stride] = scale * (kD2Edge0[0] * v(0) + kD2Edge0[1] * v(1) + kD2Edge0[2] * v(2) +
                                   kD2Edge0[3] * v(3) + kD2Edge0[4] * v(4) + kD2Edge0[5] * v(5));
        out[1 * stride] = scale * (kD2Edge1[0] * v(0) + kD2Edge1[1] * v(1) + kD2Edge1[2] * v(2) +
                                   kD2Edge1[3] * v(3) + kD2Edge1[4] * v(4) + kD2Edge1[5] * v(5));
        for (int i = 2; i < n - 2; ++i)
            out[std::ptrdiff_t(i) * stride] =
                scale * (kD2Center[0] * v(i - 2) + kD2Center[1] * v(i - 1) + kD2Center[2] * v(i) +
                         kD2Center[3] * v(i + 1) + kD2Center[4] * v(i + 2));
        out[std::ptrdiff_t(n - 2) * stride] =
            scale * (kD2Edge1[0] * v(n - 1) + kD2Edge1[1] * v(n - 2) + kD2Edge1[2] * v(n - 3) +
                     kD2Edge1[3] * v(n - 4) + kD2Edge1[4] * v(n - 5) + kD2Edge1[5] * v(n - 6));
        out[std::ptrdiff_t(n - 1) * stride] =
            scale * (kD2Edge0[0] * v(n - 1) + kD2Edge0[1] * v(n - 2) + kD2Edge0[2] * v(n - 3) +
                     kD2Edge0[3] * v(n - 4) + kD2Edge0[4] * v(n - 5) + kD2Edge0[5] * v(n - 6));
    }
}

template <int Order>
Field apply_derivative(const Field& f, int axis, double scale) {
    const int n = f.grid.n;
    Field out(f.grid);
    const std::ptrdiff_t strides[3] = {1, n, std::ptrdiff_t(n) * n};
    const std::ptrdiff_t stride = strides[axis];
    // iterate over all lines along `axis`
    const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const std::ptrdiff_t base = strides[a1] * j + strides[a2] * k;
            line_derivative<Order>(f.values.data() + base, out.values.data() + base, n, stride,
                                   scale);
        }
    return out;
}

}  // namespace

Field derivative(const Field& f, int axis) {
    return apply_derivative<1>(f, axis, 1.0 / (12.0 * f.grid.dv()));
}

std::array<Field, 3> gradient(const Field& f) {
    return {derivative(f, 0), derivative(f, 1), derivative(f, 2)};
}

int hessian_index(int i, int j) {
    static constexpr int map[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return map[i][j];
}

std::array<Field, 6> hessian(const Field& f) {
    const double s2 = 1.0 / (12.0 * f.grid.dv() * f.grid.dv());
    const auto dx = derivative(f, 0);
    const auto dy = derivative(f, 1);
    return {apply_derivative<2>(f, 0, s2), derivative(dx, 1), derivative(dx, 2),
            apply_derivative<2>(f, 1, s2), derivative(dy, 2), apply_derivative<2>(f, 2, s2)};
}

Field axpy(double alpha, const Field& x, const Field& y) {
    require_same_grid(x, y, "axpy");
    Field out(x.grid);
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values[i] = alpha * x.values[i] + y.values[i];
    return out;
}

Field scaled(double alpha, const Field& x) {
    Field out(x.grid);
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = alpha * x.values[i];
    out.nonnegative = x.nonnegative && alpha >= 0;
    return out;
}

Field subtract(const Field& a, const Field& b) {
    require_same_grid(a, b, "subtract");
    Field out(a.grid);
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = a.values[i] - b.values[i];
    return out;
}

double max_abs(const Field& f) {
    double m = 0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double min_value(const Field& f) {
    double m = f.values.empty() ? 0.0 : f.values[0];
    for (double v : f.values) m = std::min(m, v);
    return m;
}

bool all_finite(const Field& f) {
    for (double v : f.values)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace landau
