#include "landau/collision.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace landau {

void KernelSpec::validate() const {
    if (epsilon < 0.0)
        throw std::invalid_argument("kernel epsilon must be nonnegative");
    if (!(gamma > -3.0 - 1e-15 && gamma <= 0.0) || gamma < -3.0)
        throw std::invalid_argument("kernel gamma must lie in (-3, 0] or equal -3");
    if (epsilon > 0.0 && gamma != -3.0)
        throw std::invalid_argument("regularized kernel is defined for gamma = -3 only");
}

namespace {

double radial_factor(double r2, const KernelSpec& spec) {
    if (spec.epsilon > 0.0) return 1.0 / std::sqrt(r2 + spec.epsilon * spec.epsilon);
    return std::pow(r2, 0.5 * (spec.gamma + 2.0));
}

}  // namespace

Mat3 kernel_a(Vec3 z, const KernelSpec& spec) {
    const double r2 = z.norm2();
    if (r2 == 0.0) {
        if (spec.epsilon == 0.0)
            throw std::domain_error("kernel a(z) is singular at z = 0");
        const double v = 2.0 / (3.0 * spec.epsilon);
        return {v, 0, 0, v, 0, v};
    }
    const double phi = radial_factor(r2, spec);
    Mat3 m;
    m.xx = phi * (1.0 - z.x * z.x / r2);
    m.yy = phi * (1.0 - z.y * z.y / r2);
    m.zz = phi * (1.0 - z.z * z.z / r2);
    m.xy = -phi * z.x * z.y / r2;
    m.xz = -phi * z.x * z.z / r2;
    m.yz = -phi * z.y * z.z / r2;
    return m;
}

Vec3 kernel_b(Vec3 z, const KernelSpec& spec) {
    const double r2 = z.norm2();
    if (r2 == 0.0) return {0, 0, 0};
    double s;
    if (spec.epsilon > 0.0)
        s = -2.0 / (r2 * std::sqrt(r2 + spec.epsilon * spec.epsilon));
    else
        s = -2.0 * std::pow(r2, 0.5 * spec.gamma);
    return {s * z.x, s * z.y, s * z.z};
}

double kernel_c(Vec3 z, const KernelSpec& spec) {
    const double r2 = z.norm2();
    if (spec.epsilon > 0.0) {
        if (r2 == 0.0)
            throw std::domain_error("kernel c(z) is singular at z = 0");
        const double e2 = spec.epsilon * spec.epsilon;
        return 2.0 * e2 / (r2 * std::pow(r2 + e2, 1.5));
    }
    if (spec.gamma == -3.0)
        throw std::domain_error("c = 8π δ₀ for the bare Coulomb kernel; no pointwise value");
    if (r2 == 0.0)
        throw std::domain_error("kernel c(z) is singular at z = 0");
    return 2.0 * (3.0 + spec.gamma) * std::pow(r2, 0.5 * spec.gamma);
}

namespace {

constexpr int kSubsample = 16;  // even: the origin is never a subsample node

Mat3 operator+(Mat3 a, Mat3 b) {
    return {a.xx + b.xx, a.xy + b.xy, a.xz + b.xz, a.yy + b.yy, a.yz + b.yz, a.zz + b.zz};
}
Mat3 operator*(double c, Mat3 a) {
    return {c * a.xx, c * a.xy, c * a.xz, c * a.yy, c * a.yz, c * a.zz};
}

}  // namespace

// The kernels fall off steeply near z = 0 (up to |z|^{-5} for c with ε ~ Δv),
// so point samples there carry O(Δv) quadrature error. Samples within a few
// cells of the origin are cell averages instead, with the subsample count
// decaying with radius; midpoint subsampling on an even subgrid never
// evaluates the origin itself. a keeps point samples away from z = 0 modulo
// a projection correction (below), so a(z)·z = 0 stays exact.
int subsample_count(Vec3 z, double dv) {
    const double r = z.norm() / dv;
    if (r < 3.0001) return kSubsample;
    if (r < 8.0001) return 6;
    return 0;  // pointwise
}

bool needs_cell_average(Vec3 z, double dv) { return subsample_count(z, dv) > 0; }

template <class F>
auto averaged(Vec3 z, double dv, F&& eval) {
    const int m = z.norm2() == 0.0 ? kSubsample : subsample_count(z, dv);
    const double h = dv / m;
    decltype(eval(z)) acc{};
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const Vec3 p{z.x - 0.5 * dv + (i + 0.5) * h, z.y - 0.5 * dv + (j + 0.5) * h,
                             z.z - 0.5 * dv + (k + 0.5) * h};
                acc = acc + eval(p);
            }
    return (1.0 / (double(m) * m * m)) * acc;
}

Mat3 kernel_a_cell_sample(Vec3 z, const KernelSpec& spec, double dv) {
    if (!needs_cell_average(z, dv)) return kernel_a(z, spec);
    const Mat3 avg = averaged(z, dv, [&](Vec3 p) { return kernel_a(p, spec); });
    if (z.norm2() == 0.0) return avg;
    // restore the exact annihilation a(z)·z = 0 of the point samples by
    // projecting the averaged matrix onto the complement of ẑ on both sides
    const double r = z.norm();
    const Vec3 n{z.x / r, z.y / r, z.z / r};
    const double p[3][3] = {{1 - n.x * n.x, -n.x * n.y, -n.x * n.z},
                            {-n.x * n.y, 1 - n.y * n.y, -n.y * n.z},
                            {-n.x * n.z, -n.y * n.z, 1 - n.z * n.z}};
    const double m[3][3] = {{avg.xx, avg.xy, avg.xz},
                            {avg.xy, avg.yy, avg.yz},
                            {avg.xz, avg.yz, avg.zz}};
    double pm[3][3] = {};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) pm[i][j] += p[i][k] * m[k][j];
    double pmp[3][3] = {};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) pmp[i][j] += pm[i][k] * p[k][j];
    return {pmp[0][0], pmp[0][1], pmp[0][2], pmp[1][1], pmp[1][2], pmp[2][2]};
}

Vec3 kernel_b_cell_sample(Vec3 z, const KernelSpec& spec, double dv) {
    if (!needs_cell_average(z, dv)) return kernel_b(z, spec);
    return averaged(z, dv, [&](Vec3 p) { return kernel_b(p, spec); });
}

double kernel_c_cell_sample(Vec3 z, const KernelSpec& spec, double dv) {
    if (!needs_cell_average(z, dv)) return kernel_c(z, spec);
    return averaged(z, dv, [&](Vec3 p) { return kernel_c(p, spec); });
}

// ---------------------------------------------------------------------------
// internal 6th-order first derivative for the operator fluxes (the public
// 4th-order gradient() keeps its own contract; the equilibrium annihilation
// of the flux is limited by this stencil's truncation error)

namespace {

constexpr double kD6Center[7] = {-1, 9, -45, 0, 45, -9, 1};
constexpr double kD6Edge0[7] = {-147, 360, -450, 400, -225, 72, -10};
constexpr double kD6Edge1[7] = {-10, -77, 150, -100, 50, -15, 2};
constexpr double kD6Edge2[7] = {2, -24, -35, 80, -30, 8, -1};

void line_derivative6(const double* in, double* out, int n, std::ptrdiff_t stride,
                      double scale) {
    auto v = [&](int i) { return in[std::ptrdiff_t(i) * stride]; };
    auto apply = [&](const double* c, int base, int dir) {
        double s = 0;
        for (int k = 0; k < 7; ++k) s += c[k] * v(base + dir * k);
        return s;
    };
    out[0] = scale * apply(kD6Edge0, 0, 1);
    out[stride] = scale * apply(kD6Edge1, 0, 1);
    out[2 * stride] = scale * apply(kD6Edge2, 0, 1);
    for (int i = 3; i < n - 3; ++i)
        out[std::ptrdiff_t(i) * stride] = scale * apply(kD6Center, i - 3, 1);
    out[std::ptrdiff_t(n - 3) * stride] = -scale * apply(kD6Edge2, n - 1, -1);
    out[std::ptrdiff_t(n - 2) * stride] = -scale * apply(kD6Edge1, n - 1, -1);
    out[std::ptrdiff_t(n - 1) * stride] = -scale * apply(kD6Edge0, n - 1, -1);
}

Field derivative6(const Field& f, int axis) {
    const int n = f.grid.n;
    Field out(f.grid);
    const std::ptrdiff_t strides[3] = {1, n, std::ptrdiff_t(n) * n};
    const double scale = 1.0 / (60.0 * f.grid.dv());
    const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const std::ptrdiff_t base = strides[a1] * j + strides[a2] * k;
            line_derivative6(f.values.data() + base, out.values.data() + base, n,
                             strides[axis], scale);
        }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// convolution plan

ConvolutionPlan::ConvolutionPlan(const VelocityGrid& grid, const KernelSpec& spec)
    : grid_(grid), spec_(spec), pad_(2 * grid.n), fft_(2 * grid.n) {
    spec_.validate();
    std::string cache_path;
    if (const char* dir = std::getenv("LANDAU_CACHE_DIR")) {
        std::ostringstream name;
        name << dir << "/kernel_N" << grid_.n << "_L" << grid_.extent << "_eps" << spec_.epsilon
             << "_gamma" << spec_.gamma << "_v1.bin";
        cache_path = name.str();
        if (load_cache(cache_path)) return;
    }
    build_kernels();
    if (!cache_path.empty()) save_cache(cache_path);
}

// The a-components are sampled from the closed form; the lattice b- and
// c-components are the 4th-order lattice divergences of the a-samples. That
// keeps the discrete differential identities between the operator forms
// aligned with the sampled kernels (the pointwise kernel_b / kernel_c remain
// the closed forms).
void ConvolutionPlan::build_kernels() {
    const int n = grid_.n, pad = pad_;
    const double dv = grid_.dv();
    const bool need_c = spec_.epsilon > 0.0;
    const int ext = 2 * n - 1;  // natural displacement range [-(n-1), n-1]
    const std::size_t ext3 = std::size_t(ext) * ext * ext;
    auto nat_index = [&](int dx, int dy, int dz) {
        return std::size_t(dx + n - 1) +
               std::size_t(ext) * (std::size_t(dy + n - 1) + std::size_t(ext) * (dz + n - 1));
    };

    std::array<std::vector<double>, 6> a_nat;
    for (auto& v : a_nat) v.assign(ext3, 0.0);
    for (int dz = -(n - 1); dz <= n - 1; ++dz)
        for (int dy = -(n - 1); dy <= n - 1; ++dy)
            for (int dx = -(n - 1); dx <= n - 1; ++dx) {
                const Vec3 z{dx * dv, dy * dv, dz * dv};
                const Mat3 a = kernel_a_cell_sample(z, spec_, dv);
                const std::size_t i = nat_index(dx, dy, dz);
                a_nat[0][i] = a.xx;
                a_nat[1][i] = a.xy;
                a_nat[2][i] = a.xz;
                a_nat[3][i] = a.yy;
                a_nat[4][i] = a.yz;
                a_nat[5][i] = a.zz;
            }

    // 4th-order first derivative along `axis` of a natural-order lattice field
    auto lattice_derivative = [&](const std::vector<double>& in, int axis) {
        std::vector<double> out(ext3, 0.0);
        const std::ptrdiff_t strides[3] = {1, ext, std::ptrdiff_t(ext) * ext};
        const std::ptrdiff_t stride = strides[axis];
        const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
        const double scale = 1.0 / (12.0 * dv);
        auto deriv_line = [&](const double* src, double* dst) {
            auto v = [&](int i) { return src[std::ptrdiff_t(i) * stride]; };
            dst[0] = scale * (-25 * v(0) + 48 * v(1) - 36 * v(2) + 16 * v(3) - 3 * v(4));
            dst[stride] = scale * (-3 * v(0) - 10 * v(1) + 18 * v(2) - 6 * v(3) + v(4));
            for (int i = 2; i < ext - 2; ++i)
                dst[std::ptrdiff_t(i) * stride] =
                    scale * (v(i - 2) - 8 * v(i - 1) + 8 * v(i + 1) - v(i + 2));
            dst[std::ptrdiff_t(ext - 2) * stride] =
                -scale * (-3 * v(ext - 1) - 10 * v(ext - 2) + 18 * v(ext - 3) -
                          6 * v(ext - 4) + v(ext - 5));
            dst[std::ptrdiff_t(ext - 1) * stride] =
                -scale * (-25 * v(ext - 1) + 48 * v(ext - 2) - 36 * v(ext - 3) +
                          16 * v(ext - 4) - 3 * v(ext - 5));
        };
        for (int j = 0; j < ext; ++j)
            for (int k = 0; k < ext; ++k) {
                const std::ptrdiff_t base = strides[a1] * j + strides[a2] * k;
                deriv_line(in.data() + base, out.data() + base);
            }
        return out;
    };

    std::array<std::vector<double>, 3> b_nat;
    for (int i = 0; i < 3; ++i) {
        b_nat[i].assign(ext3, 0.0);
        for (int j = 0; j < 3; ++j) {
            const auto d = lattice_derivative(a_nat[hessian_index(i, j)], j);
            for (std::size_t k = 0; k < ext3; ++k) b_nat[i][k] += d[k];
        }
    }
    std::vector<double> c_nat;
    if (need_c) {
        c_nat.assign(ext3, 0.0);
        for (int i = 0; i < 3; ++i) {
            const auto d = lattice_derivative(b_nat[i], i);
            for (std::size_t k = 0; k < ext3; ++k) c_nat[k] -= d[k];
        }
    }

    // wrap natural order into the padded FFT layout (slot d = n stays zero)
    std::vector<double> sample(fft_.real_size());
    auto transform = [&](const std::vector<double>& nat, int comp) {
        std::fill(sample.begin(), sample.end(), 0.0);
        for (int dz = -(n - 1); dz <= n - 1; ++dz)
            for (int dy = -(n - 1); dy <= n - 1; ++dy)
                for (int dx = -(n - 1); dx <= n - 1; ++dx) {
                    const int tx = (dx + pad) % pad, ty = (dy + pad) % pad,
                              tz = (dz + pad) % pad;
                    sample[std::size_t(tx) +
                           std::size_t(pad) * (std::size_t(ty) + std::size_t(pad) * tz)] =
                        nat[nat_index(dx, dy, dz)];
                }
        kernel_[comp].resize(fft_.complex_size());
        fft_.forward(sample.data(), kernel_[comp].data());
    };
    for (int i = 0; i < 6; ++i) transform(a_nat[i], A00 + i);
    for (int i = 0; i < 3; ++i) transform(b_nat[i], B0 + i);
    if (need_c) transform(c_nat, C);
}

namespace {
struct CacheHeader {
    std::uint32_t version = 1;
    std::uint32_t n = 0;
    double extent = 0, epsilon = 0, gamma = 0;
};
}  // namespace

bool ConvolutionPlan::load_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    CacheHeader h;
    in.read(reinterpret_cast<char*>(&h), sizeof(h));
    if (!in || h.version != 1 || int(h.n) != grid_.n || h.extent != grid_.extent ||
        h.epsilon != spec_.epsilon || h.gamma != spec_.gamma)
        return false;
    for (int comp = 0; comp < kNumComponents; ++comp) {
        std::uint8_t present = 0;
        in.read(reinterpret_cast<char*>(&present), 1);
        if (!present) continue;
        kernel_[comp].resize(fft_.complex_size());
        in.read(reinterpret_cast<char*>(kernel_[comp].data()),
                std::streamsize(kernel_[comp].size() * sizeof(std::complex<double>)));
    }
    return bool(in);
}

void ConvolutionPlan::save_cache(const std::string& path) const {
    std::error_code ec;
    std::filesystem::create_directories(std::filesystem::path(path).parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) return;  // cache is best-effort
    CacheHeader h{1, std::uint32_t(grid_.n), grid_.extent, spec_.epsilon, spec_.gamma};
    out.write(reinterpret_cast<const char*>(&h), sizeof(h));
    for (int comp = 0; comp < kNumComponents; ++comp) {
        const std::uint8_t present = kernel_[comp].empty() ? 0 : 1;
        out.write(reinterpret_cast<const char*>(&present), 1);
        if (present)
            out.write(reinterpret_cast<const char*>(kernel_[comp].data()),
                      std::streamsize(kernel_[comp].size() * sizeof(std::complex<double>)));
    }
}

ConvolutionPlan::Spectrum ConvolutionPlan::forward(const Field& f) const {
    if (f.grid != grid_)
        throw std::invalid_argument("convolve: field grid does not match plan");
    const int n = grid_.n, pad = pad_;
    double* in = fft_.real_buffer();
    std::fill(in, in + fft_.real_size(), 0.0);
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            std::memcpy(in + (std::size_t(iz) * pad + iy) * pad,
                        f.values.data() + f.grid.index(0, iy, iz), std::size_t(n) * sizeof(double));
    Spectrum s;
    s.data.resize(fft_.complex_size());
    fft_.run_forward();
    std::memcpy(s.data.data(), fft_.complex_buffer(),
                s.data.size() * sizeof(std::complex<double>));
    return s;
}

Field ConvolutionPlan::convolve(const Spectrum& s, Component c) const {
    if (kernel_[c].empty())
        throw std::invalid_argument("convolve: kernel component not available for this spec");
    const int n = grid_.n, pad = pad_;
    std::complex<double>* buf = fft_.complex_buffer();
    const auto& ker = kernel_[c];
    for (std::size_t i = 0; i < ker.size(); ++i) buf[i] = s.data[i] * ker[i];
    const double* out = fft_.run_inverse();
    const double scale = grid_.cell_volume() / (double(pad) * pad * pad);
    Field res(grid_);
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy) {
            const double* src = out + (std::size_t(iz) * pad + iy) * pad;
            double* dst = res.values.data() + res.grid.index(0, iy, iz);
            for (int ix = 0; ix < n; ++ix) dst[ix] = src[ix] * scale;
        }
    return res;
}

Field ConvolutionPlan::convolve(const Field& f, Component c) const {
    return convolve(forward(f), c);
}

ConvolvedKernels convolve_all(const ConvolutionPlan& plan, const Field& g, bool need_c) {
    const auto spec = plan.forward(g);
    ConvolvedKernels out;
    for (int i = 0; i < 6; ++i)
        out.a[i] = plan.convolve(spec, ConvolutionPlan::Component(ConvolutionPlan::A00 + i));
    for (int i = 0; i < 3; ++i)
        out.b[i] = plan.convolve(spec, ConvolutionPlan::Component(ConvolutionPlan::B0 + i));
    if (need_c && plan.has_component(ConvolutionPlan::C))
        out.c = plan.convolve(spec, ConvolutionPlan::C);

    for (int i = 0; i < 3; ++i) out.a_grad[i] = Field(g.grid);
    for (int j = 0; j < 3; ++j) {
        const auto dj = plan.forward(derivative(g, j));
        for (int i = 0; i < 3; ++i) {
            const Field conv = plan.convolve(
                dj, ConvolutionPlan::Component(ConvolutionPlan::component_a(i, j)));
            for (std::size_t k = 0; k < conv.size(); ++k)
                out.a_grad[i].values[k] += conv.values[k];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Landau operator

namespace {

// Conservative face reconstruction: the (-1,7,7,-1)/12 face values make the
// interior face difference coincide with the 4th-order central derivative
// stencil, while the cell sum still telescopes exactly. Boundary faces carry
// zero flux; the fields of interest have decayed to roundoff there.
void line_flux_divergence(const double* flux, double* out, int n, std::ptrdiff_t stride,
                          double inv_dv, std::vector<double>& face) {
    auto v = [&](int i) { return flux[std::ptrdiff_t(i) * stride]; };
    face.assign(std::size_t(n) + 1, 0.0);
    face[1] = (3 * v(0) + 13 * v(1) - 5 * v(2) + v(3)) / 12.0;
    for (int i = 2; i <= n - 2; ++i)
        face[i] = (-v(i - 2) + 7 * v(i - 1) + 7 * v(i) - v(i + 1)) / 12.0;
    face[n - 1] = (3 * v(n - 1) + 13 * v(n - 2) - 5 * v(n - 3) + v(n - 4)) / 12.0;
    for (int i = 0; i < n; ++i)
        out[std::ptrdiff_t(i) * stride] += (face[i + 1] - face[i]) * inv_dv;
}

}  // namespace

Field flux_divergence(const std::array<Field, 3>& flux) {
    const auto& g = flux[0].grid;
    const int n = g.n;
    Field out(g);
    const std::ptrdiff_t strides[3] = {1, n, std::ptrdiff_t(n) * n};
    std::vector<double> face;
    for (int axis = 0; axis < 3; ++axis) {
        require_same_grid(flux[axis], out, "flux_divergence");
        const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const std::ptrdiff_t base = strides[a1] * j + strides[a2] * k;
                line_flux_divergence(flux[axis].values.data() + base, out.values.data() + base, n,
                                     strides[axis], 1.0 / g.dv(), face);
            }
    }
    return out;
}

Field landau_Q_from(const ConvolvedKernels& cg, const Field& g, const Field& h,
                    const ConvolutionPlan& plan, QForm form) {
    require_same_grid(g, h, "landau_Q");
    if (form == QForm::divergence) {
        const auto grad_h = gradient(h);
        std::array<Field, 3> flux;
        for (int i = 0; i < 3; ++i) {
            flux[i] = Field(g.grid);
            for (std::size_t idx = 0; idx < flux[i].size(); ++idx) {
                double s = 0;
                for (int j = 0; j < 3; ++j)
                    s += cg.a[ConvolutionPlan::component_a(i, j)].values[idx] *
                         grad_h[j].values[idx];
                s -= cg.a_grad[i].values[idx] * h.values[idx];
                flux[i].values[idx] = s;
            }
        }
        return flux_divergence(flux);
    }

    // nondivergence form
    const auto& spec = plan.spec();
    Field zero_order(g.grid);
    if (spec.epsilon > 0.0) {
        if (!cg.c)
            throw std::invalid_argument("nondivergence form needs the c-kernel convolution");
        for (std::size_t idx = 0; idx < zero_order.size(); ++idx)
            zero_order.values[idx] = cg.c->values[idx] * h.values[idx];
    } else if (spec.gamma == -3.0) {
        for (std::size_t idx = 0; idx < zero_order.size(); ++idx)
            zero_order.values[idx] = 8.0 * M_PI * g.values[idx] * h.values[idx];
    } else {
        throw std::invalid_argument(
            "nondivergence form with epsilon = 0 is supported for gamma = -3 only");
    }
    const auto hess = hessian(h);
    Field out(g.grid);
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        double s = zero_order.values[idx];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                s += cg.a[ConvolutionPlan::component_a(i, j)].values[idx] *
                     hess[hessian_index(i, j)].values[idx];
        out.values[idx] = s;
    }
    return out;
}

Field landau_Q(const Field& g, const Field& h, const ConvolutionPlan& plan, QForm form) {
    const bool need_c = form == QForm::nondivergence && plan.spec().epsilon > 0.0;
    return landau_Q_from(convolve_all(plan, g, need_c), g, h, plan, form);
}

// ---------------------------------------------------------------------------
// entropy functionals

double relative_entropy(const Field& f, const Field& mu) {
    require_same_grid(f, mu, "relative_entropy");
    CompensatedSum acc;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double fi = f.values[i], mi = mu.values[i];
        if (fi > 0.0)
            acc.add(fi * (std::log(fi) - std::log(mi)) - fi + mi);
        else
            acc.add(mi);
    }
    return acc.value() * f.grid.cell_volume();
}

namespace {

double floored_log(double v) {
    const double floor = 1e-300 * std::max(v, 1.0);
    return std::log(std::max(v, floor));
}

double dissipation_double_form(const Field& f, const KernelSpec& spec) {
    const auto& g = f.grid;
    if (g.n > 12)
        throw std::invalid_argument("double-form dissipation is limited to N <= 12");
    // score ∇f/f computed as ∇(log f): exact for Gaussians and stable in the
    // tails, where differencing f itself amplifies the decay rate
    Field logf(g);
    for (std::size_t i = 0; i < f.size(); ++i)
        logf.values[i] = floored_log(std::max(f.values[i], 0.0));
    const auto grad = gradient(logf);
    const std::size_t total = g.size();
    std::vector<Vec3> score(total);
    std::vector<Vec3> node(total);
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix, ++idx) {
                node[idx] = g.node3(ix, iy, iz);
                if (f.values[idx] > 1e-250)
                    score[idx] = {grad[0].values[idx], grad[1].values[idx],
                                  grad[2].values[idx]};
            }
    CompensatedSum acc;
    for (std::size_t p = 0; p < total; ++p) {
        const double fp = f.values[p];
        if (fp == 0.0) continue;
        for (std::size_t q = 0; q < total; ++q) {
            if (q == p) continue;  // bracket vanishes on the diagonal
            const double fq = f.values[q];
            if (fq == 0.0) continue;
            const Vec3 z = node[p] - node[q];
            const Vec3 w = score[p] - score[q];
            acc.add(kernel_a(z, spec).quad(w) * fp * fq);
        }
    }
    const double vol = g.cell_volume();
    return 0.5 * acc.value() * vol * vol;
}

}  // namespace

double entropy_dissipation(const Field& f, const ConvolutionPlan& plan, DissipationMethod method,
                           bool clamp_negative) {
    if (min_value(f) < 0.0 && !clamp_negative)
        throw std::domain_error("entropy_dissipation requires a nonnegative field");
    if (method == DissipationMethod::double_form)
        return dissipation_double_form(f, plan.spec());
    const Field q = landau_Q(f, f, plan, QForm::divergence);
    CompensatedSum acc;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double fi = std::max(f.values[i], 0.0);
        acc.add(q.values[i] * floored_log(fi));
    }
    return -acc.value() * f.grid.cell_volume();
}

// ---------------------------------------------------------------------------
// coercivity

CoercivityResult coercivity_pair(const Field& f, const Field& p, double m, int j,
                                 CoercivityRoute route, const ConvolutionPlan* plan) {
    require_same_grid(f, p, "coercivity_pair");
    const auto& g = f.grid;
    const auto grad_p = gradient(p);

    CoercivityResult res;
    CompensatedSum lhs, aj;
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix, ++idx) {
                const Vec3 v = g.node3(ix, iy, iz);
                const double w2 = 1.0 + v.norm2();
                const Vec3 gp{grad_p[0].values[idx], grad_p[1].values[idx],
                              grad_p[2].values[idx]};
                lhs.add(gp.norm2() * std::pow(w2, 0.5 * (m - 3.0)));
                const double vj = (j == 0) ? v.x : (j == 1) ? v.y : v.z;
                aj.add(f.values[idx] * vj * vj);
            }
    const double vol = g.cell_volume();
    res.lhs = lhs.value() * vol;
    res.a_j = aj.value() * vol;
    if (!(res.a_j > 0.0))
        throw std::domain_error("coercivity_pair: A_j(f) vanishes (degenerate direction)");

    const KernelSpec coulomb{0.0, -3.0};
    CompensatedSum quad;
    if (route == CoercivityRoute::direct) {
        if (g.n > 12)
            throw std::invalid_argument("direct coercivity route is limited to N <= 12");
        const std::size_t total = g.size();
        std::vector<Vec3> node(total), gp(total);
        std::vector<double> wm(total);
        idx = 0;
        for (int iz = 0; iz < g.n; ++iz)
            for (int iy = 0; iy < g.n; ++iy)
                for (int ix = 0; ix < g.n; ++ix, ++idx) {
                    node[idx] = g.node3(ix, iy, iz);
                    gp[idx] = {grad_p[0].values[idx], grad_p[1].values[idx],
                               grad_p[2].values[idx]};
                    wm[idx] = std::pow(1.0 + node[idx].norm2(), 0.5 * m);
                }
        for (std::size_t a = 0; a < total; ++a) {
            CompensatedSum inner;
            for (std::size_t b = 0; b < total; ++b) {
                const Mat3 ker = kernel_a_cell_sample(node[a] - node[b], coulomb, g.dv());
                inner.add(ker.quad(gp[a]) * f.values[b]);
            }
            quad.add(inner.value() * wm[a]);
        }
        res.rhs = 4.0 * weighted_integral(f, 5.0) / (res.a_j * res.a_j) * quad.value() * vol * vol;
        return res;
    }

    // convolution route
    std::unique_ptr<ConvolutionPlan> local;
    if (!plan || plan->spec().epsilon != 0.0 || plan->grid() != g) {
        local = std::make_unique<ConvolutionPlan>(g, coulomb);
        plan = local.get();
    }
    const auto spec = plan->forward(f);
    std::array<Field, 6> conv;
    for (int i = 0; i < 6; ++i)
        conv[i] = plan->convolve(spec, ConvolutionPlan::Component(ConvolutionPlan::A00 + i));
    idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix, ++idx) {
                const Vec3 v = g.node3(ix, iy, iz);
                const Vec3 gp{grad_p[0].values[idx], grad_p[1].values[idx],
                              grad_p[2].values[idx]};
                Mat3 af{conv[0].values[idx], conv[1].values[idx], conv[2].values[idx],
                        conv[3].values[idx], conv[4].values[idx], conv[5].values[idx]};
                quad.add(af.quad(gp) * std::pow(1.0 + v.norm2(), 0.5 * m));
            }
    res.rhs = 4.0 * weighted_integral(f, 5.0) / (res.a_j * res.a_j) * quad.value() * vol;
    return res;
}

}  // namespace landau
