// Independent reference computations for the test suite. Everything here is
// deliberately written against the math, not against the library code paths
// it checks: direct summation instead of FFT, analytic Gaussian integrals,
// hand-expanded rational arithmetic for the named exponents.
#pragma once

#include <cmath>
#include <vector>

#include "landau/collision.hpp"
#include "landau/grid.hpp"

namespace oracle {

// --- frozen arithmetic fixtures (hand-expanded fractions) -------------------
// q_{55,99/4} = -(4732/954)(11/20) + 9/20 = -21733/9540
inline constexpr double kQ55_9904 = -21733.0 / 9540.0;       // -2.27809224...
inline constexpr double kQ55_1504 = -95575.0 / 20988.0;      // -4.55379264...
inline constexpr double kK2 = 21733.0 / 4770.0;              //  4.55618449...
inline constexpr double kK1 = 19115.0 / 5247.0;              //  3.64303411...
inline constexpr double kK = 5038.0 / 11925.0;               //  0.42247379...
inline constexpr double kK3 = 132757.0 / 43725.0;            //  3.03618067...

// closed-form scalars
inline const double kTwoFifthsPow = std::exp(-1.25 * std::log(0.4));       // (2/5)^{-5/4}
inline const double kTStarExample = std::pow(10.0, 1.0 / 1.2) - 1.0;       // 5.81292...
inline const double kExpSeven = std::exp(7.0);
inline const double kMuAtZero = std::pow(2.0 * M_PI, -1.5);
inline const double kMuH1Sq = 3.0 / (16.0 * std::pow(M_PI, 1.5));          // ‖μ‖²_{Ḣ¹}
inline const double kMuHhalf = 1.0 / (2.0 * M_PI);                         // ‖μ‖_{Ḣ^{1/2}}
inline const double kMExample = 1.0 - 2.5 * std::pow(4.0, -0.4);           // -0.435872...
inline const double kLifespanExample = 1.25 * std::pow(4.0, -0.8);         // 0.412346...

// --- brute-force linear convolution (kernel sampled like the plan) ----------
inline landau::Field convolve_direct(const landau::Field& f, const landau::KernelSpec& spec,
                                     int comp) {
    using namespace landau;
    const auto& g = f.grid;
    Field out(g);
    const double dv = g.dv(), vol = g.cell_volume();
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                double acc = 0;
                for (int jz = 0; jz < g.n; ++jz)
                    for (int jy = 0; jy < g.n; ++jy)
                        for (int jx = 0; jx < g.n; ++jx) {
                            const Vec3 z{(ix - jx) * dv, (iy - jy) * dv, (iz - jz) * dv};
                            double k = 0;
                            if (comp < 6) {
                                const Mat3 a = kernel_a_cell_sample(z, spec, dv);
                                const double comps[6] = {a.xx, a.xy, a.xz, a.yy, a.yz, a.zz};
                                k = comps[comp];
                            } else if (comp < 9) {
                                const Vec3 b = kernel_b_cell_sample(z, spec, dv);
                                const double comps[3] = {b.x, b.y, b.z};
                                k = comps[comp - 6];
                            } else {
                                k = kernel_c_cell_sample(z, spec, dv);
                            }
                            acc += k * f.at(jx, jy, jz);
                        }
                out.at(ix, iy, iz) = acc * vol;
            }
    return out;
}

// --- Richardson order estimate ----------------------------------------------
inline double order_estimate(double err_coarse, double err_fine, double refinement = 2.0) {
    return std::log(err_coarse / err_fine) / std::log(refinement);
}

// --- two-scale datum: closed-form Ḣ^{1/2} norm of h₀ = f₀ - μ ---------------
// Mixture of mass-1 Gaussians: ĥ is a sum of Gaussians in ξ, so the norm
// reduces to ∫₀^∞ r³ e^{-(σᵢ²+σⱼ²)r²/2} dr = 2/(σᵢ²+σⱼ²)².
inline double oscillatory_h_half(double eps) {
    const double eta = std::pow(eps, 11.0 / 9.0);
    const double s = 1.0 - eta + eta * eps * eps;
    const double w[3] = {1.0 - eta, eta, -1.0};
    const double s2[3] = {1.0 / s, eps * eps / s, 1.0};
    double total = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) total += w[i] * w[j] / std::pow(s2[i] + s2[j], 2.0);
    return std::sqrt(total / (M_PI * M_PI));
}

// least-squares slope of y against x
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
