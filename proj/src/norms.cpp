#include "landau/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "landau/fft.hpp"

namespace landau {

double lp_norm(const Field& f, double p, double l) {
    if (!(p >= 1.0))
        throw std::domain_error("lp_norm requires p >= 1");
    const auto& g = f.grid;
    if (p == kInf) {
        double m = 0;
        std::size_t idx = 0;
        for (int iz = 0; iz < g.n; ++iz)
            for (int iy = 0; iy < g.n; ++iy)
                for (int ix = 0; ix < g.n; ++ix, ++idx) {
                    const double w = std::pow(1.0 + g.node3(ix, iy, iz).norm2(), 0.5 * l);
                    m = std::max(m, std::abs(f.values[idx]) * w);
                }
        return m;
    }
    CompensatedSum acc;
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix, ++idx) {
                const double a = std::abs(f.values[idx]);
                if (a == 0.0) continue;
                const double w2 = 1.0 + g.node3(ix, iy, iz).norm2();
                acc.add(std::pow(a, p) * std::pow(w2, 0.5 * p * l));
            }
    return std::pow(acc.value() * g.cell_volume(), 1.0 / p);
}

double llogl(const Field& f) {
    CompensatedSum acc;
    for (double v : f.values) {
        const double a = std::abs(v);
        if (a > 0.0) acc.add(a * std::log1p(a));
    }
    return acc.value() * f.grid.cell_volume();
}

// ---------------------------------------------------------------------------
// rearrangement

double StepProfile::total_measure() const {
    return std::accumulate(measures.begin(), measures.end(), 0.0);
}

double StepProfile::total_integral() const {
    CompensatedSum s;
    for (std::size_t i = 0; i < levels.size(); ++i) s.add(levels[i] * measures[i]);
    return s.value();
}

double StepProfile::distribution(double t) const {
    double m = 0;
    for (std::size_t i = 0; i < levels.size() && levels[i] > t; ++i) m += measures[i];
    return m;
}

double StepProfile::decreasing_rearrangement(double s) const {
    double edge = 0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        edge += measures[i];
        if (s < edge) return levels[i];
    }
    return 0.0;
}

double StepProfile::maximal(double t) const {
    if (levels.empty()) return 0.0;
    if (t <= 0.0) return levels[0];
    double edge = 0, integral = 0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const double next = edge + measures[i];
        if (t <= next) return (integral + levels[i] * (t - edge)) / t;
        integral += levels[i] * measures[i];
        edge = next;
    }
    return integral / t;
}

double StepProfile::lp(double p) const {
    CompensatedSum s;
    for (std::size_t i = 0; i < levels.size(); ++i) s.add(std::pow(levels[i], p) * measures[i]);
    return s.value();
}

StepProfile rearrange(const Field& f, double l) {
    const auto& g = f.grid;
    std::vector<double> vals;
    vals.reserve(f.size());
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix, ++idx) {
                double a = std::abs(f.values[idx]);
                if (a == 0.0) continue;
                if (l != 0.0) a *= std::pow(1.0 + g.node3(ix, iy, iz).norm2(), 0.5 * l);
                vals.push_back(a);
            }
    std::stable_sort(vals.begin(), vals.end(), std::greater<double>());
    StepProfile prof;
    const double cell = g.cell_volume();
    std::size_t i = 0;
    while (i < vals.size()) {
        std::size_t j = i;
        while (j < vals.size() && vals[j] == vals[i]) ++j;
        prof.levels.push_back(vals[i]);
        prof.measures.push_back(double(j - i) * cell);
        i = j;
    }
    return prof;
}

// ---------------------------------------------------------------------------
// Lorentz norms

namespace {

bool is_integer(double q) { return q == std::floor(q) && q < 64; }

double binom(int n, int k) {
    double r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// ∫_a^b t^{e-1} dt, 0 <= a < b
double power_integral(double a, double b, double e) {
    if (e == 0.0) return std::log(b / a);
    return (std::pow(b, e) - std::pow(a, e)) / e;
}

// ∫_a^b (t^{1/p} (c + d/t))^q dt/t for one maximal-function segment
double maximal_segment(double a, double b, double c, double d, double p, double q) {
    if (is_integer(q)) {
        const int qi = int(q);
        double total = 0;
        for (int j = 0; j <= qi; ++j) {
            if (j > 0 && d == 0.0) break;
            const double coef = binom(qi, j) * std::pow(c, qi - j) * std::pow(d, j);
            if (coef == 0.0) continue;
            total += coef * power_integral(a, b, q / p - j);
        }
        return total;
    }
    // composite Gauss-Legendre on geometric subdivisions
    static const double gx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                 -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                 0.7966664774136267,  0.9602898564975363};
    static const double gw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                 0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
    double total = 0;
    const int pieces = 8;
    double lo = a;
    const double ratio = std::pow(b / std::max(a, b * 1e-12), 1.0 / pieces);
    for (int s = 0; s < pieces; ++s) {
        const double hi = (s == pieces - 1) ? b : std::max(a, b * 1e-12) * std::pow(ratio, s + 1);
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int i = 0; i < 8; ++i) {
            const double t = mid + half * gx[i];
            total += gw[i] * half * std::pow(t, q / p - 1.0) * std::pow(c + d / t, q);
        }
        lo = hi;
    }
    return total;
}

void validate_pq(double p, double q) {
    const bool ok = (p > 1.0 && p < kInf && q >= 1.0) || ((p == 1.0 || p == kInf) && q == kInf);
    if (!ok)
        throw std::domain_error("unsupported Lorentz (p,q) combination");
}

}  // namespace

double lorentz_norm(const StepProfile& prof, double p, double q, LorentzFlavor flavor) {
    validate_pq(p, q);
    if (prof.levels.empty()) return 0.0;

    if (flavor == LorentzFlavor::starred) {
        if (q == kInf) {
            if (p == kInf) return prof.levels[0];
            double sup = 0, edge = 0;
            for (std::size_t i = 0; i < prof.levels.size(); ++i) {
                edge += prof.measures[i];
                sup = std::max(sup, prof.levels[i] * std::pow(edge, 1.0 / p));
            }
            return sup;
        }
        double total = 0, edge = 0;
        for (std::size_t i = 0; i < prof.levels.size(); ++i) {
            const double next = edge + prof.measures[i];
            total += std::pow(prof.levels[i], q) * (p / q) *
                     (std::pow(next, q / p) - std::pow(edge, q / p));
            edge = next;
        }
        return std::pow(total, 1.0 / q);
    }

    // maximal flavor
    const double M = prof.total_measure();
    const double S = prof.total_integral();
    if (q == kInf) {
        if (p == kInf) return prof.levels[0];
        if (p == 1.0) return S;  // sup_t t·f**(t) = ∫ f*
        const double a = 1.0 / p;
        double sup = 0, edge = 0, integral = 0;
        auto g = [&](double t, double c, double d) {
            return c * std::pow(t, a) + d * std::pow(t, a - 1.0);
        };
        for (std::size_t i = 0; i < prof.levels.size(); ++i) {
            const double c = prof.levels[i];
            const double d = integral - c * edge;
            const double next = edge + prof.measures[i];
            if (edge > 0) sup = std::max(sup, g(edge, c, d));
            sup = std::max(sup, g(next, c, d));
            if (c > 0 && d > 0) {
                const double tc = d * (p - 1.0) / c;
                if (tc > edge && tc < next) sup = std::max(sup, g(tc, c, d));
            }
            integral += c * prof.measures[i];
            edge = next;
        }
        sup = std::max(sup, S * std::pow(M, a - 1.0));  // tail decreasing for p > 1
        return sup;
    }
    double total = 0, edge = 0, integral = 0;
    for (std::size_t i = 0; i < prof.levels.size(); ++i) {
        const double c = prof.levels[i];
        const double d = integral - c * edge;
        const double next = edge + prof.measures[i];
        total += maximal_segment(edge, next, c, d, p, q);
        integral += c * prof.measures[i];
        edge = next;
    }
    // tail: f** = S/t, converges since q/p - q < 0
    const double e = q / p - q;
    total += std::pow(S, q) * (-std::pow(M, e) / e);
    return std::pow(total, 1.0 / q);
}

double lorentz_norm(const Field& f, double p, double q, double l, LorentzFlavor flavor) {
    return lorentz_norm(rearrange(f, l), p, q, flavor);
}

// ---------------------------------------------------------------------------
// Sobolev norms

namespace {

double homogeneous_sobolev(const Field& f, double m) {
    const int n = f.grid.n;
    const int pad = 2 * n;
    const double dv = f.grid.dv();
    RealFft3 fft(pad);
    double* in = fft.real_buffer();
    std::fill(in, in + fft.real_size(), 0.0);
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy) {
            const double* src = f.values.data() + f.grid.index(0, iy, iz);
            double* dst = in + (std::size_t(iz) * pad + iy) * pad;
            std::copy(src, src + n, dst);
        }
    const std::complex<double>* spec = fft.run_forward();

    const double dxi = 2.0 * M_PI / (pad * dv);
    const int half = pad / 2 + 1;
    std::vector<double> freq2(pad);
    for (int k = 0; k < pad; ++k) {
        const int kk = (k <= pad / 2) ? k : k - pad;
        freq2[k] = (kk * dxi) * (kk * dxi);
    }
    CompensatedSum acc;
    std::size_t idx = 0;
    for (int kz = 0; kz < pad; ++kz)
        for (int ky = 0; ky < pad; ++ky) {
            const double r2yz = freq2[kz] + freq2[ky];
            for (int kx = 0; kx < half; ++kx, ++idx) {
                const double xi2 = r2yz + freq2[kx];
                if (xi2 == 0.0 && m < 0.0) continue;
                const double w = (kx == 0 || kx == pad / 2) ? 1.0 : 2.0;
                const double mag = std::norm(spec[idx]);
                acc.add(w * mag * std::pow(xi2, m));
            }
        }
    // unitary-transform normalization: |f̂|² = (2π)^{-3} Δv⁶ |DFT|²
    const double val2 = std::pow(2.0 * M_PI, -3.0) * std::pow(dv, 6.0) * acc.value() *
                        dxi * dxi * dxi;
    return std::sqrt(std::max(val2, 0.0));
}

double l2sq(const Field& f) {
    CompensatedSum acc;
    for (double v : f.values) acc.add(v * v);
    return acc.value() * f.grid.cell_volume();
}

double weighted_sobolev(const Field& f, int m, double l) {
    Field g(f.grid);
    const auto& gr = f.grid;
    std::size_t idx = 0;
    for (int iz = 0; iz < gr.n; ++iz)
        for (int iy = 0; iy < gr.n; ++iy)
            for (int ix = 0; ix < gr.n; ++ix, ++idx) {
                double w = f.values[idx];
                if (l != 0.0) w *= std::pow(1.0 + gr.node3(ix, iy, iz).norm2(), 0.5 * l);
                g.values[idx] = w;
            }
    double total = l2sq(g);
    if (m >= 1)
        for (int axis = 0; axis < 3; ++axis) total += l2sq(derivative(g, axis));
    if (m >= 2) {
        auto h = hessian(g);
        for (const auto& comp : h) total += l2sq(comp);
    }
    return std::sqrt(total);
}

}  // namespace

double sobolev_norm(const Field& f, double m, double l, SobolevFlavor flavor) {
    if (flavor == SobolevFlavor::homogeneous) {
        if (l != 0.0) {
            // weight first, then transform
            Field g(f.grid);
            const auto& gr = f.grid;
            std::size_t idx = 0;
            for (int iz = 0; iz < gr.n; ++iz)
                for (int iy = 0; iy < gr.n; ++iy)
                    for (int ix = 0; ix < gr.n; ++ix, ++idx)
                        g.values[idx] = f.values[idx] *
                                        std::pow(1.0 + gr.node3(ix, iy, iz).norm2(), 0.5 * l);
            return homogeneous_sobolev(g, m);
        }
        return homogeneous_sobolev(f, m);
    }
    if (m != std::floor(m) || m < 0)
        throw std::domain_error("weighted Sobolev norm requires nonnegative integer order");
    if (m > 2)
        throw std::invalid_argument("weighted Sobolev norm supports orders 0..2");
    return weighted_sobolev(f, int(m), l);
}

// ---------------------------------------------------------------------------
// dyadic decomposition

double DyadicPartition::glue(double u) {
    auto bump = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
    const double denom = bump(u) + bump(1.0 - u);
    return bump(1.0 - u) / denom;
}

double DyadicPartition::chi(double r) {
    constexpr double lo = 0.75, hi = 4.0 / 3.0;
    if (r <= lo) return 1.0;
    if (r >= hi) return 0.0;
    return glue((r - lo) / (hi - lo));
}

Field dyadic_block(const Field& f, int j) {
    Field out(f.grid);
    const auto& g = f.grid;
    const double scale = (j >= 0) ? std::pow(2.0, -j) : 1.0;
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix, ++idx) {
                const double r = g.node3(ix, iy, iz).norm();
                const double w = (j < 0) ? DyadicPartition::psi(r)
                                         : DyadicPartition::phi(scale * r);
                out.values[idx] = w * f.values[idx];
            }
    return out;
}

int dyadic_max_level(const VelocityGrid& grid) {
    const double rmax = std::sqrt(3.0) * grid.extent;
    int k = 0;
    while (std::pow(2.0, k + 1) <= rmax) ++k;
    return k;
}

double dyadic_norm(const Field& f, int s, double l) {
    const int kmax = dyadic_max_level(f.grid);
    CompensatedSum acc;
    for (int k = -1; k <= kmax; ++k) {
        const double ns = sobolev_norm(dyadic_block(f, k), s, 0.0, SobolevFlavor::weighted);
        acc.add(std::pow(2.0, 2.0 * k * l) * ns * ns);
    }
    return std::sqrt(acc.value());
}

}  // namespace landau
