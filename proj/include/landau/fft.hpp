#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace landau {

/// Real-to-complex 3-D FFT of size n³ (half spectrum over the fastest axis,
/// FFTW r2c layout). Plans use FFTW_ESTIMATE so planning is deterministic.
/// Transforms run on internal buffers; the zero-copy accessors avoid holding
/// a second copy of large arrays.
class RealFft3 {
  public:
    explicit RealFft3(int n);
    ~RealFft3();
    RealFft3(const RealFft3&) = delete;
    RealFft3& operator=(const RealFft3&) = delete;

    int n() const { return n_; }
    std::size_t real_size() const { return std::size_t(n_) * n_ * n_; }
    std::size_t complex_size() const { return std::size_t(n_) * n_ * (n_ / 2 + 1); }

    double* real_buffer() { return rbuf_.data(); }
    std::complex<double>* complex_buffer() { return cbuf_.data(); }

    /// Executes the r2c plan on the internal buffers; result in complex_buffer().
    const std::complex<double>* run_forward();
    /// Executes the c2r plan on the internal buffers (destroys complex_buffer());
    /// result in real_buffer(), unnormalized (scale by 1/n³).
    const double* run_inverse();

    void forward(const double* in, std::complex<double>* out);
    void inverse(const std::complex<double>* in, double* out);

  private:
    int n_;
    void* fwd_ = nullptr;
    void* inv_ = nullptr;
    std::vector<double> rbuf_;
    std::vector<std::complex<double>> cbuf_;
};

}  // namespace landau
