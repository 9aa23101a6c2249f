#include "landau/fft.hpp"

#include <fftw3.h>

#include <cstring>

namespace landau {

RealFft3::RealFft3(int n) : n_(n), rbuf_(real_size()), cbuf_(complex_size()) {
    fwd_ = fftw_plan_dft_r2c_3d(n, n, n, rbuf_.data(),
                                reinterpret_cast<fftw_complex*>(cbuf_.data()), FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_3d(n, n, n, reinterpret_cast<fftw_complex*>(cbuf_.data()),
                                rbuf_.data(), FFTW_ESTIMATE);
}

RealFft3::~RealFft3() {
    if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    if (inv_) fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

const std::complex<double>* RealFft3::run_forward() {
    fftw_execute(static_cast<fftw_plan>(fwd_));
    return cbuf_.data();
}

const double* RealFft3::run_inverse() {
    fftw_execute(static_cast<fftw_plan>(inv_));
    return rbuf_.data();
}

void RealFft3::forward(const double* in, std::complex<double>* out) {
    std::memcpy(rbuf_.data(), in, real_size() * sizeof(double));
    run_forward();
    std::memcpy(out, cbuf_.data(), complex_size() * sizeof(std::complex<double>));
}

void RealFft3::inverse(const std::complex<double>* in, double* out) {
    std::memcpy(cbuf_.data(), in, complex_size() * sizeof(std::complex<double>));
    run_inverse();
    std::memcpy(out, rbuf_.data(), real_size() * sizeof(double));
}

}  // namespace landau
