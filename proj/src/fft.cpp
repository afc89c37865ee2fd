#include "rshear/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <string>

namespace rshear {

namespace {

// FFTW planning is not thread-safe; execution on private buffers is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

void check_size(int n, const char* what) {
    if (n < 8 || !is_pow2(n))
        throw std::invalid_argument(std::string(what) +
                                    " must be a power of two >= 8, got " +
                                    std::to_string(n));
}

} // namespace

Fft1d::Fft1d(int n) : n_(n) {
    check_size(n, "Fft1d size");
    buf_ = fftw_alloc_complex(n_);
    if (!buf_) throw std::bad_alloc();
    auto* b = static_cast<fftw_complex*>(buf_);
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan_f_ = fftw_plan_dft_1d(n_, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_b_ = fftw_plan_dft_1d(n_, b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft1d::~Fft1d() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_f_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_b_));
    fftw_free(buf_);
}

void Fft1d::run(const cplx* in, cplx* out, double scale, bool fwd) const {
    auto* b = static_cast<fftw_complex*>(buf_);
    // Centered transform via the parity trick F_m = (-1)^m DFT[(-1)^k f_k]_m,
    // exact because n is a multiple of 4.
    for (int k = 0; k < n_; ++k) {
        double sign = (k & 1) ? -1.0 : 1.0;
        b[k][0] = sign * in[k].real();
        b[k][1] = sign * in[k].imag();
    }
    fftw_execute(static_cast<fftw_plan>(fwd ? plan_f_ : plan_b_));
    for (int m = 0; m < n_; ++m) {
        double s = (m & 1) ? -scale : scale;
        out[m] = cplx(s * b[m][0], s * b[m][1]);
    }
}

void Fft1d::forward(const cplx* in, cplx* out, double scale) const {
    run(in, out, scale, true);
}

void Fft1d::backward(const cplx* in, cplx* out, double scale) const {
    run(in, out, scale, false);
}

Fft2d::Fft2d(int nx, int ny) : nx_(nx), ny_(ny) {
    check_size(nx, "Fft2d nx");
    check_size(ny, "Fft2d ny");
    buf_ = fftw_alloc_complex(static_cast<size_t>(nx_) * ny_);
    if (!buf_) throw std::bad_alloc();
    auto* b = static_cast<fftw_complex*>(buf_);
    std::lock_guard<std::mutex> lock(plan_mutex());
    // fftw wants (n0, n1) with n1 fastest; our fastest index is x.
    plan_f_ = fftw_plan_dft_2d(ny_, nx_, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_b_ = fftw_plan_dft_2d(ny_, nx_, b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2d::~Fft2d() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_f_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_b_));
    fftw_free(buf_);
}

void Fft2d::run(const cplx* in, cplx* out, double scale, bool fwd) const {
    auto* b = static_cast<fftw_complex*>(buf_);
    for (int iy = 0; iy < ny_; ++iy) {
        for (int ix = 0; ix < nx_; ++ix) {
            size_t idx = static_cast<size_t>(iy) * nx_ + ix;
            double sign = ((ix + iy) & 1) ? -1.0 : 1.0;
            b[idx][0] = sign * in[idx].real();
            b[idx][1] = sign * in[idx].imag();
        }
    }
    fftw_execute(static_cast<fftw_plan>(fwd ? plan_f_ : plan_b_));
    for (int iy = 0; iy < ny_; ++iy) {
        for (int ix = 0; ix < nx_; ++ix) {
            size_t idx = static_cast<size_t>(iy) * nx_ + ix;
            double s = ((ix + iy) & 1) ? -scale : scale;
            out[idx] = cplx(s * b[idx][0], s * b[idx][1]);
        }
    }
}

void Fft2d::forward(const cplx* in, cplx* out, double scale) const {
    run(in, out, scale, true);
}

void Fft2d::backward(const cplx* in, cplx* out, double scale) const {
    run(in, out, scale, false);
}

} // namespace rshear
