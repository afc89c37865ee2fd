#pragma once

#include <complex>
#include <vector>

#include "rshear/grid.hpp"

namespace rshear {

using cplx = std::complex<double>;

/// Centered 1D DFT pair for pow2 grids (n >= 8).
///
/// Conventions: samples live at x_k = (k - n/2) dx and frequencies at
/// tau_m = (m - n/2) dtau with dtau = 1/(n dx). forward approximates
///   F(tau_m) = integral f(x) e^{-2 pi i tau_m x} dx
/// as a Riemann sum (pass scale = dx); backward approximates the inverse
/// integral (pass scale = dtau). backward(forward(f, dx), dtau) == f to
/// machine precision, and sum |F|^2 dtau == sum |f|^2 dx exactly.
///
/// An instance owns its buffers: one transform at a time per instance, but
/// distinct instances may run concurrently.
class Fft1d {
  public:
    explicit Fft1d(int n);
    ~Fft1d();
    Fft1d(const Fft1d&) = delete;
    Fft1d& operator=(const Fft1d&) = delete;

    int size() const { return n_; }
    void forward(const cplx* in, cplx* out, double scale) const;
    void backward(const cplx* in, cplx* out, double scale) const;

  private:
    void run(const cplx* in, cplx* out, double scale, bool fwd) const;
    int n_;
    void* buf_;   // fftw_complex[n]
    void* plan_f_;
    void* plan_b_;
};

/// Centered 2D DFT pair, same conventions per axis. Row-major storage with
/// x along the fastest index: data[iy * nx + ix]. Pass scale = dx*dy forward
/// and dtaux*dtauy backward.
class Fft2d {
  public:
    Fft2d(int nx, int ny);
    ~Fft2d();
    Fft2d(const Fft2d&) = delete;
    Fft2d& operator=(const Fft2d&) = delete;

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    void forward(const cplx* in, cplx* out, double scale) const;
    void backward(const cplx* in, cplx* out, double scale) const;

  private:
    void run(const cplx* in, cplx* out, double scale, bool fwd) const;
    int nx_, ny_;
    void* buf_;
    void* plan_f_;
    void* plan_b_;
};

} // namespace rshear
