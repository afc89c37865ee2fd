#pragma once

#include <cmath>
#include <complex>

#include "rshear/grid.hpp"

namespace rshear {

using cplx = std::complex<double>;

/// Linear interpolation of uniformly spaced samples; zero outside the grid.
template <typename T>
T lerp_at(const T* samples, int n, double start, double step, double x) {
    double fi = (x - start) / step;
    if (fi < 0.0 || fi > n - 1) return T{};
    int i0 = static_cast<int>(fi);
    if (i0 >= n - 1) return samples[n - 1];
    double u = fi - i0;
    return samples[i0] * (1.0 - u) + samples[i0 + 1] * u;
}

namespace detail {
/// Catmull-Rom weights for fractional offset u in [0,1).
inline void cr_weights(double u, double w[4]) {
    double u2 = u * u, u3 = u2 * u;
    w[0] = 0.5 * (-u3 + 2.0 * u2 - u);
    w[1] = 0.5 * (3.0 * u3 - 5.0 * u2 + 2.0);
    w[2] = 0.5 * (-3.0 * u3 + 4.0 * u2 + u);
    w[3] = 0.5 * (u3 - u2);
}
} // namespace detail

/// Catmull-Rom cubic interpolation; exact at the nodes, zero outside the grid.
/// Taps that fall off either end are treated as zero samples.
template <typename T>
T cubic_at(const T* samples, int n, double start, double step, double x) {
    double fi = (x - start) / step;
    if (fi < -1.0 || fi > n) return T{};
    int i0 = static_cast<int>(std::floor(fi));
    double u = fi - i0;
    double w[4];
    detail::cr_weights(u, w);
    T acc{};
    for (int k = 0; k < 4; ++k) {
        int idx = i0 - 1 + k;
        if (idx >= 0 && idx < n) acc += samples[idx] * w[k];
    }
    return acc;
}

template <typename T>
T cubic_at(const T* samples, const UniformGrid& g, double x) {
    return cubic_at(samples, g.n, g.start, g.step, x);
}

/// Bilinear interpolation on a field stored with stride `stride` between
/// consecutive rows; row r covers grid gr, column c covers gc, so the value
/// at (r, c) sits at data[r*stride + c]. Zero outside.
template <typename T>
T bilinear_at(const T* data, int nr, int nc, int stride,
              double r_start, double r_step, double c_start, double c_step,
              double r, double c) {
    double fr = (r - r_start) / r_step;
    double fc = (c - c_start) / c_step;
    if (fr < 0.0 || fr > nr - 1 || fc < 0.0 || fc > nc - 1) return T{};
    int i = static_cast<int>(fr);
    int j = static_cast<int>(fc);
    if (i >= nr - 1) i = nr - 2;
    if (j >= nc - 1) j = nc - 2;
    double a = fr - i, b = fc - j;
    return data[i * stride + j] * ((1 - a) * (1 - b)) +
           data[i * stride + j + 1] * ((1 - a) * b) +
           data[(i + 1) * stride + j] * (a * (1 - b)) +
           data[(i + 1) * stride + j + 1] * (a * b);
}

/// Separable Catmull-Rom interpolation on the same layout. Out-of-range taps
/// are zeros, so values fade to zero within two cells of the boundary.
template <typename T>
T bicubic_at(const T* data, int nr, int nc, int stride,
             double r_start, double r_step, double c_start, double c_step,
             double r, double c) {
    double fr = (r - r_start) / r_step;
    double fc = (c - c_start) / c_step;
    if (fr < -1.0 || fr > nr || fc < -1.0 || fc > nc) return T{};
    int i0 = static_cast<int>(std::floor(fr));
    int j0 = static_cast<int>(std::floor(fc));
    double wr[4], wc[4];
    detail::cr_weights(fr - i0, wr);
    detail::cr_weights(fc - j0, wc);
    T acc{};
    for (int a = 0; a < 4; ++a) {
        int i = i0 - 1 + a;
        if (i < 0 || i >= nr) continue;
        T row{};
        for (int b = 0; b < 4; ++b) {
            int j = j0 - 1 + b;
            if (j < 0 || j >= nc) continue;
            row += data[i * stride + j] * wc[b];
        }
        acc += row * wr[a];
    }
    return acc;
}

} // namespace rshear
