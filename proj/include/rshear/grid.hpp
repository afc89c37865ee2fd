#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rshear {

/// Uniformly spaced sample grid: value(i) = start + i*step, i in [0, n).
struct UniformGrid {
    double start = 0.0;
    double step = 1.0;
    int n = 0;

    double value(int i) const { return start + step * i; }
    double operator[](int i) const { return value(i); }
    double back() const { return value(n - 1); }
    /// Fractional index of x on this grid.
    double to_index(double x) const { return (x - start) / step; }
    bool contains(double x) const { return x >= start && x <= back(); }

    std::vector<double> values() const {
        std::vector<double> v(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = value(i);
        return v;
    }

    /// FFT-style centered grid: x_k = (k - n/2)*step. Contains 0, covers
    /// [-n/2*step, (n/2-1)*step].
    static UniformGrid centered(int n, double step) {
        return UniformGrid{-(n / 2) * step, step, n};
    }

    /// Endpoint-inclusive symmetric grid over [-halfwidth, halfwidth].
    static UniformGrid symmetric(double halfwidth, int n) {
        if (n < 2) throw std::invalid_argument("symmetric grid needs n >= 2");
        return UniformGrid{-halfwidth, 2.0 * halfwidth / (n - 1), n};
    }
};

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace rshear
