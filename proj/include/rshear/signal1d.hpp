#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rshear/grid.hpp"

namespace rshear {

using cplx = std::complex<double>;

/// Complex samples on the centered grid x_k = (k - n/2) dx, n a power of
/// two >= 8. The same container holds frequency-domain signals, whose
/// spacing is then dtau = 1/(n dx).
struct Signal1D {
    double dx = 1.0;
    std::vector<cplx> values;

    int n() const { return static_cast<int>(values.size()); }
    UniformGrid grid() const { return UniformGrid::centered(n(), dx); }
    UniformGrid dual_grid() const {
        return UniformGrid::centered(n(), 1.0 / (n() * dx));
    }
};

/// F(tau_m) = integral f(x) e^{-2 pi i tau_m x} dx on the dual grid.
Signal1D forward_spectrum(const Signal1D& sig);
/// Inverse of forward_spectrum (input lives on a frequency grid).
Signal1D inverse_spectrum(const Signal1D& freq);

/// A wavelet stored as its spectrum on a centered tau grid, optionally with
/// an exact evaluator for off-grid frequencies (presets provide one).
struct Wavelet1D {
    UniformGrid tau;
    std::vector<cplx> spectrum;
    std::function<cplx(double)> spectral_fn;
    std::optional<double> calderon;
    bool admissible = false;

    /// spectral_fn when present, cubic interpolation of the samples (zero
    /// outside the grid) otherwise.
    cplx eval_spectrum(double t) const;
    /// Trapezoid quadrature of |F psi|^2 dtau.
    double energy() const;
};

/// Sample a preset on the given tau grid. Ids:
///   "meyer-annulus"            smooth real even window, support 1/2<=|tau|<=2,
///                              unit L2 norm; squares of dyadic dilates sum
///                              to 2/3 at every nonzero frequency
///   "indicator:[t0,t1]"        1 for t0 <= tau < t1 (test-only)
///   "indicator-annulus:[t0,t1]" 1 for t0 <= |tau| < t1 (test-only)
Wavelet1D make_wavelet(const std::string& id, const UniformGrid& tau);

Wavelet1D wavelet_from_spectrum(UniformGrid tau, std::vector<cplx> spectrum);

/// Trapezoid quadrature of |F psi(tau)|^2 / |tau| excluding the tau = 0 bin.
/// Caches the value and sets the admissible flag (positive finite result).
double calderon_constant(Wavelet1D& w);

/// Continuous wavelet transform: entry (i, j) = <f, W_{b_i, a_j} psi> with
/// W_{b,a} psi(x) = |a|^{-1/2} psi((x - b)/a). One FFT per scale; off-grid
/// b values are filled by cubic interpolation of the translate column.
Eigen::MatrixXcd cwt(const Signal1D& sig, const Wavelet1D& w,
                     const std::vector<double>& b_grid,
                     const std::vector<double>& a_grid);

/// Pointwise |tau|^exponent multiplier with the tau = 0 bin forced to zero.
/// exponent must be >= 0.
void riesz_multiply(std::vector<cplx>& spectrum, const UniformGrid& tau,
                    double exponent);
Wavelet1D riesz_halfpower(const Wavelet1D& w, double exponent);
/// Frequency-domain signal variant.
Signal1D riesz_halfpower(const Signal1D& freq, double exponent);

/// chi_1 with F chi_1(tau) = |tau| F psi_1(tau), flagged admissible.
/// Validates psi_1 numerically first: nonzero energy, no spectral mass at
/// the origin bin, and second moment not dominated by the grid boundary;
/// violations raise admissibility_error.
Wavelet1D chi_from_psi1(const Wavelet1D& psi1);

} // namespace rshear
