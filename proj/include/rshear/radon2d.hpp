#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rshear/grid.hpp"

namespace rshear {

using cplx = std::complex<double>;

/// Square-pixel image on centered grids x_ix = (ix - nx/2) dx,
/// y_iy = (iy - ny/2) dx; row-major storage values[iy*nx + ix].
struct Image2D {
    int nx = 0, ny = 0;
    double dx = 1.0;
    std::vector<cplx> values;
    /// Fraction of Nyquist certified to contain all spectral energy
    /// (outside-energy <= 1e-10 of total), when known.
    std::optional<double> band_limit;

    cplx& at(int ix, int iy) { return values[static_cast<size_t>(iy) * nx + ix]; }
    const cplx& at(int ix, int iy) const {
        return values[static_cast<size_t>(iy) * nx + ix];
    }
    UniformGrid x_grid() const { return UniformGrid::centered(nx, dx); }
    UniformGrid y_grid() const { return UniformGrid::centered(ny, dx); }
    UniformGrid fx_grid() const { return UniformGrid::centered(nx, 1.0 / (nx * dx)); }
    UniformGrid fy_grid() const { return UniformGrid::centered(ny, 1.0 / (ny * dx)); }
};

enum class SinoStage : std::uint8_t { raw = 0, riesz = 1 };

/// Line-integral samples R f(v, t) = integral f(t - v y, y) dy.
/// Column-major: values[iv * t_grid.n + it].
struct Sinogram {
    UniformGrid v_grid;
    UniformGrid t_grid;
    std::vector<cplx> values;
    SinoStage stage = SinoStage::raw;
    /// Set by unitary_Q when >= 10% of spectral energy sits within two
    /// frequency bins of the xi_1 = 0 line (unitarity degraded).
    bool near_horizontal_warning = false;

    cplx& at(int iv, int it) {
        return values[static_cast<size_t>(iv) * t_grid.n + it];
    }
    const cplx& at(int iv, int it) const {
        return values[static_cast<size_t>(iv) * t_grid.n + it];
    }
};

/// Samples of the arc-length (polar) Radon transform on lines
/// {x . (cos th, sin th) = u}. Column-major: values[ith * t_grid.n + it].
/// Canonical theta range is [0, pi); grids spanning a full period are
/// interpolated projectively, (theta + pi, u) ~ (theta, -u).
struct PolarSinogram {
    UniformGrid theta_grid;
    UniformGrid t_grid;
    std::vector<cplx> values;
};

/// Spec defaults: v symmetric inclusive over [-vmax, vmax] (odd n_v keeps a
/// v = 0 column), t a centered pow2 grid covering 1.1 * R * (1 + vmax).
std::pair<UniformGrid, UniformGrid>
default_sinogram_grids(const Image2D& img, double vmax = 3.0, int n_v = 257);

/// theta_k = (k + 1/2) pi / n: full period, never hits pi/2 exactly.
UniformGrid default_polar_theta_grid(int n);

/// Row-wise line integral: sum over y of linearly interpolated f(t - v y, y)
/// times dx. Throws coverage_error when the t range cannot hold every line
/// that meets the image support at the requested slopes.
Sinogram affine_radon(const Image2D& img, const UniformGrid& v_grid,
                      const UniformGrid& t_grid);

/// R^aff f(v,t) = (1+v^2)^{-1/2} R^pol f(arctan v, t/sqrt(1+v^2)), with the
/// v < 0 branch wrapped through theta + pi and u negated.
Sinogram polar_to_affine(const PolarSinogram& p, const UniformGrid& v_grid,
                         const UniformGrid& t_grid);

/// Inverse chart: R^pol f(th,u) = sqrt(1+v^2) R^aff f(v, sign(cos th)
/// sqrt(1+v^2) u) with v = tan th. theta near pi/2, or v beyond the sampled
/// slopes, raises coverage_error.
PolarSinogram affine_to_polar(const Sinogram& s, const UniformGrid& theta_grid,
                              const UniformGrid& u_grid);

/// Max over sampled v of the relative L2 distance between F_t(R f(v,.)) and
/// the central slice F f(tau, tau v) read off a zero-padded 2D spectrum.
/// The two sides share no code path.
double fourier_slice_residual(const Image2D& img, const Sinogram& sino);

/// Half-order Riesz multiplier per column: F-side factor |tau|^{1/2}, DC
/// bin zeroed. raw -> riesz only; a second application is a stage_error.
Sinogram apply_riesz(const Sinogram& sino);

/// Q f = apply_riesz(affine_radon(f)). Flags near-horizontal spectral
/// energy on the result; unitarity then degrades and is not certified.
Sinogram unitary_Q(const Image2D& img, const UniformGrid& v_grid,
                   const UniformGrid& t_grid);

/// Centered 2D spectrum of the image (scale dx^2) on fx_grid x fy_grid.
std::vector<cplx> image_spectrum(const Image2D& img);

/// Fraction of spectral energy outside the disc of radius
/// nyquist_fraction / (2 dx).
double spectral_energy_outside(const Image2D& img, double nyquist_fraction);

double l2_norm(const Image2D& img);
double l2_norm(const Sinogram& s);
cplx l2_inner(const Sinogram& s1, const Sinogram& s2);
cplx l2_inner(const Image2D& f, const Image2D& g);

} // namespace rshear
