#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "rshear/radon2d.hpp"

namespace rshear {

/// Modulated Gaussian amp * e^{-(x-c)'P(x-c)/2} * e^{2 pi i om.(x-c)} with
/// closed-form spectrum and exact behaviour under affine maps — the building
/// block of every analytic test oracle.
struct GaborAtom {
    cplx amp{1.0, 0.0};
    Eigen::Vector2d c{0.0, 0.0};
    Eigen::Matrix2d P{Eigen::Matrix2d::Identity()};
    Eigen::Vector2d om{0.0, 0.0};

    cplx eval(const Eigen::Vector2d& x) const;
    /// F g(xi) = amp e^{-2 pi i xi.c} 2 pi det(P)^{-1/2}
    ///           e^{-2 pi^2 (xi-om)' P^{-1} (xi-om)}
    cplx spectrum(const Eigen::Vector2d& xi) const;
};

struct GaborField {
    std::vector<GaborAtom> atoms;

    cplx eval(const Eigen::Vector2d& x) const;
    cplx spectrum(const Eigen::Vector2d& xi) const;
    /// Exact image of the field under f -> |det h|^{-1/2} f(h^{-1}(x - b)).
    GaborField transformed(const Eigen::Matrix2d& h,
                           const Eigen::Vector2d& b) const;
    /// Radius holding all but ~1e-13 of the spectral energy (5.5 sigma).
    double bandwidth() const;
    /// Same bound on the space side.
    double support_radius() const;
};

/// Real random field whose spectrum fills the cone |xi_2| <= slope_max |xi_1|
/// in the |xi_1| band [om1_lo, om1_hi] * Nyquist: conjugate atom pairs with
/// random centers, phases and slopes. All lengths scale with the target
/// image half-width R.
///
/// The default band is deliberately low. Radon-based checks inherit the
/// response of linear row interpolation, which attenuates content at
/// Nyquist fraction alpha by about (pi alpha)^2 / 12; keeping the band
/// near 0.06 keeps that bias an order of magnitude under the 1e-2
/// agreement budgets while staying well clear of the DC line.
struct ConeNoiseParams {
    int n_atoms = 48;         // total, conjugate pairs included (even)
    double sigma_rel = 0.25;  // atom width / R
    double center_rel = 0.25; // max |center| / R
    double om1_lo = 0.05;     // |om_1| band, fractions of Nyquist
    double om1_hi = 0.075;
    double slope_max = 0.2;   // |om_2 / om_1|
    std::uint64_t seed = 1;
};

GaborField gauss_phantom();  // e^{-pi |x|^2}
GaborField cone_noise(const ConeNoiseParams& p, double R, double dx);

/// Sample the field on an nx x ny grid with spacing dx. Sets band_limit when
/// the certified bandwidth sits inside Nyquist.
Image2D render(const GaborField& f, int nx, int ny, double dx);

} // namespace rshear
